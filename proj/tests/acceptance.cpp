// Acceptance runner: one PASS/FAIL line per criterion.  With no arguments
// every criterion runs; --criterion N restricts the run (repeatable).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "radsum/construct.hpp"
#include "radsum/fit.hpp"
#include "radsum/lattice.hpp"
#include "radsum/oracle.hpp"
#include "radsum/taylor.hpp"

using namespace radsum;

namespace {

mpq_class q(long n, long d = 1) {
    mpq_class x{mpz_class(n), mpz_class(d)};
    x.canonicalize();
    return x;
}

// Collects failed checks; a criterion passes when none failed.
struct Outcome {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

struct Criterion {
    int id;
    std::string title;
    double time_limit_seconds;
    std::function<void(Outcome&)> body;
};

unsigned workers() {
    if (const char* w = std::getenv("RADSUM_WORKERS")) return static_cast<unsigned>(std::max(1, std::atoi(w)));
    return 1;
}

// 1. Exact weights, leading coefficients and displayed cancellations.
void exact_cancellation(Outcome& out) {
    struct Expect {
        std::vector<ExpansionParams> params;
        std::vector<mpz_class> weights;
        long order;
        mpq_class lambda;
        mpq_class slope;
    };
    const std::vector<Expect> cases = {
        {s2_params(), {1, 1}, 3, q(-1, 4), 2},
        {s3_params(), {3, 3, 2}, 5, q(-9, 2), 8},
        {s4_params(), {99, 99, 108, 2}, 7, q(-10791, 16), 308},
    };
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& e = cases[i];
        auto sols = solve_cancellation(e.params);
        std::string tag = "k=" + std::to_string(e.params.size());
        out.check(sols.size() == 1, tag + ": expected exactly one solution");
        if (sols.size() != 1) continue;
        const auto& s = sols[0];
        out.check(s.integer_weights == e.weights, tag + ": weights");
        out.check(s.leading_order == e.order, tag + ": leading order");
        out.check(s.leading_coefficient == e.lambda, tag + ": leading coefficient " + s.leading_coefficient.get_str());
        out.check(s.linear_slope == e.slope, tag + ": linear term " + s.linear_slope.get_str());
    }

    // The four-term family as 99 P + 108 C_-2 + 2 C_9, where P pairs (+1, 1)
    // and (-1, 1) and C_t has u = 0, v = t.
    auto P = combine({q(1), q(1)}, {expand_radical({2, q(1), q(1)}, 7), expand_radical({2, q(-1), q(1)}, 7)});
    auto Cm2 = expand_radical({2, q(0), q(-2)}, 7);
    auto C9 = expand_radical({2, q(0), q(9)}, 7);
    const mpq_class p_terms[] = {P.at(-1), P.at(-3), P.at(-5), P.at(-7)};
    const mpq_class cm2_terms[] = {Cm2.at(-1), Cm2.at(-3), Cm2.at(-5), Cm2.at(-7)};
    const mpq_class c9_terms[] = {C9.at(-1), C9.at(-3), C9.at(-5), C9.at(-7)};
    out.check(p_terms[0] == 1 && cm2_terms[0] == -1 && c9_terms[0] == q(9, 2), "M^-1 terms 99 - 108 + 9");
    out.check(p_terms[1] == q(3, 4) && cm2_terms[1] == q(-1, 2) && c9_terms[1] == q(-81, 8), "M^-3 terms");
    out.check(p_terms[2] == q(-3, 8) && cm2_terms[2] == q(-1, 2) && c9_terms[2] == q(729, 16), "M^-5 terms");
    out.check(p_terms[3] == q(-61, 64) && cm2_terms[3] == q(-5, 8) && c9_terms[3] == q(-32805, 128), "M^-7 terms");
    for (int j = 0; j < 3; ++j)
        out.check(99 * p_terms[j] + 108 * cm2_terms[j] + 2 * c9_terms[j] == 0,
                  "cancellation at M^-" + std::to_string(2 * j + 1));
    out.check(99 * p_terms[3] + 108 * cm2_terms[3] + 2 * c9_terms[3] == q(-10791, 16), "first surviving term");
}

// 2. The symmetric pair expansion.
void symmetric_pair(Outcome& out) {
    auto s = combine({q(1), q(1)}, {expand_radical({2, q(1), q(1)}, 7), expand_radical({2, q(-1), q(1)}, 7)});
    const long orders[] = {1, -1, -3, -5, -7};
    const mpq_class want[] = {q(2), q(1), q(3, 4), q(-3, 8), q(-61, 64)};
    for (int i = 0; i < 5; ++i)
        out.check(s.at(orders[i]) == want[i], "coefficient at M^" + std::to_string(orders[i]) + " is " +
                                                  s.at(orders[i]).get_str());
    for (long n : {0L, -2L, -4L, -6L}) out.check(s.at(n) == 0, "even order " + std::to_string(n) + " vanishes");
}

// 3. Ratios to |lambda| M^-(2k-1) and the fitted exponent in N = max radicand.
void empirical_order(Outcome& out) {
    const std::vector<mpz_class> Ms = {100, 200, 400, 800};
    for (std::size_t k : {2u, 3u, 4u}) {
        auto s = square_root_family(k);
        auto entries = verify_order(s, Ms);
        std::vector<FitPoint> pts;
        std::string tag = "k=" + std::to_string(k);
        for (const auto& e : entries) {
            std::string at = tag + " M=" + e.M.get_str();
            out.check(e.error.empty() && e.ratio.has_value(), at + ": no ratio " + e.error);
            if (!e.ratio) continue;
            double r = e.ratio->mid_double();
            out.check(std::abs(r - 1) <= 1e-2 && e.ratio->rad_double() <= 1e-3, at + ": ratio " + fmt(r));
            pts.push_back({e.max_radicand.get_d(), e.distance->value.mid_double()});
        }
        if (pts.size() < 3) continue;
        auto fit = fit_exponent(pts);
        double want = -(static_cast<double>(k) - 0.5);
        out.check(std::abs(fit.slope - want) <= 0.05, tag + ": slope " + fmt(fit.slope) + " vs " + fmt(want));
        out.note(tag + " slope " + fmt(fit.slope, 5));
    }
}

// 4. Oracle values against plain 256-bit re-evaluation.
void oracle_ground_truth(Outcome& out) {
    struct Case {
        std::string name;
        OracleResult result;
        std::vector<mpz_class> witness;
        mpq_class beta;
        double value;
    };
    std::vector<Case> cases;
    cases.push_back({"g(1,2,3)", g_min(1, 2, 3), {3}, 0, 0.26795});
    cases.push_back({"g(2,2,2)", g_min(2, 2, 2), {2, 2}, 0, 0.17157});
    cases.push_back({"inhom(1,2,50,1/2)", inhom_min(1, 2, 50, q(1, 2)), {42}, q(1, 2), 0.01926});
    for (const auto& c : cases) {
        out.check(c.result.witness.radicands == c.witness, c.name + ": witness");
        double got = c.result.minimum.value.mid_double();
        double ref = oracle::dist(c.witness, 2, c.beta, 256);
        out.check(std::abs(got - ref) <= 1e-4, c.name + ": " + fmt(got) + " vs re-evaluation " + fmt(ref));
        out.check(std::abs(got - c.value) <= 1e-4, c.name + ": " + fmt(got) + " vs " + fmt(c.value));
    }
}

// Exhaustive min over the construction family {p_i c_i^d : 1 <= c_i <= 2Q+1}.
double family_optimum(const IntVector& primes, long cmax, const mpq_class& beta) {
    const std::size_t k = primes.size();
    std::vector<long> ps, c(k, 1);
    for (const auto& p : primes) ps.push_back(p.get_si());
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        best = std::min(best, oracle::linear_dist(c, ps, 2, beta));
        std::size_t i = 0;
        while (i < k && c[i] == cmax) c[i++] = 1;
        if (i == k) break;
        ++c[i];
    }
    return best;
}

// 5. Oracle dominance and the 4x family bound.
void construct_consistency(Outcome& out) {
    OracleOptions oopts;
    oopts.workers = workers();
    for (std::size_t k : {1u, 2u})
        for (long N : {10000L, 100000L})
            for (const mpq_class& beta : {q(0), q(1, 3), q(1, 2)}) {
                std::string tag = "k=" + std::to_string(k) + " N=" + std::to_string(N) + " beta=" + beta.get_str();
                auto r = construct(2, k, N, beta);
                double dist = r.distance.value.mid_double();
                if (tuple_count(k, static_cast<std::uint64_t>(N)) <= oopts.max_tuples) {
                    auto o = inhom_min(k, 2, static_cast<std::uint64_t>(N), beta, oopts);
                    out.check(o.minimum.value.lower_q() <= r.distance.value.upper_q(),
                              tag + ": construct below the exhaustive minimum");
                } else {
                    out.note(tag + " oracle over budget");
                }
                long cmax = mpz_class(2 * r.plan.Q + 1).get_si();
                double best = family_optimum(r.plan.primes, cmax, beta);
                out.check(dist <= 4 * best, tag + ": " + fmt(dist) + " > 4 x family optimum " + fmt(best));
            }
}

// 6. Distances fall with N at a slope of at most -0.75.
void construct_trend(Outcome& out) {
    std::vector<FitPoint> pts;
    std::optional<Ball> prev;
    for (long N : {10000L, 100000L, 1000000L, 10000000L}) {
        auto r = construct(2, 2, N, q(1, 3));
        double dist = r.distance.value.mid_double();
        out.check(!prev || r.distance.value.certainly_less(*prev),
                  "N=" + std::to_string(N) + ": distance " + fmt(dist) + " did not decrease");
        prev = r.distance.value;
        pts.push_back({static_cast<double>(N), dist});
    }
    auto fit = fit_exponent(pts);
    out.check(fit.slope <= -0.75, "slope " + fmt(fit.slope));
    out.note("slope " + fmt(fit.slope, 5));
}

// 7. Dual scan floor.
void dual_floor(Outcome& out) {
    DualScanOptions opts;
    opts.workers = workers();
    auto root2 = dual_scan(ThetaVector::from_primes({2}, 2, 256), 100000, 1, opts);
    double w = root2.worst_quality.mid_double();
    out.check(root2.worst_quality.lower_q() >= q(3535, 10000) && root2.worst_quality.upper_q() <= q(3536, 10000),
              "sqrt 2: worst_quality " + fmt(w, 10) + " (h=" + std::to_string(root2.witness_h) +
                  ") outside [0.3535, 0.3536]");
    auto conv = oracle::sqrt2_convergent_denominators(100000);
    std::set<std::uint64_t> convergents(conv.begin(), conv.end());
    out.check(convergents.count(root2.witness_h) == 1, "global witness is not a convergent denominator");
    for (const auto& dec : root2.decades)
        out.check(convergents.count(dec.witness) == 1,
                  "decade witness " + std::to_string(dec.witness) + " is not a convergent denominator");
    out.note("sqrt 2 minimum " + fmt(w, 10) + " at h=" + std::to_string(root2.witness_h) +
             ", last decade minimum " + fmt(root2.decades.back().quality.mid_double(), 10));

    auto pair = dual_scan(ThetaVector::from_primes({2, 3}, 2, 256), 100000, q(1, 2), opts);
    out.check(pair.worst_quality.lower_q() > 0, "sqrt 2, sqrt 3: worst_quality not positive");
    for (const auto& dec : pair.decades)
        out.check(2 * dec.quality.lower_q() >= pair.worst_quality.upper_q(),
                  "decade [" + std::to_string(dec.lo) + ", " + std::to_string(dec.hi) + "] below half the minimum");
    out.note("sqrt 2, sqrt 3 minimum " + fmt(pair.worst_quality.mid_double()));
}

std::vector<mpz_class> random_vector(std::mt19937_64& rng, const IntMatrix& basis) {
    std::vector<mpz_class> v(basis.size(), 0);
    for (const auto& col : basis) {
        long c = static_cast<long>(rng() % 41) - 20;
        for (std::size_t r = 0; r < v.size(); ++r) v[r] += c * col[r];
    }
    return v;
}

// Squared distance to the closest lattice point with coefficients in
// [-box, box], on machine integers.
long long closest_in_box(const std::vector<std::vector<long long>>& b, const std::vector<long long>& t, int box) {
    const std::size_t n = b.size();
    std::vector<int> c(n, -box);
    long long best = std::numeric_limits<long long>::max();
    while (true) {
        long long s = 0;
        for (std::size_t r = 0; r < n; ++r) {
            long long x = t[r];
            for (std::size_t j = 0; j < n; ++j) x -= c[j] * b[j][r];
            s += x * x;
        }
        best = std::min(best, s);
        std::size_t p = 0;
        while (p < n && c[p] == box) c[p++] = -box;
        if (p == n) break;
        ++c[p];
    }
    return best;
}

// 8. Pairings, unimodular LLL transforms and Babai against exhaustive CVP.
void lattice_suite(Outcome& out) {
    std::mt19937_64 rng(2024);
    const long primes[] = {2, 3, 5, 7, 11};
    int bad_pairings = 0, bad_dets = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t k = 1 + rng() % 4;
        unsigned d = 2 + rng() % 3;
        auto theta = ThetaVector::from_primes(IntVector(primes, primes + k), d, 200);
        BoxWeights box{static_cast<long>(1 + rng() % 5000), q(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 5000))};
        int bits = 32 + static_cast<int>(rng() % 128);
        auto L = build_primal_basis(theta, box, bits);
        auto D = build_dual_basis(theta, box, bits);
        for (int i = 0; i < 20; ++i) {
            auto a = random_vector(rng, L.basis);
            auto b = random_vector(rng, D.basis);
            if (pairing_residue(a, b, L.pairing_modulus) != 0) ++bad_pairings;
        }
        auto red = lll_reduce(L);
        mpz_class det = determinant(red.transform);
        if (det != 1 && det != -1) ++bad_dets;
        if (!is_lll_reduced(red.lattice.basis)) ++bad_dets;
    }
    out.check(bad_pairings == 0, std::to_string(bad_pairings) + " of 1000 pairings not integral");

    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng() % 3;
        IntMatrix m;
        do {
            m.assign(n, IntVector(n));
            for (auto& col : m)
                for (auto& x : col) x = static_cast<long>(rng() % 2001) - 1000;
        } while (determinant(m) == 0);
        auto red = lll_reduce(IntegerLattice::from_columns(m));
        mpz_class det = determinant(red.transform);
        if (det != 1 && det != -1) ++bad_dets;
    }
    out.check(bad_dets == 0, std::to_string(bad_dets) + " LLL transforms not unimodular or bases not reduced");

    int babai_misses = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + trial % 2;
        IntMatrix m;
        do {
            m.assign(n, IntVector(n));
            for (auto& col : m)
                for (auto& x : col) x = static_cast<long>(rng() % 101) - 50;
        } while (determinant(m) == 0);
        auto red = lll_reduce(IntegerLattice::from_columns(m));
        IntVector t(n);
        for (auto& x : t) x = static_cast<long>(rng() % 4001) - 2000;
        auto near = babai_nearest(red.lattice.basis, t);
        std::vector<std::vector<long long>> b(n, std::vector<long long>(n));
        std::vector<long long> tt(n);
        long long got = 0;
        for (std::size_t i = 0; i < n; ++i) {
            tt[i] = t[i].get_si();
            for (std::size_t r = 0; r < n; ++r) b[i][r] = red.lattice.basis[i][r].get_si();
            long long diff = mpz_class(t[i] - near.point[i]).get_si();
            got += diff * diff;
        }
        long long best = closest_in_box(b, tt, n == 2 ? 200 : 60);
        if (got > 4 * best) ++babai_misses;
    }
    out.check(babai_misses == 0, std::to_string(babai_misses) + " of 100 Babai points beyond 2x the closest");
}

// 9. Symbolic integrality against perfect squares; no uncertified zeros.
void integrality(Outcome& out) {
    auto square = [](long b) {
        long r = std::lround(std::sqrt(static_cast<double>(b)));
        return r * r == b;
    };
    int mismatches = 0, zero_intervals = 0;
    for (long a = 1; a <= 200; ++a) {
        if (is_sum_integer({2, {a}, std::nullopt}) != square(a)) ++mismatches;
        for (long b = a; b <= 200; ++b) {
            RadicandTuple t{2, {a, b}, std::nullopt};
            bool both = square(a) && square(b);
            if (is_sum_integer(t) != both) ++mismatches;
            auto c = certified_sum_dist(t, 0);
            if (c.exact_integer != both) ++mismatches;
            if (!c.exact_integer && c.value.contains_zero()) ++zero_intervals;
        }
    }
    out.check(mismatches == 0, std::to_string(mismatches) + " integrality mismatches");
    out.check(zero_intervals == 0, std::to_string(zero_intervals) + " intervals contain 0 without the exact flag");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> selected;
    app.add_option("--criterion", selected, "Criterion number (repeatable)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "exact cancellation weights and leading terms", 1, exact_cancellation},
        {2, "symmetric pair expansion coefficients", 1, symmetric_pair},
        {3, "empirical order of the square-root families", 60, empirical_order},
        {4, "oracle ground truth", 1, oracle_ground_truth},
        {5, "construct consistency with the oracle and its family", 300, construct_consistency},
        {6, "construct exponent trend", 120, construct_trend},
        {7, "dual scan floor", 60, dual_floor},
        {8, "lattice property suite", 60, lattice_suite},
        {9, "integrality soundness", 10, integrality},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        Outcome out;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(out);
        } catch (const std::exception& e) {
            out.failures.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.time_limit_seconds)
            out.failures.push_back("runtime " + fmt(secs, 3) + " s exceeds " + fmt(c.time_limit_seconds) + " s");
        bool pass = out.failures.empty();
        if (!pass) ++failed;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << fmt(secs, 3)
                  << " s)\n";
        for (const auto& f : out.failures) std::cout << "    failed: " << f << "\n";
        for (const auto& n : out.notes) std::cout << "    note: " << n << "\n";
    }
    return failed == 0 ? 0 : 1;
}
