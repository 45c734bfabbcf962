#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "radsum/lattice.hpp"

using namespace radsum;

namespace {

mpq_class q(long n, long d = 1) {
    mpq_class x{mpz_class(n), mpz_class(d)};
    x.canonicalize();
    return x;
}

IntMatrix random_basis(std::mt19937_64& rng, std::size_t n, long bound) {
    while (true) {
        IntMatrix m(n, IntVector(n));
        for (auto& col : m)
            for (auto& x : col) x = static_cast<long>(rng() % (2 * bound + 1)) - bound;
        if (determinant(m) != 0) return m;
    }
}

IntMatrix multiply(const IntMatrix& basis, const IntMatrix& transform) {
    std::size_t n = basis.size();
    IntMatrix out(n, IntVector(n, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t r = 0; r < n; ++r) out[j][r] += transform[j][i] * basis[i][r];
    return out;
}

}  // namespace

TEST_CASE("primal basis for sqrt 2 at 10 bits") {
    auto theta = ThetaVector::from_primes({2}, 2, 64);
    auto L = build_primal_basis(theta, {1, 1}, 10);
    // Rows (1024, 0) and (1448, 1024).
    CHECK(L.basis[0] == IntVector{1024, 1448});
    CHECK(L.basis[1] == IntVector{0, 1024});
    CHECK(L.rounding_error <= 1);
    CHECK(L.column_weights == std::vector<mpq_class>{1, 1});
}

TEST_CASE("primal basis for theta = 1") {
    auto theta = ThetaVector::from_radicands({1}, 2, 64);
    auto L = build_primal_basis(theta, {1, 1}, 10);
    CHECK(L.basis[0][1] == 1024);
    CHECK(L.basis[1][1] == 1024);
}

TEST_CASE("primal determinant is the product of scale factors") {
    auto theta = ThetaVector::from_primes({2, 3}, 2, 128);
    auto L = build_primal_basis(theta, {10, q(1, 100)}, 64);
    mpz_class S = mpz_class(1) << 64;
    CHECK(L.determinant() == S * S * (100 * 10 * S));
    CHECK(L.dimension() == 3);
}

TEST_CASE("primal basis requires enough theta precision") {
    auto theta = ThetaVector::from_primes({2}, 2, 40);
    CHECK_THROWS_AS(build_primal_basis(theta, {1, 1}, 64), PrecisionError);
    CHECK_THROWS_AS(ThetaVector::from_primes({4}, 2, 64), InputError);
    CHECK_THROWS_AS(ThetaVector::from_radicands({3, 3}, 2, 64), InputError);
}

TEST_CASE("dual basis for sqrt 2 at 10 bits") {
    auto theta = ThetaVector::from_primes({2}, 2, 64);
    auto D = build_dual_basis(theta, {1, 1}, 10);
    CHECK(D.basis[0] == IntVector{1024, 0});
    CHECK(D.basis[1] == IntVector{-1448, 1024});
}

TEST_CASE("dual basis k = 2 pairs integrally with the primal basis") {
    auto theta = ThetaVector::from_primes({2, 3}, 2, 128);
    BoxWeights box{7, q(3, 8)};
    auto L = build_primal_basis(theta, box, 40);
    auto D = build_dual_basis(theta, box, 40);
    mpz_class S = mpz_class(1) << 40;
    CHECK(D.basis[0] == IntVector{7 * 8 * S, 0, 0});
    CHECK(D.basis[2][2] == 3 * S);
    for (const auto& p : L.basis)
        for (const auto& d : D.basis) CHECK(pairing_residue(p, d, L.pairing_modulus) == 0);
    CHECK(L.pairing_modulus % (S * S) == 0);
}

TEST_CASE("random primal/dual pairings are integral") {
    std::mt19937_64 rng(5);
    const long primes[] = {2, 3, 5, 7, 11, 13};
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t k = 1 + rng() % 4;
        IntVector ps(primes, primes + k);
        unsigned d = 2 + rng() % 3;
        auto theta = ThetaVector::from_primes(ps, d, 160);
        BoxWeights box{static_cast<long>(1 + rng() % 1000), q(1 + static_cast<long>(rng() % 50), 1 + static_cast<long>(rng() % 1000))};
        int bits = 16 + static_cast<int>(rng() % 100);
        auto L = build_primal_basis(theta, box, bits);
        auto D = build_dual_basis(theta, box, bits);
        for (int i = 0; i < 20; ++i) {
            IntVector a(k + 1, 0), b(k + 1, 0);
            for (std::size_t j = 0; j <= k; ++j) {
                long ca = static_cast<long>(rng() % 21) - 10, cb = static_cast<long>(rng() % 21) - 10;
                for (std::size_t r = 0; r <= k; ++r) {
                    a[r] += ca * L.basis[j][r];
                    b[r] += cb * D.basis[j][r];
                }
            }
            CHECK(pairing_residue(a, b, L.pairing_modulus) == 0);
        }
    }
}

TEST_CASE("LLL leaves the identity alone") {
    IntMatrix id = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    auto r = lll_reduce(IntegerLattice::from_columns(id));
    CHECK(r.lattice.basis == id);
    CHECK(r.transform == id);
}

TEST_CASE("LLL on a skewed 2D basis") {
    IntMatrix b = {{1, 0}, {1000000, 1}};
    auto r = lll_reduce(IntegerLattice::from_columns(b));
    mpz_class shortest = oracle::shortest_in_box(b, 10);
    // |b1|^2 <= 2 * shortest^2, i.e. |b1| <= sqrt(2) * shortest.
    CHECK(oracle::norm2(r.lattice.basis[0]) <= 2 * shortest);
    CHECK(is_lll_reduced(r.lattice.basis));
}

TEST_CASE("LLL on random 3D bases") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix b = random_basis(rng, 3, 100);
        auto r = lll_reduce(IntegerLattice::from_columns(b));
        CHECK(is_lll_reduced(r.lattice.basis));
        mpz_class det_u = determinant(r.transform);
        CHECK((det_u == 1 || det_u == -1));
        CHECK(multiply(b, r.transform) == r.lattice.basis);
        mpz_class shortest = oracle::shortest_in_box(r.lattice.basis, 3);
        CHECK(oracle::norm2(r.lattice.basis[0]) <= 4 * shortest);
    }
}

TEST_CASE("LLL rejects bad parameters") {
    IntMatrix id = {{1, 0}, {0, 1}};
    CHECK_THROWS_AS(lll_reduce(IntegerLattice::from_columns(id), q(1, 4)), InputError);
    CHECK_THROWS_AS(lll_reduce(IntegerLattice::from_columns(id), q(1)), InputError);
    CHECK_THROWS_AS(lll_reduce(IntegerLattice::from_columns({{1, 2}, {2, 4}})), InputError);
}

TEST_CASE("Babai examples") {
    IntMatrix b = {{3, 1}, {1, 4}};
    auto r = lll_reduce(IntegerLattice::from_columns(b));
    IntVector inside = {3 * 2 + 1 * -1, 1 * 2 + 4 * -1};
    CHECK(babai_nearest(r.lattice.basis, inside).point == inside);
    auto one = babai_nearest({{1024}}, {2765});
    CHECK(one.point == IntVector{3072});
    CHECK(one.coefficients == IntVector{3});
}

TEST_CASE("Babai is within a factor 2 of the closest point on random instances") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t n = 2 + rng() % 2;
        IntMatrix b = random_basis(rng, n, 50);
        auto r = lll_reduce(IntegerLattice::from_columns(b));
        IntVector t(n);
        for (auto& x : t) x = static_cast<long>(rng() % 2001) - 1000;
        auto near = babai_nearest(r.lattice.basis, t);
        IntVector diff(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = t[i] - near.point[i];
        mpz_class best = oracle::closest_in_box(r.lattice.basis, t, 40);
        // Factor 2 on distances is factor 4 on squared distances.
        CHECK(oracle::norm2(diff) <= 4 * best);
    }
}

TEST_CASE("solve_inhom k = 1, xi = 1/2, Q = 12") {
    auto theta = ThetaVector::from_primes({2}, 2, 128);
    auto res = solve_inhom(theta, LinearTarget::rational(q(1, 2), 1), 12);
    double best = 1;
    for (long x = -12; x <= 12; ++x) best = std::min(best, oracle::linear_dist({x}, {2}, 2, q(1, 2)));
    CHECK(res.q == IntVector{6});
    CHECK(std::abs(res.dist.value.mid_double() - best) < 1e-12);
    CHECK(std::abs(best - 0.01472) < 1e-5);
}

TEST_CASE("solve_inhom with xi = 0 returns the origin") {
    auto theta = ThetaVector::from_primes({2, 3, 5}, 2, 128);
    auto res = solve_inhom(theta, LinearTarget::rational(0, 3), 50);
    CHECK(res.q == IntVector{0, 0, 0});
    CHECK(res.dist.exact_integer);
}

TEST_CASE("solve_inhom k = 2 near pi stays within 4x of the grid optimum") {
    auto theta = ThetaVector::from_primes({2, 3}, 2, 128);
    mpq_class pi_q = mpq_class(mpz_class("14488038916154245685"), mpz_class(1) << 62);
    auto res = solve_inhom(theta, LinearTarget::rational(pi_q, 2), 100);
    CHECK(abs(res.q[0]) <= 100);
    CHECK(abs(res.q[1]) <= 100);
    double best = 1;
    for (long a = -100; a <= 100; ++a)
        for (long b = -100; b <= 100; ++b) best = std::min(best, oracle::linear_dist({a, b}, {2, 3}, 2, pi_q, 128));
    CHECK(res.dist.value.mid_double() <= 4 * best);
}

TEST_CASE("solve_inhom matches exhaustive k = 1 minima within 4x") {
    struct Case {
        long radicand;
        unsigned d;
    };
    for (Case c : {Case{2, 2}, Case{3, 2}, Case{2, 3}}) {
        auto theta = ThetaVector::from_radicands({c.radicand}, c.d, 128);
        for (mpq_class xi : {q(1, 2), q(1, 3), q(1234, 10000), q(9, 10)}) {
            for (long Q = 1; Q <= 50; Q += 7) {
                auto res = solve_inhom(theta, LinearTarget::rational(xi, 1), Q);
                double best = 1;
                for (long x = -Q; x <= Q; ++x)
                    best = std::min(best, oracle::linear_dist({x}, {c.radicand}, c.d, xi));
                CHECK(abs(res.q[0]) <= Q);
                CHECK(res.dist.value.mid_double() <= 4 * best + 1e-15);
                // Never worse than the q = 0 baseline.
                CHECK(res.dist.value.lower_q() <= oracle::linear_dist({0}, {c.radicand}, c.d, xi) + 1e-15);
            }
        }
    }
}

TEST_CASE("dual scan of sqrt 2 with sigma = 1") {
    auto theta = ThetaVector::from_primes({2}, 2, 128);
    auto rep = dual_scan(theta, 10000, 1);
    auto conv = oracle::sqrt2_convergent_denominators(10000);
    std::set<std::uint64_t> denominators(conv.begin(), conv.end());
    // The minimum over all h is attained at h = 2: 2 * (3 - 2 sqrt 2) = 6 - 4 sqrt 2.
    CHECK(rep.witness_h == 2);
    CHECK(std::abs(rep.worst_quality.mid_double() - (6 - 4 * std::sqrt(2.0))) < 1e-12);
    for (const auto& dec : rep.decades) CHECK(denominators.count(dec.witness) == 1);
    // Late decades approach 1/(2 sqrt 2) from below.
    CHECK(std::abs(rep.decades[3].quality.mid_double() - 0.35355339) < 1e-6);
}

TEST_CASE("dual scan with H = 1 is max ||theta_i||") {
    auto theta = ThetaVector::from_primes({2, 3}, 2, 128);
    auto rep = dual_scan(theta, 1, q(1, 2));
    CHECK(rep.witness_h == 1);
    double expect = std::max(std::sqrt(2.0) - 1, 2 - std::sqrt(3.0));
    CHECK(std::abs(rep.worst_quality.mid_double() - expect) < 1e-14);
}

TEST_CASE("dual scan agrees with a brute-force scan and is monotone in H") {
    auto theta = ThetaVector::from_primes({2, 3}, 2, 128);
    double best = 1e9;
    std::uint64_t best_h = 0;
    for (long h = 1; h <= 3000; ++h) {
        double v = std::sqrt(static_cast<double>(h)) *
                   std::max(oracle::linear_dist({h}, {2}, 2, 0), oracle::linear_dist({h}, {3}, 2, 0));
        if (v < best) {
            best = v;
            best_h = static_cast<std::uint64_t>(h);
        }
    }
    auto rep = dual_scan(theta, 3000, q(1, 2));
    CHECK(rep.witness_h == best_h);
    CHECK(std::abs(rep.worst_quality.mid_double() - best) < 1e-12);
    mpq_class prev = 1000;
    for (std::uint64_t H : {10, 100, 1000, 3000}) {
        auto r = dual_scan(theta, H, q(1, 2));
        CHECK(r.worst_quality.mid_q() <= prev);
        CHECK(r.worst_quality.lower_q() > 0);
        prev = r.worst_quality.mid_q();
    }
}

TEST_CASE("dual scan is independent of the worker count") {
    auto theta = ThetaVector::from_primes({2, 3, 5}, 2, 128);
    DualScanOptions one, many;
    many.workers = 4;
    auto a = dual_scan(theta, 50000, q(1, 3), one);
    auto b = dual_scan(theta, 50000, q(1, 3), many);
    CHECK(a.witness_h == b.witness_h);
    CHECK(a.worst_quality.mid_q() == b.worst_quality.mid_q());
    CHECK(a.decades.size() == b.decades.size());
}
