#include "radsum/oracle.hpp"

#include <mpfr.h>

#include <cmath>
#include <vector>

#include "radsum/parallel.hpp"

namespace radsum {

long double tuple_count(std::size_t k, std::uint64_t N) {
    long double c = 1;
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<long double>(N - 1 + i) / i;
    return c;
}

namespace {

struct Best {
    std::vector<std::uint64_t> tuple;
    double value = 0;
    double err = 0;
};

struct WorkerState {
    Best best;
    bool have = false;
    std::uint64_t scanned = 0;
    std::uint64_t excluded = 0;
};

class Scanner {
  public:
    Scanner(std::size_t k, unsigned d, std::uint64_t N, const mpq_class& beta, bool exclude_integers,
            const OracleOptions& opts)
        : k_(k), d_(d), N_(N), beta_(beta), beta_d_(beta.get_d()), exclude_(exclude_integers), opts_(opts) {
        roots_.resize(N + 1);
        perfect_.resize(N + 1);
        Real x(64), r(53);
        for (std::uint64_t b = 1; b <= N; ++b) {
            mpfr_set_ui(x.get(), static_cast<unsigned long>(b), MPFR_RNDN);
            mpfr_rootn_ui(r.get(), x.get(), d, MPFR_RNDN);
            roots_[b] = mpfr_get_d(r.get(), MPFR_RNDN);
            perfect_[b] = is_perfect_power(mpz_class(static_cast<unsigned long>(b)), d);
        }
    }

    void scan_leading(std::uint64_t b1, WorkerState& st) const {
        std::vector<std::uint64_t> t(k_);
        t[0] = b1;
        descend(1, b1, roots_[b1], perfect_[b1], t, st);
    }

    RadicalForm form(const std::vector<std::uint64_t>& t) const {
        RadicalForm f;
        f.degree = d_;
        for (auto b : t) {
            f.radicands.emplace_back(static_cast<unsigned long>(b));
            f.coeffs.emplace_back(1);
        }
        f.offset = beta_;
        return f;
    }

    // Strictly better, with ties to the lexicographically smaller tuple.
    bool better(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
        auto c = compare_distance(form(a), form(b), opts_.eval);
        if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
        return a < b;
    }

  private:
    void descend(std::size_t level, std::uint64_t start, double partial, bool all_perfect,
                 std::vector<std::uint64_t>& t, WorkerState& st) const {
        if (level == k_) {
            consider(partial, all_perfect, t, st);
            return;
        }
        for (std::uint64_t b = start; b <= N_; ++b) {
            t[level] = b;
            descend(level + 1, b, partial + roots_[b], all_perfect && perfect_[b], t, st);
        }
    }

    void consider(double sum, bool all_perfect, const std::vector<std::uint64_t>& t, WorkerState& st) const {
        ++st.scanned;
        if (exclude_ && all_perfect) {
            ++st.excluded;
            return;
        }
        double s = sum - beta_d_;
        double dist = std::fabs(s - std::nearbyint(s));
        // Each root is correctly rounded; k+1 additions and one subtraction.
        double err = static_cast<double>(k_ + 2) * 0x1p-52 * (sum + std::fabs(beta_d_) + 1);
        if (!st.have) {
            st.best = {t, dist, err};
            st.have = true;
            return;
        }
        if (dist > st.best.value * (1 + 1e-3) + err + st.best.err) return;
        if (better(t, st.best.tuple)) st.best = {t, dist, err};
    }

    std::size_t k_;
    unsigned d_;
    std::uint64_t N_;
    mpq_class beta_;
    double beta_d_;
    bool exclude_;
    const OracleOptions& opts_;
    std::vector<double> roots_;
    std::vector<bool> perfect_;
};

OracleResult run(std::size_t k, unsigned d, std::uint64_t N, const mpq_class& beta, bool exclude,
                 const OracleOptions& opts) {
    if (k < 1) throw InputError("oracle: k must be >= 1");
    if (d < 2) throw InputError("oracle: d must be >= 2");
    if (N < 1) throw InputError("oracle: N must be >= 1");
    long double cost = tuple_count(k, N);
    if (cost > opts.max_tuples)
        throw BudgetError("oracle: scan of ~" + std::to_string(static_cast<double>(cost)) +
                              " tuples exceeds the budget of " +
                              std::to_string(static_cast<double>(opts.max_tuples)),
                          cost);

    Scanner scanner(k, d, N, beta, exclude, opts);
    unsigned workers = std::max(1u, opts.workers);
    std::vector<WorkerState> states(workers);
    parallel_tasks(N, workers, [&](unsigned w, std::uint64_t task) { scanner.scan_leading(task + 1, states[w]); });

    OracleResult out;
    const Best* best = nullptr;
    for (const auto& st : states) {
        out.tuples_scanned += st.scanned;
        out.exclusions += st.excluded;
        if (!st.have) continue;
        if (!best || scanner.better(st.best.tuple, best->tuple)) best = &st.best;
    }
    if (!best) throw InfeasibleError("oracle: every tuple has an integral sum");

    out.witness.degree = d;
    out.witness.bound = mpz_class(static_cast<unsigned long>(N));
    for (auto b : best->tuple) out.witness.radicands.emplace_back(static_cast<unsigned long>(b));
    out.minimum = certified_sum_dist(out.witness, beta, opts.eval);
    return out;
}

}  // namespace

OracleResult g_min(std::size_t k, unsigned d, std::uint64_t N, const OracleOptions& opts) {
    return run(k, d, N, 0, true, opts);
}

OracleResult inhom_min(std::size_t k, unsigned d, std::uint64_t N, const mpq_class& beta,
                       const OracleOptions& opts) {
    return run(k, d, N, beta, false, opts);
}

}  // namespace radsum
