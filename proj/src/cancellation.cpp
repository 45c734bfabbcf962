#include <algorithm>
#include <limits>

#include "radsum/parallel.hpp"
#include "radsum/taylor.hpp"

namespace radsum {

namespace {

void check_params(const std::vector<ExpansionParams>& params) {
    if (params.size() < 2) throw InputError("solve_cancellation: k must be >= 2");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].d != params[0].d) throw InputError("solve_cancellation: mixed degrees");
        for (std::size_t j = 0; j < i; ++j)
            if (params[i] == params[j]) throw InputError("solve_cancellation: parameters must be distinct");
    }
}

}  // namespace

std::vector<CancellationSolution> solve_cancellation(const std::vector<ExpansionParams>& params,
                                                     bool allow_signed) {
    check_params(params);
    const long d = params[0].d;
    const long k = static_cast<long>(params.size());
    const long top = d * k - 1;

    std::vector<RationalSeries> series;
    for (const auto& p : params) series.push_back(expand_radical(p, top));

    std::vector<std::vector<mpq_class>> rows;
    for (long n = d - 1; n <= top - 1; ++n) {
        std::vector<mpq_class> row;
        for (const auto& s : series) row.push_back(s.at(-n));
        rows.push_back(std::move(row));
    }

    std::vector<CancellationSolution> out;
    for (auto& v : nullspace_basis(rows, params.size())) {
        bool all_pos = std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x > 0; });
        bool all_neg = std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x < 0; });
        if (all_neg) {
            for (auto& x : v) x = -x;
            all_pos = true;
        }
        if (!all_pos && !allow_signed) continue;

        CancellationSolution s;
        s.params = params;
        s.integer_weights = v;
        for (const auto& x : v) s.weights.emplace_back(x);
        RationalSeries total = combine(s.weights, series);
        s.leading_order = top;
        s.leading_coefficient = total.at(-top);
        if (s.leading_coefficient == 0) continue;
        s.linear_slope = total.at(1);
        s.linear_constant = total.at(0);
        s.signed_weights = !all_pos;
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max() / 2)
            throw InputError("search_params: too many subsets");
    }
    return static_cast<std::uint64_t>(acc);
}

// The combination of the given lexicographic rank.
std::vector<std::size_t> unrank(std::uint64_t rank, std::size_t n, std::size_t k) {
    std::vector<std::size_t> c;
    std::size_t next = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t x = next;; ++x) {
            std::uint64_t block = choose(n - x - 1, k - i - 1);
            if (rank < block) {
                c.push_back(x);
                next = x + 1;
                break;
            }
            rank -= block;
        }
    }
    return c;
}

bool advance(std::vector<std::size_t>& c, std::size_t n) {
    std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

constexpr std::uint64_t kBlock = 256;

}  // namespace

SearchResult search_params(unsigned d, std::size_t k, long u_lo, long u_hi, long v_lo, long v_hi,
                           const SearchOptions& opts) {
    if (d < 2) throw InputError("search_params: d must be >= 2");
    if (k < 2) throw InputError("search_params: k must be >= 2");
    if (u_lo > u_hi || v_lo > v_hi) throw InputError("search_params: empty range");

    std::vector<ExpansionParams> grid;
    for (long u = u_lo; u <= u_hi; ++u)
        for (long v = v_lo; v <= v_hi; ++v) grid.push_back({d, mpq_class(u), mpq_class(v)});

    const std::uint64_t total = choose(grid.size(), k);
    SearchResult result;
    if (opts.resume_from >= total) return result;
    std::uint64_t count = total - opts.resume_from;
    if (opts.limit > 0) count = std::min(count, opts.limit);

    const std::uint64_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<std::vector<CancellationSolution>> found(blocks);
    parallel_tasks(blocks, opts.workers, [&](unsigned, std::uint64_t b) {
        std::uint64_t first = opts.resume_from + b * kBlock;
        std::uint64_t last = std::min(opts.resume_from + count, first + kBlock);
        auto c = unrank(first, grid.size(), k);
        for (std::uint64_t idx = first; idx < last; ++idx) {
            std::vector<ExpansionParams> subset;
            for (auto i : c) subset.push_back(grid[i]);
            for (auto& s : solve_cancellation(subset, opts.allow_signed)) found[b].push_back(std::move(s));
            advance(c, grid.size());
        }
    });
    for (auto& block : found)
        for (auto& s : block) result.solutions.push_back(std::move(s));
    result.subsets_examined = count;
    if (opts.resume_from + count < total) result.resume_token = opts.resume_from + count;
    return result;
}

std::vector<OrderEntry> verify_order(const CancellationSolution& s, const std::vector<mpz_class>& M_values,
                                     const EvalOptions& opts) {
    if (s.params.empty() || s.params.size() != s.integer_weights.size())
        throw InputError("verify_order: malformed solution");
    if (s.leading_coefficient == 0) throw InputError("verify_order: leading coefficient is zero");
    const unsigned d = s.params[0].d;
    const mpq_class lambda = abs(s.leading_coefficient);

    std::vector<OrderEntry> out;
    for (const auto& M : M_values) {
        OrderEntry e;
        e.M = M;
        try {
            RadicandTuple t;
            t.degree = d;
            for (std::size_t i = 0; i < s.params.size(); ++i) {
                const auto& p = s.params[i];
                mpq_class shifted = M + p.u, pw = 1;
                for (unsigned j = 0; j < d; ++j) pw *= shifted;
                mpz_class a_pow;
                mpz_pow_ui(a_pow.get_mpz_t(), s.integer_weights[i].get_mpz_t(), d);
                mpq_class r = a_pow * (pw + p.v);
                if (r.get_den() != 1 || r < 1)
                    throw InputError("radicand " + r.get_str() + " is not a positive integer at M = " +
                                     M.get_str());
                t.radicands.push_back(r.get_num());
                e.max_radicand = std::max(e.max_radicand, r.get_num());
            }
            mpq_class linear = s.linear_slope * M + s.linear_constant;
            if (linear.get_den() != 1) throw InputError("L(M) is not an integer at M = " + M.get_str());
            e.radicands = t.radicands;
            CertifiedDistance dist = certified_sum_dist(t, 0, opts);
            e.exact = dist.exact_integer;
            if (!e.exact) {
                mpz_class Mn;
                mpz_pow_ui(Mn.get_mpz_t(), M.get_mpz_t(), static_cast<unsigned long>(s.leading_order));
                mpq_class scale = mpq_class(Mn) / lambda;
                e.ratio = dist.value * Ball::from_rational(scale, dist.value.precision());
            }
            e.distance = std::move(dist);
        } catch (const InputError& err) {
            e.error = err.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ExpansionParams> s2_params() { return {{2, 0, -1}, {2, 0, 1}}; }
std::vector<ExpansionParams> s3_params() { return {{2, 1, 1}, {2, -1, 1}, {2, 0, -3}}; }
std::vector<ExpansionParams> s4_params() { return {{2, 1, 1}, {2, -1, 1}, {2, 0, -2}, {2, 0, 9}}; }

CancellationSolution square_root_family(std::size_t k) {
    std::vector<ExpansionParams> p;
    switch (k) {
        case 2: p = s2_params(); break;
        case 3: p = s3_params(); break;
        case 4: p = s4_params(); break;
        default: throw InputError("square_root_family: k must be 2, 3 or 4");
    }
    auto sols = solve_cancellation(p);
    if (sols.empty()) throw Error("square_root_family: no cancelling weights found");
    return sols.front();
}

}  // namespace radsum
