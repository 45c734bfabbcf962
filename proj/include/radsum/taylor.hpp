#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radsum/radical.hpp"

namespace radsum {

/// Sparse Laurent polynomial in M with exact coefficients.  Terms of order
/// below truncation_order are dropped; the remainder is O(M^(truncation_order-1)).
struct RationalSeries {
    std::map<long, mpq_class> coeffs;
    long truncation_order = 0;

    mpq_class at(long exponent) const;
    // Removes zero coefficients.
    void normalize();
};

struct ExpansionParams {
    unsigned d = 2;
    mpq_class u = 0;
    mpq_class v = 0;

    friend bool operator==(const ExpansionParams& a, const ExpansionParams& b) {
        return a.d == b.d && a.u == b.u && a.v == b.v;
    }
};

/// binom(r, n) for rational r.
mpq_class binomial(const mpq_class& r, unsigned long n);

/// ((M+u)^d + v)^(1/d) expanded in powers of M down to M^(-order).
RationalSeries expand_radical(const ExpansionParams& p, long order);

/// sum_i weights[i] * series[i], truncated at the loosest order.
RationalSeries combine(const std::vector<mpq_class>& weights, const std::vector<RationalSeries>& series);

/// Primitive integer basis of the right nullspace of a rational matrix
/// (rows x cols), computed by fraction-free elimination.
std::vector<std::vector<mpz_class>> nullspace_basis(const std::vector<std::vector<mpq_class>>& rows,
                                                    std::size_t cols);

struct CancellationSolution {
    std::vector<ExpansionParams> params;
    std::vector<mpq_class> weights;
    std::vector<mpz_class> integer_weights;
    // The first surviving term is leading_coefficient * M^(-leading_order).
    long leading_order = 0;
    mpq_class leading_coefficient;
    // L(M) = linear_slope * M + linear_constant.
    mpq_class linear_slope;
    mpq_class linear_constant;
    bool signed_weights = false;
};

/// Weighted sums of the expansions whose coefficients vanish at M^-n for
/// d-1 <= n <= dk-2 and survive at n = dk-1.  Weights are strictly positive
/// unless allow_signed is set.
std::vector<CancellationSolution> solve_cancellation(const std::vector<ExpansionParams>& params,
                                                     bool allow_signed = false);

struct SearchOptions {
    // Subsets examined per call; 0 means unlimited.
    std::uint64_t limit = 0;
    std::uint64_t resume_from = 0;
    unsigned workers = 1;
    bool allow_signed = false;
};

struct SearchResult {
    std::vector<CancellationSolution> solutions;
    std::uint64_t subsets_examined = 0;
    // Index of the next unexamined subset when the limit stopped the scan.
    std::optional<std::uint64_t> resume_token;
};

/// Scans k-subsets of the grid {(u, v)} in lexicographic order (u, then v;
/// subsets by rank).
SearchResult search_params(unsigned d, std::size_t k, long u_lo, long u_hi, long v_lo, long v_hi,
                           const SearchOptions& opts = {});

struct OrderEntry {
    mpz_class M;
    mpz_class max_radicand;
    std::vector<mpz_class> radicands;
    std::optional<CertifiedDistance> distance;
    // distance / (|lambda| M^-(dk-1)).
    std::optional<Ball> ratio;
    bool exact = false;
    std::string error;
};

/// Evaluates ||sum_i (A_i^d ((M+u_i)^d + v_i))^(1/d)|| for each M.
std::vector<OrderEntry> verify_order(const CancellationSolution& s, const std::vector<mpz_class>& M_values,
                                     const EvalOptions& opts = {});

/// The square-root families with k = 2, 3, 4 terms.
std::vector<ExpansionParams> s2_params();
std::vector<ExpansionParams> s3_params();
std::vector<ExpansionParams> s4_params();
// The solution for s{k}_params(); throws if the solver finds none.
CancellationSolution square_root_family(std::size_t k);

}  // namespace radsum
