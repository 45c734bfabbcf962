#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <vector>

#include "radsum/ball.hpp"

namespace radsum {

/// Raised when the precision cap is reached before a quantity could be
/// resolved.  Carries the last enclosure that was computed.
class UndecidedError : public Error {
  public:
    UndecidedError(const std::string& what, Ball last) : Error(what), last_(std::move(last)) {}
    const Ball& last() const { return last_; }

  private:
    Ball last_;
};

/// k positive integers b_1..b_k (a multiset) and the root degree d.
struct RadicandTuple {
    unsigned degree = 2;
    std::vector<mpz_class> radicands;
    std::optional<mpz_class> bound;

    // Throws InputError when d < 2, k = 0, some b < 1 or some b > bound.
    void validate() const;
};

/// Certified enclosure of ||x|| for some real x.
struct CertifiedDistance {
    Ball value;
    mpq_class target;
    // Set only when x was proven an integer symbolically; value is then 0.
    bool exact_integer = false;
    mpfr_prec_t achieved_precision = 0;

    static CertifiedDistance exact_zero(const mpq_class& target);
};

struct EvalOptions {
    double accuracy_goal = 1e-3;
    mpfr_prec_t start_precision = 64;
    mpfr_prec_t precision_cap = mpfr_prec_t{1} << 20;
};

/// b = root_part^d * kernel with kernel d-th-power-free.
struct KernelDecomposition {
    mpz_class root_part;
    mpz_class kernel;
};

KernelDecomposition kernel_decompose(const mpz_class& b, unsigned d);
bool is_perfect_power(const mpz_class& b, unsigned d);

/// Decides whether sum_j b_j^(1/d) is an integer.  Radicals with distinct
/// d-th-power-free kernels are linearly independent over Q, and all
/// coefficients here are positive, so the sum is an integer exactly when every
/// radicand has kernel 1.
bool is_sum_integer(const RadicandTuple& t);

/*
 * A Z-linear combination of d-th roots shifted by a rational:
 *
 *     value = sum_i coeffs[i] * radicands[i]^(1/d) - offset.
 *
 * Coefficients may be negative.  This is the common currency for tuples
 * (all coefficients 1, offset beta), inhomogeneous targets and comparisons.
 */
struct RadicalForm {
    unsigned degree = 2;
    std::vector<mpz_class> coeffs;
    std::vector<mpz_class> radicands;
    mpq_class offset = 0;

    static RadicalForm from_tuple(const RadicandTuple& t, const mpq_class& beta);

    friend RadicalForm operator+(const RadicalForm& a, const RadicalForm& b);
    friend RadicalForm operator-(const RadicalForm& a, const RadicalForm& b);
};

Ball evaluate(const RadicalForm& form, mpfr_prec_t prec);

/// Symbolic integrality via kernel grouping (no numerics involved).
bool is_integer(const RadicalForm& form);

/// Certifies ||value|| to relative accuracy opts.accuracy_goal by precision
/// doubling.  Exact zero is reported only when is_integer(form) holds.
CertifiedDistance certify_distance(const RadicalForm& form, const EvalOptions& opts = {});

/// Orders ||a|| against ||b||.  Equality is decided symbolically
/// (a - b or a + b integral); otherwise precision is raised until the
/// enclosures separate.
std::strong_ordering compare_distance(const RadicalForm& a, const RadicalForm& b,
                                      const EvalOptions& opts = {});

/// ||sum_j b_j^(1/d) - beta|| to the requested relative accuracy.
CertifiedDistance certified_sum_dist(const RadicandTuple& t, const mpq_class& beta,
                                     const EvalOptions& opts = {});

}  // namespace radsum
