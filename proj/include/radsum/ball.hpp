#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "radsum/errors.hpp"

namespace radsum {

/// Owning wrapper around an mpfr_t with value semantics.
class Real {
  public:
    explicit Real(mpfr_prec_t prec = 64);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  private:
    mpfr_t value_;
};

/// Precision used for every radius.  Radii are always rounded upward.
inline constexpr mpfr_prec_t kRadiusPrecision = 64;

/*
 * A midpoint-radius enclosure [mid - rad, mid + rad] of a real number.
 *
 * Every operation is containment-monotone: the result encloses the exact
 * result for every choice of inputs inside the operand enclosures.  Midpoints
 * are rounded to nearest at the working precision and the rounding error is
 * charged to the radius.
 */
class Ball {
  public:
    explicit Ball(mpfr_prec_t prec = 64);

    static Ball from_integer(const mpz_class& value, mpfr_prec_t prec);
    static Ball from_rational(const mpq_class& value, mpfr_prec_t prec);
    // Builds the smallest ball containing [lo, hi] (exact rationals).
    static Ball from_interval(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);

    mpfr_srcptr mid() const { return mid_.get(); }
    mpfr_srcptr rad() const { return rad_.get(); }
    mpfr_prec_t precision() const { return mid_.precision(); }

    bool is_exact() const { return mpfr_zero_p(rad_.get()) != 0; }
    double mid_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }
    double rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }
    // Outward-rounded double endpoints.
    double lower_double() const;
    double upper_double() const;

    // Exact rational endpoints.
    mpq_class mid_q() const;
    mpq_class rad_q() const;
    mpq_class lower_q() const { return mid_q() - rad_q(); }
    mpq_class upper_q() const { return mid_q() + rad_q(); }

    bool contains(const mpq_class& x) const;
    bool contains(const Ball& other) const;
    bool contains_zero() const { return contains(mpq_class(0)); }
    // True when every point of *this is strictly below every point of other.
    bool certainly_less(const Ball& other) const;
    bool overlaps(const Ball& other) const;

    Ball operator-() const;
    Ball abs() const;
    Ball pow(unsigned exponent) const;

    friend Ball operator+(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a, const Ball& b);
    friend Ball operator*(const Ball& a, const Ball& b);
    friend Ball operator*(const Ball& a, const mpz_class& c);
    friend Ball operator*(const mpz_class& c, const Ball& a) { return a * c; }

    std::string to_string(int digits = 20) const;

  private:
    void charge_rounding(int ternary);

    Real mid_;
    Real rad_;
};

/// Enclosure of b^(1/d).  Exact (radius 0) when b is a perfect d-th power.
Ball root_ball(const mpz_class& b, unsigned d, mpfr_prec_t prec);

/// Enclosure of the distance from x to the nearest integer.  Requires
/// rad(x) < 1/4, otherwise throws PrecisionError.
Ball frac_dist(const Ball& x);

/// Hull of max(a, b) over the two enclosures.
Ball ball_max(const Ball& a, const Ball& b);

}  // namespace radsum
