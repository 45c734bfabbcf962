#include "radsum/ball.hpp"

#include <algorithm>
#include <memory>

namespace radsum {

Real::Real(mpfr_prec_t prec) {
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Real::~Real() { mpfr_clear(value_); }

namespace {

mpq_class to_q(mpfr_srcptr x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrecision) {}

void Ball::charge_rounding(int ternary) {
    if (ternary == 0) return;
    // A round-to-nearest result is within half an ulp; charge a full ulp.
    Real ulp(kRadiusPrecision);
    if (mpfr_zero_p(mid_.get())) {
        mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_emin(), MPFR_RNDU);
    } else {
        mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_.get()) - mid_.precision(), MPFR_RNDU);
    }
    mpfr_add(rad_.get(), rad_.get(), ulp.get(), MPFR_RNDU);
}

Ball Ball::from_integer(const mpz_class& value, mpfr_prec_t prec) {
    Ball r(prec);
    r.charge_rounding(mpfr_set_z(r.mid_.get(), value.get_mpz_t(), MPFR_RNDN));
    return r;
}

Ball Ball::from_rational(const mpq_class& value, mpfr_prec_t prec) {
    Ball r(prec);
    r.charge_rounding(mpfr_set_q(r.mid_.get(), value.get_mpq_t(), MPFR_RNDN));
    return r;
}

Ball Ball::from_interval(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
    if (lo > hi) throw InputError("Ball::from_interval: empty interval");
    Ball r(prec);
    mpq_class centre = (lo + hi) / 2;
    mpfr_set_q(r.mid_.get(), centre.get_mpq_t(), MPFR_RNDN);
    mpq_class m = to_q(r.mid_.get());
    mpq_class spread = std::max(mpq_class(hi - m), mpq_class(m - lo));
    mpfr_set_q(r.rad_.get(), spread.get_mpq_t(), MPFR_RNDU);
    return r;
}

double Ball::lower_double() const {
    Real t(53);
    mpfr_sub(t.get(), mid_.get(), rad_.get(), MPFR_RNDD);
    return mpfr_get_d(t.get(), MPFR_RNDD);
}

double Ball::upper_double() const {
    Real t(53);
    mpfr_add(t.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    return mpfr_get_d(t.get(), MPFR_RNDU);
}

mpq_class Ball::mid_q() const { return to_q(mid_.get()); }
mpq_class Ball::rad_q() const { return to_q(rad_.get()); }

bool Ball::contains(const mpq_class& x) const { return lower_q() <= x && x <= upper_q(); }

bool Ball::contains(const Ball& other) const {
    return lower_q() <= other.lower_q() && other.upper_q() <= upper_q();
}

bool Ball::certainly_less(const Ball& other) const {
    mpfr_prec_t p = std::max(precision(), other.precision()) + kRadiusPrecision;
    Real hi(p), lo(p);
    mpfr_add(hi.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    mpfr_sub(lo.get(), other.mid_.get(), other.rad_.get(), MPFR_RNDD);
    return mpfr_less_p(hi.get(), lo.get()) != 0;
}

bool Ball::overlaps(const Ball& other) const {
    return !certainly_less(other) && !other.certainly_less(*this);
}

Ball Ball::operator-() const {
    Ball r(*this);
    mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
    return r;
}

Ball Ball::abs() const {
    if (mpfr_cmp(rad_.get(), mid_.get()) < 0) return *this;  // entirely positive
    Ball neg = -*this;
    if (mpfr_cmp(rad_.get(), neg.mid_.get()) < 0) return neg;  // entirely negative
    mpq_class hi = std::max(upper_q(), mpq_class(-lower_q()));
    return from_interval(0, hi, precision());
}

Ball Ball::pow(unsigned exponent) const {
    Ball result = from_integer(1, precision());
    Ball base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

Ball operator+(const Ball& a, const Ball& b) {
    Ball r(std::max(a.precision(), b.precision()));
    int t = mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    r.charge_rounding(t);
    return r;
}

Ball operator-(const Ball& a, const Ball& b) { return a + (-b); }

Ball operator*(const Ball& a, const Ball& b) {
    Ball r(std::max(a.precision(), b.precision()));
    int t = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    Real term(kRadiusPrecision);
    mpfr_abs(term.get(), a.mid_.get(), MPFR_RNDU);
    mpfr_mul(term.get(), term.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), term.get(), MPFR_RNDU);
    mpfr_abs(term.get(), b.mid_.get(), MPFR_RNDU);
    mpfr_mul(term.get(), term.get(), a.rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), term.get(), MPFR_RNDU);
    mpfr_mul(term.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), term.get(), MPFR_RNDU);
    r.charge_rounding(t);
    return r;
}

Ball operator*(const Ball& a, const mpz_class& c) {
    Ball r(a.precision());
    int t = mpfr_mul_z(r.mid_.get(), a.mid_.get(), c.get_mpz_t(), MPFR_RNDN);
    mpz_class magnitude = abs(c);
    mpfr_mul_z(r.rad_.get(), a.rad_.get(), magnitude.get_mpz_t(), MPFR_RNDU);
    r.charge_rounding(t);
    return r;
}

std::string Ball::to_string(int digits) const {
    auto render = [](mpfr_srcptr x, int n, mpfr_rnd_t rnd) {
        char* raw = nullptr;
        mpfr_asprintf(&raw, "%.*R*g", n, rnd, x);
        std::unique_ptr<char, decltype(&mpfr_free_str)> holder(raw, &mpfr_free_str);
        return std::string(raw);
    };
    return render(mid_.get(), digits, MPFR_RNDN) + " +/- " + render(rad_.get(), 3, MPFR_RNDU);
}

Ball root_ball(const mpz_class& b, unsigned d, mpfr_prec_t prec) {
    if (b < 1) throw InputError("root_ball: radicand must be >= 1");
    if (d < 2) throw InputError("root_ball: degree must be >= 2");
    if (prec < 16) throw InputError("root_ball: precision must be >= 16 bits");

    mpz_class root;
    if (mpz_root(root.get_mpz_t(), b.get_mpz_t(), d) != 0) {
        auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(root.get_mpz_t(), 2));
        return Ball::from_integer(root, std::max(prec, bits));
    }
    auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(b.get_mpz_t(), 2));
    Real exact(std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
    mpfr_set_z(exact.get(), b.get_mpz_t(), MPFR_RNDN);
    // mpfr_rootn_ui is correctly rounded: the midpoint is within half an ulp.
    Real mid(prec);
    mpfr_rootn_ui(mid.get(), exact.get(), d, MPFR_RNDN);
    mpq_class m;
    mpfr_get_q(m.get_mpq_t(), mid.get());
    long e = mpfr_get_exp(mid.get()) - prec;
    mpz_class one = 1;
    mpq_class ulp = e >= 0 ? mpq_class(mpz_class(one << e)) : mpq_class(1, mpz_class(one << -e));
    return Ball::from_interval(m - ulp, m + ulp, prec);
}

Ball frac_dist(const Ball& x) {
    if (mpfr_cmp_d(x.rad(), 0.25) >= 0)
        throw PrecisionError("frac_dist: enclosure radius must be below 1/4");

    mpfr_prec_t prec = x.precision();
    Real nearest(prec + 2);
    mpfr_rint(nearest.get(), x.mid(), MPFR_RNDN);
    mpz_class n;
    mpfr_get_z(n.get_mpz_t(), nearest.get(), MPFR_RNDN);

    mpq_class y = x.mid_q() - n;
    mpq_class ay = y < 0 ? mpq_class(-y) : y;
    mpq_class r = x.rad_q();
    // ||.|| is 1-Lipschitz, and |y| <= 1/2 so ||y|| = |y|.
    mpq_class lo = ay - r;
    mpq_class hi = ay + r;
    if (lo < 0) lo = 0;
    if (hi > mpq_class(1, 2)) hi = mpq_class(1, 2);
    return Ball::from_interval(lo, hi, prec);
}

Ball ball_max(const Ball& a, const Ball& b) {
    mpq_class lo = std::max(a.lower_q(), b.lower_q());
    mpq_class hi = std::max(a.upper_q(), b.upper_q());
    return Ball::from_interval(lo, hi, std::max(a.precision(), b.precision()));
}

}  // namespace radsum
