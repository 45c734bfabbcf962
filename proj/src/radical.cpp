#include "radsum/radical.hpp"

#include <algorithm>
#include <map>

namespace radsum {

void RadicandTuple::validate() const {
    if (degree < 2) throw InputError("radicand tuple: degree must be >= 2");
    if (radicands.empty()) throw InputError("radicand tuple: k must be >= 1");
    for (const auto& b : radicands) {
        if (b < 1) throw InputError("radicand tuple: radicands must be >= 1");
        if (bound && b > *bound) throw InputError("radicand tuple: radicand exceeds bound N");
    }
}

CertifiedDistance CertifiedDistance::exact_zero(const mpq_class& target) {
    CertifiedDistance out;
    out.value = Ball::from_integer(0, 64);
    out.target = target;
    out.exact_integer = true;
    out.achieved_precision = 0;
    return out;
}

bool is_perfect_power(const mpz_class& b, unsigned d) {
    if (b < 1) throw InputError("is_perfect_power: b must be >= 1");
    if (d < 2) throw InputError("is_perfect_power: d must be >= 2");
    mpz_class root;
    return mpz_root(root.get_mpz_t(), b.get_mpz_t(), d) != 0;
}

KernelDecomposition kernel_decompose(const mpz_class& b, unsigned d) {
    if (b < 1) throw InputError("kernel_decompose: b must be >= 1");
    if (d < 2) throw InputError("kernel_decompose: d must be >= 2");

    KernelDecomposition out{1, 1};
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), b.get_mpz_t(), d) != 0) {
        out.root_part = root;
        return out;
    }

    mpz_class rest = b;
    mpz_class limit;
    mpz_root(limit.get_mpz_t(), rest.get_mpz_t(), d);
    mpz_class prime_power;
    for (unsigned long p = 2; limit >= p; p += (p == 2 ? 1 : 2)) {
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        mpz_ui_pow_ui(prime_power.get_mpz_t(), p, e / d);
        out.root_part *= prime_power;
        mpz_ui_pow_ui(prime_power.get_mpz_t(), p, e % d);
        out.kernel *= prime_power;
        mpz_root(limit.get_mpz_t(), rest.get_mpz_t(), d);
    }
    // Every prime factor of rest now exceeds rest^(1/d), so it occurs with
    // exponent below d.
    out.kernel *= rest;
    return out;
}

bool is_sum_integer(const RadicandTuple& t) {
    t.validate();
    return std::all_of(t.radicands.begin(), t.radicands.end(),
                       [&](const mpz_class& b) { return kernel_decompose(b, t.degree).kernel == 1; });
}

RadicalForm RadicalForm::from_tuple(const RadicandTuple& t, const mpq_class& beta) {
    RadicalForm f;
    f.degree = t.degree;
    f.radicands = t.radicands;
    f.coeffs.assign(t.radicands.size(), 1);
    f.offset = beta;
    return f;
}

namespace {

RadicalForm concat(const RadicalForm& a, const RadicalForm& b, int sign) {
    if (a.degree != b.degree) throw InputError("radical forms of different degree");
    RadicalForm out = a;
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
        out.coeffs.push_back(sign > 0 ? b.coeffs[i] : mpz_class(-b.coeffs[i]));
        out.radicands.push_back(b.radicands[i]);
    }
    out.offset = sign > 0 ? mpq_class(a.offset + b.offset) : mpq_class(a.offset - b.offset);
    return out;
}

void check_form(const RadicalForm& f) {
    if (f.degree < 2) throw InputError("radical form: degree must be >= 2");
    if (f.coeffs.size() != f.radicands.size())
        throw InputError("radical form: coefficient/radicand length mismatch");
    for (const auto& r : f.radicands)
        if (r < 1) throw InputError("radical form: radicands must be >= 1");
}

}  // namespace

RadicalForm operator+(const RadicalForm& a, const RadicalForm& b) { return concat(a, b, +1); }
RadicalForm operator-(const RadicalForm& a, const RadicalForm& b) { return concat(a, b, -1); }

Ball evaluate(const RadicalForm& form, mpfr_prec_t prec) {
    check_form(form);
    mpfr_prec_t guard = 8 + static_cast<mpfr_prec_t>(form.coeffs.size());
    Ball sum = Ball::from_integer(0, prec + guard);
    for (std::size_t i = 0; i < form.coeffs.size(); ++i) {
        if (form.coeffs[i] == 0) continue;
        sum = sum + root_ball(form.radicands[i], form.degree, prec + guard) * form.coeffs[i];
    }
    return sum - Ball::from_rational(form.offset, prec + guard);
}

bool is_integer(const RadicalForm& form) {
    check_form(form);
    bool all_positive = std::all_of(form.coeffs.begin(), form.coeffs.end(),
                                    [](const mpz_class& c) { return c > 0; });
    mpq_class rational_part = -form.offset;
    if (all_positive) {
        // No cancellation between kernels is possible.
        mpz_class root;
        for (std::size_t i = 0; i < form.coeffs.size(); ++i) {
            if (mpz_root(root.get_mpz_t(), form.radicands[i].get_mpz_t(), form.degree) == 0)
                return false;
            rational_part += form.coeffs[i] * root;
        }
        rational_part.canonicalize();
        return rational_part.get_den() == 1;
    }

    std::map<mpz_class, mpz_class> by_kernel;
    for (std::size_t i = 0; i < form.coeffs.size(); ++i) {
        if (form.coeffs[i] == 0) continue;
        auto kd = kernel_decompose(form.radicands[i], form.degree);
        by_kernel[kd.kernel] += form.coeffs[i] * kd.root_part;
    }
    for (const auto& [kernel, coeff] : by_kernel) {
        if (kernel == 1)
            rational_part += coeff;
        else if (coeff != 0)
            return false;
    }
    rational_part.canonicalize();
    return rational_part.get_den() == 1;
}

namespace {

bool resolved(const Ball& dist, double goal) {
    if (mpfr_sgn(dist.mid()) <= 0) return false;
    Real bound(kRadiusPrecision);
    mpfr_mul_d(bound.get(), dist.mid(), goal, MPFR_RNDD);
    return mpfr_lessequal_p(dist.rad(), bound.get()) != 0;
}

bool usable(const Ball& x) { return mpfr_cmp_d(x.rad(), 0.25) < 0; }

}  // namespace

CertifiedDistance certify_distance(const RadicalForm& form, const EvalOptions& opts) {
    if (!(opts.accuracy_goal > 0 && opts.accuracy_goal < 1))
        throw InputError("certify_distance: accuracy goal must lie in (0, 1)");
    if (is_integer(form)) return CertifiedDistance::exact_zero(form.offset);

    Ball last;
    for (mpfr_prec_t prec = std::max<mpfr_prec_t>(opts.start_precision, 16);
         prec <= opts.precision_cap; prec *= 2) {
        Ball value = evaluate(form, prec);
        if (!usable(value)) {
            last = value;
            continue;
        }
        Ball dist = frac_dist(value);
        if (resolved(dist, opts.accuracy_goal)) {
            CertifiedDistance out;
            out.value = std::move(dist);
            out.target = form.offset;
            out.achieved_precision = prec;
            return out;
        }
        last = std::move(dist);
    }
    throw UndecidedError("certify_distance: precision cap reached before the distance was resolved",
                         std::move(last));
}

std::strong_ordering compare_distance(const RadicalForm& a, const RadicalForm& b,
                                      const EvalOptions& opts) {
    if (is_integer(a - b) || is_integer(a + b)) return std::strong_ordering::equal;

    Ball last;
    for (mpfr_prec_t prec = std::max<mpfr_prec_t>(opts.start_precision, 16);
         prec <= opts.precision_cap; prec *= 2) {
        Ball va = evaluate(a, prec);
        Ball vb = evaluate(b, prec);
        if (!usable(va) || !usable(vb)) continue;
        Ball da = frac_dist(va);
        Ball db = frac_dist(vb);
        if (da.certainly_less(db)) return std::strong_ordering::less;
        if (db.certainly_less(da)) return std::strong_ordering::greater;
        last = std::move(da);
    }
    throw UndecidedError("compare_distance: precision cap reached before the distances separated",
                         std::move(last));
}

CertifiedDistance certified_sum_dist(const RadicandTuple& t, const mpq_class& beta,
                                     const EvalOptions& opts) {
    t.validate();
    return certify_distance(RadicalForm::from_tuple(t, beta), opts);
}

}  // namespace radsum
