#include "radsum/fit.hpp"

#include <cmath>

#include "radsum/errors.hpp"

namespace radsum {

ExponentFit fit_exponent(const std::vector<FitPoint>& points) {
    if (points.size() < 3) throw InputError("fit_exponent: at least 3 points are required");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].x > 0)) throw InputError("fit_exponent: x values must be positive");
        if (!(points[i].y > 0))
            throw InputError("fit_exponent: distances must be positive (exact hits carry no exponent)");
        if (i > 0 && !(points[i].x > points[i - 1].x))
            throw InputError("fit_exponent: x values must be strictly increasing");
    }

    const auto n = static_cast<long double>(points.size());
    long double sx = 0, sy = 0;
    for (const auto& p : points) {
        sx += std::log(static_cast<long double>(p.x));
        sy += std::log(static_cast<long double>(p.y));
    }
    const long double mx = sx / n, my = sy / n;
    long double sxx = 0, sxy = 0;
    for (const auto& p : points) {
        long double dx = std::log(static_cast<long double>(p.x)) - mx;
        sxy += dx * (std::log(static_cast<long double>(p.y)) - my);
        sxx += dx * dx;
    }

    ExponentFit fit;
    fit.points = points;
    const long double slope = sxy / sxx;
    const long double intercept = my - slope * mx;
    long double rss = 0;
    for (const auto& p : points) {
        long double r = std::log(static_cast<long double>(p.y)) -
                        (intercept + slope * std::log(static_cast<long double>(p.x)));
        rss += r * r;
    }
    fit.slope = static_cast<double>(slope);
    fit.intercept = static_cast<double>(intercept);
    fit.residual_norm = static_cast<double>(std::sqrt(rss));

    long double best_err = INFINITY;
    for (long den = 1; den <= 64; ++den) {
        long num = std::lround(static_cast<double>(slope * den));
        long double err = std::fabs(slope - static_cast<long double>(num) / den);
        if (err < best_err - 1e-12L) {
            best_err = err;
            fit.slope_rational = mpq_class(mpz_class(num), mpz_class(den));
            fit.slope_rational.canonicalize();
        }
    }
    return fit;
}

ReferenceExponents reference_exponents(unsigned k, unsigned d) {
    if (d == 0) throw InputError("reference_exponents: d must be positive");
    ReferenceExponents r;
    r.construction = -mpq_class(mpz_class(k), mpz_class(d));
    r.construction.canonicalize();
    r.conjectured = -(mpq_class(k) - mpq_class(mpz_class(1), mpz_class(d)));
    r.conjectured.canonicalize();
    return r;
}

}  // namespace radsum
