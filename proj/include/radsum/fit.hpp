#pragma once

#include <gmpxx.h>

#include <vector>

namespace radsum {

struct FitPoint {
    double x;  // N (or M, H, max radicand)
    double y;  // distance, > 0
};

/// Least squares of log y = intercept + slope * log x (natural logs).
struct ExponentFit {
    std::vector<FitPoint> points;
    double slope = 0;
    double intercept = 0;
    double residual_norm = 0;
    // Closest fraction with denominator <= 64.
    mpq_class slope_rational;
};

/// Requires >= 3 points, all y > 0 and x strictly increasing.
ExponentFit fit_exponent(const std::vector<FitPoint>& points);

/// -k/d (the proven construction) and -(k - 1/d) (the conjectured optimum).
struct ReferenceExponents {
    mpq_class construction;
    mpq_class conjectured;
};

ReferenceExponents reference_exponents(unsigned k, unsigned d);

}  // namespace radsum
