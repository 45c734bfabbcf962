#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "radsum/ball.hpp"
#include "radsum/radical.hpp"

namespace radsum {

using IntVector = std::vector<mpz_class>;
// Column-major: matrix[j] is the j-th column.
using IntMatrix = std::vector<IntVector>;

/// theta_i = radicands[i]^(1/d) for pairwise distinct radicands.
struct ThetaVector {
    unsigned degree = 2;
    IntVector radicands;
    std::vector<Ball> values;
    mpfr_prec_t precision = 0;

    static ThetaVector from_radicands(const IntVector& radicands, unsigned d, mpfr_prec_t prec);
    // Rejects non-prime entries.
    static ThetaVector from_primes(const IntVector& primes, unsigned d, mpfr_prec_t prec);

    ThetaVector at_precision(mpfr_prec_t prec) const;
    std::size_t size() const { return radicands.size(); }
};

/// The box [-Q, Q]^k x [-delta, delta].
struct BoxWeights {
    mpz_class Q = 1;
    mpq_class delta = 1;
};

struct IntegerLattice {
    IntMatrix basis;
    int scale_bits = 0;
    // (Q, ..., Q, delta) for lattices built from a box; empty otherwise.
    std::vector<mpq_class> column_weights;
    // Bound on |round(2^scale_bits * theta_i) - 2^scale_bits * theta_i|.
    mpq_class rounding_error = 0;
    // Exact factor the primal/dual pairing is a multiple of.
    mpz_class pairing_modulus = 0;

    std::size_t dimension() const { return basis.size(); }
    mpz_class determinant() const;
    static IntegerLattice from_columns(IntMatrix columns);
};

mpz_class dot(const IntVector& a, const IntVector& b);
mpz_class determinant(const IntMatrix& columns);
int default_scale_bits(const mpz_class& Q, std::size_t k);

/// round(2^scale_bits * theta_i); *error receives the worst deviation in
/// scaled units, which must not exceed 1.
IntVector fixed_point_theta(const ThetaVector& theta, int scale_bits, mpq_class* error = nullptr);

/// Scaled basis of {(q, q.theta + p)} normalised by the box: column i < k
/// carries a*S at row i and b*Q*round(S*theta_i) at row k, column k carries
/// b*Q*S at row k, where delta = a/b and S = 2^scale_bits.
IntegerLattice build_primal_basis(const ThetaVector& theta, const BoxWeights& box, int scale_bits);

/// Scaled basis of the dual {(m - h*theta, h)} with the reciprocal weights.
/// Every primal/dual inner product is an exact multiple of pairing_modulus.
IntegerLattice build_dual_basis(const ThetaVector& theta, const BoxWeights& box, int scale_bits);

/// Inner product reduced into (-modulus/2, modulus/2].
mpz_class pairing_residue(const IntVector& primal, const IntVector& dual, const mpz_class& modulus);

struct LllResult {
    IntegerLattice lattice;
    // reduced column j = sum_i transform[j][i] * original column i.
    IntMatrix transform;
};

/// Exact integer LLL.  alpha must lie in (1/4, 1).
LllResult lll_reduce(const IntegerLattice& lattice, const mpq_class& alpha = mpq_class(99, 100));
bool is_lll_reduced(const IntMatrix& columns, const mpq_class& alpha = mpq_class(99, 100));

struct BabaiResult {
    IntVector point;
    // Coordinates of point in the given basis.
    IntVector coefficients;
};

BabaiResult babai_nearest(const IntMatrix& reduced, const IntVector& target);

/// xi = constant + sum_i theta_coeffs[i] * theta_i.
struct LinearTarget {
    mpq_class constant = 0;
    IntVector theta_coeffs;

    static LinearTarget rational(const mpq_class& value, std::size_t k);
};

struct InhomOptions {
    int enumeration_radius = 2;
    std::uint64_t max_enumeration = 100000;
    mpq_class alpha = mpq_class(99, 100);
    std::optional<int> scale_bits;
    EvalOptions eval;
};

struct InhomResult {
    IntVector q;
    CertifiedDistance dist;
    std::uint64_t candidates = 0;
};

/// Best-effort search for |q|_inf <= Q minimising ||q.theta - xi||.  Runs
/// Babai on the primal lattice for delta = 2^-1, 2^-2, ... and enumerates
/// reduced-basis coefficients within +-E of each Babai point.  Ties go to
/// smaller |q|_inf, then to the lexicographically greater q.
InhomResult solve_inhom(const ThetaVector& theta, const LinearTarget& xi, const mpz_class& Q,
                        const InhomOptions& opts = {});

struct DecadeMinimum {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::uint64_t witness = 0;
    Ball quality;
};

struct DualScanReport {
    std::uint64_t H = 0;
    mpq_class sigma;
    Ball worst_quality;
    std::uint64_t witness_h = 0;
    std::vector<DecadeMinimum> decades;

    mpq_class worst_quality_lower() const { return worst_quality.lower_q(); }
};

struct DualScanOptions {
    unsigned workers = 1;
    mpfr_prec_t start_precision = 128;
    mpfr_prec_t precision_cap = mpfr_prec_t{1} << 20;
};

/// min over 1 <= h <= H of h^sigma * max_i ||h theta_i||, ties to smaller h.
/// Per-decade minima cover [1, 10], [11, 100], ... clipped to H.
DualScanReport dual_scan(const ThetaVector& theta, std::uint64_t H, const mpq_class& sigma,
                         const DualScanOptions& opts = {});

/// Certified h^sigma * max_i ||h theta_i|| at the given precision.
Ball dual_quality(const ThetaVector& theta, std::uint64_t h, const mpq_class& sigma,
                  mpfr_prec_t prec);

}  // namespace radsum
