#include "radsum/lattice.hpp"

#include <algorithm>
#include <set>

namespace radsum {

namespace {

mpz_class round_nearest(const mpq_class& x) {
    // floor(x + 1/2)
    mpz_class num = 2 * x.get_num() + x.get_den();
    mpz_class den = 2 * x.get_den();
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

mpz_class pow2(int bits) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    return out;
}

mpq_class dot_q(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Exact Gram-Schmidt: bstar[i] and mu[i][j] for j < i.
void gram_schmidt(const IntMatrix& b, std::vector<std::vector<mpq_class>>& bstar,
                  std::vector<mpq_class>& norms, std::vector<std::vector<mpq_class>>& mu) {
    std::size_t n = b.size();
    bstar.assign(n, {});
    norms.assign(n, 0);
    mu.assign(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<mpq_class> v(b[i].begin(), b[i].end());
        std::vector<mpq_class> bi = v;
        for (std::size_t j = 0; j < i; ++j) {
            mu[i][j] = dot_q(bi, bstar[j]) / norms[j];
            for (std::size_t r = 0; r < v.size(); ++r) v[r] -= mu[i][j] * bstar[j][r];
        }
        bstar[i] = std::move(v);
        norms[i] = dot_q(bstar[i], bstar[i]);
        if (norms[i] == 0) throw InputError("lattice basis is linearly dependent");
    }
}

void check_square(const IntMatrix& columns) {
    for (const auto& c : columns)
        if (c.size() != columns.size()) throw InputError("lattice basis must be square");
}

}  // namespace

ThetaVector ThetaVector::from_radicands(const IntVector& radicands, unsigned d, mpfr_prec_t prec) {
    if (radicands.empty()) throw InputError("theta: at least one radicand required");
    std::set<mpz_class> seen;
    for (const auto& r : radicands) {
        if (r < 1) throw InputError("theta: radicands must be >= 1");
        if (!seen.insert(r).second) throw InputError("theta: radicands must be pairwise distinct");
    }
    ThetaVector out;
    out.degree = d;
    out.radicands = radicands;
    out.precision = prec;
    for (const auto& r : radicands) out.values.push_back(root_ball(r, d, prec));
    return out;
}

ThetaVector ThetaVector::from_primes(const IntVector& primes, unsigned d, mpfr_prec_t prec) {
    for (const auto& p : primes)
        if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
            throw InputError("theta: " + p.get_str() + " is not prime");
    return from_radicands(primes, d, prec);
}

ThetaVector ThetaVector::at_precision(mpfr_prec_t prec) const {
    return from_radicands(radicands, degree, prec);
}

mpz_class dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw InputError("dot: length mismatch");
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

mpz_class determinant(const IntMatrix& columns) {
    check_square(columns);
    std::size_t n = columns.size();
    if (n == 0) return 1;
    // Bareiss on the transpose; the determinant is unchanged.
    IntMatrix m = columns;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

mpz_class IntegerLattice::determinant() const { return radsum::determinant(basis); }

IntegerLattice IntegerLattice::from_columns(IntMatrix columns) {
    check_square(columns);
    IntegerLattice out;
    out.basis = std::move(columns);
    return out;
}

int default_scale_bits(const mpz_class& Q, std::size_t k) {
    if (Q < 1) throw InputError("scale bits: Q must be >= 1");
    mpz_class qm1 = Q - 1;
    int log2q = Q == 1 ? 0 : static_cast<int>(mpz_sizeinbase(qm1.get_mpz_t(), 2));
    return std::max(64, log2q * static_cast<int>(k + 2) + 32);
}

IntVector fixed_point_theta(const ThetaVector& theta, int scale_bits, mpq_class* error) {
    if (scale_bits < 8) throw InputError("scale_bits must be >= 8");
    if (theta.precision < scale_bits + 16)
        throw PrecisionError("theta precision must be at least scale_bits + 16");
    mpq_class S = pow2(scale_bits);
    mpq_class worst = 0;
    IntVector out;
    for (const auto& v : theta.values) {
        mpq_class exact_mid = v.mid_q() * S;
        mpz_class r = round_nearest(exact_mid);
        mpq_class diff = exact_mid - r;
        mpq_class err = abs(diff) + v.rad_q() * S;
        if (err > 1) throw PrecisionError("fixed-point rounding of theta exceeds one unit");
        worst = std::max(worst, err);
        out.push_back(r);
    }
    if (error) *error = worst;
    return out;
}

namespace {

void check_box(const BoxWeights& box) {
    if (box.Q < 1) throw InputError("box: Q must be >= 1");
    if (box.delta <= 0) throw InputError("box: delta must be positive");
}

}  // namespace

IntegerLattice build_primal_basis(const ThetaVector& theta, const BoxWeights& box, int scale_bits) {
    check_box(box);
    mpq_class err;
    IntVector R = fixed_point_theta(theta, scale_bits, &err);
    std::size_t k = theta.size(), n = k + 1;
    mpz_class S = pow2(scale_bits);
    const mpz_class& a = box.delta.get_num();
    const mpz_class& b = box.delta.get_den();

    IntegerLattice out;
    out.basis.assign(n, IntVector(n, 0));
    for (std::size_t i = 0; i < k; ++i) {
        out.basis[i][i] = a * S;
        out.basis[i][k] = b * box.Q * R[i];
    }
    out.basis[k][k] = b * box.Q * S;
    out.scale_bits = scale_bits;
    out.column_weights.assign(k, mpq_class(box.Q));
    out.column_weights.push_back(box.delta);
    out.rounding_error = err;
    out.pairing_modulus = a * b * box.Q * S * S;
    return out;
}

IntegerLattice build_dual_basis(const ThetaVector& theta, const BoxWeights& box, int scale_bits) {
    check_box(box);
    mpq_class err;
    IntVector R = fixed_point_theta(theta, scale_bits, &err);
    std::size_t k = theta.size(), n = k + 1;
    mpz_class S = pow2(scale_bits);
    const mpz_class& a = box.delta.get_num();
    const mpz_class& b = box.delta.get_den();

    IntegerLattice out;
    out.basis.assign(n, IntVector(n, 0));
    for (std::size_t j = 0; j < k; ++j) {
        out.basis[j][j] = box.Q * b * S;
        out.basis[k][j] = -b * box.Q * R[j];
    }
    out.basis[k][k] = a * S;
    out.scale_bits = scale_bits;
    out.column_weights.assign(k, mpq_class(box.Q));
    out.column_weights.push_back(box.delta);
    out.rounding_error = err;
    out.pairing_modulus = a * b * box.Q * S * S;
    return out;
}

mpz_class pairing_residue(const IntVector& primal, const IntVector& dual, const mpz_class& modulus) {
    if (modulus <= 0) throw InputError("pairing modulus must be positive");
    mpz_class r;
    mpz_class p = dot(primal, dual);
    mpz_fdiv_r(r.get_mpz_t(), p.get_mpz_t(), modulus.get_mpz_t());
    if (2 * r > modulus) r -= modulus;
    return r;
}

LllResult lll_reduce(const IntegerLattice& lattice, const mpq_class& alpha) {
    if (alpha <= mpq_class(1, 4) || alpha >= 1)
        throw InputError("lll: reduction parameter must lie in (1/4, 1)");
    check_square(lattice.basis);
    const std::size_t n = lattice.dimension();

    LllResult out{lattice, {}};
    out.transform.assign(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) out.transform[i][i] = 1;
    if (n == 0) return out;

    // 1-based indices throughout; d[0] = 1.
    IntMatrix b(n + 1), u(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        b[i + 1] = std::move(out.lattice.basis[i]);
        u[i + 1] = std::move(out.transform[i]);
    }
    std::vector<mpz_class> d(n + 1, 0);
    std::vector<std::vector<mpz_class>> lambda(n + 1, std::vector<mpz_class>(n + 1, 0));
    const mpz_class& anum = alpha.get_num();
    const mpz_class& aden = alpha.get_den();

    auto axpy = [](IntVector& x, const mpz_class& q, const IntVector& y) {
        for (std::size_t r = 0; r < x.size(); ++r) x[r] -= q * y[r];
    };
    auto red = [&](std::size_t k, std::size_t l) {
        mpz_class twice = 2 * lambda[k][l];
        if (abs(twice) <= d[l]) return;
        mpz_class q = round_nearest(mpq_class(lambda[k][l], d[l]));
        axpy(b[k], q, b[l]);
        axpy(u[k], q, u[l]);
        lambda[k][l] -= q * d[l];
        for (std::size_t i = 1; i < l; ++i) lambda[k][i] -= q * lambda[l][i];
    };

    d[0] = 1;
    d[1] = dot(b[1], b[1]);
    if (d[1] == 0) throw InputError("lll: zero basis vector");
    std::size_t k = 2, kmax = 1;
    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                mpz_class acc = dot(b[k], b[j]);
                for (std::size_t i = 1; i < j; ++i) {
                    mpz_class t = d[i] * acc - lambda[k][i] * lambda[j][i];
                    mpz_divexact(acc.get_mpz_t(), t.get_mpz_t(), d[i - 1].get_mpz_t());
                }
                if (j < k)
                    lambda[k][j] = acc;
                else
                    d[k] = acc;
            }
            if (d[k] == 0) throw InputError("lll: basis is linearly dependent");
        }
        red(k, k - 1);
        mpz_class& lam = lambda[k][k - 1];
        if (aden * d[k] * d[k - 2] < anum * d[k - 1] * d[k - 1] - aden * lam * lam) {
            std::swap(b[k], b[k - 1]);
            std::swap(u[k], u[k - 1]);
            for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
            mpz_class l = lambda[k][k - 1];
            mpz_class B;
            mpz_class t = d[k - 2] * d[k] + l * l;
            mpz_divexact(B.get_mpz_t(), t.get_mpz_t(), d[k - 1].get_mpz_t());
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                mpz_class ti = lambda[i][k];
                mpz_class x = d[k] * lambda[i][k - 1] - l * ti;
                mpz_divexact(lambda[i][k].get_mpz_t(), x.get_mpz_t(), d[k - 1].get_mpz_t());
                mpz_class y = B * ti + l * lambda[i][k];
                mpz_divexact(lambda[i][k - 1].get_mpz_t(), y.get_mpz_t(), d[k].get_mpz_t());
            }
            d[k - 1] = B;
            k = std::max<std::size_t>(2, k - 1);
        } else {
            for (std::size_t l = k - 1; l-- > 1;) red(k, l);
            ++k;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        out.lattice.basis[i] = std::move(b[i + 1]);
        out.transform[i] = std::move(u[i + 1]);
    }
    return out;
}

bool is_lll_reduced(const IntMatrix& columns, const mpq_class& alpha) {
    std::vector<std::vector<mpq_class>> bstar, mu;
    std::vector<mpq_class> norms;
    gram_schmidt(columns, bstar, norms, mu);
    const mpq_class half(1, 2);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (abs(mu[i][j]) > half) return false;
        if (i > 0 && norms[i] < (alpha - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1]) return false;
    }
    return true;
}

BabaiResult babai_nearest(const IntMatrix& reduced, const IntVector& target) {
    check_square(reduced);
    std::size_t n = reduced.size();
    if (target.size() != n) throw InputError("babai: target dimension mismatch");
    std::vector<std::vector<mpq_class>> bstar, mu;
    std::vector<mpq_class> norms;
    gram_schmidt(reduced, bstar, norms, mu);

    IntVector residual = target;
    BabaiResult out;
    out.coefficients.assign(n, 0);
    for (std::size_t i = n; i-- > 0;) {
        std::vector<mpq_class> r(residual.begin(), residual.end());
        mpz_class c = round_nearest(dot_q(r, bstar[i]) / norms[i]);
        out.coefficients[i] = c;
        for (std::size_t row = 0; row < n; ++row) residual[row] -= c * reduced[i][row];
    }
    out.point.assign(n, 0);
    for (std::size_t row = 0; row < n; ++row) out.point[row] = target[row] - residual[row];
    return out;
}

}  // namespace radsum
