#include <algorithm>

#include "radsum/taylor.hpp"

namespace radsum {

mpq_class RationalSeries::at(long exponent) const {
    auto it = coeffs.find(exponent);
    return it == coeffs.end() ? mpq_class(0) : it->second;
}

void RationalSeries::normalize() {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (it->second == 0)
            it = coeffs.erase(it);
        else
            ++it;
    }
}

mpq_class binomial(const mpq_class& r, unsigned long n) {
    mpq_class out = 1;
    for (unsigned long i = 0; i < n; ++i) {
        out *= r - i;
        out /= i + 1;
    }
    return out;
}

namespace {

mpq_class power(const mpq_class& x, unsigned long n) {
    mpq_class out = 1;
    for (unsigned long i = 0; i < n; ++i) out *= x;
    return out;
}

}  // namespace

RationalSeries expand_radical(const ExpansionParams& p, long order) {
    if (p.d < 2) throw InputError("expand_radical: d must be >= 2");
    if (order < static_cast<long>(p.d) - 1) throw InputError("expand_radical: order must be >= d-1");
    const long d = p.d;
    const mpq_class root_exp(1, d);

    RationalSeries out;
    out.truncation_order = -order;
    // (M+u) * sum_n binom(1/d, n) v^n (M+u)^(-dn), and
    // (M+u)^e = sum_j binom(e, j) u^j M^(e-j).
    for (long n = 0; 1 - d * n >= -order; ++n) {
        if (n > 0 && p.v == 0) break;
        mpq_class base = binomial(root_exp, n) * power(p.v, n);
        const long e = 1 - d * n;
        for (long j = 0; e - j >= -order; ++j) {
            if (j > 0 && p.u == 0) break;
            out.coeffs[e - j] += base * binomial(mpq_class(e), j) * power(p.u, j);
        }
    }
    out.normalize();
    return out;
}

RationalSeries combine(const std::vector<mpq_class>& weights, const std::vector<RationalSeries>& series) {
    if (weights.size() != series.size()) throw InputError("combine: weights and series differ in length");
    RationalSeries out;
    if (series.empty()) return out;
    out.truncation_order = series.front().truncation_order;
    for (const auto& s : series) out.truncation_order = std::max(out.truncation_order, s.truncation_order);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (weights[i] == 0) continue;
        for (const auto& [e, c] : series[i].coeffs)
            if (e >= out.truncation_order) out.coeffs[e] += weights[i] * c;
    }
    out.normalize();
    return out;
}

std::vector<std::vector<mpz_class>> nullspace_basis(const std::vector<std::vector<mpq_class>>& rows,
                                                    std::size_t cols) {
    // Clear denominators row by row.
    std::vector<std::vector<mpz_class>> a;
    for (const auto& row : rows) {
        if (row.size() != cols) throw InputError("nullspace: ragged matrix");
        mpz_class l = 1;
        for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        std::vector<mpz_class> r;
        for (const auto& x : row) r.push_back(x.get_num() * (l / x.get_den()));
        a.push_back(std::move(r));
    }

    // Bareiss elimination to row echelon form.
    std::vector<std::size_t> pivots;
    mpz_class prev = 1;
    std::size_t pr = 0;
    for (std::size_t col = 0; col < cols && pr < a.size(); ++col) {
        std::size_t sel = pr;
        while (sel < a.size() && a[sel][col] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[pr], a[sel]);
        for (std::size_t i = pr + 1; i < a.size(); ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                mpz_class t = a[pr][col] * a[i][j] - a[i][col] * a[pr][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][col] = 0;
        }
        prev = a[pr][col];
        pivots.push_back(col);
        ++pr;
    }

    std::vector<std::vector<mpz_class>> basis;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<mpq_class> x(cols, 0);
        x[free] = 1;
        for (std::size_t r = pivots.size(); r-- > 0;) {
            std::size_t pc = pivots[r];
            mpq_class s = 0;
            for (std::size_t j = pc + 1; j < cols; ++j) s += mpq_class(a[r][j]) * x[j];
            x[pc] = -s / mpq_class(a[r][pc]);
        }
        mpz_class l = 1, g = 0;
        for (const auto& v : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        std::vector<mpz_class> z;
        for (const auto& v : x) {
            z.push_back(v.get_num() * (l / v.get_den()));
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
        }
        auto lead = std::find_if(z.begin(), z.end(), [](const mpz_class& v) { return v != 0; });
        if (*lead < 0) g = -g;
        for (auto& v : z) v /= g;
        basis.push_back(std::move(z));
    }
    return basis;
}

}  // namespace radsum
