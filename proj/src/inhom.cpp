#include <algorithm>
#include <cmath>
#include <map>

#include "radsum/lattice.hpp"

namespace radsum {

LinearTarget LinearTarget::rational(const mpq_class& value, std::size_t k) {
    LinearTarget t;
    t.constant = value;
    t.theta_coeffs.assign(k, 0);
    return t;
}

namespace {

struct Candidate {
    IntVector q;
    mpz_class key;  // scaled ||q.theta - xi|| in units of 2^-scale_bits
    mpz_class err;  // bound on |key - exact| in the same units
};

mpz_class norm_inf(const IntVector& q) {
    mpz_class m = 0;
    for (const auto& x : q) m = std::max(m, mpz_class(abs(x)));
    return m;
}

class Search {
  public:
    Search(const ThetaVector& theta, const LinearTarget& xi, const mpz_class& Q, int scale_bits,
           const InhomOptions& opts)
        : theta_(theta), xi_(xi), Q_(Q), scale_bits_(scale_bits), opts_(opts) {
        R_ = fixed_point_theta(theta_, scale_bits_);
        mpz_ui_pow_ui(S_.get_mpz_t(), 2, static_cast<unsigned long>(scale_bits_));
        mpq_class c = xi.constant * S_;
        mpz_class num = 2 * c.get_num() + c.get_den(), den = 2 * c.get_den();
        mpz_fdiv_q(X_.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        t_sum_ = 1;
        for (std::size_t i = 0; i < R_.size(); ++i) {
            X_ += xi.theta_coeffs[i] * R_[i];
            t_sum_ += abs(xi.theta_coeffs[i]);
        }
    }

    const mpz_class& target_scaled() const { return X_; }
    const mpz_class& scale() const { return S_; }

    void offer(const IntVector& q) {
        if (norm_inf(q) > Q_) return;
        if (seen_.count(q)) return;
        mpz_class v = -X_, err = t_sum_;
        for (std::size_t i = 0; i < q.size(); ++i) {
            v += q[i] * R_[i];
            err += abs(q[i]);
        }
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), S_.get_mpz_t());
        mpz_class key = std::min(r, mpz_class(S_ - r));
        seen_.emplace(q, Candidate{q, key, err});
    }

    std::uint64_t size() const { return seen_.size(); }

    RadicalForm form(const IntVector& q) const {
        RadicalForm f;
        f.degree = theta_.degree;
        f.radicands = theta_.radicands;
        for (std::size_t i = 0; i < q.size(); ++i) f.coeffs.push_back(q[i] - xi_.theta_coeffs[i]);
        f.offset = xi_.constant;
        return f;
    }

    // True when a is strictly preferred over b.
    bool better(const IntVector& a, const IntVector& b) const {
        auto c = compare_distance(form(a), form(b), opts_.eval);
        if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
        mpz_class na = norm_inf(a), nb = norm_inf(b);
        if (na != nb) return na < nb;
        return b < a;
    }

    IntVector best() const {
        const Candidate* lead = nullptr;
        for (const auto& [q, c] : seen_)
            if (!lead || c.key < lead->key) lead = &c;
        mpz_class ceiling = lead->key + lead->err;
        IntVector winner;
        bool have = false;
        for (const auto& [q, c] : seen_) {
            if (c.key - c.err > ceiling) continue;
            if (!have || better(q, winner)) {
                winner = q;
                have = true;
            }
        }
        return winner;
    }

  private:
    const ThetaVector& theta_;
    const LinearTarget& xi_;
    mpz_class Q_;
    int scale_bits_;
    const InhomOptions& opts_;
    IntVector R_;
    mpz_class S_, X_, t_sum_;
    std::map<IntVector, Candidate> seen_;
};

unsigned perturbed_dimension(std::size_t n, int radius, std::uint64_t cap) {
    unsigned m = 0;
    std::uint64_t count = 1, side = 2 * static_cast<std::uint64_t>(radius) + 1;
    while (m < n && count * side <= cap) {
        count *= side;
        ++m;
    }
    return m;
}

}  // namespace

InhomResult solve_inhom(const ThetaVector& theta, const LinearTarget& xi, const mpz_class& Q,
                        const InhomOptions& opts) {
    if (Q < 1) throw InputError("solve_inhom: Q must be >= 1");
    if (opts.enumeration_radius < 0) throw InputError("solve_inhom: enumeration radius must be >= 0");
    const std::size_t k = theta.size();
    LinearTarget target = xi;
    if (target.theta_coeffs.empty()) target.theta_coeffs.assign(k, 0);
    if (target.theta_coeffs.size() != k) throw InputError("solve_inhom: target has wrong length");

    int scale_bits = opts.scale_bits.value_or(default_scale_bits(Q, k));
    ThetaVector th = theta.precision >= scale_bits + 32 ? theta : theta.at_precision(scale_bits + 32);
    Search search(th, target, Q, scale_bits, opts);
    search.offer(IntVector(k, 0));

    mpz_class qm1 = Q - 1;
    int log2q = Q == 1 ? 0 : static_cast<int>(mpz_sizeinbase(qm1.get_mpz_t(), 2));
    int steps = std::min(static_cast<int>(k) * log2q + 6, scale_bits - 20);

    const std::size_t n = k + 1;
    const int E = opts.enumeration_radius;
    const unsigned m = perturbed_dimension(n, E, opts.max_enumeration);
    for (int j = 1; j <= steps; ++j) {
        BoxWeights box{Q, mpq_class(1)};
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(j));
        box.delta = mpq_class(mpz_class(1), den);
        IntegerLattice primal = build_primal_basis(th, box, scale_bits);
        LllResult red = lll_reduce(primal, opts.alpha);

        IntVector goal(n, 0);
        goal[k] = box.delta.get_den() * Q * search.target_scaled();
        BabaiResult nearest = babai_nearest(red.lattice.basis, goal);

        // Odometer over offsets in [-E, E]^m on the first m reduced coordinates.
        std::vector<int> offset(m, -E);
        while (true) {
            IntVector coeff = nearest.coefficients;
            for (unsigned i = 0; i < m; ++i) coeff[i] += offset[i];
            IntVector q(k, 0);
            for (std::size_t col = 0; col < n; ++col) {
                if (coeff[col] == 0) continue;
                for (std::size_t i = 0; i < k; ++i) q[i] += coeff[col] * red.transform[col][i];
            }
            search.offer(q);

            unsigned pos = 0;
            while (pos < m && offset[pos] == E) offset[pos++] = -E;
            if (pos == m) break;
            ++offset[pos];
        }
    }

    InhomResult out;
    out.q = search.best();
    out.dist = certify_distance(search.form(out.q), opts.eval);
    out.candidates = search.size();
    return out;
}

}  // namespace radsum
