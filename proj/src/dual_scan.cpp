#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "radsum/lattice.hpp"
#include "radsum/parallel.hpp"

namespace radsum {

Ball dual_quality(const ThetaVector& theta, std::uint64_t h, const mpq_class& sigma,
                  mpfr_prec_t prec) {
    if (h < 1) throw InputError("dual_quality: h must be >= 1");
    if (sigma < 0) throw InputError("dual_quality: sigma must be >= 0");
    mpz_class hz(static_cast<unsigned long>(h));
    mpfr_prec_t work = prec + 64;
    Ball worst = Ball::from_integer(0, work);
    for (const auto& r : theta.radicands)
        worst = ball_max(worst, frac_dist(root_ball(r, theta.degree, work) * hz));

    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), hz.get_mpz_t(), sigma.get_num().get_ui());
    const mpz_class& den = sigma.get_den();
    Ball weight = den == 1 ? Ball::from_integer(power, work)
                           : root_ball(power, static_cast<unsigned>(den.get_ui()), work);
    return weight * worst;
}

namespace {

struct Scalar {
    double value = std::numeric_limits<double>::infinity();
    double err = 0;
    std::uint64_t h = 0;
};

struct Decade {
    std::uint64_t lo, hi;
};

// Fixed-point evaluation of the quality: frac(h*theta) ~ h*F mod 2^64.
class FastQuality {
  public:
    FastQuality(const ThetaVector& theta, const mpq_class& sigma) : sigma_(sigma.get_d()) {
        ThetaVector th = theta.at_precision(192);
        mpz_class two64 = mpz_class(1) << 64;
        for (const auto& v : th.values) {
            mpq_class frac = v.mid_q();
            mpz_class whole;
            mpz_fdiv_q(whole.get_mpz_t(), frac.get_num_mpz_t(), frac.get_den_mpz_t());
            frac -= whole;
            mpq_class scaled = frac * two64;
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
            std::uint64_t word = 0;
            mpz_export(&word, nullptr, -1, sizeof(word), 0, 0, f.get_mpz_t());
            frac_.push_back(word);
        }
    }

    Scalar operator()(std::uint64_t h) const {
        double worst = 0;
        for (std::uint64_t f : frac_) {
            std::uint64_t x = h * f;
            std::uint64_t d = std::min(x, std::uint64_t(0) - x);
            worst = std::max(worst, static_cast<double>(d) * 0x1p-64);
        }
        double w = std::pow(static_cast<double>(h), sigma_);
        Scalar s;
        s.value = w * worst;
        // Truncation of frac(theta) costs at most h+1 units of 2^-64; pow and
        // the final product add a few ulps.
        s.err = w * static_cast<double>(h + 2) * 0x1p-64 + 1e-12 * s.value;
        s.h = h;
        return s;
    }

  private:
    double sigma_;
    std::vector<std::uint64_t> frac_;
};

// Decades are [1, 10], [11, 100], ..., so a power-of-ten H closes a full decade.
std::vector<Decade> decades_up_to(std::uint64_t H) {
    std::vector<Decade> out;
    std::uint64_t lo = 1, hi = 10;
    while (lo <= H) {
        out.push_back({lo, std::min(hi, H)});
        if (hi >= H || hi > std::numeric_limits<std::uint64_t>::max() / 10) break;
        lo = hi + 1;
        hi = hi * 10;
    }
    return out;
}

constexpr std::uint64_t kChunk = 1 << 14;

// Among candidate h (increasing), returns the certified minimiser with ties to
// smaller h.
std::pair<std::uint64_t, Ball> resolve(const ThetaVector& theta, const std::vector<std::uint64_t>& hs,
                                       const mpq_class& sigma, const DualScanOptions& opts) {
    std::vector<std::uint64_t> ambiguous;
    Ball last;
    for (mpfr_prec_t prec = opts.start_precision; prec <= opts.precision_cap; prec *= 2) {
        std::vector<Ball> q;
        q.reserve(hs.size());
        for (auto h : hs) q.push_back(dual_quality(theta, h, sigma, prec));
        std::size_t best = 0;
        for (std::size_t i = 1; i < hs.size(); ++i)
            if (q[i].upper_q() < q[best].upper_q()) best = i;
        ambiguous.clear();
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (i == best || q[best].certainly_less(q[i])) continue;
            bool exact_tie = q[i].is_exact() && q[best].is_exact() && q[i].mid_q() == q[best].mid_q();
            if (exact_tie && i > best) continue;
            ambiguous.push_back(hs[i]);
        }
        if (ambiguous.empty()) return {hs[best], q[best]};
        last = q[best];
    }
    std::ostringstream msg;
    msg << "dual_scan: precision cap reached; ambiguous h:";
    for (auto h : ambiguous) msg << ' ' << h;
    throw UndecidedError(msg.str(), last);
}

}  // namespace

DualScanReport dual_scan(const ThetaVector& theta, std::uint64_t H, const mpq_class& sigma,
                         const DualScanOptions& opts) {
    if (H < 1) throw InputError("dual_scan: H must be >= 1");
    if (sigma < 0) throw InputError("dual_scan: sigma must be >= 0");
    if (H > (std::uint64_t(1) << 40)) throw InputError("dual_scan: H must be <= 2^40");
    const FastQuality fast(theta, sigma);
    const std::vector<Decade> decades = decades_up_to(H);
    const std::uint64_t chunks = (H + kChunk - 1) / kChunk;

    // Pass 1: per-chunk, per-decade minima of the fast estimate.
    std::vector<std::vector<Scalar>> chunk_min(chunks, std::vector<Scalar>(decades.size()));
    parallel_tasks(chunks, opts.workers, [&](unsigned, std::uint64_t c) {
        std::uint64_t lo = c * kChunk + 1, hi = std::min(H, (c + 1) * kChunk);
        std::size_t di = 0;
        while (decades[di].hi < lo) ++di;
        for (std::uint64_t h = lo; h <= hi; ++h) {
            if (h > decades[di].hi) ++di;
            Scalar s = fast(h);
            if (s.value < chunk_min[c][di].value) chunk_min[c][di] = s;
        }
    });
    std::vector<Scalar> decade_min(decades.size());
    for (const auto& per_chunk : chunk_min)
        for (std::size_t di = 0; di < decades.size(); ++di)
            if (per_chunk[di].value < decade_min[di].value) decade_min[di] = per_chunk[di];

    // Pass 2: every h that could tie or beat its decade minimum.
    std::vector<std::vector<std::vector<std::uint64_t>>> chunk_cands(
        chunks, std::vector<std::vector<std::uint64_t>>(decades.size()));
    parallel_tasks(chunks, opts.workers, [&](unsigned, std::uint64_t c) {
        std::uint64_t lo = c * kChunk + 1, hi = std::min(H, (c + 1) * kChunk);
        std::size_t di = 0;
        while (decades[di].hi < lo) ++di;
        for (std::uint64_t h = lo; h <= hi; ++h) {
            if (h > decades[di].hi) ++di;
            Scalar s = fast(h);
            const Scalar& m = decade_min[di];
            if (s.value - s.err <= m.value + m.err) chunk_cands[c][di].push_back(h);
        }
    });

    DualScanReport report;
    report.H = H;
    report.sigma = sigma;
    std::vector<std::uint64_t> winners;
    for (std::size_t di = 0; di < decades.size(); ++di) {
        std::vector<std::uint64_t> hs;
        for (const auto& per_chunk : chunk_cands)
            hs.insert(hs.end(), per_chunk[di].begin(), per_chunk[di].end());
        auto [h, q] = resolve(theta, hs, sigma, opts);
        report.decades.push_back({decades[di].lo, decades[di].hi, h, q});
        winners.push_back(h);
    }
    auto [h, q] = resolve(theta, winners, sigma, opts);
    report.witness_h = h;
    report.worst_quality = q;
    return report;
}

}  // namespace radsum
