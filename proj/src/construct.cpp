#include "radsum/construct.hpp"

#include <algorithm>
#include <set>

namespace radsum {

IntVector first_primes(std::size_t k) {
    IntVector out;
    mpz_class p = 2;
    while (out.size() < k) {
        out.push_back(p);
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    return out;
}

mpz_class minimum_bound(unsigned d, const mpz_class& P) {
    mpz_class four_d;
    mpz_ui_pow_ui(four_d.get_mpz_t(), 4, d);
    return four_d * P;
}

ConstructionPlan plan(unsigned d, std::size_t k, const mpz_class& N, const mpq_class& beta,
                      const ConstructOptions& opts) {
    if (d < 2) throw InputError("plan: d must be >= 2");
    if (k < 1) throw InputError("plan: k must be >= 1");
    if (N < 1) throw InputError("plan: N must be >= 1");

    ConstructionPlan pl;
    pl.d = d;
    pl.k = k;
    pl.N = N;
    pl.beta = beta;
    if (opts.primes) {
        if (opts.primes->size() != k) throw InputError("plan: expected exactly k primes");
        std::set<mpz_class> distinct(opts.primes->begin(), opts.primes->end());
        if (distinct.size() != k) throw InputError("plan: primes must be distinct");
        for (const auto& p : *opts.primes)
            if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
                throw InputError("plan: " + p.get_str() + " is not prime");
        pl.primes = *opts.primes;
    } else {
        pl.primes = first_primes(k);
    }
    pl.P = *std::max_element(pl.primes.begin(), pl.primes.end());

    // floor((N / (4^d P))^(1/d)) equals the d-th integer root of the floor.
    mpz_class n_min = minimum_bound(d, pl.P);
    mpz_class ratio = N / n_min;
    mpz_root(pl.Q.get_mpz_t(), ratio.get_mpz_t(), d);
    if (pl.Q < 1)
        throw InfeasibleError("plan: N = " + N.get_str() + " is below N_min = " + n_min.get_str() +
                              " for d = " + std::to_string(d) + ", k = " + std::to_string(k));
    pl.T = pl.Q + 1;

    mpz_class side = 2 * pl.Q + 1, top;
    mpz_pow_ui(top.get_mpz_t(), side.get_mpz_t(), d);
    if (pl.P * top > N) throw InfeasibleError("plan: P (2Q+1)^d exceeds N");

    Ball sum = Ball::from_integer(0, opts.precision);
    for (const auto& p : pl.primes) sum = sum + root_ball(p, d, opts.precision);
    pl.xi = Ball::from_rational(beta, opts.precision) - sum * pl.T;
    return pl;
}

ConstructionResult construct(unsigned d, std::size_t k, const mpz_class& N, const mpq_class& beta,
                             const ConstructOptions& opts) {
    ConstructionResult out;
    out.plan = plan(d, k, N, beta, opts);
    const auto& pl = out.plan;

    ThetaVector theta = ThetaVector::from_primes(pl.primes, d, opts.precision);
    LinearTarget xi;
    xi.constant = beta;
    xi.theta_coeffs.assign(k, -pl.T);
    InhomResult sol = solve_inhom(theta, xi, pl.Q, opts.inhom);
    out.q = sol.q;

    out.tuple.degree = d;
    out.tuple.bound = N;
    for (std::size_t i = 0; i < k; ++i) {
        mpz_class c = pl.T + sol.q[i];
        if (c < 1 || c > 2 * pl.Q + 1) throw Error("construct: shifted coefficient out of range");
        mpz_class b;
        mpz_pow_ui(b.get_mpz_t(), c.get_mpz_t(), d);
        b *= pl.primes[i];
        if (b < 1 || b > N) throw Error("construct: radicand exceeds N");
        out.c.push_back(c);
        out.tuple.radicands.push_back(b);
    }
    out.distance = certified_sum_dist(out.tuple, beta, opts.inhom.eval);
    return out;
}

}  // namespace radsum
