#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "radsum/lattice.hpp"
#include "radsum/radical.hpp"

namespace radsum {

/// The first k primes, in increasing order.
IntVector first_primes(std::size_t k);

struct ConstructionPlan {
    unsigned d = 2;
    std::size_t k = 1;
    IntVector primes;
    mpz_class P;
    mpz_class N;
    // Q = floor(N^(1/d) / (4 P^(1/d))), T = Q + 1.
    mpz_class Q;
    mpz_class T;
    mpq_class beta;
    // Enclosure of beta - T * sum_i p_i^(1/d).
    Ball xi;
};

struct ConstructOptions {
    // Overrides the first k primes; must be k distinct primes.
    std::optional<IntVector> primes;
    mpfr_prec_t precision = 256;
    InhomOptions inhom;
};

/// Smallest N for which Q >= 1, i.e. 4^d * P.
mpz_class minimum_bound(unsigned d, const mpz_class& P);

ConstructionPlan plan(unsigned d, std::size_t k, const mpz_class& N, const mpq_class& beta,
                      const ConstructOptions& opts = {});

struct ConstructionResult {
    ConstructionPlan plan;
    IntVector q;
    // c_i = T + q_i, so 1 <= c_i <= 2Q + 1.
    IntVector c;
    RadicandTuple tuple;
    CertifiedDistance distance;
};

/// b_i = p_i * (T + q_i)^d where q solves the inhomogeneous problem for xi.
ConstructionResult construct(unsigned d, std::size_t k, const mpz_class& N, const mpq_class& beta,
                             const ConstructOptions& opts = {});

}  // namespace radsum
