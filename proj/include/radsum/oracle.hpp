#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "radsum/radical.hpp"

namespace radsum {

struct OracleOptions {
    // Refuse scans of more tuples than this; the default admits k = 3, N = 3000.
    long double max_tuples = 4504501000.0L;
    unsigned workers = 1;
    EvalOptions eval;
};

struct OracleResult {
    CertifiedDistance minimum;
    RadicandTuple witness;
    std::uint64_t tuples_scanned = 0;
    // Tuples skipped because every radicand is a perfect d-th power.
    std::uint64_t exclusions = 0;
};

/// Number of nondecreasing k-tuples in [1, N], i.e. C(N+k-1, k).
long double tuple_count(std::size_t k, std::uint64_t N);

/// min ||sum_j b_j^(1/d)|| over 1 <= b_1 <= ... <= b_k <= N with a
/// non-integral sum.  Ties go to the lexicographically smallest tuple.
OracleResult g_min(std::size_t k, unsigned d, std::uint64_t N, const OracleOptions& opts = {});

/// min ||sum_j b_j^(1/d) - beta|| over all nondecreasing tuples; exact hits
/// are allowed and flagged.
OracleResult inhom_min(std::size_t k, unsigned d, std::uint64_t N, const mpq_class& beta,
                       const OracleOptions& opts = {});

}  // namespace radsum
