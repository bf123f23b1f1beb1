#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "sirlab/dataset.hpp"
#include "sirlab/linalg.hpp"

namespace sirlab {

struct SparseConfig {
    int s = 0;                               // support size, d < s <= p
    int d = 1;
    int h = 10;
    long long enumeration_cap = 1000000;     // max #subsets to enumerate
    double eig_floor = 1e-12;
};

struct AggregationFit {
    Basis basis;                      // p x d, rows outside the support exactly zero
    std::vector<int> selected_support;// ascending indices, |.| = s
    double oracle_score = 0.0;        // Tr(B' Lambda^{(2)} B) at the winner
};

// Exact C(p, s), or -1 when the count exceeds 2^62.
long long binomial_count(int p, int s);

// The seeded two-fold split used by the aggregation and oracle estimators:
// a Fisher-Yates permutation of the rows, first half / second half. An odd
// trailing sample is dropped before splitting.
std::pair<Dataset, Dataset> split_halves(const Dataset& data, std::uint64_t split_seed);

// Two-fold aggregation: split the sample into seeded halves, solve the
// restricted trace problem on half 1 for every size-s support, and keep the
// support maximising the half-2 trace score (lexicographically smallest on
// ties). An odd trailing sample is dropped.
AggregationFit fit_aggregation(const Dataset& data, const SparseConfig& cfg,
                               std::uint64_t split_seed);

// Restricted fit on half 1 with the support fixed, zero-padded to p rows.
// Uses the same seeded split as fit_aggregation.
Basis fit_oracle(const Dataset& data, const std::vector<int>& support, int d, int h,
                 std::uint64_t split_seed, double eig_floor = 1e-12);

}  // namespace sirlab
