#pragma once

#include <Eigen/Core>
#include <vector>

#include "sirlab/linalg.hpp"
#include "sirlab/rng.hpp"

namespace sirlab {

// Per-label summary of a discrete conditioning variable.
struct DiscreteConditional {
    std::vector<int> labels;          // distinct values, ascending
    std::vector<long long> counts;    // per-label sample counts, sum to n
    Eigen::MatrixXd group_means;      // one row per label
};

DiscreteConditional summarize_by_label(const Eigen::MatrixXd& z, const std::vector<int>& w);

// Plug-in Cov(E[Z | W]) = sum_w p_hat_w (zbar_w - zbar)(zbar_w - zbar)'.
SymMatrix cov_conditional_mean(const Eigen::MatrixXd& z, const std::vector<int>& w);

// Plug-in entropy sum_w p_hat_w log(1 / p_hat_w), natural log.
double entropy(const std::vector<int>& w);

struct EntropyBoundResult {
    double lhs = 0.0;     // lambda_min of the conditional-mean covariance
    double rhs = 0.0;     // 37 Ent(W) / d
    double se_lhs = 0.0;  // 20-block standard error of lhs
    double margin = 0.0;  // rhs + 3 se_lhs - lhs
    bool pass = false;
};

// Tests lambda_min(Cov(E[Z|W])) <= 37 Ent(W)/d + 3 MC standard errors. Throws
// HypothesisViolated when any label carries mass >= 1/2.
EntropyBoundResult entropy_bound_check(const Eigen::MatrixXd& z, const std::vector<int>& w);

struct DecayBoundResult {
    double gsnr = 0.0;   // d^{-1} (E max_i |Z_i|)^2, Monte Carlo
    double bound = 0.0;  // 2 log(2d) / d
    double se = 0.0;
};

// gSNR of the basic signed-argmax construction against its log(d)/d ceiling.
DecayBoundResult decay_bound_check(int d, long long samples, Rng& rng);

}  // namespace sirlab
