#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "sirlab/dataset.hpp"
#include "sirlab/linalg.hpp"
#include "sirlab/models.hpp"
#include "sirlab/slicing.hpp"

namespace sirlab {

enum class SigmaMode { identity, estimated };

struct SirConfig {
    int h = 10;                           // slice count, >= d
    int d = 1;                            // structural dimension, 1 <= d <= p
    SigmaMode sigma_mode = SigmaMode::identity;
    double eig_floor = 1e-12;             // whitening eigenvalue floor (relative)
};

struct SirFit {
    Basis basis;                    // p x d; Sigma-orthonormal in estimated mode
    CandidateMatrix candidate;      // raw Lambda_hat and its decomposition
    Eigen::VectorXd top_eigenvalues;// first min(H, p) eigenvalues of the fit operator
    double gsnr_hat = 0.0;          // d-th eigenvalue of the fit operator
    double kappa_hat = 0.0;         // lambda_1 / lambda_d of the top-d block
    bool rank_warning = false;      // d exceeded the numerical rank of Lambda_hat
    std::string warning;
};

// Slice-count default when an experiment does not pin one: min(10 d, n/10),
// clamped to at least d.
int default_slice_count(Eigen::Index n, int d);

// Identity mode returns the top-d eigenvectors of Lambda_hat. Estimated mode
// whitens by the inverse square root of the sample covariance and maximises
// Tr(B' Lambda_hat B) subject to B' Sigma_hat B = I_d; this requires n > p.
SirFit fit_sir(const Dataset& data, const SirConfig& cfg);

// The d-th eigenvalue of the (possibly whitened) candidate matrix.
double estimate_gsnr(const Dataset& data, const SirConfig& cfg);

// Replicated deviation test for the lower-bound model: the fraction of
// replications with |beta' (Lambda_hat - Lambda) beta| <= (1/2) beta' Lambda beta,
// where beta is the first true direction and beta' Lambda beta = rho^2 lambda_{0,d}
// analytically. Requires n >= 1 + 4 H / gamma.
double deviation_check(const LowerBoundModel& model, Eigen::Index n, int h, int reps,
                       std::uint64_t master_seed, double gamma = 0.1);

}  // namespace sirlab
