#pragma once

#include <Eigen/Core>
#include <vector>

#include "sirlab/dataset.hpp"
#include "sirlab/linalg.hpp"
#include "sirlab/rng.hpp"

namespace sirlab {

// Median of the chi-square distribution with d degrees of freedom, solved by
// bisection on the regularised incomplete gamma so that |CDF(m) - 1/2| <= 1e-10.
double chi2_median(int d);

// Regularised lower incomplete gamma P(a, x); exposed for tests.
double gammp(double a, double x);

// Signed-argmax label of z: sgn(z_i) * i (1-indexed) when |z_i| is strictly the
// largest coordinate magnitude and ||z||^2 <= m_d, else 0. Ties and the
// outside-ball region map to 0; sgn(0) = 0.
int psi(const Eigen::VectorXd& z, double m_d);

// Same without the ball restriction.
int psi0(const Eigen::VectorXd& z);

// Adversarial joint model: X ~ N(0, I_p), Z = rho B'X + sqrt(1-rho^2) xi,
// W = psi(Z), Y = W + Unif(-sigma, sigma). rho = 0 is allowed as the
// degenerate no-signal endpoint used in diagnostics.
struct LowerBoundModel {
    int p = 0;
    int d = 0;
    Eigen::MatrixXd b;  // p x d, Euclidean-orthonormal
    double rho = 0.0;   // [0, 1)
    double sigma = 0.5; // (0, 1/2]
    double m_d = 0.0;   // chi-square median for dimension d
};

// Validates the invariants and fills in m_d. When `b` is empty the first d
// standard basis vectors are used.
LowerBoundModel make_lower_bound_model(int p, int d, double rho, double sigma = 0.5,
                                       const Eigen::MatrixXd& b = Eigen::MatrixXd());

struct LowerBoundSample {
    Dataset data;
    std::vector<int> w;  // latent discrete label per sample
    Eigen::MatrixXd z;   // latent n x d Gaussian mix, for analysis
};

LowerBoundSample sample_lower_bound(const LowerBoundModel& model, Eigen::Index n, Rng& rng);

// Five-index synthetic models on X ~ N(0, I_15) with 0.01 N(0,1) noise.
Dataset sample_m1(Eigen::Index n, Rng& rng);
Dataset sample_m2(Eigen::Index n, Rng& rng);

// Noiseless link values at a single predictor row (x must have 15 entries).
double m1_link(const Eigen::VectorXd& x);
double m2_link(const Eigen::VectorXd& x);

// Gaussian-process link: squared-exponential kernel with unit lengthscale.
struct GpLinkSpec {
    double noise_sd = 0.01;
    double jitter = 1e-10;       // escalated x10 up to jitter_max on failure
    double jitter_max = 1e-6;
    Eigen::Index cap = 20000;    // O(n^3) factorisation guard, overridable
};

// Joint draw of f at the given input rows from the squared-exponential GP,
// via Cholesky with jitter escalation.
Eigen::VectorXd sample_gp_values(const Eigen::MatrixXd& inputs, Rng& rng,
                                 const GpLinkSpec& spec = {});

// Y_i = f(B'X_i) + noise_sd * eps_i with f drawn jointly from the GP at the
// projected inputs (B = first d standard basis vectors, p = 15).
Dataset sample_gp_model(Eigen::Index n, int d, Rng& rng, const GpLinkSpec& spec = {});

struct MonteCarloEstimate {
    double value = 0.0;
    double se = 0.0;  // block standard error (20 blocks)
    long long samples = 0;
};

// E[ max_i |Z_i| 1{||Z||^2 <= m_d} ] for Z ~ N(0, I_d); the normalising
// constant of the theta parametrisation.
MonteCarloEstimate expected_max_in_ball(int d, long long samples, Rng& rng);

// lambda_{0,d} = (2d)^{-1} E(Z_1 | Z in A_1)^2 where A_1 is the in-ball cone
// with z_1 positive and strictly largest in magnitude. Requires samples >= 1e5.
MonteCarloEstimate lambda_0d(int d, long long samples, Rng& rng);

// Closed-form gSNR of the lower-bound model:
// 2 d^{-1} rho^2 (E[max_i |Z_i| 1{||Z||^2 <= m_d}])^2.
MonteCarloEstimate gsnr_formula(int d, double rho, long long samples, Rng& rng);

// rho = theta sqrt(d) / E[max |Z_i| 1{ball}]; the resulting gSNR is 2 theta^2.
// Throws ThetaTooLarge when the mapped rho reaches 1.
double theta_to_rho(double theta, int d, long long samples, Rng& rng);

// KL divergence between the (p+d)-dimensional Gaussian joints of (X, Z) under
// bases b1 and b2, computed directly from the Gaussian KL formula. Equals
// rho^2 ||b1 - b2||_F^2 / (2 (1 - rho^2)) exactly.
double exact_kl_xz(const Basis& b1, const Basis& b2, double rho);

}  // namespace sirlab
