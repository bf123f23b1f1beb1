#include "sirlab/sir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sirlab/errors.hpp"

namespace sirlab {

int default_slice_count(Eigen::Index n, int d) {
    const long long by_d = 10LL * d;
    const long long by_n = static_cast<long long>(n) / 10;
    return static_cast<int>(std::max<long long>(d, std::min(by_d, by_n)));
}

SirFit fit_sir(const Dataset& data, const SirConfig& cfg) {
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    if (cfg.d < 1 || cfg.d > p) throw InvalidInput("fit_sir: need 1 <= d <= p");
    if (cfg.h < cfg.d) throw InvalidInput("fit_sir: need H >= d");
    if (cfg.sigma_mode == SigmaMode::estimated && n <= p)
        throw SingularCovariance("fit_sir: estimated mode needs n > p");

    SirFit fit;
    const SlicedPartition part = slice(data, cfg.h);
    fit.candidate = candidate_matrix(data, part);

    EigenDecomposition op_eig;  // decomposition of the operator actually fitted
    Eigen::MatrixXd whiten;     // only used in estimated mode
    if (cfg.sigma_mode == SigmaMode::identity) {
        op_eig = fit.candidate.eig;
    } else {
        const SymMatrix sigma = sample_covariance(data.x);
        whiten = spd_inv_sqrt(sigma, cfg.eig_floor).m;
        Eigen::MatrixXd m = whiten * fit.candidate.lambda_hat.m * whiten;
        op_eig = sym_eig(SymMatrix(0.5 * (m + m.transpose())));
    }

    const Eigen::Index k = std::min<Eigen::Index>(cfg.h, p);
    fit.top_eigenvalues = op_eig.values.head(k);
    fit.gsnr_hat = op_eig.values(cfg.d - 1);
    fit.kappa_hat = fit.gsnr_hat > 0.0
                        ? op_eig.values(0) / fit.gsnr_hat
                        : std::numeric_limits<double>::infinity();

    if (cfg.sigma_mode == SigmaMode::identity) {
        fit.basis = Basis{op_eig.vectors.leftCols(cfg.d), false};
    } else {
        fit.basis = Basis{whiten * op_eig.vectors.leftCols(cfg.d), true};
    }

    // Numerical rank of the candidate matrix; d beyond it means the trailing
    // directions are noise-driven.
    const double lmax = fit.candidate.eig.values(0);
    const double tol = std::max(1e-12, 1e-9 * std::max(lmax, 0.0));
    int rank = 0;
    for (Eigen::Index i = 0; i < fit.candidate.eig.values.size(); ++i)
        if (fit.candidate.eig.values(i) > tol) ++rank;
    if (cfg.d > rank) {
        fit.rank_warning = true;
        fit.warning = "requested d = " + std::to_string(cfg.d) +
                      " exceeds numerical rank " + std::to_string(rank) +
                      " of the candidate matrix";
    }
    return fit;
}

double estimate_gsnr(const Dataset& data, const SirConfig& cfg) {
    return fit_sir(data, cfg).gsnr_hat;
}

double deviation_check(const LowerBoundModel& model, Eigen::Index n, int h, int reps,
                       std::uint64_t master_seed, double gamma) {
    if (reps < 1) throw InvalidInput("deviation_check: reps must be at least 1");
    if (gamma <= 0.0 || gamma >= 1.0)
        throw InvalidInput("deviation_check: gamma must lie in (0, 1)");
    const double n_min = 1.0 + 4.0 * h / gamma;
    if (double(n) < n_min)
        throw InvalidInput("deviation_check: n = " + std::to_string(n) +
                           " is below the slicing requirement 1 + 4H/gamma = " +
                           std::to_string(n_min));

    Rng lam_rng(master_seed, stream_hash("deviation-check/lambda0", model.d));
    const double lam0 = lambda_0d(model.d, 1000000, lam_rng).value;
    const double target = model.rho * model.rho * lam0;  // beta' Lambda beta
    const Eigen::VectorXd beta = model.b.col(0);

    int pass = 0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng(master_seed, stream_hash("deviation-check/rep", model.d, h,
                                         static_cast<std::uint64_t>(n),
                                         static_cast<std::uint64_t>(rep)));
        const LowerBoundSample sample = sample_lower_bound(model, n, rng);
        const SlicedPartition part = slice(sample.data, h);
        const CandidateMatrix cand = candidate_matrix(sample.data, part);
        const double observed = beta.dot(cand.lambda_hat.m * beta);
        if (std::fabs(observed - target) <= 0.5 * target) ++pass;
    }
    return double(pass) / double(reps);
}

}  // namespace sirlab
