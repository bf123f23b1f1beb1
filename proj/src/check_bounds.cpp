#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "sirlab/analysis.hpp"
#include "sirlab/errors.hpp"
#include "sirlab/experiments.hpp"
#include "sirlab/models.hpp"
#include "sirlab/sir.hpp"
#include "sirlab/slicing.hpp"

namespace sirlab {

namespace {

struct CheckSink {
    const ExperimentConfig& cfg;
    std::vector<ResultRow>& rows;
    std::ostream* log;
    bool all_pass = true;

    void record(const std::string& name, bool pass, double value, double detail) {
        ResultRow row;
        row.experiment = cfg.experiment;
        row.model = "check";
        row.rep_count = 1;
        row.statistic = name;
        row.value = pass ? 1.0 : 0.0;
        row.stderr_val = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(std::move(row));
        all_pass = all_pass && pass;
        if (log)
            (*log) << (pass ? "[PASS] " : "[FAIL] ") << name << "  (value " << value
                   << ", reference " << detail << ")\n";
    }
};

// Block standard error of beta' Cov(E[Z|W]) beta over 20 contiguous chunks.
double block_se_quadform(const Eigen::MatrixXd& z, const std::vector<int>& w,
                         const Eigen::VectorXd& beta) {
    constexpr int kBlocks = 20;
    const Eigen::Index n = z.rows();
    double vals[kBlocks];
    Eigen::Index done = 0;
    for (int blk = 0; blk < kBlocks; ++blk) {
        const Eigen::Index count = n * (blk + 1) / kBlocks - done;
        const std::vector<int> wb(w.begin() + done, w.begin() + done + count);
        const SymMatrix cov = cov_conditional_mean(z.middleRows(done, count), wb);
        vals[blk] = beta.dot(cov.m * beta);
        done += count;
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= kBlocks;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    return std::sqrt(var / (kBlocks - 1.0) / kBlocks);
}

}  // namespace

std::vector<ResultRow> run_check_bounds(const ExperimentConfig& cfg, bool& all_pass,
                                        std::ostream* log) {
    std::vector<ResultRow> rows;
    CheckSink sink{cfg, rows, log};
    const std::uint64_t seed = cfg.seed;
    const long long mc = cfg.mc_samples;

    // chi-square medians: closed forms at d = 1, 2 and the d e^{-1/(3d)} bound.
    {
        const double m1 = chi2_median(1);
        const double m2 = chi2_median(2);
        sink.record("chi2_median_d1", std::fabs(m1 - 0.45493642311957) < 1e-9, m1,
                    0.45493642311957);
        sink.record("chi2_median_d2", std::fabs(m2 - 2.0 * std::log(2.0)) < 1e-9, m2,
                    2.0 * std::log(2.0));
        bool bound_ok = true;
        double worst = 0.0;
        for (int d = 1; d <= 50; ++d) {
            const double md = chi2_median(d);
            const double cap = d * std::exp(-1.0 / (3.0 * d));
            worst = std::max(worst, md - cap);
            bound_ok = bound_ok && md <= cap;
        }
        sink.record("chi2_median_bound_d1_50", bound_ok, worst, 0.0);
    }

    // lambda_{0,d} inside [1/(100 d), 4 log(2d)/d] for d = 1..10; closed form at d = 1.
    {
        bool in_range = true;
        double d1_value = 0.0, d1_se = 0.0;
        for (int d = 1; d <= 10; ++d) {
            Rng rng(seed, stream_hash("check/lambda0", static_cast<std::uint64_t>(d)));
            const MonteCarloEstimate est = lambda_0d(d, mc, rng);
            const double lo = 1.0 / (100.0 * d);
            const double hi = 4.0 * std::log(2.0 * d) / d;
            in_range = in_range && est.value >= lo && est.value <= hi;
            if (d == 1) {
                d1_value = est.value;
                d1_se = est.se;
            }
        }
        sink.record("lambda0_range_d1_10", in_range, 1.0, 0.0);
        const double m1 = chi2_median(1);
        const double closed =
            4.0 / std::numbers::pi * std::pow(1.0 - std::exp(-0.5 * m1), 2);
        sink.record("lambda0_d1_closed_form", std::fabs(d1_value - closed) <= 3.0 * d1_se,
                    d1_value, closed);
    }

    // P(W = i) = 1/(4d) and P(W = 0) = 1/2 at n = 1e6 for d in {2, 5}.
    for (int d : {2, 5}) {
        Rng rng(seed, stream_hash("check/w-marginals", static_cast<std::uint64_t>(d)));
        const LowerBoundModel model = make_lower_bound_model(2 * d, d, 0.3, cfg.sigma);
        const long long n = 1000000;
        const LowerBoundSample sample = sample_lower_bound(model, n, rng);
        std::vector<long long> counts(static_cast<std::size_t>(2 * d + 1), 0);
        for (int w : sample.w) ++counts[static_cast<std::size_t>(w + d)];
        bool ok = true;
        double worst_dev = 0.0;
        for (int i = -d; i <= d; ++i) {
            const double target = i == 0 ? 0.5 : 1.0 / (4.0 * d);
            const double phat =
                double(counts[static_cast<std::size_t>(i + d)]) / double(n);
            const double se = std::sqrt(target * (1.0 - target) / double(n));
            worst_dev = std::max(worst_dev, std::fabs(phat - target) / se);
            ok = ok && std::fabs(phat - target) <= 3.0 * se;
        }
        sink.record("w_marginals_d" + std::to_string(d), ok, worst_dev, 3.0);
    }

    // Closed-form gSNR against the SIR estimate: d = 3, gSNR 0.05, n = 1e6, H = 24.
    {
        const int d = 3, p = 10, h = 24;
        Rng tr(seed, stream_hash("check/theta", static_cast<std::uint64_t>(d)));
        const double rho = theta_to_rho(std::sqrt(0.025), d, mc, tr);
        const LowerBoundModel model = make_lower_bound_model(p, d, rho, cfg.sigma);
        Rng rng(seed, stream_hash("check/gsnr-sir"));
        const LowerBoundSample sample = sample_lower_bound(model, 1000000, rng);
        const double est = estimate_gsnr(sample.data, SirConfig{h, d, SigmaMode::identity});
        sink.record("gsnr_closed_form_vs_sir", est >= 0.75 * 0.05 && est <= 1.25 * 0.05, est,
                    0.05);
    }

    // gsnr_formula(d, theta_to_rho(theta, d)) = 2 theta^2 within 3 MC SE.
    for (int d : {2, 10}) {
        const double theta = 0.05;
        Rng tr(seed, stream_hash("check/theta-id/t", static_cast<std::uint64_t>(d)));
        const double rho = theta_to_rho(theta, d, mc, tr);
        Rng gr(seed, stream_hash("check/theta-id/g", static_cast<std::uint64_t>(d)));
        const MonteCarloEstimate g = gsnr_formula(d, rho, mc, gr);
        const double target = 2.0 * theta * theta;
        sink.record("theta_gsnr_identity_d" + std::to_string(d),
                    std::fabs(g.value - target) <= 3.0 * std::max(g.se, 1e-12) + 1e-12, g.value,
                    target);
    }

    // Exact KL identity on 100 random orthonormal pairs.
    {
        const int p = 6, d = 2;
        const double rho = 0.4;
        Rng rng(seed, stream_hash("check/kl"));
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto random_basis = [&] {
                Eigen::MatrixXd g(p, d);
                for (int i = 0; i < p; ++i)
                    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
                return orthonormal_span(Basis{g, false});
            };
            const Basis b1 = random_basis();
            const Basis b2 = random_basis();
            const double direct = exact_kl_xz(b1, b2, rho);
            const double closed =
                rho * rho / (2.0 * (1.0 - rho * rho)) * (b1.m - b2.m).squaredNorm();
            worst = std::max(worst, std::fabs(direct - closed));
        }
        sink.record("exact_kl_identity", worst <= 1e-8, worst, 1e-8);
    }

    // Entropy bound at n = 1e6 for d in {2, 5, 10}.
    for (int d : {2, 5, 10}) {
        Rng rng(seed, stream_hash("check/entropy", static_cast<std::uint64_t>(d)));
        const long long n = 1000000;
        Eigen::MatrixXd z(n, d);
        std::vector<int> w(static_cast<std::size_t>(n));
        const double md = chi2_median(d);
        Eigen::VectorXd row(d);
        for (long long i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) row(j) = rng.normal();
            z.row(i) = row;
            w[static_cast<std::size_t>(i)] = psi(row, md);
        }
        const EntropyBoundResult res = entropy_bound_check(z, w);
        sink.record("entropy_bound_d" + std::to_string(d), res.pass, res.lhs, res.rhs);
    }

    // Conditional slice means: E[X | Y in (i - sigma, i + sigma)] =
    // rho sqrt(2 d lambda_{0,d}) B e_i.
    {
        const int d = 3, p = 6;
        const double rho = 0.5;
        const LowerBoundModel model = make_lower_bound_model(p, d, rho, cfg.sigma);
        Rng rng(seed, stream_hash("check/slice-mean"));
        const LowerBoundSample sample = sample_lower_bound(model, 1000000, rng);
        Rng lr(seed, stream_hash("check/slice-mean/lambda0"));
        const MonteCarloEstimate lam0 = lambda_0d(d, mc, lr);
        const double scale = rho * std::sqrt(2.0 * d * lam0.value);
        const double scale_se =
            rho * lam0.se * std::sqrt(2.0 * d) / (2.0 * std::sqrt(lam0.value));

        bool ok = true;
        double worst = 0.0;
        for (int band : {1, -2}) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
            Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(p);
            long long count = 0;
            for (Eigen::Index i = 0; i < sample.data.n(); ++i) {
                if (sample.w[static_cast<std::size_t>(i)] != band) continue;
                sum += sample.data.x.row(i).transpose();
                sumsq += sample.data.x.row(i).transpose().cwiseAbs2();
                ++count;
            }
            const Eigen::VectorXd mean = sum / double(count);
            const int sgn_band = band > 0 ? 1 : -1;
            const Eigen::VectorXd target =
                scale * sgn_band * model.b.col(std::abs(band) - 1);
            for (int j = 0; j < p; ++j) {
                const double var = sumsq(j) / double(count) - mean(j) * mean(j);
                const double se =
                    std::sqrt(var / double(count) + scale_se * scale_se);
                const double dev = std::fabs(mean(j) - target(j)) / se;
                worst = std::max(worst, dev);
                ok = ok && dev <= 3.0;
            }
        }
        sink.record("conditional_slice_means", ok, worst, 3.0);
    }

    // Decay ceiling: d^{-1} (E max |Z_i|)^2 <= 2 log(2d)/d.
    for (int d : {2, 20}) {
        Rng rng(seed, stream_hash("check/decay", static_cast<std::uint64_t>(d)));
        const DecayBoundResult res = decay_bound_check(d, mc, rng);
        sink.record("decay_bound_d" + std::to_string(d), res.gsnr <= res.bound, res.gsnr,
                    res.bound);
    }

    // Law-of-total-variance slicing bound:
    // (1 - (1+gamma)/tau) var(beta' E[Z|Y]) <= var(beta' E[Z|W_slice]) + 3 SE.
    {
        const int d = 2, p = 4, h = 16;  // tau = H / (4d) = 2
        const double gamma = 0.1, tau = double(h) / (4.0 * d);
        const double rho = 0.4;
        const LowerBoundModel model = make_lower_bound_model(p, d, rho, cfg.sigma);
        Rng rng(seed, stream_hash("check/ssc-discrete"));
        const LowerBoundSample sample = sample_lower_bound(model, 400000, rng);
        const SlicedPartition part = slice(sample.data, h);
        Rng lr(seed, stream_hash("check/ssc-discrete/lambda0"));
        const double lam0 = lambda_0d(d, mc, lr).value;  // var(beta' E[Z|Y]) for unit beta
        const Eigen::VectorXd beta = Eigen::VectorXd::Unit(d, 0);
        const SymMatrix cov = cov_conditional_mean(sample.z, part.assignment);
        const double rhs = beta.dot(cov.m * beta);
        const double se = block_se_quadform(sample.z, part.assignment, beta);
        const double lhs = (1.0 - (1.0 + gamma) / tau) * lam0;
        sink.record("ssc_discrete_approx", lhs <= rhs + 3.0 * se, lhs, rhs);
    }

    // gamma-partition pass rate over 50 fresh uniform samples.
    {
        const int h = 10;
        const long long n = 100000;
        int passes = 0;
        const int reps = 50;
        for (int rep = 0; rep < reps; ++rep) {
            Rng rng(seed, stream_hash("check/gamma", static_cast<std::uint64_t>(rep)));
            Eigen::VectorXd y(n), yref(n);
            for (long long i = 0; i < n; ++i) y(i) = rng.uniform01();
            for (long long i = 0; i < n; ++i) yref(i) = rng.uniform01();
            const Dataset data(Eigen::MatrixXd::Zero(n, 1), y);
            const Dataset ref(Eigen::MatrixXd::Zero(n, 1), yref);
            const SlicedPartition part = slice(data, h);
            if (gamma_partition_check(data, part, 0.1, ref).pass) ++passes;
        }
        const double rate = double(passes) / reps;
        sink.record("gamma_partition_rate", rate >= 0.95, rate, 0.95);
    }

    // WSSC ratio of the linear curve on Unif(0,1): tends to 1/H^2.
    {
        const int h = 10;
        const long long n = 200000;
        Rng rng(seed, stream_hash("check/wssc-uniform"));
        Eigen::VectorXd y(n);
        for (long long i = 0; i < n; ++i) y(i) = rng.uniform01();
        const Dataset data(Eigen::MatrixXd::Zero(n, 1), y);
        const SlicedPartition part = slice(data, h);
        const Eigen::MatrixXd curve = y;
        const double ratio =
            wssc_ratio(curve, part, {Eigen::VectorXd::Ones(1)});
        const double target = 1.0 / double(h * h);
        sink.record("wssc_uniform_linear", std::fabs(ratio - target) <= 0.1 * target, ratio,
                    target);
    }

    // WSSC ratio of the lower-bound central curve: <= (4d/H)(1 + eps).
    for (int h : {16, 20}) {
        const int d = 2, p = 4;
        const double rho = 0.5;
        const LowerBoundModel model = make_lower_bound_model(p, d, rho, cfg.sigma);
        Rng rng(seed, stream_hash("check/wssc-curve", static_cast<std::uint64_t>(h)));
        const LowerBoundSample sample = sample_lower_bound(model, 400000, rng);
        Rng lr(seed, stream_hash("check/wssc-curve/lambda0"));
        const double lam0 = lambda_0d(d, mc, lr).value;
        const double scale = std::sqrt(2.0 * d * lam0);

        Eigen::MatrixXd curve = Eigen::MatrixXd::Zero(sample.data.n(), d);
        for (Eigen::Index i = 0; i < sample.data.n(); ++i) {
            const int band = static_cast<int>(std::lround(sample.data.y(i)));
            if (band != 0)
                curve(i, std::abs(band) - 1) = scale * (band > 0 ? 1.0 : -1.0);
        }
        const SlicedPartition part = slice(sample.data, h);
        std::vector<Eigen::VectorXd> dirs{Eigen::VectorXd::Unit(d, 0), Eigen::VectorXd::Unit(d, 1),
                                          Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(2.0))};
        const double ratio = wssc_ratio(curve, part, dirs);
        const double cap = 4.0 * d / double(h) * 1.1;
        sink.record("wssc_lower_bound_curve_h" + std::to_string(h), ratio <= cap, ratio, cap);
    }

    all_pass = sink.all_pass;
    return rows;
}

}  // namespace sirlab
