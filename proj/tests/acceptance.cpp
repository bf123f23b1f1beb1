// Acceptance battery: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria can be selected by number on the command line
// (e.g. "sirlab_acceptance 1 5 7"); default runs all ten.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sirlab/analysis.hpp"
#include "sirlab/experiments.hpp"
#include "sirlab/linalg.hpp"
#include "sirlab/models.hpp"
#include "sirlab/rng.hpp"
#include "sirlab/sir.hpp"
#include "sirlab/slicing.hpp"
#include "sirlab/sparse.hpp"

using namespace sirlab;

namespace {

constexpr std::uint64_t kSeed = 20260809;

int g_threads = 2;
int g_failures = 0;

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
    }
};

void report(const Criterion& c, double seconds) {
    std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name << " ("
              << int(seconds) << "s)\n";
    for (const auto& note : c.notes) std::cout << "       - " << note << "\n";
    if (!c.pass) ++g_failures;
}

template <typename Fn>
void run_criterion(int id, const std::string& name, const std::set<int>& selected, Fn body) {
    if (!selected.empty() && !selected.count(id)) return;
    Criterion c{id, name, true, {}};
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(c, seconds);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(5);
    os << v;
    return os.str();
}

ExperimentConfig base_config(const std::string& experiment, const std::string& model) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.model = model;
    cfg.seed = kSeed;
    cfg.threads = g_threads;
    return cfg;
}

const ResultRow& row_of(const std::vector<ResultRow>& rows, const std::string& stat,
                        long long n = -2, int h = -2, int d = -2) {
    for (const auto& row : rows) {
        if (row.statistic != stat) continue;
        if (n != -2 && row.n != n) continue;
        if (h != -2 && row.h != h) continue;
        if (d != -2 && row.d != d) continue;
        return row;
    }
    throw std::runtime_error("missing row " + stat);
}

// ---- criterion bodies ------------------------------------------------------

void criterion1(Criterion& c) {
    auto cell = [&](const std::string& model, long long n, int h) {
        ExperimentConfig cfg = base_config("loss-table", model);
        cfg.n = {n};
        cfg.h = {h};
        cfg.d = {5};
        cfg.reps = 100;
        apply_experiment_defaults(cfg);
        return run_loss_table(cfg)[0].value;
    };
    const double m1_1e3 = cell("m1", 1000, 5);
    c.check(std::fabs(m1_1e3 - 4.303) <= 0.25,
            "M1 n=1e3 H=5 mean loss " + fmt(m1_1e3) + " vs 4.303 +- 0.25");
    const double m1_1e4 = cell("m1", 10000, 5);
    c.check(std::fabs(m1_1e4 - 3.505) <= 0.25,
            "M1 n=1e4 H=5 mean loss " + fmt(m1_1e4) + " vs 3.505 +- 0.25");
    const double m2_1e3 = cell("m2", 1000, 20);
    c.check(std::fabs(m2_1e3 - 3.601) <= 0.25,
            "M2 n=1e3 H=20 mean loss " + fmt(m2_1e3) + " vs 3.601 +- 0.25");
}

void criterion2(Criterion& c) {
    ExperimentConfig cfg = base_config("loss-table", "m1");
    cfg.n = {1000, 10000, 100000, 1000000};
    cfg.h = {10};
    cfg.d = {5};
    cfg.reps = 50;
    apply_experiment_defaults(cfg);
    const auto rows = run_loss_table(cfg);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::string path;
    for (long long n : cfg.n) {
        const double loss = row_of(rows, "general_loss", n, 10).value;
        path += (path.empty() ? "" : " -> ") + fmt(loss);
        monotone = monotone && loss <= prev;
        prev = loss;
    }
    c.check(monotone, "M1 H=10 mean loss nonincreasing across n: " + path);
}

void criterion3(Criterion& c) {
    ExperimentConfig cfg = base_config("eigen-table", "m1");
    cfg.n = {1000000};
    cfg.h = {10};
    cfg.d = {5};
    cfg.reps = 20;
    apply_experiment_defaults(cfg);
    const auto rows = run_eigen_table(cfg);
    double logs[5];
    for (int i = 0; i < 5; ++i)
        logs[i] = row_of(rows, "log_lambda_" + std::to_string(i + 1)).value;
    bool decreasing = true;
    for (int i = 1; i < 5; ++i) decreasing = decreasing && logs[i] < logs[i - 1];
    c.check(decreasing, "mean log eigenvalues strictly decreasing: " + fmt(logs[0]) + " ... " +
                            fmt(logs[4]));
    c.check(logs[4] - logs[0] <= -6.0,
            "log lambda_5 - log lambda_1 = " + fmt(logs[4] - logs[0]) + " <= -6");
}

void criterion4(Criterion& c) {
    ExperimentConfig cfg = base_config("d-lambda", "lower-bound");
    cfg.n = {1000000};
    cfg.p = 50;
    cfg.d = {2, 4, 6, 8, 10};
    cfg.h = {100};
    cfg.theta = {0.03, 0.04, 0.05, 0.06, 0.07};
    cfg.reps = 50;
    apply_experiment_defaults(cfg);
    const auto rows = run_d_lambda(cfg);
    const double slope = row_of(rows, "slope_log_loss_log_theta").value;
    c.check(slope >= -2.25 && slope <= -1.80,
            "slope of mean log loss vs log theta = " + fmt(slope) + " in [-2.25, -1.80]");
    const double r2 = row_of(rows, "r2_loss_vs_d").value;
    c.check(r2 >= 0.95, "loss-vs-d linear fit R^2 = " + fmt(r2) + " >= 0.95");
}

void criterion5(Criterion& c) {
    bool in_range = true;
    double worst = 0.0;
    for (int d = 1; d <= 10; ++d) {
        Rng rng(kSeed, stream_hash("acceptance/lambda0", static_cast<std::uint64_t>(d)));
        const MonteCarloEstimate est = lambda_0d(d, 1000000, rng);
        const double lo = 1.0 / (100.0 * d);
        const double hi = 4.0 * std::log(2.0 * d) / d;
        if (est.value < lo || est.value > hi) {
            in_range = false;
            worst = est.value;
        }
    }
    c.check(in_range, "lambda_{0,d} within [1/(100d), 4 log(2d)/d] for d = 1..10" +
                          (in_range ? std::string() : " (offender " + fmt(worst) + ")"));

    Rng rng(kSeed, stream_hash("acceptance/lambda0-d1"));
    const MonteCarloEstimate d1 = lambda_0d(1, 1000000, rng);
    const double m1 = chi2_median(1);
    const double closed = 4.0 / 3.14159265358979323846 * std::pow(1.0 - std::exp(-0.5 * m1), 2);
    c.check(std::fabs(d1.value - closed) <= 3.0 * d1.se,
            "lambda_{0,1} = " + fmt(d1.value) + " vs Gaussian-integral oracle " + fmt(closed) +
                " within 3 SE (" + fmt(3.0 * d1.se) + ")");
    c.check(std::fabs(closed - 0.05270) <= 1e-4, "oracle itself equals 0.05270");
}

void criterion6(Criterion& c) {
    for (int d : {2, 5}) {
        const LowerBoundModel model = make_lower_bound_model(2 * d, d, 0.3, 0.5);
        Rng rng(kSeed, stream_hash("acceptance/w-marginals", static_cast<std::uint64_t>(d)));
        const long long n = 1000000;
        const LowerBoundSample sample = sample_lower_bound(model, n, rng);
        std::vector<long long> counts(static_cast<std::size_t>(2 * d + 1), 0);
        for (int w : sample.w) ++counts[static_cast<std::size_t>(w + d)];
        bool ok = true;
        for (int i = -d; i <= d; ++i) {
            if (i == 0) continue;
            const double target = 1.0 / (4.0 * d);
            const double phat = double(counts[static_cast<std::size_t>(i + d)]) / double(n);
            const double se = std::sqrt(target * (1.0 - target) / double(n));
            ok = ok && std::fabs(phat - target) <= 3.0 * se;
        }
        c.check(ok, "P(W=i) = 1/(4d) within 3 SE for all i at d = " + std::to_string(d));
    }

    Rng tr(kSeed, stream_hash("acceptance/gsnr-theta"));
    const double rho = theta_to_rho(std::sqrt(0.025), 3, 1000000, tr);
    const LowerBoundModel model = make_lower_bound_model(10, 3, rho, 0.5);
    Rng rng(kSeed, stream_hash("acceptance/gsnr-sample"));
    const LowerBoundSample sample = sample_lower_bound(model, 1000000, rng);
    const double est = estimate_gsnr(sample.data, SirConfig{24, 3, SigmaMode::identity});
    c.check(est >= 0.75 * 0.05 && est <= 1.25 * 0.05,
            "lambda_d(Lambda_hat) = " + fmt(est) + " within 25% of the closed-form gSNR 0.05");

    for (int d : {2, 10}) {
        const double theta = 0.05;
        Rng t2(kSeed, stream_hash("acceptance/theta-id", static_cast<std::uint64_t>(d)));
        const double r = theta_to_rho(theta, d, 1000000, t2);
        Rng g2(kSeed, stream_hash("acceptance/theta-id-g", static_cast<std::uint64_t>(d)));
        const MonteCarloEstimate g = gsnr_formula(d, r, 1000000, g2);
        c.check(std::fabs(g.value - 2.0 * theta * theta) <= 3.0 * g.se + 1e-12,
                "gsnr_formula(theta_to_rho) = " + fmt(g.value) + " vs 2 theta^2 = " +
                    fmt(2.0 * theta * theta) + " at d = " + std::to_string(d));
    }
}

void criterion7(Criterion& c) {
    Rng rng(kSeed, stream_hash("acceptance/kl"));
    const int p = 6, d = 2;
    const double rho = 0.4;
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
        const double closed = rho * rho / (2.0 * (1.0 - rho * rho)) * (b1.m - b2.m).squaredNorm();
        worst = std::max(worst, std::fabs(direct - closed));
    }
    c.check(worst <= 1e-8,
            "direct Gaussian KL equals rho^2 ||dB||_F^2 / (2(1-rho^2)); worst gap " + fmt(worst));
}

void criterion8(Criterion& c) {
    for (int d : {2, 5, 10}) {
        Rng rng(kSeed, stream_hash("acceptance/entropy", static_cast<std::uint64_t>(d)));
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
        c.check(res.pass, "lambda_min(Cov(E[Z|W])) = " + fmt(res.lhs) + " <= 37 Ent/d = " +
                              fmt(res.rhs) + " + 3 SE at d = " + std::to_string(d));
    }
    bool bound_ok = true;
    for (int d = 1; d <= 50; ++d)
        bound_ok = bound_ok && chi2_median(d) <= d * std::exp(-1.0 / (3.0 * d));
    c.check(bound_ok, "m_d <= d exp(-1/(3d)) for d = 1..50");
}

void criterion9(Criterion& c) {
    // rotation invariance of the loss
    Rng rng(kSeed, stream_hash("acceptance/props"));
    {
        Eigen::MatrixXd g(8, 3);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
        const Basis b = orthonormal_span(Basis{g, false});
        Eigen::MatrixXd q(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q(i, j) = rng.normal();
        const Basis rot{b.m * orthonormal_span(Basis{q, false}).m, false};
        c.check(general_loss(b, rot) <= 1e-10, "general_loss(B, BQ) = 0 for orthogonal Q");
    }

    // Sigma-orthonormality of estimated fits
    {
        Eigen::MatrixXd x(800, 6);
        Eigen::VectorXd y(800);
        for (Eigen::Index i = 0; i < 800; ++i) {
            for (int j = 0; j < 6; ++j) x(i, j) = rng.normal();
            y(i) = x(i, 0) + 2.0 * x(i, 1) + 0.05 * rng.normal();
        }
        const Dataset data(x, y);
        const SirFit fit = fit_sir(data, SirConfig{10, 2, SigmaMode::estimated});
        const Eigen::MatrixXd gram =
            fit.basis.m.transpose() * sample_covariance(data.x).m * fit.basis.m;
        c.check((gram - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6,
                "B' Sigma_hat B = I_d on an estimated-mode fit");
    }

    // deterministic replay across thread counts
    {
        ExperimentConfig cfg = base_config("loss-table", "m1");
        cfg.n = {500};
        cfg.h = {5};
        cfg.d = {5};
        cfg.reps = 8;
        apply_experiment_defaults(cfg);
        cfg.threads = 1;
        std::ostringstream a, b;
        write_csv(a, run_loss_table(cfg));
        cfg.threads = 8;
        write_csv(b, run_loss_table(cfg));
        c.check(a.str() == b.str(), "identical CSV bytes at threads = 1 and threads = 8");
    }

    // aggregation score maximality by re-enumeration
    {
        const int p = 8, s = 3, h = 8;
        Eigen::MatrixXd x(2000, p);
        Eigen::VectorXd y(2000);
        for (Eigen::Index i = 0; i < 2000; ++i) {
            for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
            y(i) = std::sin(2.0 * (x(i, 0) + x(i, 1) + x(i, 2)) / std::sqrt(3.0)) +
                   0.1 * rng.normal();
        }
        const Dataset data(x, y);
        const AggregationFit fit = fit_aggregation(data, SparseConfig{s, 1, h}, 424242);
        const Dataset half2 = split_halves(data, 424242).second;
        const Eigen::MatrixXd lambda2 = candidate_matrix(half2, slice(half2, h)).lambda_hat.m;
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> comb{0, 1, 2}, best_support;
        for (;;) {
            const Basis b = fit_oracle(data, comb, 1, h, 424242);
            const double score = (b.m.transpose() * lambda2 * b.m).trace();
            if (score > best) {
                best = score;
                best_support = comb;
            }
            int i = s - 1;
            while (i >= 0 && comb[static_cast<std::size_t>(i)] == p - s + i) --i;
            if (i < 0) break;
            ++comb[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < s; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
        c.check(best_support == fit.selected_support && std::fabs(best - fit.oracle_score) <= 1e-9,
                "aggregation winner maximises the held-out score over all subsets");
    }

    // gamma-partition pass rate and the uniform WSSC ratio, via check-bounds
    {
        ExperimentConfig cfg = base_config("check-bounds", "");
        apply_experiment_defaults(cfg);
        bool all = false;
        std::ostringstream sink;
        const auto rows = run_check_bounds(cfg, all, &sink);
        const double gamma_rate = row_of(rows, "gamma_partition_rate").value;
        c.check(gamma_rate == 1.0, "gamma-partition pass rate >= 95%");
        const double wssc = row_of(rows, "wssc_uniform_linear").value;
        c.check(wssc == 1.0, "uniform linear WSSC ratio within 10% of 1/H^2");
        const double ssc = row_of(rows, "ssc_discrete_approx").value;
        c.check(ssc == 1.0, "law-of-total-variance slicing bound");
        const double curve16 = row_of(rows, "wssc_lower_bound_curve_h16").value;
        const double curve20 = row_of(rows, "wssc_lower_bound_curve_h20").value;
        c.check(curve16 == 1.0 && curve20 == 1.0,
                "lower-bound central curve is weak sliced stable at H = 8d");
        c.check(all, "full bound-check battery is green");
    }

    // deviation_check concentration
    {
        Rng tr(kSeed, stream_hash("acceptance/deviation"));
        const double rho = theta_to_rho(std::sqrt(0.025), 2, 400000, tr);
        const LowerBoundModel model = make_lower_bound_model(4, 2, rho, 0.5);
        const double frac = deviation_check(model, 100000, 16, 100, kSeed);
        c.check(frac >= 0.95, "deviation event holds in " + fmt(100.0 * frac) + "% of runs");
    }
}

void criterion10(Criterion& c) {
    ExperimentConfig cfg = base_config("sparse-demo", "");
    cfg.reps = 50;
    apply_experiment_defaults(cfg);
    const auto rows = run_sparse_demo(cfg);
    const double recovery = row_of(rows, "support_recovery_rate").value;
    c.check(recovery >= 0.70, "support recovery rate " + fmt(recovery) + " >= 0.70");
    const double oracle = row_of(rows, "mean_loss_oracle").value;
    const double full = row_of(rows, "mean_loss_full_sir").value;
    c.check(oracle < full, "oracle mean loss " + fmt(oracle) + " < full-p SIR " + fmt(full));
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("SIRLAB_THREADS")) g_threads = std::atoi(env);
    if (g_threads < 1) g_threads = 2;

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id >= 1 && id <= 10) selected.insert(id);
    }

    std::cout << "acceptance battery (threads = " << g_threads << ")\n";
    run_criterion(1, "reference loss values (100 reps, +-0.25)", selected, criterion1);
    run_criterion(2, "M1 loss nonincreasing in n at H=10", selected, criterion2);
    run_criterion(3, "eigenvalue decay of the candidate matrix at n=1e6", selected, criterion3);
    run_criterion(4, "error scaling in theta and d", selected, criterion4);
    run_criterion(5, "lambda_{0,d} bounds and d=1 oracle", selected, criterion5);
    run_criterion(6, "lower-bound model facts and closed-form gSNR", selected, criterion6);
    run_criterion(7, "exact KL identity", selected, criterion7);
    run_criterion(8, "entropy bound and chi-square medians", selected, criterion8);
    run_criterion(9, "property suite", selected, criterion9);
    run_criterion(10, "sparse demo: recovery and oracle comparison", selected, criterion10);

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED\n"
                                  : std::to_string(g_failures) + " criterion(s) FAILED\n");
    return g_failures == 0 ? 0 : 1;
}
