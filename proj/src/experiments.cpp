#include "sirlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "sirlab/analysis.hpp"
#include "sirlab/errors.hpp"
#include "sirlab/models.hpp"
#include "sirlab/sir.hpp"
#include "sirlab/sparse.hpp"

namespace sirlab {

namespace {

constexpr long long kMaxN = 1000000;  // desk-scale sample budget per replication

double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    const double n = double(xs.size());
    out.mean = kahan_sum(xs) / n;
    if (xs.size() < 2) return out;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        sq[i] = (xs[i] - out.mean) * (xs[i] - out.mean);
    out.se = std::sqrt(kahan_sum(sq) / (n - 1.0) / n);
    return out;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = kahan_sum(x) / n;
    const double my = kahan_sum(y) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

// Runs `reps` tasks on a bounded pool and collects one row of statistics per
// task, indexed by replication so aggregation never depends on scheduling.
std::vector<std::vector<double>> run_replications(
    int reps, int threads, int width, const std::function<void(int, std::vector<double>&)>& task) {
    std::vector<std::vector<double>> results(static_cast<std::size_t>(reps),
                                             std::vector<double>(static_cast<std::size_t>(width)));
    const int workers = std::clamp(threads, 1, 64);
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= reps) return;
            try {
                task(rep, results[static_cast<std::size_t>(rep)]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return results;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][j];
    return out;
}

std::uint64_t theta_bits(double theta) { return std::bit_cast<std::uint64_t>(theta); }

Basis first_coordinates_basis(int p, int d) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, d);
    b.topLeftCorner(d, d).setIdentity();
    return Basis{std::move(b), false};
}

Dataset sample_link_model(const std::string& model, long long n, Rng& rng) {
    if (model == "m1") return sample_m1(n, rng);
    if (model == "m2") return sample_m2(n, rng);
    throw InvalidInput("unknown synthetic model '" + model + "'");
}

void require_budget(long long n) {
    if (n > kMaxN)
        throw ResourceLimit("n = " + std::to_string(n) + " exceeds the desk-scale budget " +
                            std::to_string(kMaxN));
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void apply_experiment_defaults(ExperimentConfig& cfg) {
    const std::string& e = cfg.experiment;
    if (e == "loss-table") {
        if (cfg.model.empty()) cfg.model = "m1";
        if (cfg.n.empty()) cfg.n = {1000, 10000};
        if (cfg.h.empty()) cfg.h = {5, 10};
        if (cfg.d.empty()) cfg.d = {5};
        if (cfg.reps == 0) cfg.reps = 100;
        cfg.p = 15;
    } else if (e == "eigen-table") {
        if (cfg.model.empty()) cfg.model = "m1";
        if (cfg.n.empty()) cfg.n = {1000000};
        if (cfg.h.empty()) cfg.h = {10};
        if (cfg.d.empty()) cfg.d = {5};
        if (cfg.reps == 0) cfg.reps = 20;
        cfg.p = 15;
    } else if (e == "gsnr-decay") {
        if (cfg.model.empty()) cfg.model = "gp";
        if (cfg.n.empty()) cfg.n = {1000, 2000, 4000};
        if (cfg.d.empty()) cfg.d = {1, 2, 3};
        if (cfg.h.empty()) cfg.h = {15};
        if (cfg.reps == 0) cfg.reps = 50;
        cfg.p = 15;
    } else if (e == "d-lambda") {
        if (cfg.model.empty()) cfg.model = "lower-bound";
        if (cfg.n.empty()) cfg.n = {1000000};
        if (cfg.d.empty()) cfg.d = {2, 4, 6, 8, 10};
        if (cfg.h.empty()) cfg.h = {100};
        if (cfg.theta.empty()) cfg.theta = {0.03, 0.04, 0.05, 0.06, 0.07};
        if (cfg.p == 0) cfg.p = 50;
        if (cfg.reps == 0) cfg.reps = 50;
    } else if (e == "sparse-demo") {
        if (cfg.reps == 0) cfg.reps = 50;
    } else if (e == "check-bounds") {
        if (cfg.reps == 0) cfg.reps = 1;
    } else {
        throw InvalidInput("unknown experiment '" + e + "'");
    }
    if (cfg.reps < 1) throw InvalidInput("reps must be at least 1");
    if (cfg.threads < 1) throw InvalidInput("threads must be at least 1");
}

namespace {

using nlohmann::json;

std::vector<long long> as_int_grid(const json& v, const std::string& key) {
    std::vector<long long> out;
    if (v.is_number_integer()) {
        out.push_back(v.get<long long>());
    } else if (v.is_array()) {
        for (const auto& item : v) {
            if (!item.is_number_integer())
                throw InvalidInput("config: '" + key + "' must hold integers");
            out.push_back(item.get<long long>());
        }
    } else {
        throw InvalidInput("config: '" + key + "' must be an integer or array of integers");
    }
    if (out.empty()) throw InvalidInput("config: '" + key + "' grid is empty");
    return out;
}

std::vector<double> as_real_grid(const json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& item : v) {
            if (!item.is_number()) throw InvalidInput("config: '" + key + "' must hold numbers");
            out.push_back(item.get<double>());
        }
    } else {
        throw InvalidInput("config: '" + key + "' must be a number or array of numbers");
    }
    if (out.empty()) throw InvalidInput("config: '" + key + "' grid is empty");
    return out;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("config: top level must be a JSON object");

    static const char* known[] = {"experiment", "model", "n",   "p",       "d",
                                  "H",          "reps",  "theta", "sigma", "seed",
                                  "threads",    "out",   "gp_cap", "mc_samples"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw InvalidInput("config: unknown key '" + key + "'");
    }

    ExperimentConfig cfg;
    if (j.contains("experiment")) cfg.experiment = j["experiment"].get<std::string>();
    if (j.contains("model")) cfg.model = j["model"].get<std::string>();
    if (j.contains("n")) cfg.n = as_int_grid(j["n"], "n");
    if (j.contains("p")) cfg.p = j["p"].get<int>();
    if (j.contains("d")) {
        std::vector<int> d;
        for (long long v : as_int_grid(j["d"], "d")) d.push_back(static_cast<int>(v));
        cfg.d = d;
    }
    if (j.contains("H")) {
        std::vector<int> h;
        for (long long v : as_int_grid(j["H"], "H")) h.push_back(static_cast<int>(v));
        cfg.h = h;
    }
    if (j.contains("reps")) cfg.reps = j["reps"].get<int>();
    if (j.contains("theta")) cfg.theta = as_real_grid(j["theta"], "theta");
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("gp_cap")) cfg.gp_cap = j["gp_cap"].get<long long>();
    if (j.contains("mc_samples")) cfg.mc_samples = j["mc_samples"].get<long long>();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string csv_header() {
    return "experiment,model,n,p,d,H,theta,rep_count,statistic,value,stderr";
}

std::string to_csv_line(const ResultRow& row) {
    std::ostringstream os;
    os << row.experiment << ',' << row.model << ',';
    if (row.n >= 0) os << row.n;
    os << ',';
    if (row.p >= 0) os << row.p;
    os << ',';
    if (row.d >= 0) os << row.d;
    os << ',';
    if (row.h >= 0) os << row.h;
    os << ',';
    if (!std::isnan(row.theta)) os << format_value(row.theta);
    os << ',' << row.rep_count << ',' << row.statistic << ',' << format_value(row.value) << ',';
    if (!std::isnan(row.stderr_val)) os << format_value(row.stderr_val);
    return os.str();
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << csv_header() << '\n';
    for (const auto& row : rows) os << to_csv_line(row) << '\n';
}

std::vector<ResultRow> run_loss_table(const ExperimentConfig& cfg) {
    if (cfg.model != "m1" && cfg.model != "m2")
        throw InvalidInput("loss-table: model must be m1 or m2");
    if (cfg.d.size() != 1 || cfg.d[0] != 5)
        throw InvalidInput("loss-table: the synthetic models are five-index (d = 5)");
    const Basis truth = first_coordinates_basis(15, 5);

    std::vector<ResultRow> rows;
    for (long long n : cfg.n) {
        require_budget(n);
        for (int h : cfg.h) {
            auto stats = run_replications(
                cfg.reps, cfg.threads, 1, [&](int rep, std::vector<double>& out) {
                    Rng rng(cfg.seed, stream_hash("loss-table/" + cfg.model,
                                                  static_cast<std::uint64_t>(n),
                                                  static_cast<std::uint64_t>(h),
                                                  static_cast<std::uint64_t>(rep)));
                    const Dataset data = sample_link_model(cfg.model, n, rng);
                    const SirFit fit = fit_sir(data, SirConfig{h, 5, SigmaMode::identity});
                    out[0] = general_loss(fit.basis, truth);
                });
            const MeanSe ms = mean_se(column(stats, 0));
            ResultRow row;
            row.experiment = cfg.experiment;
            row.model = cfg.model;
            row.n = n;
            row.p = 15;
            row.d = 5;
            row.h = h;
            row.rep_count = cfg.reps;
            row.statistic = "general_loss";
            row.value = ms.mean;
            row.stderr_val = ms.se;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<ResultRow> run_eigen_table(const ExperimentConfig& cfg) {
    if (cfg.model != "m1" && cfg.model != "m2")
        throw InvalidInput("eigen-table: model must be m1 or m2");
    constexpr int kTop = 5;

    std::vector<ResultRow> rows;
    for (long long n : cfg.n) {
        require_budget(n);
        for (int h : cfg.h) {
            if (h < kTop) throw InvalidInput("eigen-table: need H >= 5 to resolve 5 eigenvalues");
            auto stats = run_replications(
                cfg.reps, cfg.threads, kTop, [&](int rep, std::vector<double>& out) {
                    Rng rng(cfg.seed, stream_hash("eigen-table/" + cfg.model,
                                                  static_cast<std::uint64_t>(n),
                                                  static_cast<std::uint64_t>(h),
                                                  static_cast<std::uint64_t>(rep)));
                    const Dataset data = sample_link_model(cfg.model, n, rng);
                    const SirFit fit = fit_sir(data, SirConfig{h, 5, SigmaMode::identity});
                    // roundoff can leave a rank-deficient eigenvalue at -1e-19
                    for (int i = 0; i < kTop; ++i) out[static_cast<std::size_t>(i)] =
                        std::log(std::max(fit.top_eigenvalues(i), 0.0));
                });
            for (int i = 0; i < kTop; ++i) {
                const MeanSe ms = mean_se(column(stats, static_cast<std::size_t>(i)));
                ResultRow row;
                row.experiment = cfg.experiment;
                row.model = cfg.model;
                row.n = n;
                row.p = 15;
                row.d = 5;
                row.h = h;
                row.rep_count = cfg.reps;
                row.statistic = "log_lambda_" + std::to_string(i + 1);
                row.value = ms.mean;
                row.stderr_val = ms.se;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_gsnr_decay(const ExperimentConfig& cfg) {
    if (cfg.model != "gp") throw InvalidInput("gsnr-decay: model must be gp");
    GpLinkSpec spec;
    spec.cap = cfg.gp_cap;
    const int h = cfg.h.at(0);

    std::vector<ResultRow> rows;
    std::map<long long, std::vector<double>> by_n;  // mean log gSNR along the d grid
    for (int d : cfg.d) {
        for (long long n : cfg.n) {
            require_budget(n);
            auto stats = run_replications(
                cfg.reps, cfg.threads, 1, [&](int rep, std::vector<double>& out) {
                    Rng rng(cfg.seed, stream_hash("gsnr-decay/gp", static_cast<std::uint64_t>(n),
                                                  static_cast<std::uint64_t>(d),
                                                  static_cast<std::uint64_t>(rep)));
                    const Dataset data = sample_gp_model(n, d, rng, spec);
                    out[0] = std::log(estimate_gsnr(data, SirConfig{h, d, SigmaMode::identity}));
                });
            const MeanSe ms = mean_se(column(stats, 0));
            ResultRow row;
            row.experiment = cfg.experiment;
            row.model = cfg.model;
            row.n = n;
            row.p = 15;
            row.d = d;
            row.h = h;
            row.rep_count = cfg.reps;
            row.statistic = "mean_log_gsnr";
            row.value = ms.mean;
            row.stderr_val = ms.se;
            rows.push_back(std::move(row));
            by_n[n].push_back(ms.mean);
        }
    }
    // decay in d at each fixed n, reported as a per-n indicator
    if (cfg.d.size() >= 2) {
        for (long long n : cfg.n) {
            const auto& path = by_n[n];
            bool monotone = true;
            for (std::size_t i = 1; i < path.size(); ++i)
                monotone = monotone && path[i] < path[i - 1];
            ResultRow row;
            row.experiment = cfg.experiment;
            row.model = cfg.model;
            row.n = n;
            row.p = 15;
            row.h = h;
            row.rep_count = cfg.reps;
            row.statistic = "monotone_decreasing_in_d";
            row.value = monotone ? 1.0 : 0.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<ResultRow> run_d_lambda(const ExperimentConfig& cfg) {
    if (cfg.model != "lower-bound") throw InvalidInput("d-lambda: model must be lower-bound");
    const long long n = cfg.n.at(0);
    require_budget(n);
    const int h = cfg.h.at(0);
    const int p = cfg.p;

    auto rho_for = [&](double theta, int d) {
        Rng rng(cfg.seed, stream_hash("d-lambda/emax", static_cast<std::uint64_t>(d)));
        return theta_to_rho(theta, d, cfg.mc_samples, rng);
    };

    auto cell_losses = [&](int d, double theta) {
        const double rho = rho_for(theta, d);
        const LowerBoundModel model = make_lower_bound_model(p, d, rho, cfg.sigma);
        const Basis truth = first_coordinates_basis(p, d);
        return run_replications(
            cfg.reps, cfg.threads, 1, [&](int rep, std::vector<double>& out) {
                Rng rng(cfg.seed,
                        stream_hash("d-lambda/rep", static_cast<std::uint64_t>(d),
                                    theta_bits(theta), static_cast<std::uint64_t>(rep)));
                const LowerBoundSample sample = sample_lower_bound(model, n, rng);
                const SirFit fit = fit_sir(sample.data, SirConfig{h, d, SigmaMode::identity});
                out[0] = general_loss(fit.basis, truth);
            });
    };

    std::vector<ResultRow> rows;
    auto push = [&](int d, double theta, const std::string& stat, double value, double se,
                    int reps) {
        ResultRow row;
        row.experiment = cfg.experiment;
        row.model = cfg.model;
        row.n = n;
        row.p = p;
        row.d = d;
        row.h = h;
        row.theta = theta;
        row.rep_count = reps;
        row.statistic = stat;
        row.value = value;
        row.stderr_val = se;
        rows.push_back(std::move(row));
    };

    // Experiment A: loss against d at fixed theta = 0.05.
    constexpr double kThetaA = 0.05;
    std::vector<double> d_values, mean_losses;
    for (int d : cfg.d) {
        const auto stats = cell_losses(d, kThetaA);
        const MeanSe ms = mean_se(column(stats, 0));
        push(d, kThetaA, "general_loss", ms.mean, ms.se, cfg.reps);
        d_values.push_back(double(d));
        mean_losses.push_back(ms.mean);
    }
    if (d_values.size() >= 2) {
        const LinearFit fit = least_squares(d_values, mean_losses);
        ResultRow row;
        row.experiment = cfg.experiment;
        row.model = cfg.model;
        row.n = n;
        row.p = p;
        row.h = h;
        row.theta = kThetaA;
        row.rep_count = cfg.reps;
        row.statistic = "r2_loss_vs_d";
        row.value = fit.r2;
        rows.push_back(std::move(row));
    }

    // Experiment B: log loss against log theta at the largest d in the grid.
    const int d_b = *std::max_element(cfg.d.begin(), cfg.d.end());
    std::vector<double> log_thetas, mean_log_losses;
    for (double theta : cfg.theta) {
        if (theta < 0.0) throw InvalidInput("d-lambda: theta must be nonnegative");
        const auto stats = cell_losses(d_b, theta);
        std::vector<double> logs;
        for (const auto& rep : stats) logs.push_back(std::log(rep[0]));
        const MeanSe ms = mean_se(logs);
        push(d_b, theta, "mean_log_loss", ms.mean, ms.se, cfg.reps);
        if (theta > 0.0) {
            log_thetas.push_back(std::log(theta));
            mean_log_losses.push_back(ms.mean);
        }
    }
    if (log_thetas.size() >= 2) {
        const LinearFit fit = least_squares(log_thetas, mean_log_losses);
        ResultRow row;
        row.experiment = cfg.experiment;
        row.model = cfg.model;
        row.n = n;
        row.p = p;
        row.d = d_b;
        row.h = h;
        row.rep_count = cfg.reps;
        row.statistic = "slope_log_loss_log_theta";
        row.value = fit.slope;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_sparse_demo(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;

    // Support recovery: p = 12, s = 4, d = 1, true support {0,1,2,3},
    // Y = sin(2 beta'X) + 0.1 eps.
    {
        const int p = 12, s = 4, h = 10;
        const long long n = 4000;
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        beta.head(4).setConstant(0.5);
        const Basis truth{beta, false};

        auto stats = run_replications(
            cfg.reps, cfg.threads, 2, [&](int rep, std::vector<double>& out) {
                Rng rng(cfg.seed, stream_hash("sparse-demo/recovery",
                                              static_cast<std::uint64_t>(rep)));
                Eigen::MatrixXd x(n, p);
                Eigen::VectorXd y(n);
                for (Eigen::Index i = 0; i < n; ++i) {
                    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
                    y(i) = std::sin(2.0 * x.row(i).head(4).sum() * 0.5) + 0.1 * rng.normal();
                }
                const Dataset data(std::move(x), std::move(y));
                const AggregationFit fit = fit_aggregation(
                    data, SparseConfig{s, 1, h},
                    stream_hash("sparse-demo/split", cfg.seed, static_cast<std::uint64_t>(rep)));
                const bool recovered = fit.selected_support == std::vector<int>{0, 1, 2, 3};
                out[0] = recovered ? 1.0 : 0.0;
                out[1] = general_loss(orthonormal_span(fit.basis), truth);
            });
        const MeanSe rate = mean_se(column(stats, 0));
        const MeanSe loss = mean_se(column(stats, 1));
        ResultRow row;
        row.experiment = cfg.experiment;
        row.model = "sin-index";
        row.n = n;
        row.p = p;
        row.d = 1;
        row.h = h;
        row.rep_count = cfg.reps;
        row.statistic = "support_recovery_rate";
        row.value = rate.mean;
        row.stderr_val = rate.se;
        rows.push_back(row);
        row.statistic = "mean_loss_aggregation";
        row.value = loss.mean;
        row.stderr_val = loss.se;
        rows.push_back(row);
    }

    // Oracle with the true support against vanilla full-p SIR at p = 50.
    {
        const int p = 50, h = 10;
        const long long n = 4000;
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        beta.head(5).setConstant(1.0 / std::sqrt(5.0));
        const Basis truth{beta, false};
        const std::vector<int> support{0, 1, 2, 3, 4};

        auto stats = run_replications(
            cfg.reps, cfg.threads, 2, [&](int rep, std::vector<double>& out) {
                Rng rng(cfg.seed, stream_hash("sparse-demo/oracle",
                                              static_cast<std::uint64_t>(rep)));
                Eigen::MatrixXd x(n, p);
                Eigen::VectorXd y(n);
                for (Eigen::Index i = 0; i < n; ++i) {
                    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
                    y(i) = std::sin(2.0 * x.row(i).head(5).sum() / std::sqrt(5.0)) +
                           0.1 * rng.normal();
                }
                const Dataset data(std::move(x), std::move(y));
                const Basis oracle = fit_oracle(
                    data, support, 1, h,
                    stream_hash("sparse-demo/oracle-split", cfg.seed,
                                static_cast<std::uint64_t>(rep)));
                out[0] = general_loss(orthonormal_span(oracle), truth);
                const SirFit full = fit_sir(data, SirConfig{h, 1, SigmaMode::estimated});
                out[1] = general_loss(orthonormal_span(full.basis), truth);
            });
        const MeanSe oracle = mean_se(column(stats, 0));
        const MeanSe full = mean_se(column(stats, 1));
        ResultRow row;
        row.experiment = cfg.experiment;
        row.model = "sin-index";
        row.n = n;
        row.p = p;
        row.d = 1;
        row.h = h;
        row.rep_count = cfg.reps;
        row.statistic = "mean_loss_oracle";
        row.value = oracle.mean;
        row.stderr_val = oracle.se;
        rows.push_back(row);
        row.statistic = "mean_loss_full_sir";
        row.value = full.mean;
        row.stderr_val = full.se;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, bool& bound_check_failed,
                                      std::ostream* log) {
    bound_check_failed = false;
    if (cfg.experiment == "loss-table") return run_loss_table(cfg);
    if (cfg.experiment == "eigen-table") return run_eigen_table(cfg);
    if (cfg.experiment == "gsnr-decay") return run_gsnr_decay(cfg);
    if (cfg.experiment == "d-lambda") return run_d_lambda(cfg);
    if (cfg.experiment == "sparse-demo") return run_sparse_demo(cfg);
    if (cfg.experiment == "check-bounds") {
        bool all_pass = false;
        auto rows = run_check_bounds(cfg, all_pass, log);
        bound_check_failed = !all_pass;
        return rows;
    }
    throw InvalidInput("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace sirlab
