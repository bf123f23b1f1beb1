#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sirlab/errors.hpp"
#include "sirlab/experiments.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"sirlab - sliced inverse regression experiment harness"};
    app.require_subcommand(0, 0);

    std::string experiment;
    app.add_option("experiment", experiment,
                   "loss-table | eigen-table | gsnr-decay | d-lambda | check-bounds | sparse-demo")
        ->required();

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override its fields)");

    std::string model, out;
    std::vector<long long> n;
    std::vector<int> d, h;
    std::vector<double> theta;
    int p = 0, reps = 0, threads = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    long long gp_cap = 0, mc_samples = 0;

    auto* model_opt = app.add_option("--model", model, "m1 | m2 | gp | lower-bound");
    auto* n_opt = app.add_option("--n", n, "sample size grid")->delimiter(',');
    auto* p_opt = app.add_option("--p", p, "ambient dimension");
    auto* d_opt = app.add_option("--d", d, "structural dimension grid")->delimiter(',');
    auto* h_opt = app.add_option("--H", h, "slice count grid")->delimiter(',');
    auto* reps_opt = app.add_option("--reps", reps, "replications per grid cell");
    auto* theta_opt = app.add_option("--theta", theta, "theta grid")->delimiter(',');
    auto* sigma_opt = app.add_option("--sigma", sigma, "response band half-width");
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker pool size");
    auto* out_opt = app.add_option("--out", out, "CSV output path");
    auto* gp_cap_opt = app.add_option("--gp_cap", gp_cap, "GP factorisation cap");
    auto* mc_opt = app.add_option("--mc_samples", mc_samples, "MC draws for model constants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    sirlab::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = sirlab::parse_config_file(config_path);
    cfg.experiment = experiment;
    if (model_opt->count()) cfg.model = model;
    if (n_opt->count()) cfg.n = n;
    if (p_opt->count()) cfg.p = p;
    if (d_opt->count()) cfg.d = d;
    if (h_opt->count()) cfg.h = h;
    if (reps_opt->count()) cfg.reps = reps;
    if (theta_opt->count()) cfg.theta = theta;
    if (sigma_opt->count()) cfg.sigma = sigma;
    if (seed_opt->count()) cfg.seed = seed;
    if (threads_opt->count()) cfg.threads = threads;
    if (out_opt->count()) cfg.out = out;
    if (gp_cap_opt->count()) cfg.gp_cap = gp_cap;
    if (mc_opt->count()) cfg.mc_samples = mc_samples;

    sirlab::apply_experiment_defaults(cfg);

    bool bound_check_failed = false;
    const auto rows = sirlab::run_experiment(cfg, bound_check_failed, &std::cout);

    std::ostringstream csv;
    sirlab::write_csv(csv, rows);
    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) throw sirlab::InvalidInput("cannot open output file '" + cfg.out + "'");
        file << csv.str();
        std::cout << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
    } else {
        std::cout << csv.str();
    }
    return bound_check_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sirlab::ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const sirlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
