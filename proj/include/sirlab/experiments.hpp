#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace sirlab {

// Grid configuration shared by all experiments. Scalar JSON values are
// promoted to one-element grids; unknown keys are rejected.
struct ExperimentConfig {
    std::string experiment;  // loss-table | eigen-table | gsnr-decay | d-lambda
                             // | check-bounds | sparse-demo
    std::string model;       // m1 | m2 | gp | lower-bound
    std::vector<long long> n;
    int p = 0;               // 0 = experiment default
    std::vector<int> d;
    std::vector<int> h;
    int reps = 0;            // 0 = experiment default
    std::vector<double> theta;
    double sigma = 0.5;
    std::uint64_t seed = 20260809;
    int threads = 2;
    std::string out;              // CSV path; empty writes to stdout only
    long long gp_cap = 20000;
    long long mc_samples = 1000000;  // draws behind the closed-form constants
};

// Fills experiment-appropriate defaults for fields the user left empty.
void apply_experiment_defaults(ExperimentConfig& cfg);

// Parses a JSON config file. Throws InvalidInput on unknown keys or bad shapes.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

struct ResultRow {
    std::string experiment;
    std::string model;
    long long n = -1;       // negative parameter fields print as empty cells
    int p = -1;
    int d = -1;
    int h = -1;
    double theta = std::numeric_limits<double>::quiet_NaN();
    int rep_count = 0;
    std::string statistic;
    double value = 0.0;
    double stderr_val = std::numeric_limits<double>::quiet_NaN();
};

std::string csv_header();
std::string to_csv_line(const ResultRow& row);
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// Each runner is a pure function of (config, seed): identical rows on every
// rerun at any thread count.
std::vector<ResultRow> run_loss_table(const ExperimentConfig& cfg);
std::vector<ResultRow> run_eigen_table(const ExperimentConfig& cfg);
std::vector<ResultRow> run_gsnr_decay(const ExperimentConfig& cfg);
std::vector<ResultRow> run_d_lambda(const ExperimentConfig& cfg);
std::vector<ResultRow> run_sparse_demo(const ExperimentConfig& cfg);

// Executes the bound-check battery; rows carry value 1 (pass) / 0 (fail).
// `all_pass` reports the conjunction, for the exit-code-3 contract.
std::vector<ResultRow> run_check_bounds(const ExperimentConfig& cfg, bool& all_pass,
                                        std::ostream* log = nullptr);

// Dispatches on cfg.experiment. For check-bounds, a failed check is reported
// through `bound_check_failed`.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, bool& bound_check_failed,
                                      std::ostream* log = nullptr);

}  // namespace sirlab
