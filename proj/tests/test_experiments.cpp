#include "doctest.h"

#include <cmath>
#include <sstream>

#include "sirlab/errors.hpp"
#include "sirlab/experiments.hpp"

using namespace sirlab;

namespace {

std::string csv_of(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

const ResultRow& find_row(const std::vector<ResultRow>& rows, const std::string& stat,
                          long long n = -2, int d = -2, double theta = -1.0) {
    for (const auto& row : rows) {
        if (row.statistic != stat) continue;
        if (n != -2 && row.n != n) continue;
        if (d != -2 && row.d != d) continue;
        if (theta >= 0.0 && std::fabs(row.theta - theta) > 1e-12) continue;
        return row;
    }
    throw std::runtime_error("row not found: " + stat);
}

}  // namespace

TEST_CASE("config parsing: scalars, grids, unknown keys") {
    const ExperimentConfig cfg = parse_config_json(
        R"({"experiment":"loss-table","model":"m2","n":[500,1000],"H":5,"reps":7,"seed":99})");
    CHECK(cfg.experiment == "loss-table");
    CHECK(cfg.model == "m2");
    CHECK(cfg.n == std::vector<long long>{500, 1000});
    CHECK(cfg.h == std::vector<int>{5});
    CHECK(cfg.reps == 7);
    CHECK(cfg.seed == 99);

    CHECK_THROWS_AS(parse_config_json(R"({"experiment":"loss-table","slices":5})"), InvalidInput);
    CHECK_THROWS_AS(parse_config_json(R"({"n":[]})"), InvalidInput);
    CHECK_THROWS_AS(parse_config_json("not json"), InvalidInput);
}

TEST_CASE("loss table is deterministic across thread counts and reruns") {
    ExperimentConfig cfg;
    cfg.experiment = "loss-table";
    cfg.model = "m1";
    cfg.n = {500};
    cfg.h = {5};
    cfg.reps = 6;
    cfg.seed = 2024;
    cfg.threads = 1;
    apply_experiment_defaults(cfg);

    const std::string serial = csv_of(run_loss_table(cfg));
    cfg.threads = 4;
    const std::string parallel = csv_of(run_loss_table(cfg));
    CHECK(serial == parallel);
    CHECK(csv_of(run_loss_table(cfg)) == parallel);
    CHECK(serial.find("general_loss") != std::string::npos);
}

TEST_CASE("standard errors shrink like 1/sqrt(reps)") {
    ExperimentConfig cfg;
    cfg.experiment = "loss-table";
    cfg.model = "m1";
    cfg.n = {500};
    cfg.h = {5};
    cfg.seed = 31;
    cfg.threads = 2;
    apply_experiment_defaults(cfg);

    cfg.reps = 32;
    const double se32 = run_loss_table(cfg)[0].stderr_val;
    cfg.reps = 128;
    const double se128 = run_loss_table(cfg)[0].stderr_val;
    CHECK(std::fabs(se128 / se32 - 0.5) <= 0.15);
}

TEST_CASE("resource budget is enforced") {
    ExperimentConfig cfg;
    cfg.experiment = "loss-table";
    cfg.model = "m1";
    cfg.n = {20000000};
    cfg.h = {5};
    cfg.reps = 1;
    apply_experiment_defaults(cfg);
    CHECK_THROWS_AS(run_loss_table(cfg), ResourceLimit);
}

TEST_CASE("gsnr decay is monotone in d and n at small scale") {
    ExperimentConfig cfg;
    cfg.experiment = "gsnr-decay";
    cfg.model = "gp";
    cfg.n = {400, 800};
    cfg.d = {1, 2, 3};
    cfg.h = {15};
    cfg.reps = 12;
    cfg.seed = 5150;
    cfg.threads = 2;
    apply_experiment_defaults(cfg);

    const auto rows = run_gsnr_decay(cfg);
    const double d1 = find_row(rows, "mean_log_gsnr", 800, 1).value;
    const double d2 = find_row(rows, "mean_log_gsnr", 800, 2).value;
    const double d3 = find_row(rows, "mean_log_gsnr", 800, 3).value;
    CHECK(d1 > d2);
    CHECK(d2 > d3);

    const double n400 = find_row(rows, "mean_log_gsnr", 400, 2).value;
    const double n800 = find_row(rows, "mean_log_gsnr", 800, 2).value;
    CHECK(n400 > n800);  // the estimate keeps shrinking as n grows
}

TEST_CASE("d-lambda smoke run emits losses, slope, and r2") {
    ExperimentConfig cfg;
    cfg.experiment = "d-lambda";
    cfg.model = "lower-bound";
    cfg.n = {20000};
    cfg.p = 10;
    cfg.d = {2, 3};
    cfg.h = {24};
    cfg.theta = {0.1, 0.2};
    cfg.reps = 4;
    cfg.seed = 62;
    cfg.threads = 2;
    cfg.mc_samples = 200000;
    apply_experiment_defaults(cfg);

    const auto rows = run_d_lambda(cfg);
    const double slope = find_row(rows, "slope_log_loss_log_theta").value;
    CHECK(slope < 0.0);  // loss decreases in theta
    const double r2 = find_row(rows, "r2_loss_vs_d").value;
    CHECK(r2 >= 0.0);
    CHECK(r2 <= 1.0);
    CHECK_NOTHROW(find_row(rows, "mean_log_loss", 20000, 3, 0.1));
    CHECK_NOTHROW(find_row(rows, "general_loss", 20000, 2, 0.05));
}

TEST_CASE("csv formatting uses the fixed header and empty cells for n/a fields") {
    ResultRow row;
    row.experiment = "d-lambda";
    row.model = "lower-bound";
    row.n = 100;
    row.p = 10;
    row.h = 24;
    row.rep_count = 4;
    row.statistic = "r2_loss_vs_d";
    row.value = 0.5;
    CHECK(csv_header() == "experiment,model,n,p,d,H,theta,rep_count,statistic,value,stderr");
    CHECK(to_csv_line(row) == "d-lambda,lower-bound,100,10,,24,,4,r2_loss_vs_d,0.5,");
}
