#include "sirlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sirlab/errors.hpp"

namespace sirlab {

DiscreteConditional summarize_by_label(const Eigen::MatrixXd& z, const std::vector<int>& w) {
    const Eigen::Index n = z.rows();
    if (n < 1 || static_cast<Eigen::Index>(w.size()) != n)
        throw InvalidInput("summarize_by_label: Z rows and label length differ");

    std::map<int, long long> counts;
    for (int label : w) ++counts[label];

    DiscreteConditional out;
    out.labels.reserve(counts.size());
    out.counts.reserve(counts.size());
    for (const auto& [label, count] : counts) {
        out.labels.push_back(label);
        out.counts.push_back(count);
    }
    out.group_means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(counts.size()), z.cols());
    std::map<int, Eigen::Index> index;
    for (std::size_t k = 0; k < out.labels.size(); ++k)
        index[out.labels[k]] = static_cast<Eigen::Index>(k);
    for (Eigen::Index i = 0; i < n; ++i)
        out.group_means.row(index[w[static_cast<std::size_t>(i)]]) += z.row(i);
    for (std::size_t k = 0; k < out.labels.size(); ++k)
        out.group_means.row(static_cast<Eigen::Index>(k)) /= double(out.counts[k]);
    if (!out.group_means.allFinite())
        throw InvalidInput("summarize_by_label: non-finite group means");
    return out;
}

SymMatrix cov_conditional_mean(const Eigen::MatrixXd& z, const std::vector<int>& w) {
    const Eigen::Index n = z.rows();
    if (n < 2) throw InvalidInput("cov_conditional_mean: need at least 2 rows");
    const DiscreteConditional summary = summarize_by_label(z, w);
    const Eigen::RowVectorXd zbar = z.colwise().mean();

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(z.cols(), z.cols());
    for (std::size_t k = 0; k < summary.labels.size(); ++k) {
        const double weight = double(summary.counts[k]) / double(n);
        const Eigen::RowVectorXd diff =
            summary.group_means.row(static_cast<Eigen::Index>(k)) - zbar;
        cov += weight * diff.transpose() * diff;
    }
    return SymMatrix(0.5 * (cov + cov.transpose()));
}

double entropy(const std::vector<int>& w) {
    if (w.empty()) throw InvalidInput("entropy: empty label vector");
    std::map<int, long long> counts;
    for (int label : w) ++counts[label];
    const double n = double(w.size());
    double ent = 0.0;
    for (const auto& [label, count] : counts) {
        const double p = double(count) / n;
        ent -= p * std::log(p);
    }
    return ent;
}

EntropyBoundResult entropy_bound_check(const Eigen::MatrixXd& z, const std::vector<int>& w) {
    const Eigen::Index n = z.rows();
    const Eigen::Index d = z.cols();
    if (static_cast<Eigen::Index>(w.size()) != n)
        throw InvalidInput("entropy_bound_check: size mismatch");

    // The hypothesis is on the population; a label is flagged only when its
    // empirical mass sits statistically above 1/2 (3 binomial SEs), so models
    // exactly at the boundary are not rejected by sampling noise.
    const double slack = 3.0 * std::sqrt(0.25 / double(n));
    std::map<int, long long> counts;
    for (int label : w) ++counts[label];
    for (const auto& [label, count] : counts)
        if (double(count) / double(n) >= 0.5 + slack)
            throw HypothesisViolated("entropy_bound_check: label " + std::to_string(label) +
                                     " carries mass >= 1/2");

    auto lambda_min_of = [](const SymMatrix& cov) {
        const EigenDecomposition eig = sym_eig(cov);
        return eig.values(eig.values.size() - 1);
    };

    EntropyBoundResult out;
    out.lhs = lambda_min_of(cov_conditional_mean(z, w));
    out.rhs = 37.0 * entropy(w) / double(d);

    // block SE of lambda_min over 20 contiguous chunks
    constexpr int kBlocks = 20;
    if (n < kBlocks * 2) throw InvalidInput("entropy_bound_check: too few rows for block SE");
    double blocks[kBlocks];
    Eigen::Index done = 0;
    for (int blk = 0; blk < kBlocks; ++blk) {
        const Eigen::Index count = n * (blk + 1) / kBlocks - done;
        const std::vector<int> wb(w.begin() + done, w.begin() + done + count);
        blocks[blk] = lambda_min_of(cov_conditional_mean(z.middleRows(done, count), wb));
        done += count;
    }
    double mean = 0.0;
    for (double v : blocks) mean += v;
    mean /= kBlocks;
    double var = 0.0;
    for (double v : blocks) var += (v - mean) * (v - mean);
    out.se_lhs = std::sqrt(var / (kBlocks - 1.0) / kBlocks);

    out.margin = out.rhs + 3.0 * out.se_lhs - out.lhs;
    out.pass = out.margin >= 0.0;
    return out;
}

DecayBoundResult decay_bound_check(int d, long long samples, Rng& rng) {
    if (d < 2) throw InvalidInput("decay_bound_check: d must be at least 2");
    if (samples < 40) throw InvalidInput("decay_bound_check: too few samples");

    constexpr int kBlocks = 20;
    double blocks[kBlocks];
    double total = 0.0;
    long long done = 0;
    for (int blk = 0; blk < kBlocks; ++blk) {
        const long long count = samples * (blk + 1) / kBlocks - done;
        double sum = 0.0;
        for (long long i = 0; i < count; ++i) {
            double mx = 0.0;
            for (int j = 0; j < d; ++j) mx = std::max(mx, std::fabs(rng.normal()));
            sum += mx;
        }
        blocks[blk] = sum / double(count);
        total += sum;
        done += count;
    }
    const double emax = total / double(samples);

    DecayBoundResult out;
    out.gsnr = emax * emax / double(d);
    out.bound = 2.0 * std::log(2.0 * d) / double(d);
    double var = 0.0;
    for (double v : blocks) var += (v - emax) * (v - emax);
    const double se_emax = std::sqrt(var / (kBlocks - 1.0) / kBlocks);
    out.se = 2.0 * emax * se_emax / double(d);
    return out;
}

}  // namespace sirlab
