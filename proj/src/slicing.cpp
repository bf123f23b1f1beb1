#include "sirlab/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sirlab/errors.hpp"

namespace sirlab {

SlicedPartition slice(const Dataset& data, int h) {
    const Eigen::Index n = data.n();
    if (h < 1) throw InvalidInput("slice: H must be at least 1");
    if (h > n) throw InvalidInput("slice: H exceeds the sample size");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return data.y(a) < data.y(b); });

    SlicedPartition part;
    part.h = h;
    part.assignment.assign(static_cast<std::size_t>(n), 0);
    part.boundaries.reserve(static_cast<std::size_t>(h - 1));

    const Eigen::Index base = n / h;
    const Eigen::Index rem = n % h;
    Eigen::Index pos = 0;
    for (int s = 0; s < h; ++s) {
        const Eigen::Index size = base + (s < rem ? 1 : 0);
        for (Eigen::Index k = 0; k < size; ++k)
            part.assignment[static_cast<std::size_t>(order[static_cast<std::size_t>(pos + k)])] = s;
        pos += size;
        if (s < h - 1)
            part.boundaries.push_back(data.y(order[static_cast<std::size_t>(pos - 1)]));
    }
    return part;
}

CandidateMatrix candidate_matrix(const Dataset& data, const SlicedPartition& part) {
    const Eigen::Index n = data.n();
    const Eigen::Index p = data.p();
    const int h = part.h;
    if (static_cast<Eigen::Index>(part.assignment.size()) != n)
        throw InvalidInput("candidate_matrix: partition does not match dataset");

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(h, p);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(h);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int s = part.assignment[static_cast<std::size_t>(i)];
        sums.row(s) += data.x.row(i);
        counts(s) += 1.0;
    }
    for (int s = 0; s < h; ++s)
        if (counts(s) == 0.0) throw std::logic_error("candidate_matrix: empty slice");

    const Eigen::RowVectorXd xbar = data.x.colwise().mean();

    CandidateMatrix out;
    out.slice_means.resize(h, p);
    for (int s = 0; s < h; ++s) out.slice_means.row(s) = sums.row(s) / counts(s) - xbar;

    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(p, p);
    lam.selfadjointView<Eigen::Lower>().rankUpdate(out.slice_means.transpose(), 1.0 / double(h));
    lam.triangularView<Eigen::StrictlyUpper>() = lam.transpose();
    out.lambda_hat = SymMatrix(lam);
    out.eig = sym_eig(out.lambda_hat);
    return out;
}

GammaPartitionResult gamma_partition_check(const Dataset& data, const SlicedPartition& part,
                                           double gamma, const Dataset& ref_sample) {
    if (gamma < 0.0 || gamma >= 1.0)
        throw InvalidInput("gamma_partition_check: gamma must lie in [0, 1)");
    (void)data;  // boundaries were cut on `data`; only the partition is needed here
    const int h = part.h;
    const Eigen::Index m = ref_sample.n();

    std::vector<double> ref(ref_sample.y.data(), ref_sample.y.data() + m);
    std::sort(ref.begin(), ref.end());

    GammaPartitionResult out;
    out.masses.resize(static_cast<std::size_t>(h));
    // Slice s covers (b_{s-1}, b_s], with the first slice open below and the
    // last open above.
    std::size_t lo = 0;
    for (int s = 0; s < h; ++s) {
        std::size_t hi;
        if (s < h - 1) {
            const double b = part.boundaries[static_cast<std::size_t>(s)];
            hi = static_cast<std::size_t>(
                std::upper_bound(ref.begin(), ref.end(), b) - ref.begin());
        } else {
            hi = ref.size();
        }
        out.masses[static_cast<std::size_t>(s)] =
            static_cast<double>(hi - lo) / static_cast<double>(m);
        lo = hi;
    }

    const double lo_bound = (1.0 - gamma) / h;
    const double hi_bound = (1.0 + gamma) / h;
    out.pass = std::all_of(out.masses.begin(), out.masses.end(), [&](double mass) {
        return mass >= lo_bound && mass <= hi_bound;
    });
    return out;
}

double wssc_ratio(const Eigen::MatrixXd& curve_values, const SlicedPartition& part,
                  const std::vector<Eigen::VectorXd>& directions) {
    const Eigen::Index n = curve_values.rows();
    if (static_cast<Eigen::Index>(part.assignment.size()) != n)
        throw InvalidInput("wssc_ratio: partition does not match curve values");
    if (directions.empty()) throw InvalidInput("wssc_ratio: need at least one direction");

    const int h = part.h;
    double worst = 0.0;
    Eigen::VectorXd proj(n);
    for (const auto& beta : directions) {
        if (beta.size() != curve_values.cols())
            throw InvalidInput("wssc_ratio: direction length does not match curve dimension");
        proj.noalias() = curve_values * beta;

        const double mean = proj.mean();
        const double total_var = (proj.array() - mean).square().mean();
        if (total_var <= 0.0)
            throw DegenerateDirection("wssc_ratio: direction has zero total variance");

        Eigen::VectorXd s1 = Eigen::VectorXd::Zero(h);
        Eigen::VectorXd s2 = Eigen::VectorXd::Zero(h);
        Eigen::VectorXd cnt = Eigen::VectorXd::Zero(h);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int s = part.assignment[static_cast<std::size_t>(i)];
            s1(s) += proj(i);
            s2(s) += proj(i) * proj(i);
            cnt(s) += 1.0;
        }
        double within = 0.0;
        for (int s = 0; s < h; ++s) {
            const double mu = s1(s) / cnt(s);
            within += s2(s) / cnt(s) - mu * mu;
        }
        worst = std::max(worst, within / (h * total_var));
    }
    return worst;
}

}  // namespace sirlab
