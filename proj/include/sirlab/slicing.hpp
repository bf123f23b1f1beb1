#pragma once

#include <Eigen/Core>
#include <vector>

#include "sirlab/dataset.hpp"
#include "sirlab/linalg.hpp"

namespace sirlab {

// Assignment of samples to H slices by Y-order. Slice sizes differ by at most
// one (the first n mod H slices take the extra sample); ties in Y keep their
// original index order via stable sort.
struct SlicedPartition {
    int h = 0;                        // slice count
    std::vector<int> assignment;      // per-sample slice id in 0..h-1
    std::vector<double> boundaries;   // h-1 order statistics separating slices
};

// The SIR candidate estimate: lambda_hat = (1/H) sum_h xbar_h xbar_h' over
// globally centred slice means, with its eigendecomposition.
struct CandidateMatrix {
    SymMatrix lambda_hat;        // p x p, PSD, rank <= min(H, p)
    Eigen::MatrixXd slice_means; // H x p, centred
    EigenDecomposition eig;
};

SlicedPartition slice(const Dataset& data, int h);

CandidateMatrix candidate_matrix(const Dataset& data, const SlicedPartition& part);

// Out-of-sample check that every slice of `part` (cut on `data`) carries
// ref-sample mass within [(1-gamma)/H, (1+gamma)/H].
struct GammaPartitionResult {
    bool pass = false;
    std::vector<double> masses;  // estimated per-slice mass under the ref law
};

GammaPartitionResult gamma_partition_check(const Dataset& data, const SlicedPartition& part,
                                           double gamma, const Dataset& ref_sample);

// Max over directions of
//   (1/H) sum_h var(beta' kappa | slice h) / var(beta' kappa),
// where curve_values holds kappa evaluated at each sample (n x q). The curve is
// empirically weak (K, tau)-sliced stable at this H iff the ratio <= 1/tau.
double wssc_ratio(const Eigen::MatrixXd& curve_values, const SlicedPartition& part,
                  const std::vector<Eigen::VectorXd>& directions);

}  // namespace sirlab
