#pragma once

#include <Eigen/Core>
#include <string>

namespace sirlab {

// n observations of (X in R^p, Y in R), paired by row index. X must be finite;
// Y may contain +-inf (extreme responses sort into the outer slices) but not NaN.
struct Dataset {
    Eigen::MatrixXd x;  // n x p
    Eigen::VectorXd y;  // n

    Dataset() = default;
    Dataset(Eigen::MatrixXd x_, Eigen::VectorXd y_);

    Eigen::Index n() const { return x.rows(); }
    Eigen::Index p() const { return x.cols(); }
};

// Reads a dataset from CSV with header row "x1,...,xp,y". Non-numeric cells
// are rejected with the offending row and column named in the error.
Dataset load_dataset_csv(const std::string& path);

}  // namespace sirlab
