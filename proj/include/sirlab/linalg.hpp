#pragma once

#include <Eigen/Core>

namespace sirlab {

// Dense symmetric matrix. The constructor checks finiteness and symmetry
// (1e-12 relative) and stores the symmetrised average, so downstream
// eigensolvers always see an exactly symmetric operand.
struct SymMatrix {
    Eigen::MatrixXd m;

    SymMatrix() = default;
    explicit SymMatrix(const Eigen::MatrixXd& a);

    Eigen::Index dim() const { return m.rows(); }
};

// Eigenpairs sorted by nonincreasing eigenvalue. Each eigenvector is sign-fixed
// so its largest-magnitude entry is nonnegative, which makes golden tests and
// replays deterministic; spans are unaffected.
struct EigenDecomposition {
    Eigen::VectorXd values;   // nonincreasing
    Eigen::MatrixXd vectors;  // columns, orthonormal
};

// p x d basis of a candidate subspace. `sigma_orthonormal` records whether the
// columns satisfy B' Sigma B = I rather than the Euclidean B'B = I.
struct Basis {
    Eigen::MatrixXd m;
    bool sigma_orthonormal = false;

    Eigen::Index rows() const { return m.rows(); }
    Eigen::Index cols() const { return m.cols(); }
};

EigenDecomposition sym_eig(const SymMatrix& a);

// A^{-1/2} by eigendecomposition, with eigenvalues clamped below at
// floor * lambda_max(A). Throws SingularCovariance if lambda_max <= 0.
SymMatrix spd_inv_sqrt(const SymMatrix& a, double floor = 1e-12);

// Population-style covariance (divisor n) of the rows of x. Requires n >= 2.
SymMatrix sample_covariance(const Eigen::MatrixXd& x);

// || B1 B1' - B2 B2' ||_F^2 for Euclidean-orthonormal bases of equal shape.
// Span-invariant: right-multiplying either basis by an orthogonal matrix
// leaves the value unchanged. Range [0, 2d].
double general_loss(const Basis& b1, const Basis& b2);

// Euclidean-orthonormal basis of col(b), for feeding arbitrary-normalisation
// fits into general_loss.
Basis orthonormal_span(const Basis& b);

}  // namespace sirlab
