#include "sirlab/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "sirlab/errors.hpp"

namespace sirlab {

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw InvalidInput("SymMatrix: matrix must be square and nonempty");
    if (!a.allFinite()) throw InvalidInput("SymMatrix: non-finite entries");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw InvalidInput("SymMatrix: asymmetry " + std::to_string(asym / scale) +
                           " exceeds 1e-12 relative tolerance");
    m = 0.5 * (a + a.transpose());
}

EigenDecomposition sym_eig(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.m);
    if (solver.info() != Eigen::Success)
        throw InvalidInput("sym_eig: eigensolver failed to converge");

    const Eigen::Index p = a.dim();
    EigenDecomposition out;
    out.values.resize(p);
    out.vectors.resize(p, p);
    // Eigen returns ascending order; flip to nonincreasing.
    for (Eigen::Index i = 0; i < p; ++i) {
        out.values(i) = solver.eigenvalues()(p - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(p - 1 - i);
    }
    // Sign convention: largest-magnitude entry of each eigenvector >= 0.
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::Index imax = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (out.vectors(imax, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
    }
    return out;
}

SymMatrix spd_inv_sqrt(const SymMatrix& a, double floor) {
    if (floor <= 0.0) throw InvalidInput("spd_inv_sqrt: floor must be positive");
    const EigenDecomposition eig = sym_eig(a);
    const double lmax = eig.values(0);
    if (lmax <= 0.0) throw SingularCovariance("spd_inv_sqrt: largest eigenvalue is not positive");
    const double lo = floor * lmax;
    Eigen::VectorXd inv_sqrt = eig.values.cwiseMax(lo).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd w = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
    return SymMatrix(0.5 * (w + w.transpose()));
}

SymMatrix sample_covariance(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    if (n < 2) throw InvalidInput("sample_covariance: need at least 2 rows");
    if (!x.allFinite()) throw InvalidInput("sample_covariance: non-finite entries");
    const Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / double(n));
    cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
    cov -= mean.transpose() * mean;
    return SymMatrix(0.5 * (cov + cov.transpose()));
}

namespace {

void require_orthonormal(const Basis& b, const char* who) {
    const Eigen::MatrixXd gram = b.m.transpose() * b.m;
    const double dev =
        (gram - Eigen::MatrixXd::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-6)
        throw InvalidInput(std::string(who) + ": basis is not Euclidean-orthonormal (deviation " +
                           std::to_string(dev) + ")");
}

}  // namespace

double general_loss(const Basis& b1, const Basis& b2) {
    if (b1.rows() != b2.rows() || b1.cols() != b2.cols())
        throw InvalidInput("general_loss: shape mismatch");
    require_orthonormal(b1, "general_loss");
    require_orthonormal(b2, "general_loss");
    const Eigen::MatrixXd diff =
        b1.m * b1.m.transpose() - b2.m * b2.m.transpose();
    return diff.squaredNorm();
}

Basis orthonormal_span(const Basis& b) {
    if (b.rows() < b.cols() || b.cols() == 0)
        throw InvalidInput("orthonormal_span: need p >= d >= 1");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b.m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    return Basis{q, false};
}

}  // namespace sirlab
