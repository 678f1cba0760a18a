#pragma once

#include <Eigen/Dense>

namespace rwplab {

// Full singular value decomposition A = U * diag(s) * V^T with U (m x m) and
// V (n x n) orthogonal, computed by one-sided Jacobi rotations. Deterministic:
// fixed sweep order, singular values sorted descending, and the first
// entry of each left singular vector whose magnitude exceeds a small
// threshold is made nonnegative.
struct SvdResult {
    Eigen::MatrixXd U;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd V;

    Eigen::MatrixXd reconstruct() const {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(U.cols(), V.cols());
        for (int i = 0; i < singular_values.size(); ++i) s(i, i) = singular_values(i);
        return U * s * V.transpose();
    }
};

SvdResult jacobi_svd(const Eigen::MatrixXd& a);

// Moore-Penrose pseudoinverse through jacobi_svd; singular values below
// rel_tol * s_max are treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

// Symmetric PSD square root via eigendecomposition, with eigenvalues floored
// at floor_rel * lambda_max to guard conditioning.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& s, double floor_rel = 1e-14);

// Inverse symmetric square root (GG^T)^{-1/2}; throws std::domain_error when
// the smallest eigenvalue is below rel_tol times the largest.
Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& s, double rel_tol = 1e-12);

}  // namespace rwplab
