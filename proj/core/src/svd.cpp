#include "rwplab/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rwplab {

namespace {

// One-sided Jacobi on a tall (or square) matrix: orthogonalize the columns of
// W = A*V by plane rotations; at convergence the column norms are the
// singular values and W's normalized columns are the left vectors.
void one_sided_jacobi(Eigen::MatrixXd& w, Eigen::MatrixXd& v) {
    const int n = static_cast<int>(w.cols());
    const double eps = 1e-15;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double app = w.col(p).squaredNorm();
                const double aqq = w.col(q).squaredNorm();
                const double apq = w.col(p).dot(w.col(q));
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < w.rows(); ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
}

// Extend the first `known` orthonormal columns of u to a full orthonormal
// basis, deterministically, by Gram-Schmidt against canonical basis vectors.
void complete_basis(Eigen::MatrixXd& u, int known) {
    const int m = static_cast<int>(u.rows());
    for (int filled = known; filled < m; ++filled) {
        // Best canonical candidate this round (ties resolved by lowest index).
        Eigen::VectorXd best;
        double best_norm = -1.0;
        for (int cand = 0; cand < m; ++cand) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
            e(cand) = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int j = 0; j < filled; ++j) e -= u.col(j).dot(e) * u.col(j);
            }
            const double nrm = e.norm();
            if (nrm > best_norm) {
                best_norm = nrm;
                best = e;
            }
        }
        if (best_norm < 1e-6) throw std::runtime_error("jacobi_svd: basis completion failed");
        u.col(filled) = best / best_norm;
    }
}

}  // namespace

SvdResult jacobi_svd(const Eigen::MatrixXd& a) {
    const bool transposed = a.rows() < a.cols();
    Eigen::MatrixXd w = transposed ? a.transpose() : a;  // m >= n
    const int m = static_cast<int>(w.rows());
    const int n = static_cast<int>(w.cols());

    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    one_sided_jacobi(w, v);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd norms(n);
    for (int j = 0; j < n; ++j) norms(j) = w.col(j).norm();
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return norms(i) > norms(j); });

    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd vs(n, n);
    Eigen::VectorXd sigma(n);
    const double tiny = 1e-300;
    int rank_cols = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        sigma(j) = norms(src);
        vs.col(j) = v.col(src);
        if (sigma(j) > tiny) {
            u.col(j) = w.col(src) / sigma(j);
            rank_cols = j + 1;
        } else {
            sigma(j) = 0.0;
        }
    }
    complete_basis(u, rank_cols);

    // Sign convention: first entry of each left vector with magnitude above
    // a relative threshold is nonnegative.
    const double s_max = sigma.size() > 0 ? sigma(0) : 0.0;
    (void)s_max;
    for (int j = 0; j < m; ++j) {
        const double col_max = u.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < m; ++i) {
            if (std::abs(u(i, j)) > 1e-12 * col_max) {
                if (u(i, j) < 0.0) {
                    u.col(j) = -u.col(j);
                    if (j < n) vs.col(j) = -vs.col(j);
                }
                break;
            }
        }
    }

    SvdResult res;
    if (transposed) {
        // a = (w)^T = (u s vs^T)^T = vs s u^T
        res.U = vs;
        res.V = u;
        res.singular_values = sigma;
        // The sign convention was applied to u (now the right factor);
        // reapply it to the left factor.
        for (int j = 0; j < res.U.cols(); ++j) {
            const double col_max = res.U.col(j).cwiseAbs().maxCoeff();
            if (col_max == 0.0) continue;
            for (int i = 0; i < res.U.rows(); ++i) {
                if (std::abs(res.U(i, j)) > 1e-12 * col_max) {
                    if (res.U(i, j) < 0.0) {
                        res.U.col(j) = -res.U.col(j);
                        if (j < res.V.cols()) res.V.col(j) = -res.V.col(j);
                    }
                    break;
                }
            }
        }
    } else {
        res.U = u;
        res.V = vs;
        res.singular_values = sigma;
    }
    return res;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rel_tol) {
    const SvdResult svd = jacobi_svd(a);
    const double cutoff = rel_tol * (svd.singular_values.size() > 0
                                         ? svd.singular_values(0)
                                         : 0.0);
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(a.cols(), a.rows());
    for (int i = 0; i < svd.singular_values.size(); ++i) {
        if (svd.singular_values(i) > cutoff && svd.singular_values(i) > 0.0) {
            pinv += svd.V.col(i) * svd.U.col(i).transpose() / svd.singular_values(i);
        }
    }
    return pinv;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& s, double floor_rel) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success) throw std::runtime_error("symmetric_sqrt: eigensolver failed");
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double lam_max = lam.cwiseAbs().maxCoeff();
    Eigen::VectorXd root(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        root(i) = std::sqrt(std::max(lam(i), floor_rel * lam_max));
    }
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& s, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success) throw std::runtime_error("symmetric_inv_sqrt: eigensolver failed");
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double lam_max = lam.maxCoeff();
    const double lam_min = lam.minCoeff();
    if (!(lam_min > rel_tol * lam_max)) {
        throw std::domain_error("symmetric_inv_sqrt: near-singular matrix, smallest eigenvalue " +
                                std::to_string(lam_min) + " vs largest " + std::to_string(lam_max));
    }
    Eigen::VectorXd root(lam.size());
    for (int i = 0; i < lam.size(); ++i) root(i) = 1.0 / std::sqrt(lam(i));
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace rwplab
