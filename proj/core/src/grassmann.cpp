#include "rwplab/grassmann.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rwplab/rng.hpp"
#include "rwplab/solvers.hpp"
#include "rwplab/svd.hpp"

namespace rwplab {

namespace {

void fix_column_signs(Eigen::MatrixXd& q) {
    for (int j = 0; j < q.cols(); ++j) {
        const double col_max = q.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < q.rows(); ++i) {
            if (std::abs(q(i, j)) > 1e-12 * col_max) {
                if (q(i, j) < 0.0) q.col(j) = -q.col(j);
                break;
            }
        }
    }
}

Eigen::VectorXd gaussian_vector(int n, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
    return g;
}

double sharp_ratio(const CsSpace& space, const Eigen::VectorXd& x) {
    const double s = sharp_norm(space, x);
    const double n = x.norm();
    return s > 0.0 ? n / s : std::numeric_limits<double>::infinity();
}

}  // namespace

Subspace Subspace::from_span(const Eigen::MatrixXd& raw) {
    if (raw.rows() < 1 || raw.cols() < 1) throw std::invalid_argument("Subspace: empty span");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(raw);
    const auto rank = qr.rank();
    if (rank < 1) throw std::invalid_argument("Subspace: span is zero");
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(raw.rows(), rank);
    fix_column_signs(q);
    return Subspace(std::move(q));
}

Subspace Subspace::random(int ambient, int dim, std::uint64_t seed) {
    if (dim < 1 || dim > ambient) throw std::invalid_argument("Subspace::random: bad dimension");
    Eigen::MatrixXd g(ambient, dim);
    for (int j = 0; j < dim; ++j) g.col(j) = gaussian_vector(ambient, seed, j);
    return from_span(g);
}

double gap_metric(const Subspace& x, const Subspace& y) {
    if (x.ambient() != y.ambient()) throw std::invalid_argument("gap_metric: ambient mismatch");
    const Eigen::MatrixXd diff = x.projector() - y.projector();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diff);
    const double gap = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (x.dim() == y.dim()) {
        // d(X,Y) = ||P_{Y perp} P_X||_2 for equal dimensions.
        const Eigen::MatrixXd m =
            (Eigen::MatrixXd::Identity(x.ambient(), x.ambient()) - y.projector()) * x.projector();
        const SvdResult svd = jacobi_svd(m);
        const double alt = svd.singular_values.size() ? svd.singular_values(0) : 0.0;
        if (std::abs(alt - gap) > 1e-9) {
            throw std::runtime_error("gap_metric: cross-check disagreement " +
                                     std::to_string(std::abs(alt - gap)));
        }
    }
    return gap;
}

double min_max_correlation(const Subspace& x, const Subspace& y) {
    if (x.ambient() != y.ambient()) throw std::invalid_argument("min_max_correlation: ambient mismatch");
    if (x.dim() < 1) throw std::invalid_argument("min_max_correlation: X is zero-dimensional");
    const Eigen::MatrixXd m = y.basis().transpose() * x.basis();
    const SvdResult svd = jacobi_svd(m);
    return svd.singular_values(svd.singular_values.size() - 1);
}

Subspace construct_nearby_subspace(const Subspace& y, const Eigen::VectorXd& e, double alpha) {
    if (e.size() != y.ambient()) throw std::invalid_argument("construct_nearby_subspace: length mismatch");
    const double en = e.norm();
    if (en == 0.0) throw std::invalid_argument("construct_nearby_subspace: e is zero");
    if (!(alpha <= 1.0)) {
        throw std::invalid_argument("construct_nearby_subspace: precondition alpha <= 1 failed");
    }
    const Eigen::VectorXd eu = e / en;
    const Eigen::VectorXd w = y.basis().transpose() * eu;  // coefficients of P_Y e
    const double perp = std::sqrt(std::max(0.0, 1.0 - w.squaredNorm()));
    if (!(perp < alpha)) {
        throw std::invalid_argument(
            "construct_nearby_subspace: precondition ||P_{Y perp} e|| < alpha ||e|| failed (" +
            std::to_string(perp) + " >= " + std::to_string(alpha) + ")");
    }
    const int d = y.dim();
    Eigen::MatrixXd basis(y.ambient(), d);
    if (d > 1) {
        // Householder reflection sending w to ||w|| e_1; its remaining columns
        // form an orthonormal basis of the hyperplane w^perp in coefficients.
        const double wn = w.norm();
        Eigen::VectorXd v = w;
        v(0) += (w(0) >= 0.0 ? wn : -wn);
        const double vsq = v.squaredNorm();
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
        if (vsq > 0.0) h -= (2.0 / vsq) * v * v.transpose();
        basis.leftCols(d - 1) = y.basis() * h.rightCols(d - 1);
    }
    // Append e, orthogonalized against Z = Y intersect e^perp (exact up to fp).
    Eigen::VectorXd last = eu;
    if (d > 1) last -= basis.leftCols(d - 1) * (basis.leftCols(d - 1).transpose() * eu);
    basis.col(d - 1) = last / last.norm();
    fix_column_signs(basis);
    Subspace x = Subspace::from_span(basis);

    // Numerical re-verification of the postconditions.
    if (x.dim() != y.dim()) throw std::runtime_error("construct_nearby_subspace: dimension changed");
    if ((x.projector() * eu - eu).norm() > 1e-8) {
        throw std::runtime_error("construct_nearby_subspace: e is not contained in X");
    }
    if (!(gap_metric(x, y) < alpha)) {
        throw std::runtime_error("construct_nearby_subspace: gap bound failed");
    }
    return x;
}

WidthCheckResult width_property_check(const Subspace& y, const CsSpace& space, double rho,
                                      int restarts, std::uint64_t seed,
                                      const Eigen::VectorXd* hint) {
    if (y.ambient() != space.ambient_dim()) {
        throw std::invalid_argument("width_property_check: dimension mismatch");
    }
    WidthCheckResult res;
    res.best_ratio = 0.0;
    const auto consider = [&](const Eigen::VectorXd& x) {
        const double n = x.norm();
        if (n < 1e-12) return;
        const Eigen::VectorXd xu = x / n;
        const double ratio = sharp_ratio(space, xu);
        if (ratio > res.best_ratio) {
            res.best_ratio = ratio;
            if (xu.norm() > rho * sharp_norm(space, xu) + 1e-12) {
                res.holds = false;
                res.witness = xu;
            }
        }
    };

    if (hint != nullptr && hint->size() == y.ambient()) {
        consider(y.projector() * (*hint));
    }

    const int d = y.dim();
    if (d == 1) {
        consider(y.basis().col(0));
    } else if (d == 2) {
        const int steps = 3142;  // half circle at ~1e-3 rad
        for (int k = 0; k < steps; ++k) {
            const double t = std::numbers::pi * k / steps;
            consider(y.basis() * Eigen::Vector2d(std::cos(t), std::sin(t)));
        }
    } else if (d == 3) {
        const int steps = 315;  // ~1e-2 rad over the half sphere
        for (int a = 0; a <= steps; ++a) {
            const double theta = std::numbers::pi * a / steps;
            for (int b = 0; b < steps; ++b) {
                const double phi = std::numbers::pi * b / steps;
                consider(y.basis() * Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                                     std::sin(theta) * std::sin(phi),
                                                     std::cos(theta)));
            }
        }
    } else {
        // Projected subgradient descent on sharp_norm over the unit sphere of Y.
        for (int r = 0; r < restarts; ++r) {
            Eigen::VectorXd c = gaussian_vector(d, seed, 7777ULL * r + 13ULL);
            c.normalize();
            for (int it = 0; it < 300; ++it) {
                const Eigen::VectorXd x = y.basis() * c;
                consider(x);
                Eigen::VectorXd g = y.basis().transpose() * sharp_subgradient(space, x);
                g -= g.dot(c) * c;  // tangent component
                const double gn = g.norm();
                if (gn < 1e-14) break;
                c = (c - (0.5 / std::sqrt(it + 1.0)) * g / gn).normalized();
            }
            consider(y.basis() * c);
        }
    }
    return res;
}

Subspace kernel_subspace(const SensingOperator& phi) {
    const SvdResult svd = jacobi_svd(phi.matrix());
    const double tol = 1e-12 * std::max(1.0, svd.singular_values.size() ? svd.singular_values(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < svd.singular_values.size(); ++i) {
        if (svd.singular_values(i) > tol) ++rank;
    }
    const int dim = phi.cols() - rank;
    if (dim < 1) throw std::invalid_argument("kernel_subspace: trivial null space");
    return Subspace::from_span(svd.V.rightCols(dim));
}

RwpBallReport rwp_ball_harness(const SensingOperator& phi, const CsSpace& space, double rho,
                               double alpha, int trials, std::uint64_t seed) {
    const Eigen::MatrixXd gram = phi.matrix() * phi.matrix().transpose();
    if ((gram - Eigen::MatrixXd::Identity(phi.rows(), phi.rows())).cwiseAbs().maxCoeff() > 1e-8) {
        throw std::invalid_argument("rwp_ball_harness: operator rows are not orthonormal");
    }
    RwpBallReport report;
    report.trials = trials;
    report.degenerate_alpha = alpha > 1.0;
    const Subspace kernel = kernel_subspace(phi);
    const int n = phi.cols();

    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, 17ULL + t);
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
        Subspace x = [&] {
            if (report.degenerate_alpha) {
                // alpha > 1 reaches the whole Grassmannian.
                return Subspace::random(n, kernel.dim(), seed ^ (0x5bd1e995ULL + t));
            }
            const Eigen::VectorXd in_y = kernel.projector() * g;
            const Eigen::VectorXd out_y = g - in_y;
            const double s = 0.99 * alpha * rng.next_uniform() * in_y.norm() /
                             std::max(out_y.norm(), 1e-300);
            const Eigen::VectorXd e = (in_y + s * out_y).normalized();
            return construct_nearby_subspace(kernel, e, alpha);
        }();
        const WidthCheckResult check = width_property_check(x, space, rho, 4, seed ^ (31ULL * t));
        if (!check.holds) ++report.direction1_failures;
    }

    report.rwp = rwp_search(phi, space, RwpParams{rho, alpha}, 16, seed ^ 0xabcdefULL);
    if (report.rwp.verdict == RwpVerdict::violation_found && !report.degenerate_alpha) {
        report.direction2_ran = true;
        const Eigen::VectorXd w = report.rwp.witness->normalized();
        const Subspace x = construct_nearby_subspace(kernel, w, alpha);
        const WidthCheckResult check = width_property_check(x, space, rho, 4, seed ^ 0x9999ULL, &w);
        report.direction2_confirmed = !check.holds;
    }
    return report;
}

}  // namespace rwplab
