#include "rwplab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwplab/svd.hpp"

namespace rwplab {

namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, const Eigen::VectorXd& thresholds) {
    Eigen::VectorXd out(v.size());
    for (int i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i)) - thresholds(i);
        out(i) = mag > 0.0 ? (v(i) > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

// Lagrange threshold lambda >= 0 with sum_i w_i * max(|x_i| - lambda*w_i, 0)
// equal to the budget; bisection, monotone decreasing left side.
double l1_shrink_threshold(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double budget) {
    auto value = [&](double lam) {
        double s = 0.0;
        for (int i = 0; i < x.size(); ++i) s += w(i) * std::max(std::abs(x(i)) - lam * w(i), 0.0);
        return s;
    };
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < x.size(); ++i) hi = std::max(hi, std::abs(x(i)) / w(i));
    if (value(0.0) <= budget) return 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) > budget) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

// Same for block norms: sum_b max(n_b - lambda, 0) = budget.
double block_shrink_threshold(const std::vector<double>& norms, double budget) {
    auto value = [&](double lam) {
        double s = 0.0;
        for (double n : norms) s += std::max(n - lam, 0.0);
        return s;
    };
    if (value(0.0) <= budget) return 0.0;
    double lo = 0.0;
    double hi = *std::max_element(norms.begin(), norms.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) > budget) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> block_norms(const CsSpace& space, const Eigen::VectorXd& x) {
    const auto& blocks = space.block_params().blocks;
    std::vector<double> norms(blocks.size(), 0.0);
    for (size_t b = 0; b < blocks.size(); ++b) {
        double s = 0.0;
        for (int i : blocks[b]) s += x(i) * x(i);
        norms[b] = std::sqrt(s);
    }
    return norms;
}

}  // namespace

namespace detail {

Eigen::VectorXd tv_prox(const GraphGradientParams& graph, const Eigen::VectorXd& v, double t,
                        Eigen::VectorXd& p, double tol) {
    const int edges = static_cast<int>(graph.edges.size());
    if (edges == 0) return v;
    if (p.size() != edges) p = Eigen::VectorXd::Zero(edges);
    const double step = 1.0 / (2.0 * std::max(1, graph.max_total_degree));
    const int max_iters = 400 * edges + 4000;
    Eigen::VectorXd x = v - gradient_adjoint(graph, p);
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd gx = gradient_apply(graph, x);
        // duality gap of the prox pair: t*||grad x||_1 - <p, grad x>
        const double gap = t * gx.lpNorm<1>() - p.dot(gx);
        if (gap <= tol * std::max(1.0, 0.5 * (x - v).squaredNorm() + t * gx.lpNorm<1>())) break;
        p += step * gx;
        for (int e = 0; e < edges; ++e) p(e) = std::clamp(p(e), -t, t);
        x = v - gradient_adjoint(graph, p);
    }
    return x;
}

}  // namespace detail

Eigen::VectorXd prox_sharp(const CsSpace& space, const Eigen::VectorXd& v, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("prox_sharp: t must be positive");
    if (v.size() != space.ambient_dim()) {
        throw std::invalid_argument("prox_sharp: dimension mismatch");
    }
    switch (space.model()) {
        case SignalModel::weighted_sparsity:
            return soft_threshold(v, t * space.weighted_params().weights);
        case SignalModel::block_sparsity: {
            Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
            const auto& blocks = space.block_params().blocks;
            const std::vector<double> norms = block_norms(space, v);
            for (size_t b = 0; b < blocks.size(); ++b) {
                const double scale = norms[b] > 0.0 ? std::max(1.0 - t / norms[b], 0.0) : 0.0;
                for (int i : blocks[b]) out(i) = scale * v(i);
            }
            return out;
        }
        case SignalModel::gradient_sparsity: {
            Eigen::VectorXd p;
            return detail::tv_prox(space.gradient_params(), v, t, p);
        }
        case SignalModel::low_rank: {
            const SvdResult svd = jacobi_svd(space.to_matrix(v));
            const auto& lr = space.low_rank_params();
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(lr.rows, lr.cols);
            for (int i = 0; i < svd.singular_values.size(); ++i) {
                const double s = svd.singular_values(i) - t;
                if (s > 0.0) out += s * svd.U.col(i) * svd.V.col(i).transpose();
            }
            return space.to_vector(out);
        }
    }
    return v;
}

Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& u, const Eigen::VectorXd& center,
                                double radius) {
    if (u.size() != center.size()) throw std::invalid_argument("project_l2_ball: length mismatch");
    const Eigen::VectorXd d = u - center;
    const double n = d.norm();
    if (n <= radius || n == 0.0) return u;
    return center + (radius / n) * d;
}

Eigen::VectorXd project_sharp_ball(const CsSpace& space, const Eigen::VectorXd& x, double radius) {
    if (radius < 0.0) throw std::invalid_argument("project_sharp_ball: negative radius");
    if (sharp_norm(space, x) <= radius) return x;
    switch (space.model()) {
        case SignalModel::weighted_sparsity: {
            const auto& w = space.weighted_params().weights;
            const double lam = l1_shrink_threshold(x, w, radius);
            return soft_threshold(x, lam * w);
        }
        case SignalModel::block_sparsity: {
            const auto& blocks = space.block_params().blocks;
            const std::vector<double> norms = block_norms(space, x);
            const double lam = block_shrink_threshold(norms, radius);
            Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
            for (size_t b = 0; b < blocks.size(); ++b) {
                const double scale = norms[b] > 0.0 ? std::max(1.0 - lam / norms[b], 0.0) : 0.0;
                for (int i : blocks[b]) out(i) = scale * x(i);
            }
            return out;
        }
        case SignalModel::low_rank: {
            const SvdResult svd = jacobi_svd(space.to_matrix(x));
            std::vector<double> sv(svd.singular_values.data(),
                                   svd.singular_values.data() + svd.singular_values.size());
            const double lam = block_shrink_threshold(sv, radius);
            const auto& lr = space.low_rank_params();
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(lr.rows, lr.cols);
            for (int i = 0; i < svd.singular_values.size(); ++i) {
                const double s = svd.singular_values(i) - lam;
                if (s > 0.0) out += s * svd.U.col(i) * svd.V.col(i).transpose();
            }
            return space.to_vector(out);
        }
        case SignalModel::gradient_sparsity: {
            // Bracket the Lagrange parameter of the TV constraint, then bisect;
            // the projection equals tv_prox at the matched parameter.
            const auto& graph = space.gradient_params();
            Eigen::VectorXd p;
            double lo = 0.0;
            double hi = 1.0;
            Eigen::VectorXd cand;
            for (int it = 0; it < 60; ++it) {
                p.setZero();
                cand = detail::tv_prox(graph, x, hi, p, 1e-10);
                if (sharp_norm(space, cand) <= radius) break;
                lo = hi;
                hi *= 2.0;
            }
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                p.setZero();
                cand = detail::tv_prox(graph, x, mid, p, 1e-10);
                if (sharp_norm(space, cand) > radius) lo = mid;
                else hi = mid;
                if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
            }
            p.setZero();
            return detail::tv_prox(graph, x, hi, p, 1e-10);
        }
    }
    return x;
}

Eigen::VectorXd sharp_subgradient(const CsSpace& space, const Eigen::VectorXd& x) {
    switch (space.model()) {
        case SignalModel::weighted_sparsity: {
            const auto& w = space.weighted_params().weights;
            Eigen::VectorXd g(x.size());
            for (int i = 0; i < x.size(); ++i) g(i) = x(i) > 0.0 ? w(i) : (x(i) < 0.0 ? -w(i) : 0.0);
            return g;
        }
        case SignalModel::block_sparsity: {
            const auto& blocks = space.block_params().blocks;
            const std::vector<double> norms = block_norms(space, x);
            Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
            for (size_t b = 0; b < blocks.size(); ++b) {
                if (norms[b] > 0.0) {
                    for (int i : blocks[b]) g(i) = x(i) / norms[b];
                }
            }
            return g;
        }
        case SignalModel::gradient_sparsity: {
            const auto& graph = space.gradient_params();
            Eigen::VectorXd e = gradient_apply(graph, x);
            for (int i = 0; i < e.size(); ++i) e(i) = e(i) > 0.0 ? 1.0 : (e(i) < 0.0 ? -1.0 : 0.0);
            return gradient_adjoint(graph, e);
        }
        case SignalModel::low_rank: {
            const SvdResult svd = jacobi_svd(space.to_matrix(x));
            const auto& lr = space.low_rank_params();
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(lr.rows, lr.cols);
            const double tol =
                1e-12 * std::max(1.0, svd.singular_values.size() ? svd.singular_values(0) : 0.0);
            for (int i = 0; i < svd.singular_values.size(); ++i) {
                if (svd.singular_values(i) > tol) g += svd.U.col(i) * svd.V.col(i).transpose();
            }
            return space.to_vector(g);
        }
    }
    return Eigen::VectorXd::Zero(x.size());
}

DecodeResult decode(const DecodeProblem& problem, const SolverConfig& config) {
    const CsSpace& space = problem.space;
    const SensingOperator& op = problem.op;
    if (op.cols() != space.ambient_dim()) {
        throw std::invalid_argument("decode: operator columns do not match the space dimension");
    }
    if (problem.y.size() != op.rows()) {
        throw std::invalid_argument("decode: measurement length does not match operator rows");
    }
    if (problem.epsilon < 0.0) throw std::invalid_argument("decode: negative epsilon");
    if (config.max_iters < 1 || config.tol_primal <= 0.0 || config.tol_dual <= 0.0 ||
        config.tau <= 0.0) {
        throw std::invalid_argument("decode: invalid solver configuration");
    }

    const bool constrained_ambient = space.model() == SignalModel::gradient_sparsity;
    const double norm = op.operator_norm();
    const double norm_sq = norm * norm;
    double mu = config.mu;
    if (mu == 0.0) {
        mu = norm_sq > 0.0 ? 0.9 * config.tau / norm_sq : 1.0;
    } else if (norm_sq > 0.0 && !(mu * norm_sq < config.tau)) {
        throw std::invalid_argument("decode: need mu * ||Phi||^2 < tau for convergence");
    }
    const double tau = config.tau;
    const double grad_step = mu / tau;         // step on the gradient of the quadratic
    const double prox_t = mu / (tau * tau);    // prox parameter of the sharp norm

    auto apply = [&](const Eigen::VectorXd& x) {
        return constrained_ambient ? op.forward(space.project_ambient(x)) : op.forward(x);
    };
    auto apply_adjoint = [&](const Eigen::VectorXd& u) {
        return constrained_ambient ? space.project_ambient(op.adjoint(u)) : op.adjoint(u);
    };

    const double scale = std::max(1.0, problem.y.norm());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.ambient_dim());
    Eigen::VectorXd z = project_l2_ball(Eigen::VectorXd::Zero(op.rows()), problem.y, problem.epsilon);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(op.rows());
    Eigen::VectorXd tv_dual;  // warm-started edge variables for TV proxes

    DecodeResult result;
    result.primal_history.reserve(config.record_history ? config.max_iters : 0);

    bool converged = false;
    int it = 0;
    for (; it < config.max_iters; ++it) {
        const Eigen::VectorXd r = apply(x) - z + u;
        const Eigen::VectorXd v = x - grad_step * (tau * apply_adjoint(r));
        const Eigen::VectorXd x_old = x;
        if (space.model() == SignalModel::gradient_sparsity) {
            x = detail::tv_prox(space.gradient_params(), v, prox_t, tv_dual);
        } else {
            x = prox_sharp(space, v, prox_t);
        }
        const Eigen::VectorXd ax = apply(x);
        const Eigen::VectorXd z_old = z;
        z = project_l2_ball(ax + u, problem.y, problem.epsilon);
        u += ax - z;

        const double primal = (ax - z).norm();
        // Proximal-metric displacement keeps the dual residual meaningful
        // when the ball degenerates to a point and z never moves.
        const double dual = tau * apply_adjoint(z - z_old).norm() +
                            (tau * tau / mu) * (x - x_old).norm();
        if (config.record_history) result.primal_history.push_back(primal);
        if (primal <= config.tol_primal * scale && dual <= config.tol_dual * scale) {
            converged = true;
            ++it;
            break;
        }
    }

    // Correct onto the constraint set: z lies in the epsilon ball exactly,
    // so moving x by the minimum-norm solution of A c = z - A x makes the
    // result feasible up to the pseudoinverse accuracy.
    Eigen::VectorXd x_out = constrained_ambient ? space.project_ambient(x) : x;
    {
        Eigen::MatrixXd a_eff = op.matrix();
        if (constrained_ambient) {
            for (int j = 0; j < a_eff.cols(); ++j) {
                Eigen::VectorXd basis = Eigen::VectorXd::Zero(a_eff.cols());
                basis(j) = 1.0;
                // A_eff = Phi * P built column by column
                a_eff.col(j) = op.forward(space.project_ambient(basis));
            }
        }
        const Eigen::VectorXd gap = z - a_eff * x_out;
        if (gap.norm() > 0.0) {
            x_out += pseudo_inverse(a_eff) * gap;
            if (constrained_ambient) x_out = space.project_ambient(x_out);
        }
    }

    result.x_star = x_out;
    result.residual = (op.forward(x_out) - problem.y).norm();
    result.objective = sharp_norm(space, x_out);
    result.iterations = it;
    result.converged = converged;
    return result;
}

}  // namespace rwplab
