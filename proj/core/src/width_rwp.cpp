#include "rwplab/width_rwp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rwplab/rng.hpp"
#include "rwplab/solvers.hpp"
#include "rwplab/svd.hpp"

namespace rwplab {

namespace {

Eigen::VectorXd gaussian_vector(int n, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
    return g;
}

// Exact width sample for weighted l1: maximize <g,x> over the ball
// intersection via the Lagrange threshold of the weighted soft threshold.
double width_sample_weighted(const CsSpace& space, double budget, const Eigen::VectorXd& g) {
    const auto& w = space.weighted_params().weights;
    const double g2 = g.norm();
    if (g2 == 0.0) return 0.0;
    if ((w.array() * g.array().abs()).sum() <= budget * g2) {
        return g2;  // sharp constraint inactive at g/||g||
    }
    // Best single-coordinate value; optimum when the sphere stays inactive.
    int best_i = 0;
    double best_ratio = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double r = std::abs(g(i)) / w(i);
        if (r > best_ratio) {
            best_ratio = r;
            best_i = i;
        }
    }
    if (budget <= w(best_i)) {
        return budget * best_ratio;
    }
    // Both constraints active: bisect the threshold so the weighted l1 norm
    // of the normalized soft threshold matches the budget.
    auto soft = [&](double lam) {
        Eigen::VectorXd u(g.size());
        for (int i = 0; i < g.size(); ++i) {
            const double mag = std::abs(g(i)) - lam * w(i);
            u(i) = mag > 0.0 ? (g(i) > 0.0 ? mag : -mag) : 0.0;
        }
        return u;
    };
    double lo = 0.0;
    double hi = best_ratio;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Eigen::VectorXd u = soft(mid);
        const double un = u.norm();
        if (un == 0.0) {
            hi = mid;
            continue;
        }
        const double sharp = (w.array() * u.array().abs()).sum() / un;
        if (sharp > budget) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-10 * std::max(1.0, hi) && std::abs(sharp - budget) <= 1e-10 * budget) break;
    }
    const Eigen::VectorXd u = soft(hi);
    const double un = u.norm();
    return un > 0.0 ? g.dot(u) / un : budget * best_ratio;
}

// Dykstra alternating projection onto B_2 intersect budget*B_sharp.
Eigen::VectorXd project_intersection(const CsSpace& space, Eigen::VectorXd x, double budget) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd q = Eigen::VectorXd::Zero(x.size());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(x.size());
    for (int it = 0; it < 100; ++it) {
        const Eigen::VectorXd y = project_l2_ball(x + p, zero, 1.0);
        p = x + p - y;
        x = project_sharp_ball(space, y + q, budget);
        q = y + q - x;
        if (x.norm() <= 1.0 + 1e-12 && sharp_norm(space, x) <= budget * (1.0 + 1e-12) &&
            (x - y).norm() <= 1e-12 * std::max(1.0, x.norm())) {
            break;
        }
    }
    return x;
}

double width_sample_generic(const CsSpace& space, double budget, const Eigen::VectorXd& g,
                            double tol) {
    const double gn = g.norm();
    if (gn == 0.0) return 0.0;
    Eigen::VectorXd gp = space.model() == SignalModel::gradient_sparsity
                             ? space.project_ambient(g)
                             : g;
    Eigen::VectorXd x = project_intersection(space, gp / std::max(gn, 1e-300), budget);
    double best = g.dot(x);
    const double step = 0.5 / gn;
    int stale = 0;
    for (int it = 0; it < 2000 && stale < 50; ++it) {
        x = project_intersection(space, x + step * gp, budget);
        const double val = g.dot(x);
        if (val > best + tol * gn) {
            best = val;
            stale = 0;
        } else {
            best = std::max(best, val);
            ++stale;
        }
    }
    return best;
}

double binomial_count(int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) {
        c *= static_cast<double>(n - i) / (i + 1);
        if (c > 1e18) return c;
    }
    return c;
}

struct SupportStats {
    double sigma_min_sq = std::numeric_limits<double>::infinity();
    double sigma_max_sq = 0.0;
};

SupportStats support_stats(const Eigen::MatrixXd& phi, const std::vector<int>& support) {
    const int j = static_cast<int>(support.size());
    Eigen::MatrixXd sub(phi.rows(), j);
    for (int c = 0; c < j; ++c) sub.col(c) = phi.col(support[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub.transpose() * sub);
    SupportStats s;
    s.sigma_min_sq = std::max(0.0, eig.eigenvalues().minCoeff());
    s.sigma_max_sq = std::max(0.0, eig.eigenvalues().maxCoeff());
    return s;
}

RipReport finalize_rip(int j, double min_sq, double max_sq, std::vector<int> worst, bool sampled) {
    RipReport r;
    r.J = j;
    r.sigma_min = std::sqrt(min_sq);
    r.sigma_max = std::sqrt(max_sq);
    r.delta_no_squares = std::max(r.sigma_max - 1.0, 1.0 - r.sigma_min);
    r.delta_squares = std::max(max_sq - 1.0, 1.0 - min_sq);
    r.worst_support = std::move(worst);
    r.sampled = sampled;
    return r;
}

// Minimal-sharp-norm unit direction used to seed the violation search.
Eigen::VectorXd pointy_direction(const CsSpace& space) {
    const int n = space.ambient_dim();
    switch (space.model()) {
        case SignalModel::weighted_sparsity: {
            const auto& w = space.weighted_params().weights;
            int best = 0;
            for (int i = 1; i < n; ++i) {
                if (w(i) < w(best)) best = i;
            }
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e(best) = 1.0;
            return e;
        }
        case SignalModel::block_sparsity: {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e(space.block_params().blocks.front().front()) = 1.0;
            return e;
        }
        case SignalModel::low_rank: {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e(0) = 1.0;  // E_11, rank one
            return e;
        }
        case SignalModel::gradient_sparsity: {
            const auto& p = space.gradient_params();
            Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(p.vertices, p.vertices);
            for (const auto& [i, j] : p.edges) {
                lap(i, i) += 1.0;
                lap(j, j) += 1.0;
                lap(i, j) -= 1.0;
                lap(j, i) -= 1.0;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
            const double tol = 1e-9 * std::max(1.0, eig.eigenvalues().maxCoeff());
            for (int i = 0; i < p.vertices; ++i) {
                if (eig.eigenvalues()(i) > tol) {
                    Eigen::VectorXd v = space.project_ambient(eig.eigenvectors().col(i));
                    const double nv = v.norm();
                    if (nv > 0.0) return v / nv;
                }
            }
            return Eigen::VectorXd::Zero(n);
        }
    }
    return Eigen::VectorXd::Zero(n);
}

}  // namespace

double width_sample(const CsSpace& space, double rho, const Eigen::VectorXd& g, double solver_tol) {
    if (!(rho > 0.0)) throw std::invalid_argument("width_sample: rho must be positive");
    if (g.size() != space.ambient_dim()) throw std::invalid_argument("width_sample: dimension mismatch");
    const double budget = 1.0 / rho;
    if (space.model() == SignalModel::weighted_sparsity) {
        return width_sample_weighted(space, budget, g);
    }
    return width_sample_generic(space, budget, g, solver_tol);
}

WidthEstimate gaussian_width_mc(const CsSpace& space, double rho, int samples, double confidence,
                                std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("gaussian_width_mc: need at least 2 samples");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("gaussian_width_mc: confidence must lie in (0,1)");
    }
    const double tol = 1e-6;
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        sum += width_sample(space, rho, gaussian_vector(space.ambient_dim(), seed, i), tol);
    }
    WidthEstimate est;
    est.mean = sum / samples;
    est.samples = samples;
    est.confidence_level = confidence;
    est.per_sample_solver_tol =
        space.model() == SignalModel::weighted_sparsity ? 1e-10 : tol;
    est.upper_conf = est.mean + std::sqrt(2.0 * std::log(1.0 / (1.0 - confidence)) / samples);
    return est;
}

double analytic_width_bound_l1(int J, int N, double c) {
    if (J < 1 || J > N) throw std::invalid_argument("analytic_width_bound_l1: need 1 <= J <= N");
    if (!(c > 0.0) || !(c * N / J > 1.0)) {
        throw std::invalid_argument("analytic_width_bound_l1: need c*N/J > 1");
    }
    return c * std::sqrt(J * std::log(c * static_cast<double>(N) / J));
}

double l1_width_dominating_mc(int J, int N, int samples, std::uint64_t seed) {
    if (J < 1 || J > N) throw std::invalid_argument("l1_width_dominating_mc: need 1 <= J <= N");
    if (samples < 1) throw std::invalid_argument("l1_width_dominating_mc: need samples >= 1");
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd g = gaussian_vector(N, seed, s).cwiseAbs();
        std::partial_sort(g.data(), g.data() + J, g.data() + N, std::greater<double>());
        sum += 2.0 * g.head(J).norm();
    }
    return sum / samples;
}

RwpReport rwp_search(const SensingOperator& op, const CsSpace& space, const RwpParams& params,
                     int restarts, std::uint64_t seed) {
    if (!(params.rho > 0.0) || !(params.alpha > 0.0)) {
        throw std::invalid_argument("rwp_search: rho and alpha must be positive");
    }
    if (restarts < 1) throw std::invalid_argument("rwp_search: restarts must be >= 1");
    if (op.cols() != space.ambient_dim()) throw std::invalid_argument("rwp_search: dimension mismatch");

    // Search a hair inside the sharp ball: minimizers of ||Phi x|| over the
    // closed set sit on the sharp boundary, and the violation pair of the
    // definition is strict. Feasible sphere points of the shrunk set satisfy
    // ||x||_2 - rho ||x||_sharp >= 1e-7 by construction.
    const double budget = (1.0 - 1e-7) / params.rho;
    const bool project_h = space.model() == SignalModel::gradient_sparsity;
    const double op_norm_sq = op.operator_norm() * op.operator_norm();

    auto feasible = [&](const Eigen::VectorXd& x) {
        return sharp_norm(space, x) <= budget * (1.0 + 1e-9);
    };
    auto to_sphere_candidate = [&](Eigen::VectorXd x) -> std::optional<Eigen::VectorXd> {
        if (project_h) x = space.project_ambient(x);
        x = project_sharp_ball(space, x, budget);
        const double n = x.norm();
        if (n < 1e-12) return std::nullopt;
        x /= n;
        if (!feasible(x)) return std::nullopt;
        return x;
    };

    RwpReport report;
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.restarts = restarts;
    bool any_feasible = false;

    for (int r = 0; r < restarts; ++r) {
        std::optional<Eigen::VectorXd> start;
        {
            Eigen::VectorXd g = gaussian_vector(space.ambient_dim(), seed, 1000003ULL * r);
            // Alternate projections onto the two sets to reach a feasible start.
            Eigen::VectorXd cand = g;
            for (int trial = 0; trial < 40 && !start; ++trial) {
                start = to_sphere_candidate(cand);
                if (!start) cand = project_sharp_ball(space, cand / std::max(cand.norm(), 1e-300), budget);
            }
            if (!start) {
                const Eigen::VectorXd pointy = pointy_direction(space);
                if (pointy.norm() > 0.0) start = to_sphere_candidate(pointy);
            }
        }
        if (!start) continue;
        any_feasible = true;

        Eigen::VectorXd x = *start;
        double fx = op.forward(x).squaredNorm();
        double eta = 0.5 / std::max(op_norm_sq, 1e-12);
        report.min_ratio = std::min(report.min_ratio, std::sqrt(fx));

        for (int it = 0; it < 400; ++it) {
            const Eigen::VectorXd grad = 2.0 * op.adjoint(op.forward(x));
            const auto cand = to_sphere_candidate(x - eta * grad);
            if (!cand) {
                eta *= 0.5;
                if (eta < 1e-16) break;
                continue;
            }
            const double fc = op.forward(*cand).squaredNorm();
            if (fc < fx) {
                x = *cand;
                fx = fc;
                eta *= 1.2;
                report.min_ratio = std::min(report.min_ratio, std::sqrt(fx));
            } else {
                eta *= 0.5;
                if (eta < 1e-16) break;
            }
        }

        // Witness certificate with strict margins, re-evaluated from scratch.
        const double xn = x.norm();
        const double phi_n = op.forward(x).norm();
        const double sharp = sharp_norm(space, x);
        if (params.alpha * xn - phi_n >= 1e-9 && xn - params.rho * sharp >= 1e-9) {
            report.verdict = RwpVerdict::violation_found;
            report.witness = x;
            report.restarts = r + 1;
            return report;
        }
    }

    report.verdict = RwpVerdict::no_violation_found;
    report.empty_set = !any_feasible;
    return report;
}

RipReport rip_enumerate(const SensingOperator& op, int J) {
    const int n = op.cols();
    if (J < 1 || J > n) throw std::invalid_argument("rip_enumerate: need 1 <= J <= N");
    if (binomial_count(n, J) > 1e6) {
        throw std::domain_error("rip_enumerate: C(N,J) exceeds the 1e6 enumeration guard; "
                                "use rip_sample for a sampled lower bound");
    }
    std::vector<int> support(J);
    std::iota(support.begin(), support.end(), 0);
    double min_sq = std::numeric_limits<double>::infinity();
    double max_sq = 0.0;
    double worst_dev = -1.0;
    std::vector<int> worst = support;
    for (;;) {
        const SupportStats s = support_stats(op.matrix(), support);
        min_sq = std::min(min_sq, s.sigma_min_sq);
        max_sq = std::max(max_sq, s.sigma_max_sq);
        const double dev = std::max(std::sqrt(s.sigma_max_sq) - 1.0, 1.0 - std::sqrt(s.sigma_min_sq));
        if (dev > worst_dev) {
            worst_dev = dev;
            worst = support;
        }
        int i = J - 1;
        while (i >= 0 && support[i] == n - J + i) --i;
        if (i < 0) break;
        ++support[i];
        for (int k = i + 1; k < J; ++k) support[k] = support[k - 1] + 1;
    }
    return finalize_rip(J, min_sq, max_sq, std::move(worst), false);
}

RipReport rip_sample(const SensingOperator& op, int J, int samples, std::uint64_t seed) {
    const int n = op.cols();
    if (J < 1 || J > n) throw std::invalid_argument("rip_sample: need 1 <= J <= N");
    if (samples < 1) throw std::invalid_argument("rip_sample: need samples >= 1");
    double min_sq = std::numeric_limits<double>::infinity();
    double max_sq = 0.0;
    double worst_dev = -1.0;
    std::vector<int> worst;
    std::vector<int> pool(n);
    for (int s = 0; s < samples; ++s) {
        CounterRng rng(seed, s);
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> support(J);
        for (int i = 0; i < J; ++i) {
            const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
            support[i] = pool[i];
        }
        std::sort(support.begin(), support.end());
        const SupportStats st = support_stats(op.matrix(), support);
        min_sq = std::min(min_sq, st.sigma_min_sq);
        max_sq = std::max(max_sq, st.sigma_max_sq);
        const double dev =
            std::max(std::sqrt(st.sigma_max_sq) - 1.0, 1.0 - std::sqrt(st.sigma_min_sq));
        if (dev > worst_dev) {
            worst_dev = dev;
            worst = support;
        }
    }
    return finalize_rip(J, min_sq, max_sq, std::move(worst), true);
}

RwpParams rip_to_rwp(int J, double delta) {
    if (J < 1) throw std::invalid_argument("rip_to_rwp: J must be positive");
    if (!(delta >= 0.0 && delta < 1.0 / 3.0)) {
        throw std::domain_error("rip_to_rwp: conversion requires 0 <= delta < 1/3");
    }
    return RwpParams{3.0 / std::sqrt(static_cast<double>(J)), 1.0 / 3.0 - delta};
}

std::pair<double, double> guarantee_constants(const RwpParams& params, double L) {
    if (!(params.rho > 0.0) || !(params.alpha > 0.0) || !(L > 0.0)) {
        throw std::invalid_argument("guarantee_constants: rho, alpha, L must be positive");
    }
    if (params.rho > 1.0 / (4.0 * L) * (1.0 + 1e-12)) {
        throw std::domain_error("guarantee_constants: hypothesis rho <= 1/(4L) violated");
    }
    return {4.0 * params.rho, 2.0 / params.alpha};
}

RwpParams converse_constants(double c0, double c1) {
    if (!(c0 > 0.0) || !(c1 > 0.0)) {
        throw std::invalid_argument("converse_constants: constants must be positive");
    }
    return RwpParams{2.0 * c0, 1.0 / (2.0 * c1)};
}

namespace {

CaiZhangResult cai_zhang_sweep(int K, double t_lo, double resolution) {
    if (K < 1) throw std::invalid_argument("cai_zhang_feasible: K must be positive");
    if (!(resolution > 0.0)) throw std::invalid_argument("cai_zhang_feasible: bad resolution");
    const double t_hi = 1e4;
    auto ok = [&](double t) {
        const double lhs = (t * K - 3.0) / (t * K + 5.0);
        const double rhs = std::sqrt((t - 1.0) / t);
        return lhs < rhs;
    };
    CaiZhangResult res;
    for (double t = t_lo; t <= t_hi; t += resolution) {
        if (ok(t)) {
            res.feasible = true;
            res.witness_t = t;
            return res;
        }
    }
    if (ok(t_hi)) {
        res.feasible = true;
        res.witness_t = t_hi;
    }
    return res;
}

}  // namespace

CaiZhangResult cai_zhang_feasible(int K, double t_grid_resolution) {
    return cai_zhang_sweep(K, 4.0 / 3.0, t_grid_resolution);
}

CaiZhangResult cai_zhang_feasible_above(int K, int min_order, double t_grid_resolution) {
    const double t_lo = std::max(4.0 / 3.0, static_cast<double>(min_order) / K);
    return cai_zhang_sweep(K, t_lo, t_grid_resolution);
}

MeasurementBudget measurement_budget(BudgetScheme scheme, const BudgetInputs& in) {
    MeasurementBudget out;
    switch (scheme) {
        case BudgetScheme::gordon: {
            if (!(in.lambda > 0.0)) throw std::domain_error("measurement_budget: lambda must be positive");
            const double alpha_cap = 1.0 / (1.0 + 1.0 / std::sqrt(in.lambda));
            if (!(in.alpha > 0.0 && in.alpha < alpha_cap)) {
                throw std::domain_error("measurement_budget: need alpha < 1/(1+1/sqrt(lambda))");
            }
            const double c_min = 1.0 / std::pow(1.0 - (1.0 + 1.0 / std::sqrt(in.lambda)) * in.alpha, 2);
            if (!(in.C > c_min)) {
                throw std::domain_error("measurement_budget: need C > 1/(1-(1+1/sqrt(lambda))*alpha)^2");
            }
            out.M = static_cast<long>(std::ceil(in.C * in.width_estimate * in.width_estimate));
            out.alpha = in.alpha;
            return out;
        }
        case BudgetScheme::bowling_general: {
            if (!(in.sigma_max > 0.0 && in.sigma_min > 0.0 && in.c0 > 0.0 && in.c1 > 0.0)) {
                throw std::domain_error("measurement_budget: bowling_general needs positive inputs");
            }
            const double ratio = (in.sigma_max * in.sigma_max) / (in.sigma_min * in.sigma_min);
            out.M = static_cast<long>(std::ceil(in.c0 * ratio * in.width_estimate * in.width_estimate));
            out.alpha = in.c1 * in.sigma_min * std::sqrt(static_cast<double>(out.M));
            return out;
        }
        case BudgetScheme::bowling_l1: {
            if (in.J < 1 || in.N < 2 || !(in.v > 0.0) || !(in.sigma_min > 0.0) || !(in.c0 > 0.0) ||
                !(in.c1 > 0.0)) {
                throw std::domain_error("measurement_budget: bowling_l1 needs J>=1, N>=2, positive v, "
                                        "sigma_min, c0, c1");
            }
            out.M = static_cast<long>(std::ceil(in.c0 * (in.v / (in.sigma_min * in.sigma_min)) * in.J *
                                                std::log(static_cast<double>(in.N))));
            out.alpha = in.c1 * in.sigma_min * std::sqrt(static_cast<double>(out.M));
            return out;
        }
    }
    throw std::invalid_argument("measurement_budget: unknown scheme");
}

}  // namespace rwplab
