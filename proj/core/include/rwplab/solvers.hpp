#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rwplab/cs_space.hpp"
#include "rwplab/sensing_operator.hpp"

namespace rwplab {

struct DecodeProblem {
    CsSpace space;
    SensingOperator op;
    Eigen::VectorXd y;
    double epsilon = 0.0;
};

struct SolverConfig {
    int max_iters = 5000;
    double tol_primal = 1e-7;  // relative to max(1, ||y||_2)
    double tol_dual = 1e-7;
    double tau = 1.0;    // penalty
    double mu = 0.0;     // linearization step; 0 selects 0.9 * tau / ||Phi||_2^2
    bool record_history = false;
};

struct DecodeResult {
    Eigen::VectorXd x_star;
    double residual = 0.0;   // ||Phi x* - y||_2
    double objective = 0.0;  // sharp_norm(x*)
    int iterations = 0;
    bool converged = false;
    std::vector<double> primal_history;  // filled when record_history is set
};

// argmin_u 0.5 ||u - v||^2 + t * sharp_norm(u). Closed form for weighted l1
// (entrywise soft threshold at t*w_i), block sparsity (block shrinkage), and
// low rank (singular value soft threshold); the total variation case is
// solved by dual ascent on edge variables to tolerance 1e-8 with step
// 1/(2*Delta).
Eigen::VectorXd prox_sharp(const CsSpace& space, const Eigen::VectorXd& v, double t);

Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& u, const Eigen::VectorXd& center,
                                double radius);

// Euclidean projection onto { x : sharp_norm(x) <= radius }.
Eigen::VectorXd project_sharp_ball(const CsSpace& space, const Eigen::VectorXd& x, double radius);

// One element of the sharp-norm subdifferential at x (search heuristic
// helper; any valid subgradient is acceptable).
Eigen::VectorXd sharp_subgradient(const CsSpace& space, const Eigen::VectorXd& x);

// Constrained decoder argmin sharp_norm(x) s.t. ||Phi x - y||_2 <= epsilon,
// by linearized ADMM with x-updates through prox_sharp and z-updates through
// project_l2_ball. epsilon = 0 degenerates the ball to {y}. The returned
// point is corrected onto the constraint set, so converged results satisfy
// residual <= epsilon * (1 + 1e-6) + 1e-9.
DecodeResult decode(const DecodeProblem& problem, const SolverConfig& config = {});

namespace detail {
// Total variation proximal solve with warm-started edge duals; p has one
// entry per edge and is updated in place.
Eigen::VectorXd tv_prox(const GraphGradientParams& graph, const Eigen::VectorXd& v, double t,
                        Eigen::VectorXd& p, double tol = 1e-8);
}  // namespace detail

}  // namespace rwplab
