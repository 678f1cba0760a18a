#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "rwplab/cs_space.hpp"
#include "rwplab/sensing_operator.hpp"

namespace rwplab {

struct WidthEstimate {
    double mean = 0.0;
    int samples = 0;
    double upper_conf = 0.0;  // mean + sqrt(2 ln(1/(1-conf)) / samples)
    double confidence_level = 0.0;
    double per_sample_solver_tol = 0.0;
};

struct RwpParams {
    double rho = 0.0;
    double alpha = 0.0;
};

enum class RwpVerdict { violation_found, no_violation_found };

struct RwpReport {
    RwpVerdict verdict = RwpVerdict::no_violation_found;
    std::optional<Eigen::VectorXd> witness;  // ||Phi x|| < alpha ||x|| and ||x|| > rho ||x||_sharp
    double min_ratio = 0.0;                  // smallest observed ||Phi x|| / ||x||
    int restarts = 0;
    bool empty_set = false;  // no feasible unit vector found in rho^{-1} B_sharp
};

struct RipReport {
    int J = 0;
    double delta_no_squares = 0.0;
    double delta_squares = 0.0;
    std::vector<int> worst_support;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool sampled = false;  // sampled supports give a lower bound on delta
};

struct CaiZhangResult {
    bool feasible = false;
    std::optional<double> witness_t;
};

enum class BudgetScheme { gordon, bowling_general, bowling_l1 };

struct BudgetInputs {
    double width_estimate = 0.0;  // w(S)
    double lambda = 0.0;          // M/N (gordon)
    double alpha = 0.0;           // target alpha (gordon)
    double C = 0.0;               // gordon constant
    double sigma_max = 0.0;       // bowling_general
    double sigma_min = 0.0;       // bowling schemes
    double c0 = 1.0;
    double c1 = 1.0;
    int J = 0;  // bowling_l1
    int N = 0;  // bowling_l1
    double v = 0.0;  // largest diagonal covariance entry (bowling_l1)
};

struct MeasurementBudget {
    long M = 0;
    double alpha = 0.0;
};

// sup <x,g> over { ||x||_2 <= 1, sharp_norm(x) <= 1/rho }. Exact dual
// bisection for weighted l1 models; projected gradient with Dykstra
// feasibility for the others.
double width_sample(const CsSpace& space, double rho, const Eigen::VectorXd& g,
                    double solver_tol = 1e-6);

// Monte Carlo Gaussian width of rho^{-1} B_sharp intersected with the unit
// sphere, with a Lipschitz-concentration upper confidence bound. Sample i
// uses substream (seed, i); the mean reduces in index order.
WidthEstimate gaussian_width_mc(const CsSpace& space, double rho, int samples, double confidence,
                                std::uint64_t seed);

// c * sqrt(J * ln(c N / J)); requires c N / J > 1.
double analytic_width_bound_l1(int J, int N, double c);

// Monte Carlo estimate of the dominating quantity 2 E ||g_J||_2 (top-J
// coordinate energy of a standard Gaussian in R^N).
double l1_width_dominating_mc(int J, int N, int samples, std::uint64_t seed);

// Heuristic violation search: minimize ||Phi x||_2 over the feasible set
// rho^{-1} B_sharp intersect S by projected gradient from random feasible
// starts. Evidence only, never a certificate.
RwpReport rwp_search(const SensingOperator& op, const CsSpace& space, const RwpParams& params,
                     int restarts, std::uint64_t seed);

// Enumerate all supports of size J (guard: C(N,J) <= 1e6) and report the
// tightest restricted isometry constants in both conventions.
RipReport rip_enumerate(const SensingOperator& op, int J);

// Random-support variant; the reported constants are lower bounds.
RipReport rip_sample(const SensingOperator& op, int J, int samples, std::uint64_t seed);

// rho = 3/sqrt(J), alpha = 1/3 - delta; requires delta < 1/3 (no-squares
// convention).
RwpParams rip_to_rwp(int J, double delta);

// C0 = 4 rho, C1 = 2/alpha; requires rho <= 1/(4L).
std::pair<double, double> guarantee_constants(const RwpParams& params, double L);

// rho = 2 C0, alpha = 1/(2 C1).
RwpParams converse_constants(double c0, double c1);

// Sweeps t over [4/3, 1e4] for a t with (tK-3)/(tK+5) < sqrt((t-1)/t).
CaiZhangResult cai_zhang_feasible(int K, double t_grid_resolution = 1e-2);

// Like cai_zhang_feasible but restricted to t with t*K >= min_order.
CaiZhangResult cai_zhang_feasible_above(int K, int min_order, double t_grid_resolution = 1e-2);

MeasurementBudget measurement_budget(BudgetScheme scheme, const BudgetInputs& inputs);

}  // namespace rwplab
