#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwplab/cs_space.hpp"
#include "rwplab/ensembles.hpp"
#include "rwplab/solvers.hpp"
#include "rwplab/width_rwp.hpp"

namespace rwplab {

struct TrialRecord {
    std::uint64_t seed = 0;
    std::string model;
    int M = 0;
    int N = 0;
    int K = 0;
    double epsilon = 0.0;
    double error_l2 = 0.0;
    double sharp_dist = 0.0;    // sharp_norm(x_nat - a) at the harness atom
    double bound_value = 0.0;   // C0 * sharp_dist + C1 * epsilon
    double slack = 0.0;         // bound_value - error_l2, never clipped
    double rho = 0.0;
    double alpha = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double residual = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    bool flagged = false;       // solver trouble or invalid cell parameters
    bool rwp_violation = false; // the per-operator search found a violation
};

struct SignalGenSpec {
    double atom_scale = 1.0;
    double perturb_sharp = 0.0;  // sharp norm of the off-model perturbation
    bool exact_atom = false;
};

struct RwpSource {
    enum class Type { fixed, rip, budget, searched };
    Type type = Type::fixed;
    double rho = 0.0;
    double alpha = 0.0;
    int rip_J = 0;              // rip: enumerated delta at this support size
    double alpha_safety = 0.5;  // searched: alpha = safety * observed min ratio
    int search_restarts = 8;
    BudgetScheme budget_scheme = BudgetScheme::bowling_l1;
    BudgetInputs budget_inputs;
};

struct SweepConfig {
    std::string name = "forward";
    std::string model = "l1";  // l1 | block
    int block_size = 2;        // block model: contiguous blocks of this size
    int N = 0;
    std::vector<int> M_grid;
    std::vector<int> K_grid;
    std::vector<double> epsilon_grid;
    int trials = 1;
    std::string ensemble = "orthonormalized";
    SignalGenSpec signal;
    RwpSource rwp_source;
    std::uint64_t seed = 0;
    SolverConfig solver;
};

struct CellSummary {
    int M = 0;
    int K = 0;
    double epsilon = 0.0;
    int trials = 0;
    int converged = 0;
    int negative_slack = 0;  // slack < -1e-5
    int rwp_violations = 0;
    double median_error = 0.0;
    double min_slack = 0.0;
    bool skipped = false;
    std::string skip_reason;
};

struct SweepResult {
    std::vector<TrialRecord> rows;
    std::vector<CellSummary> cells;
    SweepConfig config;
};

struct ConverseReport {
    RwpParams params;            // converse_constants(C0, C1)
    RwpReport rwp;
    bool counterexample_built = false;  // violation witness decoded as x_nat
    double counterexample_error = 0.0;
    double counterexample_bound = 0.0;
    bool contradiction = false;  // violation found but the bound still held
    int forward_trials = 0;
    int forward_negative_slack = 0;
};

struct RwpNotRipConfig {
    int N = 200;
    int M = 50;
    std::vector<int> J_list = {20};
    int seeds = 50;
    int K_recovery = 5;
    double recovery_tol = 1e-4;  // relative l2 error for success
    std::uint64_t seed0 = 0;
    SolverConfig solver;
};

struct RwpNotRipReport {
    struct JRow {
        int J = 0;
        double ratio_threshold = 0.0;  // (J+1)/4
        int exceed_count = 0;
        int seeds = 0;
        double delta_lower_bound = 0.0;  // (J-3)/(J+5)
        int implied_K = 0;  // smallest K with no Cai-Zhang window above order J
        bool cz_infeasible_at_implied_K = false;
        bool bound_exceeds_threshold_all_t = false;
        std::vector<double> eigen_ratios;
    };
    RwpNotRipConfig config;
    std::vector<JRow> per_J;
    int K_star = 0;  // largest feasible K in the 1..30 sweep
    std::vector<int> feasible_K;
    int recovery_success = 0;
    int recovery_trials = 0;
};

// One decode with the guarantee evaluated at a = best_atom_approx(x_nat).
TrialRecord run_trial(const CsSpace& space, const SensingOperator& op,
                      const Eigen::VectorXd& x_natural, double epsilon,
                      const Eigen::VectorXd& noise_dir, double c0, double c1,
                      const SolverConfig& solver = {});

SweepResult forward_experiment(const SweepConfig& config);

ConverseReport converse_experiment(double c0, double c1, const CsSpace& space,
                                   const SensingOperator& op, int restarts, std::uint64_t seed,
                                   const SolverConfig& solver = {});

RwpNotRipReport rwp_not_rip_study(const RwpNotRipConfig& config);

// File emission. All writes are atomic (temp file + rename) and byte
// deterministic for fixed inputs.
void write_file_atomic(const std::string& path, const std::string& content);
std::string trials_csv(const std::vector<TrialRecord>& rows);
std::string sweep_summary_json(const SweepResult& result);
std::string sweep_plot_data(const SweepResult& result);  // epsilon vs median error series
std::string rwp_not_rip_json(const RwpNotRipReport& report);
std::string canonical_config_string(const SweepConfig& config);
std::uint64_t fnv1a_hash(const std::string& s);
std::string format_double(double v);  // shortest round-trip decimal, %.17g

}  // namespace rwplab
