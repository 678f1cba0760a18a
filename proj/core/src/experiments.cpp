#include "rwplab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rwplab/rng.hpp"
#include "rwplab/version.hpp"

namespace rwplab {

namespace {

using nlohmann::json;

Eigen::VectorXd gaussian_vector(int n, CounterRng& rng) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
    return g;
}

CsSpace make_space(const SweepConfig& config, int K) {
    if (config.model == "l1") return CsSpace::l1(config.N, K);
    if (config.model == "block") {
        std::vector<std::vector<int>> blocks;
        for (int start = 0; start < config.N; start += config.block_size) {
            std::vector<int> b;
            for (int i = start; i < std::min(config.N, start + config.block_size); ++i) b.push_back(i);
            blocks.push_back(std::move(b));
        }
        return CsSpace::block(std::move(blocks), config.N, K);
    }
    throw std::invalid_argument("forward_experiment: unsupported sweep model '" + config.model + "'");
}

Eigen::VectorXd make_signal(const CsSpace& space, const SignalGenSpec& gen, CounterRng& rng) {
    const Eigen::VectorXd raw = gaussian_vector(space.ambient_dim(), rng);
    Eigen::VectorXd x = gen.atom_scale * best_atom_approx(space, raw);
    if (!gen.exact_atom && gen.perturb_sharp > 0.0) {
        Eigen::VectorXd p = gaussian_vector(space.ambient_dim(), rng);
        const double s = sharp_norm(space, p);
        if (s > 0.0) x += (gen.perturb_sharp / s) * p;
    }
    return x;
}

struct CellParams {
    double rho = 0.0;
    double alpha = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    bool valid = false;
    bool rwp_violation = false;
    std::string note;
};

CellParams resolve_params(const RwpSource& src, const CsSpace& space, const SensingOperator& op,
                          std::uint64_t seed) {
    CellParams out;
    const double L = space.bound_L();
    try {
        switch (src.type) {
            case RwpSource::Type::fixed: {
                out.rho = src.rho;
                out.alpha = src.alpha;
                break;
            }
            case RwpSource::Type::rip: {
                const RipReport rip = rip_enumerate(op, src.rip_J);
                if (rip.delta_no_squares >= 1.0 / 3.0) {
                    out.note = "enumerated delta >= 1/3";
                    return out;
                }
                const RwpParams p = rip_to_rwp(src.rip_J, rip.delta_no_squares);
                out.rho = p.rho;
                out.alpha = p.alpha;
                break;
            }
            case RwpSource::Type::searched: {
                out.rho = src.rho > 0.0 ? src.rho : 1.0 / (4.0 * L);
                // Measurement pass: alpha ~ 0 never certifies, so the report
                // carries the observed min ratio over the feasible set. The
                // derived alpha sits strictly below every observed ratio,
                // which is exactly the sense in which the search validates it.
                const RwpReport rep =
                    rwp_search(op, space, RwpParams{out.rho, 1e-12}, src.search_restarts, seed);
                if (rep.verdict == RwpVerdict::violation_found) {
                    out.rwp_violation = true;
                    out.note = "rwp_search found a violation";
                    return out;
                }
                if (rep.empty_set) {
                    out.alpha = 1.0;  // vacuous RWP: the feasible set is empty
                } else {
                    out.alpha = src.alpha_safety * rep.min_ratio;
                }
                if (!(out.alpha > 0.0)) {
                    out.note = "searched alpha is zero";
                    return out;
                }
                break;
            }
            case RwpSource::Type::budget: {
                const MeasurementBudget b = measurement_budget(src.budget_scheme, src.budget_inputs);
                out.rho = src.rho > 0.0
                              ? src.rho
                              : (src.budget_inputs.J > 0
                                     ? 1.0 / std::sqrt(static_cast<double>(src.budget_inputs.J))
                                     : 0.0);
                out.alpha = b.alpha;
                break;
            }
        }
        const auto [c0, c1] = guarantee_constants(RwpParams{out.rho, out.alpha}, L);
        out.c0 = c0;
        out.c1 = c1;
        out.valid = true;
    } catch (const std::exception& e) {
        out.note = e.what();
        out.valid = false;
    }
    return out;
}

}  // namespace

TrialRecord run_trial(const CsSpace& space, const SensingOperator& op,
                      const Eigen::VectorXd& x_natural, double epsilon,
                      const Eigen::VectorXd& noise_dir, double c0, double c1,
                      const SolverConfig& solver) {
    if (noise_dir.size() != op.rows()) throw std::invalid_argument("run_trial: noise length mismatch");
    if (noise_dir.norm() > 1.0 + 1e-12) {
        throw std::invalid_argument("run_trial: noise direction must lie in the unit ball");
    }
    TrialRecord rec;
    rec.model = to_string(space.model());
    rec.M = op.rows();
    rec.N = space.ambient_dim();
    rec.K = space.sparsity_level();
    rec.epsilon = epsilon;
    rec.c0 = c0;
    rec.c1 = c1;
    rec.seed = op.seed();

    DecodeProblem problem{space, op, op.forward(x_natural) + epsilon * noise_dir, epsilon};
    const DecodeResult res = decode(problem, solver);
    const Eigen::VectorXd a = best_atom_approx(space, x_natural);
    rec.sharp_dist = sharp_norm(space, x_natural - a);
    rec.bound_value = c0 * rec.sharp_dist + c1 * epsilon;
    rec.error_l2 = space.l2_norm(res.x_star - x_natural);
    rec.slack = rec.bound_value - rec.error_l2;
    rec.residual = res.residual;
    rec.objective = res.objective;
    rec.iterations = res.iterations;
    rec.converged = res.converged;
    rec.flagged = !res.converged;
    return rec;
}

SweepResult forward_experiment(const SweepConfig& config) {
    if (config.M_grid.empty() || config.K_grid.empty() || config.epsilon_grid.empty()) {
        throw std::invalid_argument("forward_experiment: empty grid");
    }
    if (config.trials < 1) throw std::invalid_argument("forward_experiment: trials must be >= 1");
    SweepResult result;
    result.config = config;

    std::uint64_t cell_index = 0;
    for (int M : config.M_grid) {
        for (int K : config.K_grid) {
            const CsSpace space = make_space(config, K);
            for (double eps : config.epsilon_grid) {
                CellSummary cell;
                cell.M = M;
                cell.K = K;
                cell.epsilon = eps;
                std::vector<double> errors;
                std::vector<double> slacks;
                for (int t = 0; t < config.trials; ++t) {
                    const std::uint64_t stream = cell_index * config.trials + t;
                    const std::uint64_t op_seed =
                        config.seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
                    EnsembleSpec spec{config.ensemble, M, config.N, std::nullopt, op_seed};
                    const SensingOperator op = make_ensemble(spec);
                    const CellParams params = resolve_params(config.rwp_source, space, op, op_seed);

                    CounterRng rng(config.seed, stream);
                    const Eigen::VectorXd x_nat = make_signal(space, config.signal, rng);
                    Eigen::VectorXd noise = gaussian_vector(M, rng);
                    const double nn = noise.norm();
                    if (nn > 0.0) noise /= nn;

                    if (!params.valid) {
                        TrialRecord rec;
                        rec.model = to_string(space.model());
                        rec.M = M;
                        rec.N = config.N;
                        rec.K = K;
                        rec.epsilon = eps;
                        rec.seed = op_seed;
                        rec.flagged = true;
                        rec.rwp_violation = params.rwp_violation;
                        result.rows.push_back(rec);
                        if (params.rwp_violation) ++cell.rwp_violations;
                        cell.skip_reason = params.note;
                        ++cell.trials;
                        continue;
                    }
                    TrialRecord rec = run_trial(space, op, x_nat, eps, noise, params.c0, params.c1,
                                                config.solver);
                    rec.seed = op_seed;
                    rec.rho = params.rho;
                    rec.alpha = params.alpha;
                    result.rows.push_back(rec);
                    ++cell.trials;
                    if (rec.converged) ++cell.converged;
                    // Every executed trial counts toward the slack statistics,
                    // converged or not; a negative slack is never dropped.
                    errors.push_back(rec.error_l2);
                    slacks.push_back(rec.slack);
                    if (rec.slack < -1e-5) ++cell.negative_slack;
                }
                if (!errors.empty()) {
                    std::vector<double> sorted = errors;
                    std::sort(sorted.begin(), sorted.end());
                    cell.median_error = sorted[sorted.size() / 2];
                    cell.min_slack = *std::min_element(slacks.begin(), slacks.end());
                } else {
                    cell.skipped = true;
                }
                result.cells.push_back(std::move(cell));
                ++cell_index;
            }
        }
    }
    return result;
}

ConverseReport converse_experiment(double c0, double c1, const CsSpace& space,
                                   const SensingOperator& op, int restarts, std::uint64_t seed,
                                   const SolverConfig& solver) {
    ConverseReport report;
    report.params = converse_constants(c0, c1);
    report.rwp = rwp_search(op, space, report.params, restarts, seed);

    if (report.rwp.verdict == RwpVerdict::violation_found) {
        // The witness is a concrete bad signal: with epsilon = alpha ||x||
        // and no noise, zero is feasible and optimal, so the recovery bound
        // at a = 0 must fail if the converse direction is correct.
        const Eigen::VectorXd x_nat = *report.rwp.witness;
        const double eps = report.params.alpha * x_nat.norm();
        DecodeProblem problem{space, op, op.forward(x_nat), eps};
        const DecodeResult res = decode(problem, solver);
        report.counterexample_built = true;
        report.counterexample_error = space.l2_norm(res.x_star - x_nat);
        report.counterexample_bound = c0 * sharp_norm(space, x_nat) + c1 * eps;
        report.contradiction = report.counterexample_error <= report.counterexample_bound;
    }

    // Forward probes at the same constants on in-model signals.
    const int probes = 10;
    report.forward_trials = probes;
    for (int t = 0; t < probes; ++t) {
        CounterRng rng(seed, 5000 + t);
        const Eigen::VectorXd x_nat = best_atom_approx(space, gaussian_vector(space.ambient_dim(), rng));
        Eigen::VectorXd noise = gaussian_vector(op.rows(), rng);
        const double nn = noise.norm();
        if (nn > 0.0) noise /= nn;
        const TrialRecord rec = run_trial(space, op, x_nat, 0.0, noise, c0, c1, solver);
        if (!rec.flagged && rec.slack < -1e-5) ++report.forward_negative_slack;
    }
    return report;
}

RwpNotRipReport rwp_not_rip_study(const RwpNotRipConfig& config) {
    RwpNotRipReport report;
    report.config = config;

    for (int J : config.J_list) {
        RwpNotRipReport::JRow row;
        row.J = J;
        row.seeds = config.seeds;
        row.ratio_threshold = (J + 1.0) / 4.0;
        row.delta_lower_bound = (J - 3.0) / (J + 5.0);
        for (int s = 0; s < config.seeds; ++s) {
            const SensingOperator phi = spiked_ensemble(config.N, config.M, config.seed0 + s);
            const Eigen::MatrixXd sub = phi.matrix().leftCols(J);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub.transpose() * sub);
            const double ratio = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
            row.eigen_ratios.push_back(ratio);
            if (ratio > row.ratio_threshold) ++row.exceed_count;
        }
        // Smallest K whose Cai-Zhang window closes once the RIP order must be
        // at least J (the spike degrades every support of that size or more).
        int implied = 1;
        while (implied <= 64 && cai_zhang_feasible_above(implied, J).feasible) ++implied;
        row.implied_K = implied;
        row.cz_infeasible_at_implied_K = !cai_zhang_feasible(implied).feasible;
        bool all_t = true;
        for (double t = 4.0 / 3.0; t <= 1e4; t += 1e-2) {
            const double lhs = (t * implied - 3.0) / (t * implied + 5.0);
            const double rhs = std::sqrt((t - 1.0) / t);
            if (lhs < rhs) {
                all_t = false;
                break;
            }
        }
        row.bound_exceeds_threshold_all_t = all_t;
        report.per_J.push_back(std::move(row));
    }

    for (int K = 1; K <= 30; ++K) {
        if (cai_zhang_feasible(K).feasible) {
            report.feasible_K.push_back(K);
            report.K_star = K;
        }
    }

    const CsSpace space = CsSpace::l1(config.N, config.K_recovery);
    report.recovery_trials = config.seeds;
    for (int s = 0; s < config.seeds; ++s) {
        const SensingOperator phi = spiked_ensemble(config.N, config.M, config.seed0 + 1000 + s);
        CounterRng rng(config.seed0, 90000 + s);
        Eigen::VectorXd x_nat = Eigen::VectorXd::Zero(config.N);
        // Random support of size K with unit Gaussian values.
        std::vector<int> pool(config.N);
        for (int i = 0; i < config.N; ++i) pool[i] = i;
        for (int i = 0; i < config.K_recovery; ++i) {
            const auto j = i + static_cast<int>(rng.next_below(config.N - i));
            std::swap(pool[i], pool[j]);
            x_nat(pool[i]) = rng.next_gaussian();
        }
        DecodeProblem problem{space, phi, phi.forward(x_nat), 0.0};
        const DecodeResult res = decode(problem, config.solver);
        const double rel = (res.x_star - x_nat).norm() / std::max(1e-300, x_nat.norm());
        if (rel <= config.recovery_tol) ++report.recovery_success;
    }
    return report;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os << content;
        if (!os) throw std::runtime_error("write failed on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("rename failed for " + path);
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trials_csv(const std::vector<TrialRecord>& rows) {
    std::ostringstream os;
    os << "seed,model,M,N,K,epsilon,error_l2,sharp_dist,bound_value,slack,rho,alpha,C0,C1,"
          "residual,objective,iterations,converged,flagged,rwp_violation\n";
    for (const auto& r : rows) {
        os << r.seed << ',' << r.model << ',' << r.M << ',' << r.N << ',' << r.K << ','
           << format_double(r.epsilon) << ',' << format_double(r.error_l2) << ','
           << format_double(r.sharp_dist) << ',' << format_double(r.bound_value) << ','
           << format_double(r.slack) << ',' << format_double(r.rho) << ','
           << format_double(r.alpha) << ',' << format_double(r.c0) << ',' << format_double(r.c1)
           << ',' << format_double(r.residual) << ',' << format_double(r.objective) << ','
           << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.flagged ? 1 : 0) << ','
           << (r.rwp_violation ? 1 : 0) << '\n';
    }
    return os.str();
}

namespace {

json config_json(const SweepConfig& c) {
    json j;
    j["name"] = c.name;
    j["model"] = c.model;
    j["block_size"] = c.block_size;
    j["N"] = c.N;
    j["M_grid"] = c.M_grid;
    j["K_grid"] = c.K_grid;
    j["epsilon_grid"] = c.epsilon_grid;
    j["trials"] = c.trials;
    j["ensemble"] = c.ensemble;
    j["signal"] = {{"atom_scale", c.signal.atom_scale},
                   {"perturb_sharp", c.signal.perturb_sharp},
                   {"exact_atom", c.signal.exact_atom}};
    const char* src = "fixed";
    if (c.rwp_source.type == RwpSource::Type::rip) src = "rip";
    if (c.rwp_source.type == RwpSource::Type::budget) src = "budget";
    if (c.rwp_source.type == RwpSource::Type::searched) src = "searched";
    j["rwp_source"] = {{"type", src},
                       {"rho", c.rwp_source.rho},
                       {"alpha", c.rwp_source.alpha},
                       {"rip_J", c.rwp_source.rip_J},
                       {"alpha_safety", c.rwp_source.alpha_safety},
                       {"search_restarts", c.rwp_source.search_restarts}};
    j["seed"] = c.seed;
    j["solver"] = {{"max_iters", c.solver.max_iters},
                   {"tol_primal", c.solver.tol_primal},
                   {"tol_dual", c.solver.tol_dual},
                   {"tau", c.solver.tau},
                   {"mu", c.solver.mu}};
    return j;
}

}  // namespace

std::string canonical_config_string(const SweepConfig& config) {
    return config_json(config).dump();
}

std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string sweep_summary_json(const SweepResult& result) {
    json j;
    j["format"] = "rwplab-sweep-summary";
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["config"] = config_json(result.config);
    j["config_hash"] = fnv1a_hash(canonical_config_string(result.config));
    j["seed"] = result.config.seed;
    json cells = json::array();
    for (const auto& c : result.cells) {
        cells.push_back({{"M", c.M},
                         {"K", c.K},
                         {"epsilon", c.epsilon},
                         {"trials", c.trials},
                         {"converged", c.converged},
                         {"negative_slack", c.negative_slack},
                         {"rwp_violations", c.rwp_violations},
                         {"median_error", c.median_error},
                         {"min_slack", c.min_slack},
                         {"skipped", c.skipped},
                         {"skip_reason", c.skip_reason}});
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

std::string sweep_plot_data(const SweepResult& result) {
    std::ostringstream os;
    for (int M : result.config.M_grid) {
        for (int K : result.config.K_grid) {
            os << "# series M=" << M << " K=" << K << " (epsilon, median_error)\n";
            for (const auto& c : result.cells) {
                if (c.M == M && c.K == K && !c.skipped) {
                    os << format_double(c.epsilon) << ' ' << format_double(c.median_error) << '\n';
                }
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string rwp_not_rip_json(const RwpNotRipReport& report) {
    json j;
    j["format"] = "rwplab-rwp-not-rip";
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["config"] = {{"N", report.config.N},
                   {"M", report.config.M},
                   {"J_list", report.config.J_list},
                   {"seeds", report.config.seeds},
                   {"K_recovery", report.config.K_recovery},
                   {"recovery_tol", report.config.recovery_tol},
                   {"seed0", report.config.seed0}};
    json rows = json::array();
    for (const auto& r : report.per_J) {
        rows.push_back({{"J", r.J},
                        {"ratio_threshold", r.ratio_threshold},
                        {"exceed_count", r.exceed_count},
                        {"seeds", r.seeds},
                        {"delta_lower_bound", r.delta_lower_bound},
                        {"implied_K", r.implied_K},
                        {"cz_infeasible_at_implied_K", r.cz_infeasible_at_implied_K},
                        {"bound_exceeds_threshold_all_t", r.bound_exceeds_threshold_all_t},
                        {"eigen_ratios", r.eigen_ratios}});
    }
    j["per_J"] = rows;
    j["K_star"] = report.K_star;
    j["feasible_K"] = report.feasible_K;
    j["recovery_success"] = report.recovery_success;
    j["recovery_trials"] = report.recovery_trials;
    return j.dump(2) + "\n";
}

}  // namespace rwplab
