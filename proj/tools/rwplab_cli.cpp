// Command-line front end: decode, width estimation, RWP/RIP analysis,
// Grassmannian checks, experiment sweeps, and constant conversions with
// deterministic seeding and machine-readable output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rwplab/cs_space.hpp"
#include "rwplab/ensembles.hpp"
#include "rwplab/experiments.hpp"
#include "rwplab/grassmann.hpp"
#include "rwplab/sensing_operator.hpp"
#include "rwplab/solvers.hpp"
#include "rwplab/version.hpp"
#include "rwplab/width_rwp.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitGuardError = 2;
constexpr int kExitNoConvergence = 3;

struct CommonOpts {
    std::uint64_t seed = 0;  // documented default, never wall clock
    std::string out;
    std::string format = "json";
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "Deterministic seed (default 0)");
    cmd->add_option("--out", opts.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", opts.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--threads", opts.threads, "Worker cap (RWPLAB_THREADS fallback)");
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("RWPLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

double safe_number(double v) { return std::isfinite(v) ? v : 0.0; }

json envelope(const std::string& subcommand, const CommonOpts& opts, json config_echo) {
    json j;
    j["format"] = "rwplab-result";
    j["schema_version"] = rwplab::kSchemaVersion;
    j["tool_version"] = rwplab::kToolVersion;
    j["subcommand"] = subcommand;
    j["seed"] = opts.seed;
    j["threads"] = resolve_threads(opts.threads);
    j["config"] = std::move(config_echo);
    return j;
}

std::string render_csv(const json& j, const std::string& prefix = "") {
    std::ostringstream os;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            os << render_csv(*it, key);
        } else if (it->is_array()) {
            os << key << ',';
            for (size_t i = 0; i < it->size(); ++i) os << (i ? ";" : "") << (*it)[i].dump();
            os << '\n';
        } else {
            os << key << ',' << it->dump() << '\n';
        }
    }
    return os.str();
}

void emit(const json& j, const CommonOpts& opts) {
    const std::string body = opts.format == "csv" ? render_csv(j) : j.dump(2) + "\n";
    if (opts.out.empty()) {
        std::cout << body;
    } else {
        rwplab::write_file_atomic(opts.out, body);
    }
}

struct ModelOpts {
    std::string model = "l1";
    int K = 1;
    int N = 0;
    int block_size = 2;
    int rows = 0;
    int cols = 0;
    std::string weights_path;
    std::string graph_path;
};

void add_model(CLI::App* cmd, ModelOpts& opts, bool need_n) {
    cmd->add_option("--model", opts.model, "Signal model: l1, weighted, block, gradient, lowrank")
        ->check(CLI::IsMember({"l1", "weighted", "block", "gradient", "lowrank"}));
    cmd->add_option("--K", opts.K, "Sparsity level (default 1)");
    auto* n = cmd->add_option("--N", opts.N, "Ambient dimension");
    if (need_n) n->required();
    cmd->add_option("--block-size", opts.block_size, "Uniform block size for the block model");
    cmd->add_option("--rows", opts.rows, "Matrix rows for the lowrank model");
    cmd->add_option("--cols", opts.cols, "Matrix cols for the lowrank model");
    cmd->add_option("--weights", opts.weights_path, "Weight file, one positive value per line");
    cmd->add_option("--graph", opts.graph_path,
                    "Graph file: first line vertex count, then one 'i j' edge per line");
}

rwplab::CsSpace build_space(const ModelOpts& opts, int dim_hint) {
    const int n = opts.N > 0 ? opts.N : dim_hint;
    if (opts.model == "l1") return rwplab::CsSpace::l1(n, opts.K);
    if (opts.model == "weighted") {
        if (opts.weights_path.empty()) throw std::invalid_argument("weighted model needs --weights");
        return rwplab::CsSpace::weighted(rwplab::read_vector_text(opts.weights_path), opts.K);
    }
    if (opts.model == "block") {
        std::vector<std::vector<int>> blocks;
        for (int start = 0; start < n; start += opts.block_size) {
            std::vector<int> b;
            for (int i = start; i < std::min(n, start + opts.block_size); ++i) b.push_back(i);
            blocks.push_back(std::move(b));
        }
        return rwplab::CsSpace::block(std::move(blocks), n, opts.K);
    }
    if (opts.model == "gradient") {
        if (opts.graph_path.empty()) throw std::invalid_argument("gradient model needs --graph");
        std::ifstream is(opts.graph_path);
        if (!is) throw std::invalid_argument("cannot open " + opts.graph_path);
        int vertices = 0;
        is >> vertices;
        std::vector<std::pair<int, int>> edges;
        int a, b;
        while (is >> a >> b) edges.emplace_back(a, b);
        return rwplab::CsSpace::gradient(vertices, std::move(edges), opts.K);
    }
    if (opts.model == "lowrank") {
        if (opts.rows < 1 || opts.cols < 1) throw std::invalid_argument("lowrank model needs --rows/--cols");
        return rwplab::CsSpace::low_rank(opts.rows, opts.cols, opts.K);
    }
    throw std::invalid_argument("unknown model " + opts.model);
}

struct OperatorOpts {
    std::string matrix_path;
    std::string ensemble;
    int M = 0;
    int N = 0;
    std::uint64_t op_seed = 0;
};

void add_operator(CLI::App* cmd, OperatorOpts& opts) {
    cmd->add_option("--matrix", opts.matrix_path, "Operator container file");
    cmd->add_option("--ensemble", opts.ensemble,
                    "Generate instead of loading: gaussian_iid, orthonormalized, spiked, "
                    "subsampled_trig");
    cmd->add_option("--M", opts.M, "Rows for a generated operator");
    cmd->add_option("--op-N", opts.N, "Columns for a generated operator");
    cmd->add_option("--op-seed", opts.op_seed, "Seed for a generated operator");
}

rwplab::SensingOperator build_operator(const OperatorOpts& opts, int n_hint) {
    if (!opts.matrix_path.empty()) return rwplab::SensingOperator::load(opts.matrix_path);
    if (opts.ensemble.empty()) {
        throw std::invalid_argument("need either --matrix or --ensemble");
    }
    rwplab::EnsembleSpec spec;
    spec.kind = opts.ensemble;
    spec.M = opts.M;
    spec.N = opts.N > 0 ? opts.N : n_hint;
    spec.seed = opts.op_seed;
    return rwplab::make_ensemble(spec);
}

json model_echo(const ModelOpts& m) {
    return json{{"model", m.model}, {"K", m.K},    {"N", m.N},       {"block_size", m.block_size},
                {"rows", m.rows},   {"cols", m.cols}, {"weights", m.weights_path},
                {"graph", m.graph_path}};
}

json operator_echo(const OperatorOpts& o) {
    return json{{"matrix", o.matrix_path},
                {"ensemble", o.ensemble},
                {"M", o.M},
                {"N", o.N},
                {"op_seed", o.op_seed}};
}

rwplab::SweepConfig sweep_from_json(const json& j) {
    rwplab::SweepConfig c;
    c.name = j.value("name", std::string("forward"));
    c.model = j.value("model", std::string("l1"));
    c.block_size = j.value("block_size", 2);
    c.N = j.at("N").get<int>();
    c.M_grid = j.at("M_grid").get<std::vector<int>>();
    c.K_grid = j.at("K_grid").get<std::vector<int>>();
    c.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    c.trials = j.value("trials", 1);
    c.ensemble = j.value("ensemble", std::string("orthonormalized"));
    if (j.contains("signal")) {
        c.signal.atom_scale = j["signal"].value("atom_scale", 1.0);
        c.signal.perturb_sharp = j["signal"].value("perturb_sharp", 0.0);
        c.signal.exact_atom = j["signal"].value("exact_atom", false);
    }
    if (j.contains("rwp_source")) {
        const auto& s = j["rwp_source"];
        const std::string type = s.value("type", std::string("fixed"));
        if (type == "fixed") c.rwp_source.type = rwplab::RwpSource::Type::fixed;
        else if (type == "rip") c.rwp_source.type = rwplab::RwpSource::Type::rip;
        else if (type == "budget") c.rwp_source.type = rwplab::RwpSource::Type::budget;
        else if (type == "searched") c.rwp_source.type = rwplab::RwpSource::Type::searched;
        else throw std::invalid_argument("unknown rwp_source type " + type);
        c.rwp_source.rho = s.value("rho", 0.0);
        c.rwp_source.alpha = s.value("alpha", 0.0);
        c.rwp_source.rip_J = s.value("rip_J", 0);
        c.rwp_source.alpha_safety = s.value("alpha_safety", 0.5);
        c.rwp_source.search_restarts = s.value("search_restarts", 8);
    }
    c.seed = j.value("seed", 0ULL);
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        c.solver.max_iters = s.value("max_iters", 5000);
        c.solver.tol_primal = s.value("tol_primal", 1e-7);
        c.solver.tol_dual = s.value("tol_dual", 1e-7);
        c.solver.tau = s.value("tau", 1.0);
        c.solver.mu = s.value("mu", 0.0);
    }
    return c;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"compressed sensing laboratory: decoder, widths, RWP/RIP analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rwplab::kToolVersion);

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "Sharp-norm decoder with an l2 ball constraint");
    CommonOpts decode_common;
    ModelOpts decode_model;
    OperatorOpts decode_op;
    std::string y_path;
    double decode_eps = 0.0;
    int decode_max_iters = 5000;
    double decode_tol = 1e-7;
    add_common(decode_cmd, decode_common);
    add_model(decode_cmd, decode_model, false);
    add_operator(decode_cmd, decode_op);
    decode_cmd->add_option("--y", y_path, "Measurement file, one value per line")->required();
    decode_cmd->add_option("--eps", decode_eps, "Noise radius epsilon");
    decode_cmd->add_option("--max-iters", decode_max_iters, "Iteration cap");
    decode_cmd->add_option("--tol", decode_tol, "Primal/dual tolerance");

    // width
    auto* width_cmd = app.add_subcommand("width", "Monte Carlo Gaussian width estimate");
    CommonOpts width_common;
    ModelOpts width_model;
    double width_rho = 0.0;
    double width_rho_inv = 0.0;
    int width_samples = 10000;
    double width_confidence = 0.95;
    add_common(width_cmd, width_common);
    add_model(width_cmd, width_model, true);
    width_cmd->add_option("--rho", width_rho, "RWP radius rho");
    width_cmd->add_option("--rho-inv", width_rho_inv, "Sharp ball radius 1/rho");
    width_cmd->add_option("--samples", width_samples, "Sample count");
    width_cmd->add_option("--confidence", width_confidence, "Upper confidence level");

    // rwp
    auto* rwp_cmd = app.add_subcommand("rwp", "Robust width violation search");
    CommonOpts rwp_common;
    ModelOpts rwp_model;
    OperatorOpts rwp_op;
    double rwp_rho = 0.0;
    double rwp_alpha = 0.0;
    int rwp_restarts = 16;
    add_common(rwp_cmd, rwp_common);
    add_model(rwp_cmd, rwp_model, false);
    add_operator(rwp_cmd, rwp_op);
    rwp_cmd->add_option("--rho", rwp_rho, "RWP radius rho")->required();
    rwp_cmd->add_option("--alpha", rwp_alpha, "RWP threshold alpha")->required();
    rwp_cmd->add_option("--restarts", rwp_restarts, "Search restarts");

    // rip
    auto* rip_cmd = app.add_subcommand("rip", "Restricted isometry constants by support enumeration");
    CommonOpts rip_common;
    OperatorOpts rip_op;
    int rip_j = 1;
    int rip_samples = 0;
    add_common(rip_cmd, rip_common);
    add_operator(rip_cmd, rip_op);
    rip_cmd->add_option("--J", rip_j, "Support size")->required();
    rip_cmd->add_option("--samples", rip_samples, "Sample supports instead of enumerating");

    // grassmann
    auto* grass_cmd = app.add_subcommand("grassmann", "Null-space neighborhood width-property harness");
    CommonOpts grass_common;
    ModelOpts grass_model;
    OperatorOpts grass_op;
    double grass_rho = 0.0;
    double grass_alpha = 0.0;
    int grass_trials = 50;
    add_common(grass_cmd, grass_common);
    add_model(grass_cmd, grass_model, false);
    add_operator(grass_cmd, grass_op);
    grass_cmd->add_option("--rho", grass_rho, "Width property radius rho")->required();
    grass_cmd->add_option("--alpha", grass_alpha, "Gap ball radius alpha")->required();
    grass_cmd->add_option("--trials", grass_trials, "Nearby subspaces to sample");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Run a configured experiment");
    CommonOpts exp_common;
    std::string exp_config_path;
    std::string exp_out_dir = ".";
    add_common(exp_cmd, exp_common);
    exp_cmd->add_option("--config", exp_config_path, "JSON experiment config")->required();
    exp_cmd->add_option("--out-dir", exp_out_dir, "Directory for CSV/JSON/plot outputs");

    // convert-constants
    auto* conv_cmd = app.add_subcommand("convert-constants", "Constant conversions between RWP, RIP, "
                                                             "and recovery guarantees");
    CommonOpts conv_common;
    bool conv_from_rip = false;
    bool conv_forward = false;
    bool conv_converse = false;
    int conv_j = 0;
    double conv_delta = 0.0;
    double conv_rho = 0.0, conv_alpha = 0.0, conv_l = 0.0, conv_c0 = 0.0, conv_c1 = 0.0;
    add_common(conv_cmd, conv_common);
    conv_cmd->add_flag("--from-rip", conv_from_rip, "RIP constant to RWP parameters");
    conv_cmd->add_flag("--forward", conv_forward, "RWP parameters to guarantee constants");
    conv_cmd->add_flag("--converse", conv_converse, "Guarantee constants to RWP parameters");
    conv_cmd->add_option("--J", conv_j, "Support size (from-rip)");
    conv_cmd->add_option("--delta", conv_delta, "No-squares RIP constant (from-rip)");
    conv_cmd->add_option("--rho", conv_rho, "RWP rho (forward)");
    conv_cmd->add_option("--alpha", conv_alpha, "RWP alpha (forward)");
    conv_cmd->add_option("--L", conv_l, "CS space bound L (forward)");
    conv_cmd->add_option("--C0", conv_c0, "Stability constant (converse)");
    conv_cmd->add_option("--C1", conv_c1, "Robustness constant (converse)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // usage text on the diagnostic stream
        return kExitInputError;
    }

    if (decode_cmd->parsed()) {
        const Eigen::VectorXd y = rwplab::read_vector_text(y_path);
        const rwplab::SensingOperator op = build_operator(decode_op, 0);
        const rwplab::CsSpace space = build_space(decode_model, op.cols());
        rwplab::SolverConfig solver;
        solver.max_iters = decode_max_iters;
        solver.tol_primal = solver.tol_dual = decode_tol;
        const rwplab::DecodeResult res =
            rwplab::decode(rwplab::DecodeProblem{space, op, y, decode_eps}, solver);
        json config = {{"y", y_path}, {"eps", decode_eps}, {"max_iters", decode_max_iters},
                       {"tol", decode_tol}, {"space", model_echo(decode_model)},
                       {"operator", operator_echo(decode_op)}};
        json out = envelope("decode", decode_common, config);
        out["x_star"] = std::vector<double>(res.x_star.data(), res.x_star.data() + res.x_star.size());
        out["residual"] = res.residual;
        out["objective"] = res.objective;
        out["iterations"] = res.iterations;
        out["converged"] = res.converged;
        emit(out, decode_common);
        return res.converged ? kExitOk : kExitNoConvergence;
    }

    if (width_cmd->parsed()) {
        if (width_rho <= 0.0 && width_rho_inv <= 0.0) {
            throw std::invalid_argument("width: need --rho or --rho-inv");
        }
        const double rho = width_rho > 0.0 ? width_rho : 1.0 / width_rho_inv;
        const rwplab::CsSpace space = build_space(width_model, width_model.N);
        const rwplab::WidthEstimate est = rwplab::gaussian_width_mc(
            space, rho, width_samples, width_confidence, width_common.seed);
        json config = {{"rho", rho}, {"samples", width_samples}, {"confidence", width_confidence},
                       {"space", model_echo(width_model)}};
        json out = envelope("width", width_common, config);
        out["mean"] = est.mean;
        out["samples"] = est.samples;
        out["upper_conf"] = est.upper_conf;
        out["confidence_level"] = est.confidence_level;
        out["per_sample_solver_tol"] = est.per_sample_solver_tol;
        emit(out, width_common);
        return kExitOk;
    }

    if (rwp_cmd->parsed()) {
        const rwplab::SensingOperator op = build_operator(rwp_op, 0);
        const rwplab::CsSpace space = build_space(rwp_model, op.cols());
        const rwplab::RwpReport rep = rwplab::rwp_search(
            op, space, rwplab::RwpParams{rwp_rho, rwp_alpha}, rwp_restarts, rwp_common.seed);
        json config = {{"rho", rwp_rho}, {"alpha", rwp_alpha}, {"restarts", rwp_restarts},
                       {"space", model_echo(rwp_model)}, {"operator", operator_echo(rwp_op)}};
        json out = envelope("rwp", rwp_common, config);
        out["verdict"] = rep.verdict == rwplab::RwpVerdict::violation_found ? "violation_found"
                                                                            : "no_violation_found";
        out["min_ratio"] = safe_number(rep.min_ratio);
        out["restarts"] = rep.restarts;
        out["empty_set"] = rep.empty_set;
        if (rep.witness) {
            out["witness"] =
                std::vector<double>(rep.witness->data(), rep.witness->data() + rep.witness->size());
        }
        emit(out, rwp_common);
        return kExitOk;
    }

    if (rip_cmd->parsed()) {
        const rwplab::SensingOperator op = build_operator(rip_op, 0);
        const rwplab::RipReport rep = rip_samples > 0
                                          ? rwplab::rip_sample(op, rip_j, rip_samples, rip_common.seed)
                                          : rwplab::rip_enumerate(op, rip_j);
        json config = {{"J", rip_j}, {"samples", rip_samples}, {"operator", operator_echo(rip_op)}};
        json out = envelope("rip", rip_common, config);
        out["J"] = rep.J;
        out["delta_no_squares"] = rep.delta_no_squares;
        out["delta_squares"] = rep.delta_squares;
        out["sigma_min"] = rep.sigma_min;
        out["sigma_max"] = rep.sigma_max;
        out["worst_support"] = rep.worst_support;
        out["sampled"] = rep.sampled;
        emit(out, rip_common);
        return kExitOk;
    }

    if (grass_cmd->parsed()) {
        const rwplab::SensingOperator op = build_operator(grass_op, 0);
        const rwplab::CsSpace space = build_space(grass_model, op.cols());
        const rwplab::RwpBallReport rep = rwplab::rwp_ball_harness(
            op, space, grass_rho, grass_alpha, grass_trials, grass_common.seed);
        json config = {{"rho", grass_rho}, {"alpha", grass_alpha}, {"trials", grass_trials},
                       {"space", model_echo(grass_model)}, {"operator", operator_echo(grass_op)}};
        json out = envelope("grassmann", grass_common, config);
        out["trials"] = rep.trials;
        out["direction1_failures"] = rep.direction1_failures;
        out["direction2_ran"] = rep.direction2_ran;
        out["direction2_confirmed"] = rep.direction2_confirmed;
        out["degenerate_alpha"] = rep.degenerate_alpha;
        out["rwp_verdict"] = rep.rwp.verdict == rwplab::RwpVerdict::violation_found
                                 ? "violation_found"
                                 : "no_violation_found";
        out["rwp_min_ratio"] = safe_number(rep.rwp.min_ratio);
        emit(out, grass_common);
        return kExitOk;
    }

    if (exp_cmd->parsed()) {
        std::ifstream is(exp_config_path);
        if (!is) throw std::invalid_argument("cannot open " + exp_config_path);
        json cfg = json::parse(is);
        const std::string kind = cfg.value("kind", std::string("forward"));
        if (kind == "forward") {
            rwplab::SweepConfig sweep = sweep_from_json(cfg);
            const rwplab::SweepResult result = rwplab::forward_experiment(sweep);
            rwplab::write_file_atomic(exp_out_dir + "/trials.csv", rwplab::trials_csv(result.rows));
            rwplab::write_file_atomic(exp_out_dir + "/summary.json",
                                      rwplab::sweep_summary_json(result));
            rwplab::write_file_atomic(exp_out_dir + "/plot.dat", rwplab::sweep_plot_data(result));
            json out = envelope("experiment", exp_common, cfg);
            out["outputs"] = {exp_out_dir + "/trials.csv", exp_out_dir + "/summary.json",
                              exp_out_dir + "/plot.dat"};
            emit(out, exp_common);
            return kExitOk;
        }
        if (kind == "rwp_not_rip") {
            rwplab::RwpNotRipConfig c;
            c.N = cfg.value("N", 200);
            c.M = cfg.value("M", 50);
            c.J_list = cfg.value("J_list", std::vector<int>{20});
            c.seeds = cfg.value("seeds", 50);
            c.K_recovery = cfg.value("K_recovery", 5);
            c.recovery_tol = cfg.value("recovery_tol", 1e-4);
            c.seed0 = cfg.value("seed0", 0ULL);
            const rwplab::RwpNotRipReport rep = rwplab::rwp_not_rip_study(c);
            rwplab::write_file_atomic(exp_out_dir + "/rwp_not_rip.json", rwplab::rwp_not_rip_json(rep));
            json out = envelope("experiment", exp_common, cfg);
            out["outputs"] = {exp_out_dir + "/rwp_not_rip.json"};
            emit(out, exp_common);
            return kExitOk;
        }
        if (kind == "converse") {
            const double c0 = cfg.at("C0").get<double>();
            const double c1 = cfg.at("C1").get<double>();
            const int n = cfg.at("N").get<int>();
            const int m = cfg.at("M").get<int>();
            const int k = cfg.value("K", 1);
            const rwplab::CsSpace space = rwplab::CsSpace::l1(n, k);
            rwplab::EnsembleSpec spec{cfg.value("ensemble", std::string("orthonormalized")), m, n,
                                      std::nullopt, cfg.value("op_seed", 0ULL)};
            const rwplab::SensingOperator op = rwplab::make_ensemble(spec);
            const rwplab::ConverseReport rep = rwplab::converse_experiment(
                c0, c1, space, op, cfg.value("restarts", 16), exp_common.seed);
            json out = envelope("experiment", exp_common, cfg);
            out["rho"] = rep.params.rho;
            out["alpha"] = rep.params.alpha;
            out["verdict"] = rep.rwp.verdict == rwplab::RwpVerdict::violation_found
                                 ? "violation_found"
                                 : "no_violation_found";
            out["counterexample_built"] = rep.counterexample_built;
            out["counterexample_error"] = rep.counterexample_error;
            out["counterexample_bound"] = rep.counterexample_bound;
            out["contradiction"] = rep.contradiction;
            out["forward_trials"] = rep.forward_trials;
            out["forward_negative_slack"] = rep.forward_negative_slack;
            rwplab::write_file_atomic(exp_out_dir + "/converse.json", out.dump(2) + "\n");
            emit(out, exp_common);
            return kExitOk;
        }
        throw std::invalid_argument("unknown experiment kind " + kind);
    }

    if (conv_cmd->parsed()) {
        if (conv_from_rip + conv_forward + conv_converse != 1) {
            throw std::invalid_argument("convert-constants: pick exactly one of --from-rip, "
                                        "--forward, --converse");
        }
        json config = {{"J", conv_j},   {"delta", conv_delta}, {"rho", conv_rho},
                       {"alpha", conv_alpha}, {"L", conv_l},   {"C0", conv_c0},  {"C1", conv_c1}};
        json out = envelope("convert-constants", conv_common, config);
        if (conv_from_rip) {
            const rwplab::RwpParams p = rwplab::rip_to_rwp(conv_j, conv_delta);
            out["rho"] = p.rho;
            out["alpha"] = p.alpha;
        } else if (conv_forward) {
            const auto [c0, c1] =
                rwplab::guarantee_constants(rwplab::RwpParams{conv_rho, conv_alpha}, conv_l);
            out["C0"] = c0;
            out["C1"] = c1;
        } else {
            const rwplab::RwpParams p = rwplab::converse_constants(conv_c0, conv_c1);
            out["rho"] = p.rho;
            out["alpha"] = p.alpha;
        }
        emit(out, conv_common);
        return kExitOk;
    }

    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuardError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
