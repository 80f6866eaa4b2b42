// Command-line front door: loads instances, runs solves and analyses, and
// writes deterministic JSON/CSV reports. Exit codes: 0 success, 1 validation
// error, 2 non-convergence or failed numeric check, 3 internal error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphlog/analysis.hpp"
#include "graphlog/energy.hpp"
#include "graphlog/errors.hpp"
#include "graphlog/field.hpp"
#include "graphlog/graph.hpp"
#include "graphlog/nehari.hpp"
#include "graphlog/num_format.hpp"
#include "graphlog/report_json.hpp"
#include "graphlog/rng.hpp"
#include "graphlog/solver.hpp"

namespace fs = std::filesystem;

using namespace graphlog;

namespace {

struct Options {
    std::string graph_path;
    std::string u_path;
    std::string v_path;
    std::string out_dir = ".";
    double p = 0.0;
    double lambda = 0.0;
    std::vector<std::int64_t> omega_a_ids;
    std::vector<std::int64_t> omega_b_ids;
    std::vector<double> lambdas;
    bool warm_start = true;
    SolverConfig cfg;
    // check-gradient
    int pairs = 10;
    double fd_h = 1e-6;
    double rel_tol = 1e-5;
    // calibrate
    double epsilon = 0.0;
    // appendix-series
    double delta = 0.1;
    std::vector<std::int64_t> checkpoints = {1000, 10000, 100000, 1000000,
                                             10000000};
    // check-embedding
    double q = 0.0;
    int trials = 1000;
    std::string potential = "a";
};

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open '" + path.string() +
                              "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw ValidationError("write to '" + path.string() + "' failed");
    }
}

fs::path prepare_out(const std::string& dir) {
    const fs::path path = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) {
        throw ValidationError("cannot create output directory '" + dir +
                              "': " + ec.message());
    }
    return path;
}

GraphInstance load_required_graph(const std::string& path) {
    if (path.empty()) {
        throw ValidationError("a graph file is required (--graph)");
    }
    return load_graph(path);
}

// Original file ids -> sorted, deduplicated dense indices.
std::vector<int> map_omega(const GraphInstance& g,
                           const std::vector<std::int64_t>& ids,
                           const char* flag) {
    if (ids.empty()) {
        throw ValidationError(std::string("at least one vertex id is required for ") +
                              flag);
    }
    std::vector<int> out;
    out.reserve(ids.size());
    for (std::int64_t id : ids) out.push_back(g.index_of(id));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

JsonValue ids_json(const GraphInstance& g, const std::vector<int>& dense) {
    JsonValue arr = JsonValue::array();
    for (int x : dense) arr.push(JsonValue::integer(g.ids[x]));
    return arr;
}

JsonValue solver_inputs_json(const SolverConfig& cfg) {
    JsonValue v = JsonValue::object();
    v.set("seeds", JsonValue::integer(cfg.seeds));
    v.set("rng_seed", JsonValue::integer(static_cast<std::int64_t>(cfg.rng_seed)));
    v.set("max_iters", JsonValue::integer(cfg.max_iters));
    v.set("step_init", JsonValue::number(cfg.step_init));
    v.set("backtrack", JsonValue::number(cfg.backtrack_factor));
    v.set("armijo", JsonValue::number(cfg.armijo_c));
    v.set("tol", JsonValue::number(cfg.residual_tol));
    v.set("stall_tol", JsonValue::number(cfg.stall_tol));
    return v;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
    cmd->add_option("--seeds", cfg.seeds, "multistart count")
        ->capture_default_str();
    cmd->add_option("--rng-seed", cfg.rng_seed, "base RNG seed")
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "accepted steps per start")
        ->capture_default_str();
    cmd->add_option("--step-init", cfg.step_init, "initial line-search step")
        ->capture_default_str();
    cmd->add_option("--backtrack", cfg.backtrack_factor,
                    "line-search backtracking factor")
        ->capture_default_str();
    cmd->add_option("--armijo", cfg.armijo_c, "Armijo sufficient-decrease constant")
        ->capture_default_str();
    cmd->add_option("--tol", cfg.residual_tol, "pointwise residual tolerance")
        ->capture_default_str();
    cmd->add_option("--stall-tol", cfg.stall_tol,
                    "energy-progress floor before a run counts as stalled")
        ->capture_default_str();
}

void add_out_flag(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out_dir, "output directory")
        ->capture_default_str();
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- solve ----

int run_solve(const Options& o, bool lambda_given) {
    const ProblemSpec spec = lambda_given
                                 ? ProblemSpec::with_lambda(o.p, o.lambda)
                                 : ProblemSpec::base(o.p);
    const GraphInstance g = load_required_graph(o.graph_path);
    o.cfg.validate();
    const SolveReport report = solve_ground_state(g, spec, o.cfg);

    const fs::path out = prepare_out(o.out_dir);
    JsonValue inputs = JsonValue::object();
    inputs.set("p", JsonValue::number(o.p));
    inputs.set("variant", JsonValue::text(lambda_given ? "lambda" : "base"));
    if (lambda_given) inputs.set("lambda", JsonValue::number(o.lambda));
    inputs.set("solver", solver_inputs_json(o.cfg));
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("solve"));
    root.set("inputs", std::move(inputs));
    root.set("result", json_of(report));
    write_text(out / "report.json", root.dump());
    write_text(out / "trace.csv", trace_csv(report.trace));
    if (report.best.u.graph != nullptr) {
        save_field(report.best.u, (out / "u.json").string());
        save_field(report.best.v, (out / "v.json").string());
    }

    std::cout << "solve energy=" << format_shortest(report.energy)
              << " residual_sup=" << format_shortest(report.residual_sup)
              << " converged=" << bool_str(report.converged) << "\n";
    return report.converged ? 0 : 2;
}

int run_solve_dirichlet(const Options& o) {
    ProblemSpec::base(o.p); // p gate first: clearer error than a load failure
    const GraphInstance g = load_required_graph(o.graph_path);
    const std::vector<int> omega_a = map_omega(g, o.omega_a_ids, "--omega-a");
    const std::vector<int> omega_b =
        o.omega_b_ids.empty() ? omega_a
                              : map_omega(g, o.omega_b_ids, "--omega-b");
    o.cfg.validate();
    const SolveReport report = solve_dirichlet(g, omega_a, omega_b, o.p, o.cfg);

    const fs::path out = prepare_out(o.out_dir);
    JsonValue inputs = JsonValue::object();
    inputs.set("p", JsonValue::number(o.p));
    inputs.set("variant", JsonValue::text("dirichlet"));
    inputs.set("omega_a", ids_json(g, omega_a));
    inputs.set("omega_b", ids_json(g, omega_b));
    inputs.set("solver", solver_inputs_json(o.cfg));
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("solve-dirichlet"));
    root.set("inputs", std::move(inputs));
    root.set("result", json_of(report));
    write_text(out / "report.json", root.dump());
    write_text(out / "trace.csv", trace_csv(report.trace));
    if (report.best.u.graph != nullptr) {
        save_field(report.best.u, (out / "u.json").string());
        save_field(report.best.v, (out / "v.json").string());
    }

    std::cout << "solve-dirichlet energy=" << format_shortest(report.energy)
              << " residual_sup=" << format_shortest(report.residual_sup)
              << " converged=" << bool_str(report.converged) << "\n";
    return report.converged ? 0 : 2;
}

int run_sweep(const Options& o) {
    ProblemSpec::base(o.p);
    const GraphInstance g = load_required_graph(o.graph_path);
    o.cfg.validate();
    if (o.lambdas.empty()) {
        throw ValidationError("at least one lambda is required (--lambdas)");
    }
    const SweepResult sweep =
        lambda_sweep(g, o.lambdas, o.p, o.cfg, o.warm_start);

    const fs::path out = prepare_out(o.out_dir);
    JsonValue inputs = JsonValue::object();
    inputs.set("p", JsonValue::number(o.p));
    JsonValue grid = JsonValue::array();
    for (double l : o.lambdas) grid.push(JsonValue::number(l));
    inputs.set("lambdas", std::move(grid));
    inputs.set("warm_start", JsonValue::boolean(o.warm_start));
    inputs.set("solver", solver_inputs_json(o.cfg));
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("sweep-lambda"));
    root.set("inputs", std::move(inputs));
    root.set("result", json_of(sweep));
    write_text(out / "report.json", root.dump());

    bool all_ok = sweep.omega_converged;
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i) {
        all_ok = all_ok && sweep.lambda_converged[i] && sweep.errors[i].empty();
    }
    const double d_last =
        sweep.d_lambda.empty() ? 0.0 : sweep.d_lambda.back();
    std::cout << "sweep-lambda d_omega=" << format_shortest(sweep.d_omega)
              << " d_last=" << format_shortest(d_last)
              << " converged=" << bool_str(all_ok) << "\n";
    return all_ok ? 0 : 2;
}

// ------------------------------------------------------------- checking ----

ProblemSpec spec_from_flags(const Options& o, const GraphInstance& g,
                            bool lambda_given) {
    if (!o.omega_a_ids.empty() || !o.omega_b_ids.empty()) {
        if (lambda_given) {
            throw ValidationError(
                "--lambda and --omega-a/--omega-b are mutually exclusive");
        }
        const std::vector<int> oa = map_omega(g, o.omega_a_ids, "--omega-a");
        const std::vector<int> ob =
            o.omega_b_ids.empty() ? oa : map_omega(g, o.omega_b_ids, "--omega-b");
        return ProblemSpec::with_dirichlet(o.p, oa, ob);
    }
    if (lambda_given) return ProblemSpec::with_lambda(o.p, o.lambda);
    return ProblemSpec::base(o.p);
}

JsonValue spec_inputs_json(const ProblemSpec& spec, const GraphInstance& g) {
    JsonValue v = JsonValue::object();
    v.set("p", JsonValue::number(spec.p));
    switch (spec.variant) {
    case Variant::base:
        v.set("variant", JsonValue::text("base"));
        break;
    case Variant::lambda:
        v.set("variant", JsonValue::text("lambda"));
        v.set("lambda", JsonValue::number(spec.lambda));
        break;
    case Variant::dirichlet:
        v.set("variant", JsonValue::text("dirichlet"));
        v.set("omega_a", ids_json(g, spec.omega_a));
        v.set("omega_b", ids_json(g, spec.omega_b));
        break;
    }
    return v;
}

FieldPair random_test_pair(const GraphInstance& g, std::uint64_t seed,
                           std::uint64_t index, const ProblemSpec& spec) {
    Rng rng = Rng::stream(seed, index);
    FieldPair t{zero_field(g), zero_field(g)};
    for (double& x : t.u.values) x = rng.symmetric();
    for (double& x : t.v.values) x = rng.symmetric();
    if (spec.variant == Variant::dirichlet) {
        t.u = masked(t.u, spec.omega_a);
        t.v = masked(t.v, spec.omega_b);
    }
    return t;
}

FieldPair shifted(const FieldPair& base, const FieldPair& dir, double h) {
    FieldPair out = base;
    for (std::size_t i = 0; i < out.u.values.size(); ++i) {
        out.u.values[i] += h * dir.u.values[i];
        out.v.values[i] += h * dir.v.values[i];
    }
    return out;
}

int run_check_gradient(const Options& o, bool lambda_given) {
    ProblemSpec::base(o.p);
    const GraphInstance g = load_required_graph(o.graph_path);
    const ProblemSpec spec = spec_from_flags(o, g, lambda_given);
    if (o.pairs < 1) {
        throw ValidationError("--pairs must be at least 1");
    }
    if (!(o.fd_h > 0.0)) {
        throw ValidationError("--fd-step must be positive");
    }
    if (o.u_path.empty() != o.v_path.empty()) {
        throw ValidationError("--u and --v must be given together");
    }
    const bool fixed_base = !o.u_path.empty();
    FieldPair loaded{zero_field(g), zero_field(g)};
    if (fixed_base) {
        loaded.u = load_field(o.u_path, g);
        loaded.v = load_field(o.v_path, g);
    }

    JsonValue rows = JsonValue::array();
    double max_rel = 0.0;
    for (int k = 0; k < o.pairs; ++k) {
        const FieldPair base =
            fixed_base ? loaded
                       : random_admissible_pair(
                             g, Rng::stream_seed(o.cfg.rng_seed, 2 * k), spec);
        const FieldPair dir = random_test_pair(
            g, o.cfg.rng_seed, static_cast<std::uint64_t>(2 * k + 1), spec);
        const double pairing = derivative_pairing(base, dir, spec);
        const double j_plus = energy(shifted(base, dir, o.fd_h), spec).J;
        const double j_minus = energy(shifted(base, dir, -o.fd_h), spec).J;
        const double fd = (j_plus - j_minus) / (2.0 * o.fd_h);
        const double rel =
            std::abs(fd - pairing) / std::max(1.0, std::abs(pairing));
        max_rel = std::max(max_rel, rel);
        JsonValue row = JsonValue::object();
        row.set("pair", JsonValue::integer(k));
        row.set("pairing", JsonValue::number(pairing));
        row.set("finite_difference", JsonValue::number(fd));
        row.set("relative_error", JsonValue::number(rel));
        rows.push(std::move(row));
    }
    const bool ok = max_rel <= o.rel_tol;

    const fs::path out = prepare_out(o.out_dir);
    JsonValue inputs = spec_inputs_json(spec, g);
    inputs.set("pairs", JsonValue::integer(o.pairs));
    inputs.set("h", JsonValue::number(o.fd_h));
    inputs.set("rel_tol", JsonValue::number(o.rel_tol));
    inputs.set("rng_seed",
               JsonValue::integer(static_cast<std::int64_t>(o.cfg.rng_seed)));
    inputs.set("fixed_pair", JsonValue::boolean(fixed_base));
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("check-gradient"));
    root.set("inputs", std::move(inputs));
    root.set("rows", std::move(rows));
    root.set("max_relative_error", JsonValue::number(max_rel));
    root.set("ok", JsonValue::boolean(ok));
    write_text(out / "report.json", root.dump());

    std::cout << "check-gradient max_relative_error=" << format_shortest(max_rel)
              << " converged=" << bool_str(ok) << "\n";
    return ok ? 0 : 2;
}

int run_project_nehari(const Options& o, bool lambda_given) {
    ProblemSpec::base(o.p);
    const GraphInstance g = load_required_graph(o.graph_path);
    const ProblemSpec spec = spec_from_flags(o, g, lambda_given);
    if (o.u_path.empty() || o.v_path.empty()) {
        throw ValidationError("field files are required (--u and --v)");
    }
    FieldPair fp{load_field(o.u_path, g), load_field(o.v_path, g)};

    const FiberingCoefficients coeff = fibering_coefficients(fp, spec);
    const double defect_before = nehari_defect(fp, spec);
    const NehariProjection proj = project_to_nehari(fp, spec);
    const double defect_after = nehari_defect(proj.projected, spec);
    const EnergyBreakdown eb = energy(proj.projected, spec);
    const bool on = on_manifold(proj.projected, spec);

    const fs::path out = prepare_out(o.out_dir);
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("project-nehari"));
    root.set("inputs", spec_inputs_json(spec, g));
    root.set("coefficients", json_of(coeff));
    root.set("t_star", JsonValue::number(proj.t_star));
    root.set("defect_before", JsonValue::number(defect_before));
    root.set("defect_after", JsonValue::number(defect_after));
    root.set("energy", json_of(eb));
    root.set("on_manifold", JsonValue::boolean(on));
    write_text(out / "report.json", root.dump());
    save_field(proj.projected.u, (out / "u_projected.json").string());
    save_field(proj.projected.v, (out / "v_projected.json").string());

    std::cout << "project-nehari t_star=" << format_shortest(proj.t_star)
              << " converged=" << bool_str(on) << "\n";
    return on ? 0 : 2;
}

// ------------------------------------------------------------- analysis ----

int run_calibrate(const Options& o) {
    const CalibrationResult r = calibrate_exponents(o.p, o.epsilon);
    const fs::path out = prepare_out(o.out_dir);
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("calibrate"));
    root.set("result", json_of(r));
    write_text(out / "report.json", root.dump());
    std::cout << "calibrate s=" << format_shortest(r.s)
              << " p1=" << format_shortest(r.p1)
              << " p2=" << format_shortest(r.p2)
              << " t=" << format_shortest(r.t) << " converged=true\n";
    return 0;
}

int run_appendix_series(const Options& o) {
    if (o.checkpoints.empty()) {
        throw ValidationError("at least one checkpoint is required (--checkpoints)");
    }
    const AppendixParams params =
        appendix_params(o.p, o.delta, o.checkpoints.back());
    const SeriesReport report = appendix_series(params, o.checkpoints);

    const fs::path out = prepare_out(o.out_dir);
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("appendix-series"));
    root.set("result", json_of(report));
    write_text(out / "report.json", root.dump());
    write_text(out / "series.csv", series_csv(report));

    const SeriesVerdict& v = report.verdict;
    const bool ok = v.convergent_tail_bounded && v.i1_matches_asymptote &&
                    v.i2_matches_asymptote && v.i1_strictly_decreasing_from_16 &&
                    v.i2_strictly_decreasing_from_16;
    const double last_i1 = report.checkpoints.back().i1_partial;
    std::cout << "appendix-series i1_partial=" << format_shortest(last_i1)
              << " tail_bound=" << format_shortest(v.convergent_tail_bound)
              << " converged=" << bool_str(ok) << "\n";
    return ok ? 0 : 2;
}

int run_check_embedding(const Options& o) {
    const GraphInstance g = load_required_graph(o.graph_path);
    std::vector<double> potential;
    if (o.potential == "a") {
        potential = g.a;
    } else if (o.potential == "b") {
        potential = g.b;
    } else if (o.potential == "unit") {
        potential.assign(static_cast<std::size_t>(g.vertex_count()), 1.0);
    } else {
        throw ValidationError("--potential must be one of a, b, unit");
    }
    const auto [empirical, bound] =
        embedding_constant(g, o.p, o.q, potential, o.trials, o.cfg.rng_seed);
    const bool ok = empirical <= bound * (1.0 + 1e-12);

    const fs::path out = prepare_out(o.out_dir);
    JsonValue inputs = JsonValue::object();
    inputs.set("p", JsonValue::number(o.p));
    inputs.set("q", JsonValue::number(o.q));
    inputs.set("potential", JsonValue::text(o.potential));
    inputs.set("trials", JsonValue::integer(o.trials));
    inputs.set("rng_seed",
               JsonValue::integer(static_cast<std::int64_t>(o.cfg.rng_seed)));
    JsonValue root = JsonValue::object();
    root.set("command", JsonValue::text("check-embedding"));
    root.set("inputs", std::move(inputs));
    root.set("empirical_sup", JsonValue::number(empirical));
    root.set("analytic_bound", JsonValue::number(bound));
    root.set("ok", JsonValue::boolean(ok));
    write_text(out / "report.json", root.dump());

    std::cout << "check-embedding empirical_sup=" << format_shortest(empirical)
              << " analytic_bound=" << format_shortest(bound)
              << " converged=" << bool_str(ok) << "\n";
    return ok ? 0 : 2;
}

// ------------------------------------------------------------- manifest ----

std::string number_arg(const nlohmann::json& v) {
    if (v.is_number_integer()) {
        return format_int(v.get<std::int64_t>());
    }
    if (v.is_number_unsigned()) {
        return format_int(static_cast<std::int64_t>(v.get<std::uint64_t>()));
    }
    return format_shortest(v.get<double>());
}

// Expands {"command": ..., "<flag>": value, ...} into an argv vector; flag
// keys match the long option names with '_' or '-' interchangeable.
std::vector<std::string> expand_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open manifest '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest '" + path + "': " + e.what());
    }
    if (!doc.is_object() || !doc.contains("command") ||
        !doc["command"].is_string()) {
        throw ValidationError("manifest '" + path +
                              "' must be an object with a \"command\" string");
    }

    std::vector<std::string> args;
    args.push_back(doc["command"].get<std::string>());
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") continue;
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (value.is_boolean()) {
            args.push_back(flag + (value.get<bool>() ? "=true" : "=false"));
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            args.push_back(flag);
            args.push_back(number_arg(value));
        } else if (value.is_array()) {
            for (const auto& item : value) {
                args.push_back(flag);
                if (item.is_string()) {
                    args.push_back(item.get<std::string>());
                } else if (item.is_number()) {
                    args.push_back(number_arg(item));
                } else {
                    throw ValidationError("manifest field '" + key +
                                          "' holds an unsupported array element");
                }
            }
        } else {
            throw ValidationError("manifest field '" + key +
                                  "' holds an unsupported value type");
        }
    }
    return args;
}

int run(std::vector<std::string> args) {
    CLI::App app{"ground states of a log-coupled p-Laplacian system on finite "
                 "weighted graphs"};
    app.require_subcommand(0, 1);
    Options o;

    CLI::App* solve = app.add_subcommand(
        "solve", "ground state of the coupled system (optionally penalized)");
    solve->add_option("--graph", o.graph_path, "graph JSON file");
    solve->add_option("--p", o.p, "exponent, must exceed 4")->required();
    CLI::Option* solve_lambda =
        solve->add_option("--lambda", o.lambda, "penalty parameter");
    add_solver_flags(solve, o.cfg);
    add_out_flag(solve, o);

    CLI::App* dirichlet = app.add_subcommand(
        "solve-dirichlet", "ground state of the zero-boundary problem");
    dirichlet->add_option("--graph", o.graph_path, "graph JSON file");
    dirichlet->add_option("--p", o.p, "exponent, must exceed 4")->required();
    dirichlet->add_option("--omega-a", o.omega_a_ids,
                          "vertex ids of the first support set");
    dirichlet->add_option("--omega-b", o.omega_b_ids,
                          "vertex ids of the second support set "
                          "(defaults to --omega-a)");
    add_solver_flags(dirichlet, o.cfg);
    add_out_flag(dirichlet, o);

    CLI::App* sweep = app.add_subcommand(
        "sweep-lambda",
        "penalized family along an ascending lambda grid, against the "
        "zero-boundary problem on the potentials' zero sets");
    sweep->add_option("--graph", o.graph_path, "graph JSON file");
    sweep->add_option("--p", o.p, "exponent, must exceed 4")->required();
    sweep->add_option("--lambdas", o.lambdas, "ascending lambda grid");
    sweep->add_flag("--warm-start,!--no-warm-start", o.warm_start,
                    "seed each lambda with the previous solution");
    add_solver_flags(sweep, o.cfg);
    add_out_flag(sweep, o);

    CLI::App* gradient = app.add_subcommand(
        "check-gradient",
        "directional derivative against central finite differences");
    gradient->add_option("--graph", o.graph_path, "graph JSON file");
    gradient->add_option("--p", o.p, "exponent, must exceed 4")->required();
    CLI::Option* gradient_lambda =
        gradient->add_option("--lambda", o.lambda, "penalty parameter");
    gradient->add_option("--omega-a", o.omega_a_ids,
                         "zero-boundary support for u");
    gradient->add_option("--omega-b", o.omega_b_ids,
                         "zero-boundary support for v");
    gradient->add_option("--u", o.u_path, "field file for a fixed base pair");
    gradient->add_option("--v", o.v_path, "field file for a fixed base pair");
    gradient->add_option("--pairs", o.pairs, "number of random pairs")
        ->capture_default_str();
    gradient->add_option("--fd-step", o.fd_h, "finite-difference step")
        ->capture_default_str();
    gradient->add_option("--rel-tol", o.rel_tol, "acceptance threshold")
        ->capture_default_str();
    gradient->add_option("--rng-seed", o.cfg.rng_seed, "base RNG seed")
        ->capture_default_str();
    add_out_flag(gradient, o);

    CLI::App* project = app.add_subcommand(
        "project-nehari", "scale a pair onto the constraint manifold");
    project->add_option("--graph", o.graph_path, "graph JSON file");
    project->add_option("--p", o.p, "exponent, must exceed 4")->required();
    CLI::Option* project_lambda =
        project->add_option("--lambda", o.lambda, "penalty parameter");
    project->add_option("--omega-a", o.omega_a_ids,
                        "zero-boundary support for u");
    project->add_option("--omega-b", o.omega_b_ids,
                        "zero-boundary support for v");
    project->add_option("--u", o.u_path, "field file for u");
    project->add_option("--v", o.v_path, "field file for v");
    add_out_flag(project, o);

    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "exponent system that absorbs logarithmic factors");
    calibrate->add_option("--p", o.p, "exponent, must exceed 4")->required();
    calibrate->add_option("--epsilon", o.epsilon, "calibration margin in (0,1)")
        ->required();
    add_out_flag(calibrate, o);

    CLI::App* series = app.add_subcommand(
        "appendix-series",
        "divergent-coupling series experiment on the weighted half-line");
    series->add_option("--p", o.p, "exponent, must exceed 4")
        ->default_val(6.0);
    series->add_option("--delta", o.delta, "decay margin, in (0, 0.5]")
        ->capture_default_str();
    series->add_option("--checkpoints", o.checkpoints,
                       "ascending partial-sum checkpoints")
        ->capture_default_str();
    add_out_flag(series, o);

    CLI::App* embedding = app.add_subcommand(
        "check-embedding", "norm embedding constant, sampled and closed-form");
    embedding->add_option("--graph", o.graph_path, "graph JSON file");
    embedding->add_option("--p", o.p, "base exponent")->required();
    embedding->add_option("--q", o.q, "target exponent, at least p")
        ->required();
    embedding->add_option("--potential", o.potential,
                          "potential choice: a, b, or unit")
        ->capture_default_str();
    embedding->add_option("--trials", o.trials, "random fields to sample")
        ->capture_default_str();
    embedding->add_option("--rng-seed", o.cfg.rng_seed, "base RNG seed")
        ->capture_default_str();
    add_out_flag(embedding, o);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) return run_solve(o, solve_lambda->count() > 0);
        if (*dirichlet) return run_solve_dirichlet(o);
        if (*sweep) return run_sweep(o);
        if (*gradient) return run_check_gradient(o, gradient_lambda->count() > 0);
        if (*project) return run_project_nehari(o, project_lambda->count() > 0);
        if (*calibrate) return run_calibrate(o);
        if (*series) return run_appendix_series(o);
        if (*embedding) return run_check_embedding(o);
        std::cerr << "error: a command is required; see --help\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty()) {
            if (args[0] == "--manifest") {
                if (args.size() != 2) {
                    throw ValidationError("--manifest takes exactly one file");
                }
                args = expand_manifest(args[1]);
            } else if (args[0].rfind("--manifest=", 0) == 0) {
                if (args.size() != 1) {
                    throw ValidationError("--manifest takes exactly one file");
                }
                args = expand_manifest(args[0].substr(std::string("--manifest=").size()));
            }
        }
        return run(std::move(args));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
