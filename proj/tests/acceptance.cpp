// Acceptance gate for the ground-state solver. Each criterion prints exactly
// one [PASS]/[FAIL] line; the process exit code is the number of failures.
//
// All tolerances are pinned here as named constants. Expected values come
// from routes independent of the code under test: central finite differences
// for the pairing, geometric bisection of the ray defect evaluated through
// the energy pipeline for the projection scale, a brute grid search with
// closed-form per-point levels for the two-vertex ground level, and direct
// closed-form formulas for the calibration identities and series tails.

#include "graphlog/analysis.hpp"
#include "graphlog/energy.hpp"
#include "graphlog/errors.hpp"
#include "graphlog/field.hpp"
#include "graphlog/graph.hpp"
#include "graphlog/nehari.hpp"
#include "graphlog/report_json.hpp"
#include "graphlog/rng.hpp"
#include "graphlog/solver.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace graphlog;

namespace {

// ---- pinned tolerances ------------------------------------------------------
constexpr double kFdStep = 1e-6;             // finite-difference step
constexpr double kFdRelTol = 1e-5;           // pairing vs central differences
constexpr double kProjDefectTol = 1e-10;     // normalized defect after projection
constexpr double kBisectRelTol = 1e-10;      // closed-form vs bisected scale
constexpr double kIdempotenceTol = 1e-10;    // |t_star(projected) - 1|
constexpr double kIdentityRelTol = 1e-12;    // level identity, relative
constexpr double kManifoldLevelRelTol = 1e-10;  // J vs (2/p^2)B on the manifold
constexpr double kSingleVertexTol = 1e-8;    // 1-vertex energy/values, absolute
constexpr double kTwoVertexTol = 1e-5;       // 2-vertex energy vs grid oracle
constexpr double kResidualTol = 1e-8;        // residual sup at reported minima
constexpr double kFlipEnergyTol = 1e-12;     // sign-flip energy drift
constexpr double kSweepLevelSlack = 1e-9;    // d_lambda <= d_omega + slack
constexpr double kSweepGapRel = 1e-3;        // |d_omega - d_last| <= rel * d_omega
constexpr double kSweepMassTol = 1e-4;       // stray mass at the largest lambda
constexpr double kCalibrationTol = 1e-12;    // exponent identities, relative
constexpr double kSeriesAsymptoteRel = 5e-2; // bare partials vs asymptote
constexpr double kEmbeddingSlack = 1e-12;    // empirical sup vs analytic bound

std::vector<std::pair<int, std::string>> g_lines;
int g_failures = 0;

void report(int id, bool pass, const std::string& text) {
    g_lines.emplace_back(id, std::string(pass ? "[PASS]" : "[FAIL]") +
                                 " criterion " + std::to_string(id) + ": " +
                                 text);
    if (!pass) ++g_failures;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double sup_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::fabs(x));
    return m;
}

double residual_sup_of(const FieldPair& fp, const ProblemSpec& spec) {
    const auto [ru, rv] = residual(fp, spec);
    return std::max(sup_abs(ru), sup_abs(rv));
}

// Solutions carried into the sign-flip criterion. Fields reference their
// graph by pointer, so each witness keeps a stably addressed copy.
std::deque<GraphInstance> g_witness_graphs;
struct Witness {
    std::string label;
    FieldPair fp;
    ProblemSpec spec;
};
std::vector<Witness> g_witnesses;

void add_witness(const std::string& label, const GraphInstance& g,
                 const FieldPair& fp, ProblemSpec spec) {
    g_witness_graphs.push_back(g);
    const GraphInstance& stored = g_witness_graphs.back();
    g_witnesses.push_back(
        {label, make_pair(stored, fp.u.values, fp.v.values), std::move(spec)});
}

// ---- criterion 1: derivative pairing vs central finite differences ----------
void criterion_1() {
    Rng rng(811u);
    double worst = 0.0;
    int probes = 0;
    const double ps[] = {4.5, 6.0, 8.0};
    for (int k = 0; k < 20; ++k) {
        const auto g = testutil::random_graph(rng, 3 + (k % 6));
        const auto spec = ProblemSpec::base(ps[k % 3]);
        const auto n = static_cast<std::size_t>(g.vertex_count());
        for (int r = 0; r < 10; ++r) {
            const auto fp = testutil::random_pair(rng, g);
            const auto dir = testutil::random_pair(rng, g);
            const double exact = derivative_pairing(fp, dir, spec);
            FieldPair plus = fp, minus = fp;
            for (std::size_t i = 0; i < n; ++i) {
                plus.u.values[i] += kFdStep * dir.u.values[i];
                plus.v.values[i] += kFdStep * dir.v.values[i];
                minus.u.values[i] -= kFdStep * dir.u.values[i];
                minus.v.values[i] -= kFdStep * dir.v.values[i];
            }
            const double fd =
                (energy(plus, spec).J - energy(minus, spec).J) / (2.0 * kFdStep);
            worst = std::max(worst, std::fabs(fd - exact) /
                                        std::max(1.0, std::fabs(exact)));
            ++probes;
        }
    }
    report(1, worst <= kFdRelTol,
           "derivative pairing matches central differences on " +
               std::to_string(probes) + " probes (worst rel err " + num(worst) +
               ", tol " + num(kFdRelTol) + ")");
}

// ---- criterion 2: projection against an independent bisection ---------------
// Pairs are drawn until the projection exponent lands in [-10, 10]; that keeps
// both routes inside a shared floating-point window, and the separately tested
// scale covariance extends the comparison to the rest of the ray.
void criterion_2() {
    Rng rng(822u);
    std::deque<GraphInstance> graphs;
    for (int k = 0; k < 10; ++k)
        graphs.push_back(testutil::random_graph(rng, 3 + (k % 6)));
    const auto spec = ProblemSpec::base(6.0);

    double worst_defect = 0.0, worst_bisect = 0.0, worst_idem = 0.0;
    bool brackets_ok = true, all_maximal = true;
    int tested = 0;
    std::uint64_t seed = 9000;
    while (tested < 100) {
        const auto& g = graphs[static_cast<std::size_t>(tested % 10)];
        const auto fp = random_admissible_pair(g, seed++, spec);
        const auto co = fibering_coefficients(fp, spec);
        const double expo = (co.N - co.C) / (2.0 * co.B);
        if (!(std::fabs(expo) <= 10.0)) continue;
        ++tested;

        const auto proj = project_to_nehari(fp, spec);
        const auto pc = fibering_coefficients(proj.projected, spec);
        const double scale =
            std::max({1.0, pc.N, std::fabs(pc.C), pc.B});
        worst_defect =
            std::max(worst_defect,
                     std::fabs(nehari_defect(proj.projected, spec)) / scale);

        // Independent root: bisect the ray defect evaluated through the
        // energy pipeline on a bracket that must straddle the crossing.
        double lo = std::exp(-14.0), hi = std::exp(14.0);
        if (!(nehari_defect(scaled(fp, lo), spec) > 0.0) ||
            !(nehari_defect(scaled(fp, hi), spec) < 0.0)) {
            brackets_ok = false;
            continue;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (nehari_defect(scaled(fp, mid), spec) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        worst_bisect = std::max(
            worst_bisect, std::fabs(std::sqrt(lo * hi) - proj.t_star) / proj.t_star);

        const auto again = project_to_nehari(proj.projected, spec);
        worst_idem = std::max(worst_idem, std::fabs(again.t_star - 1.0));

        std::vector<double> grid;
        const double t0 = proj.t_star / 10.0, t1 = proj.t_star * 10.0;
        for (int i = 0; i < 50; ++i)
            grid.push_back(t0 * std::pow(t1 / t0, i / 49.0));
        if (!fibering_maximality_check(fp, spec, grid)) all_maximal = false;
    }
    const bool ok = worst_defect <= kProjDefectTol &&
                    worst_bisect <= kBisectRelTol &&
                    worst_idem <= kIdempotenceTol && brackets_ok && all_maximal;
    report(2, ok,
           "projection on 100 pairs: defect " + num(worst_defect) +
               ", bisection gap " + num(worst_bisect) + ", idempotence " +
               num(worst_idem) + ", brackets " +
               (brackets_ok ? "held" : "FAILED") + ", ray maximality " +
               (all_maximal ? "holds" : "violated") + " (tols " +
               num(kProjDefectTol) + "/" + num(kBisectRelTol) + ")");
}

// ---- criterion 3: level identity on and off the manifold --------------------
void criterion_3() {
    Rng rng(833u);
    double worst_free = 0.0, worst_manifold = 0.0;
    bool positive = true;
    std::uint64_t seed = 17000;
    for (int k = 0; k < 10; ++k) {
        const auto g = testutil::random_graph(rng, 3 + (k % 6));
        const auto spec = ProblemSpec::base(k % 2 == 0 ? 6.0 : 4.5);
        for (int r = 0; r < 20; ++r) {
            auto fp = testutil::random_pair(rng, g);
            if (r % 4 == 0) fp.u.values[0] = 0.0;  // sparse supports too
            const auto [lhs, rhs] = ground_level_identity(fp, spec);
            const double J = energy(fp, spec).J;
            const double defect = nehari_defect(fp, spec);
            const double denom =
                std::max({1.0, std::fabs(J), std::fabs(defect)});
            worst_free = std::max(worst_free, std::fabs(lhs - rhs) / denom);
        }
        for (int r = 0; r < 40 && seed < 17000 + 4000; ++r) {
            const auto fp = random_admissible_pair(g, seed++, spec);
            const auto co = fibering_coefficients(fp, spec);
            if (!(std::fabs((co.N - co.C) / (2.0 * co.B)) <= 10.0)) continue;
            const auto proj = project_to_nehari(fp, spec);
            const double J = energy(proj.projected, spec).J;
            const double target =
                (2.0 / (spec.p * spec.p)) *
                fibering_coefficients(proj.projected, spec).B;
            worst_manifold =
                std::max(worst_manifold, testutil::rel_gap(J, target));
            if (!(J > 0.0)) positive = false;
        }
    }
    const bool ok = worst_free <= kIdentityRelTol &&
                    worst_manifold <= kManifoldLevelRelTol && positive;
    report(3, ok,
           "level identity: free-pair gap " + num(worst_free) + " (tol " +
               num(kIdentityRelTol) + "), on-manifold J vs (2/p^2)B gap " +
               num(worst_manifold) + " (tol " + num(kManifoldLevelRelTol) +
               "), levels " + (positive ? "positive" : "NOT positive"));
}

// ---- criterion 4: single-vertex ground state vs closed form ------------------
void criterion_4() {
    const auto g = testutil::single_vertex();
    const auto spec = ProblemSpec::base(6.0);
    SolverConfig cfg;
    const auto out = solve_ground_state(g, spec, cfg);
    const double expect_level = std::exp(2.0) / 9.0;
    const double expect_value = std::exp(1.0 / 3.0);
    const double e_gap = std::fabs(out.energy - expect_level);
    const double u_gap =
        std::fabs(std::fabs(out.best.u.values[0]) - expect_value);
    const double v_gap =
        std::fabs(std::fabs(out.best.v.values[0]) - expect_value);
    const bool ok = out.converged && e_gap <= kSingleVertexTol &&
                    u_gap <= kSingleVertexTol && v_gap <= kSingleVertexTol &&
                    out.residual_sup <= kResidualTol;
    if (out.converged) add_witness("single-vertex", g, out.best, spec);
    report(4, ok,
           "single-vertex ground state: energy gap " + num(e_gap) +
               ", value gaps " + num(u_gap) + "/" + num(v_gap) +
               ", residual " + num(out.residual_sup) + " (tol " +
               num(kSingleVertexTol) + ")");
}

// ---- criterion 5: two-vertex ground state vs grid oracle ---------------------
// Independent oracle: with both components equal to (x, y) every integral has
// a closed form, so a dense grid plus coordinate refinement pins the minimal
// projected level without touching the library. The unrestricted solver may
// in principle do better; the criterion checks it is never worse and reaches
// this level.
namespace two_vertex_oracle {

double level(double x, double y) {
    const double d2 = 0.5 * (y - x) * (y - x);  // carre du champ at either end
    const double grad6 = 2.0 * d2 * d2 * d2;    // integral of |grad|^6
    const double x2 = x * x, y2 = y * y;
    const double x6 = x2 * x2 * x2, y6 = y2 * y2 * y2;
    const double mass6 = x6 + y6;
    const double N = 2.0 * (grad6 + mass6);  // both components identical
    const double B = 2.0 * mass6;
    if (!(B > 0.0)) return std::numeric_limits<double>::infinity();
    const double logs = 2.0 * (x6 * std::log(x2) + y6 * std::log(y2));
    const double C = (2.0 / 6.0) * B + logs;
    const double t = std::exp((N - C) / (2.0 * B));
    const double t2 = t * t;
    const double t6 = t2 * t2 * t2;
    return (2.0 / 36.0) * t6 * B;
}

double minimum() {
    double best = std::numeric_limits<double>::infinity();
    double bx = 1.0, by = 1.0;
    for (int i = 1; i <= 2000; ++i) {
        const double x = i * 1e-3;
        for (int j = 1; j <= 2000; ++j) {
            const double y = j * 1e-3;
            const double v = level(x, y);
            if (v < best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    }
    double step = 1e-3;
    while (step > 1e-13) {
        bool moved = false;
        const double cand[4][2] = {{bx + step, by},
                                   {bx - step, by},
                                   {bx, by + step},
                                   {bx, by - step}};
        for (const auto& c : cand) {
            if (c[0] <= 0.0 || c[1] <= 0.0) continue;
            const double v = level(c[0], c[1]);
            if (v < best) {
                best = v;
                bx = c[0];
                by = c[1];
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    return best;
}

}  // namespace two_vertex_oracle

void criterion_5() {
    const auto g = testutil::two_complete();
    const auto spec = ProblemSpec::base(6.0);
    SolverConfig cfg;
    const auto out = solve_ground_state(g, spec, cfg);
    const double oracle = two_vertex_oracle::minimum();
    const double gap = std::fabs(out.energy - oracle);
    const bool ok = out.converged && gap <= kTwoVertexTol &&
                    out.residual_sup <= kResidualTol;
    if (out.converged) add_witness("two-vertex", g, out.best, spec);
    report(5, ok,
           "two-vertex ground state " + num(out.energy) + " vs grid oracle " +
               num(oracle) + " (gap " + num(gap) + ", tol " +
               num(kTwoVertexTol) + ", residual " + num(out.residual_sup) +
               ")");
}

// ---- criterion 6: sign-flip invariance ---------------------------------------
void criterion_6() {
    bool ok = !g_witnesses.empty();
    bool residual_exact = true;
    double worst = 0.0;
    int flips = 0;
    for (const auto& w : g_witnesses) {
        const double base_J = energy(w.fp, w.spec).J;
        const double base_res = residual_sup_of(w.fp, w.spec);
        for (int mode = 1; mode <= 3; ++mode) {
            FieldPair f = w.fp;
            if (mode & 1)
                for (auto& x : f.u.values) x = -x;
            if (mode & 2)
                for (auto& x : f.v.values) x = -x;
            worst = std::max(worst, std::fabs(energy(f, w.spec).J - base_J));
            if (residual_sup_of(f, w.spec) != base_res) residual_exact = false;
            ++flips;
        }
    }
    ok = ok && residual_exact && worst <= kFlipEnergyTol;
    report(6, ok,
           "sign flips on " + std::to_string(flips) + " flipped solutions (" +
               std::to_string(g_witnesses.size()) +
               " witnesses): max energy drift " + num(worst) + " (tol " +
               num(kFlipEnergyTol) + "), residual sups " +
               (residual_exact ? "bitwise equal" : "NOT equal"));
}

// ---- criterion 7: lambda homotopy toward the constrained problem -------------
void criterion_7() {
    const auto g = testutil::ring_graph(12, {0, 1, 2, 3});
    const std::vector<double> lambdas = {1.0,     10.0,     100.0,    1000.0,
                                         10000.0, 100000.0, 1000000.0};
    SolverConfig cfg;
    const auto sweep = lambda_sweep(g, lambdas, 6.0, cfg, true);

    bool converged = sweep.omega_converged;
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
        converged = converged && sweep.lambda_converged[i];

    bool below = true;
    for (double d : sweep.d_lambda)
        below = below && d <= sweep.d_omega + kSweepLevelSlack;

    const double d_last = sweep.d_lambda.back();
    const double gap = std::fabs(sweep.d_omega - d_last);
    const double gap_bound = kSweepGapRel * sweep.d_omega;
    const bool gap_ok = gap <= gap_bound;

    const double mass_last = sweep.mass_out.back();
    const bool mass_ok = mass_last <= kSweepMassTol;

    bool decreasing = true;
    for (std::size_t i = 1; i < sweep.mass_out.size(); ++i)
        decreasing = decreasing && sweep.mass_out[i] < sweep.mass_out[i - 1];

    if (sweep.omega_converged) {
        const std::vector<int> omega = {0, 1, 2, 3};  // zero set of a and b
        add_witness("window-constrained", g, sweep.omega_solution,
                    ProblemSpec::with_dirichlet(6.0, omega, omega));
    }
    if (!sweep.solutions.empty() && sweep.lambda_converged.back())
        add_witness("largest-lambda", g, sweep.solutions.back(),
                    ProblemSpec::with_lambda(6.0, lambdas.back()));

    const bool ok = converged && below && gap_ok && mass_ok && decreasing;
    report(7, ok,
           "lambda sweep to 1e6: levels below constrained level " +
               std::string(below ? "yes" : "NO") + "; final gap " + num(gap) +
               " vs bound " + num(gap_bound) + " (" +
               (gap_ok ? "met"
                       : "NOT met: the gap decays like lambda^(-1/(p-1)), so "
                         "this bound is reached only near lambda of 1e11") +
               "); stray mass " + num(mass_last) + " (tol " +
               num(kSweepMassTol) + ", " + (mass_ok ? "met" : "NOT met") +
               "); mass strictly decreasing " + (decreasing ? "yes" : "NO") +
               "; all runs converged " + (converged ? "yes" : "NO"));
}

// ---- criterion 8: exponent calibration ----------------------------------------
void criterion_8() {
    const double ps[] = {4.5, 5.0, 6.0, 10.0};
    const double eps[] = {0.01, 0.1, 0.5};
    double worst = 0.0;
    bool windows = true;
    for (double p : ps) {
        for (double e : eps) {
            const auto c = calibrate_exponents(p, e);
            const double g1 = std::fabs(c.p1 * c.s - 4.0);
            const double g2 = std::fabs(c.p2 * c.s - 2.0 * (p - 2.0));
            const double g3 = std::fabs(
                (2.0 + e - c.p1) * c.s * c.t / (c.s - 1.0) - p);
            const double g4 = std::fabs(
                (p - c.p2 - 2.0) * c.s * c.t / ((c.s - 1.0) * (c.t - 1.0)) - p);
            worst = std::max({worst, g1 / 4.0, g2 / std::max(1.0, 2.0 * (p - 2.0)),
                              g3 / p, g4 / p});
            windows = windows && c.s > 1.0 && c.t > 1.0 && c.p1 < 2.0 + e &&
                      c.p2 < p - 2.0 && c.p1 > 0.0 && c.p2 > 0.0;
        }
    }
    const bool anchor = calibrate_exponents(5.0, 0.1).s == 50.0;
    report(8, worst <= kCalibrationTol && windows && anchor,
           "calibration identities on 12 (p, epsilon) pairs: worst rel gap " +
               num(worst) + " (tol " + num(kCalibrationTol) +
               "), exponent windows " + (windows ? "hold" : "VIOLATED") +
               ", anchor s(5, 0.1) == 50 " + (anchor ? "exact" : "NOT exact"));
}

// ---- criterion 9: divergent-coupling series -----------------------------------
void criterion_9() {
    const auto params = appendix_params(6.0, 0.1);
    const std::vector<std::int64_t> cps = {1000, 10000, 100000, 1000000,
                                           10000000};
    const auto r = appendix_series(params, cps);
    const auto& v = r.verdict;
    const double q_conv = params.p * params.theta - params.delta;  // 1 + delta
    const double tail_expect =
        std::pow(std::log(1e7), -(q_conv - 1.0)) / (q_conv - 1.0);
    const bool tail_ok = v.convergent_tail_bounded &&
                         v.convergent_tail_bound <= tail_expect * (1.0 + 1e-12);
    const double gap1 = r.checkpoints.back().i1_relative_gap;
    const double gap2 = r.checkpoints.back().i2_relative_gap;
    const bool asym_ok = v.i1_matches_asymptote && v.i2_matches_asymptote &&
                         std::fabs(gap1) <= kSeriesAsymptoteRel &&
                         std::fabs(gap2) <= kSeriesAsymptoteRel;
    const bool shape_ok = v.i1_strictly_decreasing_from_16 &&
                          v.i2_strictly_decreasing_from_16 &&
                          v.i1_first_negative_n == 3 &&
                          v.i2_first_negative_n == 3;
    report(9, tail_ok && asym_ok && shape_ok,
           "series to N=1e7: convergent tail bound " +
               num(v.convergent_tail_bound) + " (<= " + num(tail_expect) +
               "), divergent asymptote gaps " + num(gap1) + "/" + num(gap2) +
               " (tol " + num(kSeriesAsymptoteRel) +
               "), partials strictly decreasing from n=16 with first negative "
               "term at n=3: " +
               (shape_ok ? "yes" : "NO"));
}

// ---- criterion 10: embedding bound ---------------------------------------------
void criterion_10() {
    Rng rng(1010u);
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    const std::pair<double, double> pq[] = {{6.0, 6.0}, {6.0, 12.0}, {5.0, 10.0}};
    for (int k = 0; k < 10; ++k) {
        const auto g = testutil::random_graph(rng, 5 + (k % 5));
        for (const auto& [p, q] : pq) {
            const auto [empirical, bound] = embedding_constant(
                g, p, q, g.a, 1000, 4242u + static_cast<std::uint64_t>(k));
            worst = std::max(worst, empirical / bound - 1.0);
            ok = ok && empirical <= bound * (1.0 + kEmbeddingSlack);
        }
    }
    report(10, ok,
           "embedding bound on 30 instance/exponent combinations x 1000 "
           "trials: max (empirical/bound - 1) = " +
               num(worst) + " (slack " + num(kEmbeddingSlack) + ")");
}

// ---- criterion 11: determinism --------------------------------------------------
void criterion_11(const char* cli_path) {
    bool lib_ok = true;
    {
        const auto g = testutil::two_complete();
        SolverConfig cfg;
        const auto r1 = solve_ground_state(g, ProblemSpec::base(6.0), cfg);
        const auto r2 = solve_ground_state(g, ProblemSpec::base(6.0), cfg);
        lib_ok = lib_ok && json_of(r1).dump() == json_of(r2).dump() &&
                 trace_csv(r1.trace) == trace_csv(r2.trace);
    }
    {
        const auto g = testutil::ring_graph(12, {0, 1, 2, 3});
        const std::vector<double> lambdas = {1.0, 10.0};
        SolverConfig cfg;
        const auto s1 = lambda_sweep(g, lambdas, 6.0, cfg, true);
        const auto s2 = lambda_sweep(g, lambdas, 6.0, cfg, true);
        lib_ok = lib_ok && json_of(s1).dump() == json_of(s2).dump();
    }
    {
        const auto params = appendix_params(6.0, 0.1);
        const std::vector<std::int64_t> cps = {1000, 10000, 100000};
        const auto r1 = appendix_series(params, cps);
        const auto r2 = appendix_series(params, cps);
        lib_ok = lib_ok && json_of(r1).dump() == json_of(r2).dump() &&
                 series_csv(r1) == series_csv(r2);
    }

    bool proc_ok = true;
    bool proc_ran = false;
    if (cli_path != nullptr) {
        namespace fs = std::filesystem;
        const fs::path root =
            fs::temp_directory_path() / "graphlog_acceptance_manifest";
        fs::remove_all(root);
        fs::create_directories(root);
        const fs::path gpath = root / "graph.json";
        save_graph(testutil::ring_graph(12, {0, 1, 2, 3}), gpath.string());
        const auto write_manifest = [&](const fs::path& file,
                                        const fs::path& out) {
            std::ofstream os(file);
            os << "{\"command\":\"sweep-lambda\",\"graph\":\""
               << gpath.string() << "\",\"p\":6,\"lambdas\":[1,10],\"out\":\""
               << out.string() << "\"}\n";
        };
        const fs::path m1 = root / "m1.json", m2 = root / "m2.json";
        const fs::path o1 = root / "run1", o2 = root / "run2";
        fs::create_directories(o1);
        fs::create_directories(o2);
        write_manifest(m1, o1);
        write_manifest(m2, o2);
        for (const auto& m : {m1, m2}) {
            const std::string cmd = std::string(cli_path) + " --manifest " +
                                    m.string() + " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) proc_ok = false;
        }
        proc_ran = true;
        const std::string rep1 = read_file(o1 / "report.json");
        proc_ok = proc_ok && !rep1.empty() &&
                  rep1 == read_file(o2 / "report.json");
        fs::remove_all(root);
    }

    report(11, lib_ok && proc_ok,
           std::string("repeat runs byte-identical: library pipelines ") +
               (lib_ok ? "yes" : "NO") +
               (proc_ran ? std::string(", manifest re-run at process level ") +
                               (proc_ok ? "yes" : "NO")
                         : std::string(
                               ", process level not exercised (no CLI path)")));
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;
    const auto guarded = [](int id, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            report(id, false, std::string("threw: ") + ex.what());
        }
    };
    guarded(1, criterion_1);
    guarded(2, criterion_2);
    guarded(3, criterion_3);
    guarded(4, criterion_4);
    guarded(5, criterion_5);
    guarded(7, criterion_7);  // runs before 6 so its solutions get flipped too
    guarded(6, criterion_6);
    guarded(8, criterion_8);
    guarded(9, criterion_9);
    guarded(10, criterion_10);
    guarded(11, [cli] { criterion_11(cli); });

    std::stable_sort(g_lines.begin(), g_lines.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [id, line] : g_lines) std::cout << line << "\n";
    std::cout << (g_failures == 0
                      ? std::string("all criteria passed")
                      : std::to_string(g_failures) + " criterion(s) failed")
              << "\n";
    return g_failures;
}
