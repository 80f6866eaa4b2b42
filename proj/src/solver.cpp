#include "graphlog/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphlog/errors.hpp"
#include "graphlog/kahan.hpp"
#include "graphlog/num_format.hpp"
#include "graphlog/parallel.hpp"
#include "graphlog/rng.hpp"

namespace graphlog {

namespace {

constexpr double kMinStep = 1e-18;
constexpr int kStallWindow = 50;

// On the constraint set J coincides with (2/p^2) B, a sum of positive
// terms. Evaluating J through B instead of (norms - logs)/p sidesteps the
// catastrophic cancellation of the latter when the coupling mass is tiny
// against the norms, so line-search comparisons, traces and winner
// selection stay meaningful even at badly scaled iterates.
double manifold_energy(const FieldPair& fp, const ProblemSpec& spec) {
    return 2.0 / (spec.p * spec.p) * energy(fp, spec).coupling_B;
}

double residual_sup_norm(const std::pair<Field, Field>& res) {
    double sup = 0.0;
    for (double x : res.first.values) sup = std::max(sup, std::abs(x));
    for (double x : res.second.values) sup = std::max(sup, std::abs(x));
    return sup;
}

struct RunOutcome {
    FieldPair pair;
    double energy = std::numeric_limits<double>::infinity();
    double defect = 0.0;
    double residual_sup = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    std::string note;
    std::vector<TracePoint> trace;
};

// ---------------------------------------------------------------------------
// Newton polish. The projected line search cannot push the residual much
// below the square root of machine epsilon: near the minimum the Armijo
// comparison is decided by rounding noise in J. The residual system itself
// has no such floor, so a stalled run finishes with a damped Newton
// iteration on F(w) = residual(w) = 0 over the free coordinates
// (finite-difference Jacobian, dense LU). Desk-scale deliberately: skipped
// beyond kNewtonMaxUnknowns unknowns.
constexpr int kNewtonMaxUnknowns = 600;
constexpr int kNewtonMaxIters = 200;

struct FreeCoords {
    std::vector<int> u; // vertices whose u-value varies
    std::vector<int> v;
    int size() const { return static_cast<int>(u.size() + v.size()); }
};

FreeCoords free_coords(const GraphInstance& g, const ProblemSpec& spec) {
    FreeCoords fc;
    if (spec.variant == Variant::dirichlet) {
        fc.u = spec.omega_a;
        fc.v = spec.omega_b;
    } else {
        fc.u.resize(g.vertex_count());
        fc.v.resize(g.vertex_count());
        for (int x = 0; x < g.vertex_count(); ++x) fc.u[x] = fc.v[x] = x;
    }
    return fc;
}

// Gaussian elimination with partial pivoting, in place; false on a
// vanishing pivot. A is row-major m x m, b the right-hand side.
bool lu_solve(std::vector<double>& A, std::vector<double>& b, int m) {
    for (int col = 0; col < m; ++col) {
        int piv = col;
        double best = std::abs(A[static_cast<std::size_t>(col) * m + col]);
        for (int row = col + 1; row < m; ++row) {
            const double cand = std::abs(A[static_cast<std::size_t>(row) * m + col]);
            if (cand > best) {
                best = cand;
                piv = row;
            }
        }
        if (!(best > 1e-300)) return false;
        if (piv != col) {
            for (int k = col; k < m; ++k)
                std::swap(A[static_cast<std::size_t>(piv) * m + k],
                          A[static_cast<std::size_t>(col) * m + k]);
            std::swap(b[piv], b[col]);
        }
        const double d = A[static_cast<std::size_t>(col) * m + col];
        for (int row = col + 1; row < m; ++row) {
            const double f = A[static_cast<std::size_t>(row) * m + col] / d;
            if (f == 0.0) continue;
            for (int k = col + 1; k < m; ++k)
                A[static_cast<std::size_t>(row) * m + k] -=
                    f * A[static_cast<std::size_t>(col) * m + k];
            b[row] -= f * b[col];
        }
    }
    for (int row = m - 1; row >= 0; --row) {
        double s = b[row];
        for (int k = row + 1; k < m; ++k)
            s -= A[static_cast<std::size_t>(row) * m + k] * b[k];
        b[row] = s / A[static_cast<std::size_t>(row) * m + row];
    }
    return true;
}

struct PolishResult {
    bool accepted = false;
    FieldPair pair;
    double residual_sup = 0.0;
    double energy = 0.0;
    int steps = 0;
    std::vector<TracePoint> trace;
};

PolishResult newton_polish(const FieldPair& start_pair, double start_sup,
                           const ProblemSpec& spec, const SolverConfig& cfg,
                           int iter_base) {
    PolishResult out;
    const GraphInstance& g = *start_pair.u.graph;
    const FreeCoords fc = free_coords(g, spec);
    const int m = fc.size();
    if (m == 0 || m > kNewtonMaxUnknowns) return out;

    const auto collect = [&](const std::pair<Field, Field>& res,
                             std::vector<double>& F) {
        F.resize(static_cast<std::size_t>(m));
        std::size_t k = 0;
        for (int x : fc.u) F[k++] = res.first.values[x];
        for (int x : fc.v) F[k++] = res.second.values[x];
    };
    const auto eval = [&](const FieldPair& fp, std::vector<double>& F) -> bool {
        try {
            collect(residual(fp, spec), F);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    const auto sup_norm = [](const std::vector<double>& F) {
        double s = 0.0;
        for (double x : F) s = std::max(s, std::abs(x));
        return s;
    };
    const auto l2_norm = [](const std::vector<double>& F) {
        double s = 0.0;
        for (double x : F) s += x * x;
        return std::sqrt(s);
    };
    const auto value_at = [&](FieldPair& fp, int j) -> double& {
        const std::size_t ju = static_cast<std::size_t>(j);
        return ju < fc.u.size() ? fp.u.values[fc.u[ju]]
                                : fp.v.values[fc.v[ju - fc.u.size()]];
    };

    FieldPair cur = start_pair;
    std::vector<double> F;
    if (!eval(cur, F)) return out;
    double cur_sup = sup_norm(F);
    int steps = 0;

    std::vector<double> A(static_cast<std::size_t>(m) * m);
    std::vector<double> f_plus, f_minus, f_cand, rhs;
    for (int it = 0; it < kNewtonMaxIters; ++it) {
        // Aim well below the tolerance so the accepted point satisfies the
        // manifold identities with margin, not just the residual gate.
        if (cur_sup == 0.0 || cur_sup <= 1e-3 * cfg.residual_tol) break;

        bool jac_ok = true;
        for (int j = 0; j < m && jac_ok; ++j) {
            FieldPair probe = cur;
            double& wj = value_at(probe, j);
            const double w0 = wj;
            const double h = 1e-7 * std::max(1.0, std::abs(w0));
            wj = w0 + h;
            jac_ok = eval(probe, f_plus);
            if (jac_ok) {
                wj = w0 - h;
                jac_ok = eval(probe, f_minus);
            }
            if (jac_ok) {
                for (int i = 0; i < m; ++i)
                    A[static_cast<std::size_t>(i) * m + j] =
                        (f_plus[i] - f_minus[i]) / (2.0 * h);
            }
        }
        if (!jac_ok) break;

        rhs.assign(F.begin(), F.end());
        for (double& x : rhs) x = -x;
        std::vector<double> lu = A;
        if (!lu_solve(lu, rhs, m)) break;

        const double f_norm = l2_norm(F);
        double t = 1.0;
        bool moved = false;
        while (t >= 1e-12) {
            FieldPair cand = cur;
            for (int j = 0; j < m; ++j) value_at(cand, j) += t * rhs[j];
            if (eval(cand, f_cand) &&
                l2_norm(f_cand) <= (1.0 - 1e-4 * t) * f_norm) {
                cur = std::move(cand);
                F = f_cand;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;

        cur_sup = sup_norm(F);
        ++steps;
        double j_now = std::numeric_limits<double>::quiet_NaN();
        try {
            j_now = manifold_energy(cur, spec);
        } catch (const Error&) {
        }
        out.trace.push_back({iter_base + steps, j_now, cur_sup, t, true});
    }

    // Accept only a genuine improvement that stays a nontrivial coupled
    // state: Newton tracks any root of F, including the zero pair and
    // decoupled saddles, which must never win the multistart.
    if (steps == 0 || !(cur_sup < start_sup)) return out;
    try {
        if (is_zero_pair(cur)) return out;
        const FiberingCoefficients coeff = fibering_coefficients(cur, spec);
        if (!(coeff.B > 0.0)) return out;
        out.energy = manifold_energy(cur, spec);
        if (!(out.energy > 0.0)) return out;
    } catch (const Error&) {
        return out;
    }
    out.accepted = true;
    out.pair = std::move(cur);
    out.residual_sup = cur_sup;
    out.steps = steps;
    return out;
}

// One projected-descent run. The start need not be on the manifold; it is
// projected first. Throws only while placing the start (degenerate or
// overflowing rays, non-finite energy after projection); failures inside
// the line search merely reject the step.
RunOutcome descend(const FieldPair& start, const ProblemSpec& spec,
                   const SolverConfig& cfg) {
    const GraphInstance& g = *start.u.graph;
    RunOutcome out;
    FieldPair cur = project_to_nehari(start, spec).projected;
    double j_cur = manifold_energy(cur, spec);

    // Below rounding, the Armijo inequality is decided by noise; the slack
    // keeps the polish phase (residual still shrinking, energy numerically
    // flat) alive instead of failing the line search.
    const auto armijo_slack = [](double j) {
        return 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(j));
    };

    double last_step = 0.0;
    double best_res = std::numeric_limits<double>::infinity();
    int no_progress = 0;
    int accepted = 0;
    bool stop = false;
    std::string note;

    while (true) {
        auto res = residual(cur, spec);
        double res_sup = residual_sup_norm(res);
        out.trace.push_back({accepted, j_cur, res_sup, last_step});
        out.residual_sup = res_sup;
        if (res_sup <= cfg.residual_tol) {
            out.converged = true;
            break;
        }
        if (stop || accepted >= cfg.max_iters) break;

        // Direction: negative residual, scaled per vertex by 1/mu. Its
        // pairing with the derivative is minus the unweighted residual
        // square sum.
        KahanSum slope;
        std::vector<double> du(g.vertex_count()), dv(g.vertex_count());
        for (int x = 0; x < g.vertex_count(); ++x) {
            du[x] = -res.first.values[x] / g.mu[x];
            dv[x] = -res.second.values[x] / g.mu[x];
            slope.add(-(res.first.values[x] * res.first.values[x] +
                        res.second.values[x] * res.second.values[x]));
        }
        const double g0 = slope.value();
        if (!(g0 < 0.0)) {
            note = "zero descent direction";
            break;
        }

        double step = cfg.step_init;
        bool took = false;
        while (step >= kMinStep) {
            FieldPair raw = cur;
            for (int x = 0; x < g.vertex_count(); ++x) {
                raw.u.values[x] += step * du[x];
                raw.v.values[x] += step * dv[x];
            }
            try {
                FieldPair cand = project_to_nehari(raw, spec).projected;
                double j_new = manifold_energy(cand, spec);
                if (j_new <= j_cur + cfg.armijo_c * step * g0 + armijo_slack(j_cur)) {
                    double decrease = j_cur - j_new;
                    cur = std::move(cand);
                    j_cur = j_new;
                    last_step = step;
                    took = true;
                    ++accepted;
                    bool res_progress = res_sup < best_res;
                    if (res_progress) best_res = res_sup;
                    if (decrease < cfg.stall_tol || !(decrease > 0.0)) {
                        if (!res_progress && ++no_progress >= kStallWindow) {
                            stop = true;
                            note = "stalled";
                        }
                    } else if (res_progress) {
                        no_progress = 0;
                    }
                    break;
                }
            } catch (const CouplingDegenerate&) {
            } catch (const RayOverflow&) {
            } catch (const NonFiniteValue&) {
            }
            step *= cfg.backtrack_factor;
        }
        if (!took) {
            note = "line search exhausted";
            break;
        }
    }

    if (!out.converged) {
        PolishResult polish =
            newton_polish(cur, out.residual_sup, spec, cfg, accepted);
        if (polish.accepted) {
            cur = std::move(polish.pair);
            j_cur = polish.energy;
            accepted += polish.steps;
            for (const TracePoint& tp : polish.trace) out.trace.push_back(tp);
            out.residual_sup = polish.residual_sup;
            out.converged = polish.residual_sup <= cfg.residual_tol;
            if (!out.converged) note = "polish stalled";
        }
    }

    out.pair = std::move(cur);
    out.energy = j_cur;
    out.defect = nehari_defect(out.pair, spec);
    out.iterations = accepted;
    out.note = out.converged ? "" : note;
    return out;
}

SolveReport solve_multistart(const GraphInstance& g, const ProblemSpec& spec,
                             const SolverConfig& cfg,
                             std::span<const FieldPair> extra_starts) {
    cfg.validate();
    const std::size_t total = static_cast<std::size_t>(cfg.seeds) + extra_starts.size();
    std::vector<RunOutcome> runs(total);
    std::vector<int> indices(total);

    // Slots: extra starts first with negative indices (their order is part
    // of the contract with lambda_sweep), then the random seeds.
    parallel_for(total, [&](std::size_t slot) {
        if (slot < extra_starts.size()) {
            indices[slot] = -static_cast<int>(slot) - 1;
            try {
                runs[slot] = descend(extra_starts[slot], spec, cfg);
            } catch (const Error& e) {
                runs[slot].note = e.what();
            }
            return;
        }
        const int seed = static_cast<int>(slot - extra_starts.size());
        indices[slot] = seed;
        try {
            FieldPair start = random_admissible_pair(
                g, Rng::stream_seed(cfg.rng_seed, static_cast<std::uint64_t>(seed)), spec);
            runs[slot] = descend(start, spec, cfg);
        } catch (const Error& e) {
            runs[slot].note = e.what();
        }
    });

    // Winner: lowest energy among converged runs, ties to the lowest start
    // index; best effort over all runs when nothing converged. Non-finite
    // energies (failed runs) always lose.
    auto score = [](const RunOutcome& r) {
        return std::isfinite(r.energy) ? r.energy
                                       : std::numeric_limits<double>::infinity();
    };
    auto better = [&](std::size_t lhs, std::size_t rhs) {
        const RunOutcome& a = runs[lhs];
        const RunOutcome& b = runs[rhs];
        if (a.converged != b.converged) return a.converged;
        if (score(a) != score(b)) return score(a) < score(b);
        return indices[lhs] < indices[rhs];
    };
    std::size_t win = 0;
    for (std::size_t i = 1; i < total; ++i)
        if (better(i, win)) win = i;

    SolveReport rep;
    rep.best = runs[win].pair.u.graph ? runs[win].pair
                                      : FieldPair{zero_field(g), zero_field(g)};
    rep.energy = runs[win].energy;
    rep.nehari_defect = runs[win].defect;
    rep.residual_sup = runs[win].residual_sup;
    rep.iterations = runs[win].iterations;
    rep.trace = runs[win].trace;
    rep.converged = runs[win].converged;
    for (std::size_t i = 0; i < total; ++i) {
        rep.seed_results.push_back({indices[i], runs[i].converged, runs[i].energy,
                                    runs[i].residual_sup, runs[i].defect,
                                    runs[i].iterations, runs[i].note});
    }
    return rep;
}

std::vector<int> intersection_sorted(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
}

} // namespace

void SolverConfig::validate() const {
    if (seeds < 1) throw ValidationError("seeds must be positive");
    if (max_iters < 1) throw ValidationError("max_iters must be positive");
    if (!(step_init > 0.0)) throw ValidationError("step_init must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw ValidationError("backtrack_factor must lie in (0,1)");
    if (!(armijo_c > 0.0 && armijo_c < 1.0))
        throw ValidationError("armijo_c must lie in (0,1)");
    if (!(residual_tol >= 0.0))
        throw ValidationError("residual_tol must be nonnegative");
    if (!(stall_tol >= 0.0)) throw ValidationError("stall_tol must be nonnegative");
}

FieldPair random_admissible_pair(const GraphInstance& g, std::uint64_t rng_seed,
                                 const ProblemSpec& spec) {
    Rng rng(rng_seed);
    FieldPair fp{zero_field(g), zero_field(g)};

    if (spec.variant == Variant::dirichlet) {
        std::vector<int> common = intersection_sorted(spec.omega_a, spec.omega_b);
        if (common.empty())
            throw EmptyIntersection(
                "omega_a and omega_b share no vertex; no admissible start exists");
        for (int x : spec.omega_a) fp.u.values[x] = rng.symmetric();
        for (int x : spec.omega_b) fp.v.values[x] = rng.symmetric();
        int forced = common[rng.index(common.size())];
        fp.u.values[forced] = rng.uniform(0.5, 1.0);
        fp.v.values[forced] = rng.uniform(0.5, 1.0);
        return fp;
    }

    for (double& x : fp.u.values) x = rng.symmetric();
    for (double& x : fp.v.values) x = rng.symmetric();
    int forced = static_cast<int>(rng.index(fp.u.values.size()));
    fp.u.values[forced] = rng.uniform(0.5, 1.0);
    fp.v.values[forced] = rng.uniform(0.5, 1.0);
    return fp;
}

SolveReport solve_ground_state(const GraphInstance& g, const ProblemSpec& spec,
                               const SolverConfig& cfg) {
    return solve_multistart(g, spec, cfg, {});
}

SolveReport solve_dirichlet(const GraphInstance& g, std::span<const int> omega_a,
                            std::span<const int> omega_b, double p,
                            const SolverConfig& cfg) {
    ProblemSpec spec = ProblemSpec::with_dirichlet(
        p, std::vector<int>(omega_a.begin(), omega_a.end()),
        std::vector<int>(omega_b.begin(), omega_b.end()));
    if (intersection_sorted(spec.omega_a, spec.omega_b).empty())
        throw EmptyIntersection(
            "omega_a and omega_b share no vertex; no admissible start exists");
    return solve_multistart(g, spec, cfg, {});
}

SweepResult lambda_sweep(const GraphInstance& g, std::span<const double> lambdas,
                         double p, const SolverConfig& cfg, bool warm_start) {
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (g.a[x] < 0.0 || g.b[x] < 0.0)
            throw ValidationError("sweep requires nonnegative potentials; vertex " +
                                  format_int(g.ids[x]) + " violates this");
    }
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= lambdas[i - 1]))
            throw ValidationError("lambda grid must be ascending");
    }
    std::vector<int> omega_a, omega_b;
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (g.a[x] == 0.0) omega_a.push_back(x);
        if (g.b[x] == 0.0) omega_b.push_back(x);
    }
    if (omega_a.empty() || omega_b.empty() ||
        intersection_sorted(omega_a, omega_b).empty())
        throw EmptyIntersection("the zero sets of a and b must share a vertex");

    SweepResult sw;
    sw.lambdas.assign(lambdas.begin(), lambdas.end());

    // The boundary problem first: its zero-extended solution lies on every
    // penalized manifold with the same energy, so feeding it to each
    // lambda's multistart pins d_lambda <= d_omega numerically as well.
    SolveReport omega_rep = solve_dirichlet(g, omega_a, omega_b, p, cfg);
    sw.d_omega = omega_rep.energy;
    sw.omega_converged = omega_rep.converged;
    sw.omega_solution = omega_rep.best;

    FieldPair prev;
    bool have_prev = false;
    for (double lambda : lambdas) {
        std::string err;
        try {
            ProblemSpec spec = ProblemSpec::with_lambda(p, lambda);
            std::vector<FieldPair> extras;
            if (warm_start && have_prev) extras.push_back(prev);
            extras.push_back(omega_rep.best);
            SolveReport rep = solve_multistart(g, spec, cfg, extras);

            KahanSum out_mass, penalty;
            for (int x = 0; x < g.vertex_count(); ++x) {
                const double um = pow_abs(rep.best.u.values[x], p);
                const double vm = pow_abs(rep.best.v.values[x], p);
                if (g.a[x] != 0.0) out_mass.add(g.mu[x] * um);
                if (g.b[x] != 0.0) out_mass.add(g.mu[x] * vm);
                penalty.add(g.mu[x] * lambda * (g.a[x] * um + g.b[x] * vm));
            }
            // A zero best pair means every run died before producing an
            // iterate; zero masses would misread as perfect concentration.
            const bool dead = !rep.converged && is_zero_pair(rep.best);
            const double nan = std::numeric_limits<double>::quiet_NaN();
            sw.d_lambda.push_back(rep.energy);
            sw.mass_out.push_back(dead ? nan : out_mass.value());
            sw.penalty_mass.push_back(dead ? nan : penalty.value());
            sw.lambda_converged.push_back(rep.converged);
            sw.solutions.push_back(rep.best);
            if (rep.converged) {
                prev = rep.best;
                have_prev = true;
            }
        } catch (const Error& e) {
            err = e.what();
            const double nan = std::numeric_limits<double>::quiet_NaN();
            sw.d_lambda.push_back(nan);
            sw.mass_out.push_back(nan);
            sw.penalty_mass.push_back(nan);
            sw.lambda_converged.push_back(false);
            sw.solutions.push_back(FieldPair{zero_field(g), zero_field(g)});
        }
        sw.errors.push_back(err);
    }
    return sw;
}

} // namespace graphlog
