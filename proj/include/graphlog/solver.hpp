#ifndef GRAPHLOG_SOLVER_HPP
#define GRAPHLOG_SOLVER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphlog/nehari.hpp"

namespace graphlog {

struct SolverConfig {
    int seeds = 8;              // multistart count
    std::uint64_t rng_seed = 1;
    int max_iters = 5000;       // accepted steps per start
    double step_init = 1.0;
    double backtrack_factor = 0.5; // in (0, 1)
    double armijo_c = 1e-4;        // in (0, 1)
    double residual_tol = 1e-9;    // pointwise convergence threshold
    double stall_tol = 0.0;        // energy-progress floor for the stall stop

    void validate() const;
};

struct TracePoint {
    int iter = 0;
    double J = 0.0;
    double residual_sup = 0.0;
    double step = 0.0; // accepted step that produced this iterate (0 at start)
    bool polish = false; // Newton phase row (not part of the CSV columns)
};

struct SeedResult {
    int seed_index = 0; // negative indices are deterministic extra starts
    bool converged = false;
    double energy = 0.0;
    double residual_sup = 0.0;
    double nehari_defect = 0.0;
    int iterations = 0;
    std::string note; // nonempty when the start itself failed
};

struct SolveReport {
    FieldPair best;
    double energy = 0.0;
    double nehari_defect = 0.0;
    double residual_sup = 0.0;
    int iterations = 0;
    std::vector<TracePoint> trace; // winning run only
    std::vector<SeedResult> seed_results;
    bool converged = false;
};

struct SweepResult {
    std::vector<double> lambdas;
    std::vector<double> d_lambda;
    std::vector<double> mass_out;     // mass of u outside omega_a plus v outside omega_b
    std::vector<double> penalty_mass; // integral of lambda(a|u|^p + b|v|^p)
    std::vector<bool> lambda_converged;
    std::vector<std::string> errors; // per-lambda, empty string when clean
    std::vector<FieldPair> solutions;
    double d_omega = 0.0;
    bool omega_converged = false;
    FieldPair omega_solution;
};

// Independent pair with i.i.d. values in [-1, 1) and one uniformly chosen
// vertex forced into [0.5, 1) in both components, so the coupling integral is
// strictly positive. The dirichlet variant confines supports to the omega
// sets and forces a vertex of their intersection (EmptyIntersection if none).
FieldPair random_admissible_pair(const GraphInstance& g, std::uint64_t rng_seed,
                                 const ProblemSpec& spec);

// Multistart projected descent restricted to the constraint manifold:
// project the start, then repeatedly step along the negative residual scaled
// by 1/mu, backtrack until the projected energy satisfies the Armijo test,
// and re-project. A run that stalls above the tolerance finishes with a
// damped Newton iteration on the residual system (desk-scale; skipped on
// very large instances), accepted only if it improves the residual and
// stays a nontrivial coupled state. A start converges when the pointwise
// residual sup reaches residual_tol. The report carries every start's
// outcome; the winner is the lowest-energy converged start (ties: lowest
// index). If nothing converged the best effort is returned with
// converged=false. Energies in the report and trace are evaluated through
// the constraint-set identity (2/p^2) B, the well-conditioned form of the
// objective there.
SolveReport solve_ground_state(const GraphInstance& g, const ProblemSpec& spec,
                               const SolverConfig& cfg);

// Same algorithm on the zero-boundary problem: only values inside the omega
// sets vary. omega sets are dense indices; their intersection must be
// nonempty.
SolveReport solve_dirichlet(const GraphInstance& g, std::span<const int> omega_a,
                            std::span<const int> omega_b, double p,
                            const SolverConfig& cfg);

// Solves the penalized family along an ascending lambda grid against the
// zero sets of a and b, plus the zero-boundary problem once. Each lambda's
// multistart is augmented with the zero-extended boundary-problem solution
// and, when warm_start is set, the previous lambda's solution. Per-lambda
// failures are recorded, not fatal.
SweepResult lambda_sweep(const GraphInstance& g, std::span<const double> lambdas,
                         double p, const SolverConfig& cfg, bool warm_start);

} // namespace graphlog

#endif
