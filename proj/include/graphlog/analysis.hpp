#ifndef GRAPHLOG_ANALYSIS_HPP
#define GRAPHLOG_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graphlog/field.hpp"
#include "graphlog/graph.hpp"

namespace graphlog {

// Exponent system that absorbs logarithmic factors into power estimates:
// s = p/eps, p1 = 4 eps/p, p2 = 2(p-2) eps/p, t = p(p-eps)/(p(2+eps)-4 eps),
// satisfying p1 s = 4, p2 s = 2(p-2), (2+eps-p1) s t/(s-1) = p and
// (p-p2-2) s t/((s-1)(t-1)) = p, with s, t > 1, p1 < 2+eps, p2 < p-2.
struct CalibrationResult {
    double p = 0.0;
    double epsilon = 0.0;
    double s = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double t = 0.0;
};

// Requires p > 4 and epsilon in (0,1); every identity above is re-verified to
// 1e-12 before returning. EpsilonTooLarge if t fails to exceed 1.
CalibrationResult calibrate_exponents(double p, double epsilon);

// Decay exponents for the weighted half-line example whose coupling
// integrals diverge: theta = phi = (1+2*delta)/p, valid while
// (p-2)*phi + 2*theta - 1 <= 1 (DeltaTooLarge beyond).
struct AppendixParams {
    double p = 0.0;
    double delta = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::int64_t n_max = 0; // series truncation / generator length
};

AppendixParams appendix_params(double p, double delta,
                               std::int64_t n_max = 10'000'000);

struct SeriesCheckpoint {
    std::int64_t n = 0;
    double convergent_partial = 0.0; // sum of n^{-1} (log n)^{-(p*theta-delta)}
    double i1_partial = 0.0;         // full first coupling series
    double i2_partial = 0.0;
    double i1_bare_partial = 0.0; // unscaled divergent component of i1
    double i2_bare_partial = 0.0;
    double convergent_asymptote = 0.0; // closed-form integral from 3 to n
    double i1_asymptote = 0.0;         // same for the bare i1 exponent
    double i2_asymptote = 0.0;
    double i1_relative_gap = 0.0; // |bare - asymptote| / asymptote
    double i2_relative_gap = 0.0;
};

struct SeriesVerdict {
    double convergent_tail_bound = 0.0; // integral-test tail past the last checkpoint
    bool convergent_tail_bounded = false;
    bool i1_matches_asymptote = false; // within 5% at the last checkpoint
    bool i2_matches_asymptote = false;
    bool i1_strictly_decreasing_from_16 = false;
    bool i2_strictly_decreasing_from_16 = false;
    std::int64_t i1_first_negative_n = 0;
    std::int64_t i2_first_negative_n = 0;
};

struct SeriesReport {
    AppendixParams params;
    std::vector<SeriesCheckpoint> checkpoints;
    SeriesVerdict verdict;
};

// Partial sums of the convergent weighted-norm series and of both divergent
// coupling series at each checkpoint (ascending, all >= 3), with closed-form
// integral comparisons. Terms are summed in ascending n with compensated
// accumulation; blocks of fixed width may run in parallel and merge in fixed
// order, so the result is byte-stable.
SeriesReport appendix_series(const AppendixParams& params,
                             std::span<const std::int64_t> checkpoints);

// Half-line path instance realizing the divergent example: vertex n has
// measure n for n >= 3 (1 below), potentials (log n)^delta for n >= 3
// (1 below), u(n) = n^{-2/p} (log n)^{-theta} and v likewise with phi
// (0 below n = 3). Values are returned separately so the caller controls
// field lifetimes.
struct AppendixInstance {
    GraphInstance graph;
    std::vector<double> u_values;
    std::vector<double> v_values;
};

AppendixInstance appendix_instance(const AppendixParams& params,
                                   std::int64_t n_truncate);

// Monte-Carlo check of the norm embedding: empirical sup over random fields
// of ||u||_q / ||u||_{H} against the closed bound
// mu_min^{1/q - 1/p} * V0^{-1/p}, V0 = min potential (> 0, else
// PotentialNotPositive). Requires q >= p >= 1.
std::pair<double, double> embedding_constant(const GraphInstance& g, double p,
                                             double q,
                                             std::span<const double> potential,
                                             int trials, std::uint64_t rng_seed);

} // namespace graphlog

#endif
