#include "graphlog/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "graphlog/calculus.hpp"
#include "graphlog/errors.hpp"
#include "graphlog/kahan.hpp"
#include "graphlog/parallel.hpp"
#include "graphlog/rng.hpp"

namespace graphlog {

namespace {

void require_close(double actual, double expected, const std::string& label) {
    const double scale = std::max({1.0, std::abs(actual), std::abs(expected)});
    if (std::abs(actual - expected) > 1e-12 * scale) {
        throw ValidationError("calibration identity '" + label +
                              "' failed: " + std::to_string(actual) + " vs " +
                              std::to_string(expected));
    }
}

} // namespace

CalibrationResult calibrate_exponents(double p, double epsilon) {
    if (!(p > 4.0)) {
        throw InvalidP("p must exceed 4, got " + std::to_string(p));
    }
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw ValidationError("epsilon must lie in (0,1), got " +
                              std::to_string(epsilon));
    }

    CalibrationResult r;
    r.p = p;
    r.epsilon = epsilon;
    r.s = p / epsilon;
    r.p1 = 4.0 * epsilon / p;
    r.p2 = 2.0 * (p - 2.0) * epsilon / p;
    r.t = p * (p - epsilon) / (p * (2.0 + epsilon) - 4.0 * epsilon);

    if (!(r.t > 1.0)) {
        throw EpsilonTooLarge("epsilon " + std::to_string(epsilon) +
                              " leaves no interpolation room at p = " +
                              std::to_string(p));
    }
    if (!(r.s > 1.0)) {
        throw EpsilonTooLarge("s must exceed 1, got " + std::to_string(r.s));
    }
    if (!(r.p1 < 2.0 + epsilon)) {
        throw ValidationError("p1 must stay below 2 + epsilon");
    }
    if (!(r.p2 < p - 2.0)) {
        throw ValidationError("p2 must stay below p - 2");
    }

    // The whole point of the split: both auxiliary exponents recombine to p.
    require_close(r.p1 * r.s, 4.0, "p1 * s = 4");
    require_close(r.p2 * r.s, 2.0 * (p - 2.0), "p2 * s = 2(p-2)");
    require_close((2.0 + epsilon - r.p1) * r.s * r.t / (r.s - 1.0), p,
                  "(2+eps-p1) s t / (s-1) = p");
    require_close((p - r.p2 - 2.0) * r.s * r.t / ((r.s - 1.0) * (r.t - 1.0)), p,
                  "(p-p2-2) s t / ((s-1)(t-1)) = p");
    return r;
}

AppendixParams appendix_params(double p, double delta, std::int64_t n_max) {
    if (!(p > 4.0)) {
        throw InvalidP("p must exceed 4, got " + std::to_string(p));
    }
    if (!(delta > 0.0)) {
        throw ValidationError("delta must be positive, got " +
                              std::to_string(delta));
    }
    if (n_max < 3) {
        throw ValidationError("n_max must be at least 3, got " +
                              std::to_string(n_max));
    }

    AppendixParams params;
    params.p = p;
    params.delta = delta;
    params.theta = (1.0 + 2.0 * delta) / p;
    params.phi = params.theta;
    params.n_max = n_max;

    // The coupling terms only decay like n^{-1} (log n)^{-(p-2)phi - 2theta + 1};
    // past this threshold the log exponent overshoots and the example breaks.
    const double coupling_exponent =
        (p - 2.0) * params.phi + 2.0 * params.theta - 1.0;
    if (coupling_exponent > 1.0 + 1e-12) {
        throw DeltaTooLarge("delta " + std::to_string(delta) +
                            " pushes the coupling log-exponent to " +
                            std::to_string(coupling_exponent) +
                            ", past the divergence window (max 1)");
    }
    return params;
}

namespace {

// Closed form of the integral of x^{-1} (log x)^{-q} from 3 to n.
double log_integral(double n, double q) {
    const double l3 = std::log(3.0);
    const double ln = std::log(n);
    if (q == 1.0) {
        return std::log(ln) - std::log(l3);
    }
    return (std::pow(ln, 1.0 - q) - std::pow(l3, 1.0 - q)) / (1.0 - q);
}

struct SeriesBlock {
    KahanSum conv;
    KahanSum i1_bare;
    KahanSum i1_loglog; // n^{-1} (log n)^{-q-1} * log log n
    KahanSum i2_bare;
    KahanSum i2_loglog;
    std::int64_t i1_first_negative = 0; // 0 = none in this block
    std::int64_t i2_first_negative = 0;
    std::int64_t i1_nondecrease_at = 0; // first n >= 16 whose summand is >= 0
    std::int64_t i2_nondecrease_at = 0;
};

} // namespace

SeriesReport appendix_series(const AppendixParams& params,
                             std::span<const std::int64_t> checkpoints) {
    if (checkpoints.empty()) {
        throw ValidationError("at least one series checkpoint is required");
    }
    std::int64_t prev = 2;
    for (std::int64_t c : checkpoints) {
        if (c < 3) {
            throw ValidationError("series checkpoints start at 3, got " +
                                  std::to_string(c));
        }
        if (c <= prev) {
            throw ValidationError("series checkpoints must be strictly increasing");
        }
        prev = c;
    }

    const double p = params.p;
    const double theta = params.theta;
    const double phi = params.phi;
    const double q_conv = p * theta - params.delta;
    const double q1 = (p - 2.0) * phi + 2.0 * theta - 1.0;
    const double q2 = (p - 2.0) * theta + 2.0 * phi - 1.0;

    // Fixed-width blocks keep the summation order (and therefore the rounded
    // result) independent of the worker count.
    constexpr std::int64_t kBlockWidth = std::int64_t{1} << 20;
    struct Range {
        std::int64_t lo, hi; // inclusive
        int checkpoint = -1; // index recorded after this block, -1 for none
    };
    std::vector<Range> blocks;
    std::int64_t lo = 3;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const std::int64_t end = checkpoints[k];
        while (lo <= end) {
            const std::int64_t hi = std::min(end, lo + kBlockWidth - 1);
            blocks.push_back({lo, hi, hi == end ? static_cast<int>(k) : -1});
            lo = hi + 1;
        }
        if (blocks.empty() || blocks.back().hi != end) {
            // Checkpoint coincides with the previous one's end; the strict
            // monotonicity check above makes this unreachable.
            throw ValidationError("internal: checkpoint block split failed");
        }
    }

    std::vector<SeriesBlock> partials(blocks.size());
    parallel_for(blocks.size(), [&](std::size_t bi) {
        const Range range = blocks[bi];
        SeriesBlock blk;
        for (std::int64_t n = range.lo; n <= range.hi; ++n) {
            const double invn = 1.0 / static_cast<double>(n);
            const double lg = std::log(static_cast<double>(n));
            const double ll = std::log(lg);
            const double bare1 = invn * std::pow(lg, -q1);
            const double bare2 = invn * std::pow(lg, -q2);
            const double loglog1 = invn * std::pow(lg, -q1 - 1.0) * ll;
            const double loglog2 = invn * std::pow(lg, -q2 - 1.0) * ll;
            blk.conv.add(invn * std::pow(lg, -q_conv));
            blk.i1_bare.add(bare1);
            blk.i1_loglog.add(loglog1);
            blk.i2_bare.add(bare2);
            blk.i2_loglog.add(loglog2);

            const double term1 = -(4.0 / p) * bare1 - 2.0 * theta * loglog1;
            const double term2 = -(4.0 / p) * bare2 - 2.0 * phi * loglog2;
            if (term1 < 0.0 && blk.i1_first_negative == 0) {
                blk.i1_first_negative = n;
            }
            if (term2 < 0.0 && blk.i2_first_negative == 0) {
                blk.i2_first_negative = n;
            }
            if (n >= 16 && term1 >= 0.0 && blk.i1_nondecrease_at == 0) {
                blk.i1_nondecrease_at = n;
            }
            if (n >= 16 && term2 >= 0.0 && blk.i2_nondecrease_at == 0) {
                blk.i2_nondecrease_at = n;
            }
        }
        partials[bi] = blk;
    });

    SeriesReport report;
    report.params = params;

    KahanSum conv, i1_bare, i1_loglog, i2_bare, i2_loglog;
    std::int64_t i1_first_negative = 0;
    std::int64_t i2_first_negative = 0;
    std::int64_t i1_violation = 0;
    std::int64_t i2_violation = 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const SeriesBlock& blk = partials[bi];
        conv.merge(blk.conv);
        i1_bare.merge(blk.i1_bare);
        i1_loglog.merge(blk.i1_loglog);
        i2_bare.merge(blk.i2_bare);
        i2_loglog.merge(blk.i2_loglog);
        if (i1_first_negative == 0) i1_first_negative = blk.i1_first_negative;
        if (i2_first_negative == 0) i2_first_negative = blk.i2_first_negative;
        if (i1_violation == 0) i1_violation = blk.i1_nondecrease_at;
        if (i2_violation == 0) i2_violation = blk.i2_nondecrease_at;

        if (blocks[bi].checkpoint >= 0) {
            SeriesCheckpoint row;
            row.n = blocks[bi].hi;
            row.convergent_partial = conv.value();
            row.i1_bare_partial = i1_bare.value();
            row.i2_bare_partial = i2_bare.value();
            row.i1_partial =
                -(4.0 / p) * i1_bare.value() - 2.0 * theta * i1_loglog.value();
            row.i2_partial =
                -(4.0 / p) * i2_bare.value() - 2.0 * phi * i2_loglog.value();
            const double n_real = static_cast<double>(row.n);
            row.convergent_asymptote = log_integral(n_real, q_conv);
            row.i1_asymptote = log_integral(n_real, q1);
            row.i2_asymptote = log_integral(n_real, q2);
            row.i1_relative_gap =
                std::abs(row.i1_bare_partial - row.i1_asymptote) /
                std::abs(row.i1_asymptote);
            row.i2_relative_gap =
                std::abs(row.i2_bare_partial - row.i2_asymptote) /
                std::abs(row.i2_asymptote);
            report.checkpoints.push_back(row);
        }
    }

    SeriesVerdict verdict;
    const SeriesCheckpoint& last = report.checkpoints.back();
    const double log_last = std::log(static_cast<double>(last.n));
    if (q_conv > 1.0) {
        verdict.convergent_tail_bound =
            std::pow(log_last, 1.0 - q_conv) / (q_conv - 1.0);
    } else {
        verdict.convergent_tail_bound =
            std::numeric_limits<double>::infinity();
    }

    // Integral test, checked empirically between checkpoints: the summand is
    // decreasing, so each increment of the partial sums must sit below the
    // corresponding integral increment.
    bool increments_ok = q_conv > 1.0;
    double prev_partial = 0.0;
    double prev_asym = 0.0;
    const double first_term = (1.0 / 3.0) * std::pow(std::log(3.0), -q_conv);
    for (std::size_t k = 0; k < report.checkpoints.size(); ++k) {
        const SeriesCheckpoint& row = report.checkpoints[k];
        double increment = row.convergent_partial - prev_partial;
        if (k == 0) increment -= first_term; // integral starts at n = 3
        const double integral = row.convergent_asymptote - prev_asym;
        if (increment > integral + 1e-12 * std::max(1.0, std::abs(integral))) {
            increments_ok = false;
        }
        prev_partial = row.convergent_partial;
        prev_asym = row.convergent_asymptote;
    }
    verdict.convergent_tail_bounded = increments_ok;

    verdict.i1_matches_asymptote = last.i1_relative_gap <= 0.05;
    verdict.i2_matches_asymptote = last.i2_relative_gap <= 0.05;
    verdict.i1_strictly_decreasing_from_16 = i1_violation == 0;
    verdict.i2_strictly_decreasing_from_16 = i2_violation == 0;
    verdict.i1_first_negative_n = i1_first_negative;
    verdict.i2_first_negative_n = i2_first_negative;
    report.verdict = verdict;
    return report;
}

AppendixInstance appendix_instance(const AppendixParams& params,
                                   std::int64_t n_truncate) {
    if (n_truncate < 3) {
        throw ValidationError("truncation must keep at least vertices 0..3, got " +
                              std::to_string(n_truncate));
    }

    const std::int64_t count = n_truncate + 1;
    std::vector<std::int64_t> ids(count);
    std::vector<double> mu(count), a(count), b(count);
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    edges.reserve(count - 1);
    AppendixInstance inst;
    inst.u_values.assign(count, 0.0);
    inst.v_values.assign(count, 0.0);

    for (std::int64_t n = 0; n <= n_truncate; ++n) {
        ids[n] = n;
        if (n >= 3) {
            const double n_real = static_cast<double>(n);
            const double lg = std::log(n_real);
            mu[n] = n_real;
            a[n] = std::pow(lg, params.delta);
            b[n] = a[n];
            inst.u_values[n] =
                std::pow(n_real, -2.0 / params.p) * std::pow(lg, -params.theta);
            inst.v_values[n] =
                std::pow(n_real, -2.0 / params.p) * std::pow(lg, -params.phi);
        } else {
            mu[n] = 1.0;
            a[n] = 1.0;
            b[n] = 1.0;
        }
        if (n > 0) edges.emplace_back(n - 1, n);
    }

    inst.graph = make_graph(ids, mu, a, b, edges);
    return inst;
}

std::pair<double, double> embedding_constant(const GraphInstance& g, double p,
                                             double q,
                                             std::span<const double> potential,
                                             int trials,
                                             std::uint64_t rng_seed) {
    if (!(p >= 1.0)) {
        throw ValidationError("embedding needs p >= 1, got " + std::to_string(p));
    }
    if (!(q >= p)) {
        throw ValidationError("embedding needs q >= p, got q = " +
                              std::to_string(q));
    }
    if (potential.size() != static_cast<std::size_t>(g.vertex_count())) {
        throw ValidationError("potential length does not match the graph");
    }
    if (trials < 1) {
        throw ValidationError("at least one trial is required");
    }

    double v0 = potential[0];
    int v0_vertex = 0;
    for (int i = 1; i < g.vertex_count(); ++i) {
        if (potential[i] < v0) {
            v0 = potential[i];
            v0_vertex = i;
        }
    }
    if (!(v0 > 0.0)) {
        throw PotentialNotPositive("potential at vertex " +
                                   std::to_string(g.ids[v0_vertex]) +
                                   " is not positive: " + std::to_string(v0));
    }

    double empirical = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(rng_seed, static_cast<std::uint64_t>(t));
        Field u = zero_field(g);
        bool nonzero = false;
        for (double& x : u.values) {
            x = rng.symmetric();
            nonzero = nonzero || x != 0.0;
        }
        if (!nonzero) continue;
        const double hn = h_norm(u, potential, p);
        if (hn == 0.0) continue;
        empirical = std::max(empirical, lp_norm(u, q) / hn);
    }

    const double analytic =
        std::pow(g.mu_min(), 1.0 / q - 1.0 / p) * std::pow(v0, -1.0 / p);
    return {empirical, analytic};
}

} // namespace graphlog
