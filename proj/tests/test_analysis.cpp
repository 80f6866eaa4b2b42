#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "graphlog/analysis.hpp"
#include "graphlog/calculus.hpp"
#include "graphlog/energy.hpp"
#include "graphlog/errors.hpp"
#include "test_util.hpp"

using namespace graphlog;
using testutil::rel_gap;

namespace {

// Identity residuals of the calibrated exponents, each normalized by its
// target scale.
double worst_identity_gap(const CalibrationResult& r) {
    const double p = r.p, eps = r.epsilon;
    double worst = 0.0;
    worst = std::max(worst, std::abs(r.p1 * r.s - 4.0) / 4.0);
    worst = std::max(worst,
                     std::abs(r.p2 * r.s - 2.0 * (p - 2.0)) / (2.0 * (p - 2.0)));
    worst = std::max(worst, std::abs((2.0 + eps - r.p1) * r.s * r.t /
                                         (r.s - 1.0) -
                                     p) /
                                p);
    worst = std::max(worst, std::abs((p - r.p2 - 2.0) * r.s * r.t /
                                         ((r.s - 1.0) * (r.t - 1.0)) -
                                     p) /
                                p);
    return worst;
}

} // namespace

TEST_CASE("calibration at p = 6, eps = 1/2 in closed form") {
    const CalibrationResult r = calibrate_exponents(6.0, 0.5);
    CHECK(r.s == 12.0);
    CHECK(r.p1 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.p2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(r.t == doctest::Approx(33.0 / 13.0).epsilon(1e-15));
    CHECK(worst_identity_gap(r) <= 1e-12);
}

TEST_CASE("calibration across the exponent grid") {
    const CalibrationResult fifty = calibrate_exponents(5.0, 0.1);
    CHECK(fifty.s == 50.0);
    for (double p : {4.5, 5.0, 6.0, 10.0}) {
        for (double eps : {0.01, 0.1, 0.5}) {
            const CalibrationResult r = calibrate_exponents(p, eps);
            CHECK(worst_identity_gap(r) <= 1e-12);
            CHECK(r.s > 1.0);
            CHECK(r.t > 1.0);
            CHECK(r.p1 < 2.0 + eps);
            CHECK(r.p2 < p - 2.0);
        }
    }
}

TEST_CASE("calibration domain gates") {
    CHECK_THROWS_AS((void)calibrate_exponents(4.0, 0.5), InvalidP);
    CHECK_THROWS_AS((void)calibrate_exponents(6.0, 0.0), ValidationError);
    CHECK_THROWS_AS((void)calibrate_exponents(6.0, 1.0), ValidationError);
}

TEST_CASE("appendix parameters and the delta gate") {
    const AppendixParams params = appendix_params(6.0, 0.1);
    CHECK(params.theta == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(params.phi == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(params.n_max == 10'000'000);
    // The divergence-exponent condition fails once 2*delta exceeds 1.
    CHECK_NOTHROW((void)appendix_params(6.0, 0.5));
    CHECK_THROWS_AS((void)appendix_params(6.0, 0.6), DeltaTooLarge);
    CHECK_THROWS_AS((void)appendix_params(6.0, 0.0), ValidationError);
    CHECK_THROWS_AS((void)appendix_params(4.0, 0.1), InvalidP);
}

TEST_CASE("series partial sums match direct summation") {
    const AppendixParams params = appendix_params(6.0, 0.1, 10'000);
    const std::vector<std::int64_t> checkpoints{100, 1000, 10'000};
    const SeriesReport report = appendix_series(params, checkpoints);
    REQUIRE(report.checkpoints.size() == 3);

    const double p = 6.0, delta = 0.1, theta = 0.2;
    const double q_conv = p * theta - delta; // 1.1
    const double q1 = (p - 2.0) * params.phi + 2.0 * theta - 1.0; // 0.2
    for (const SeriesCheckpoint& cp : report.checkpoints) {
        double conv = 0.0, bare = 0.0, full = 0.0;
        for (std::int64_t n = 3; n <= cp.n; ++n) {
            const double ln = std::log(static_cast<double>(n));
            conv += std::pow(ln, -q_conv) / static_cast<double>(n);
            const double bare_term = std::pow(ln, -q1) / static_cast<double>(n);
            bare += bare_term;
            full += -(4.0 / p) * bare_term -
                    2.0 * theta * std::pow(ln, -q1 - 1.0) * std::log(ln) /
                        static_cast<double>(n);
        }
        CHECK(rel_gap(cp.convergent_partial, conv) <= 1e-12);
        CHECK(rel_gap(cp.i1_bare_partial, bare) <= 1e-12);
        CHECK(rel_gap(cp.i1_partial, full) <= 1e-12);
        // theta = phi makes the two coupling series identical.
        CHECK(rel_gap(cp.i2_partial, cp.i1_partial) <= 1e-13);
        CHECK(rel_gap(cp.i2_bare_partial, cp.i1_bare_partial) <= 1e-13);

        // Closed-form integral comparisons.
        const double ln3 = std::log(3.0);
        const double lnN = std::log(static_cast<double>(cp.n));
        const double conv_asym =
            (std::pow(lnN, 1.0 - q_conv) - std::pow(ln3, 1.0 - q_conv)) /
            (1.0 - q_conv);
        const double bare_asym =
            (std::pow(lnN, 1.0 - q1) - std::pow(ln3, 1.0 - q1)) / (1.0 - q1);
        CHECK(rel_gap(cp.convergent_asymptote, conv_asym) <= 1e-12);
        CHECK(rel_gap(cp.i1_asymptote, bare_asym) <= 1e-12);
        CHECK(rel_gap(cp.i1_relative_gap,
                      std::abs(cp.i1_bare_partial - cp.i1_asymptote) /
                          cp.i1_asymptote) <= 1e-12);
    }

    // Both coupling sums are negative from the first term on and the partial
    // sums only sink further at later checkpoints.
    CHECK(report.verdict.i1_first_negative_n == 3);
    CHECK(report.verdict.i2_first_negative_n == 3);
    CHECK(report.checkpoints[1].i1_partial < report.checkpoints[0].i1_partial);
    CHECK(report.checkpoints[2].i1_partial < report.checkpoints[1].i1_partial);
    CHECK(report.verdict.i1_strictly_decreasing_from_16);
    CHECK(report.verdict.i2_strictly_decreasing_from_16);

    // The convergent series passes the integral-test tail bound.
    CHECK(report.verdict.convergent_tail_bounded);
    const double tail =
        std::pow(std::log(1e4), -(q_conv - 1.0)) / (q_conv - 1.0);
    CHECK(rel_gap(report.verdict.convergent_tail_bound, tail) <= 1e-12);

    // Divergent partial sums keep growing, so the bare sums are positive and
    // unbounded in N; at these scales they already dominate the convergent sum.
    CHECK(report.checkpoints[2].i1_bare_partial >
          report.checkpoints[2].convergent_partial);
}

TEST_CASE("series checkpoints are validated") {
    const AppendixParams params = appendix_params(6.0, 0.1, 1000);
    CHECK_THROWS_AS((void)appendix_series(params, std::vector<std::int64_t>{}),
                    ValidationError);
    CHECK_THROWS_AS(
        (void)appendix_series(params, std::vector<std::int64_t>{2}),
        ValidationError);
    CHECK_THROWS_AS(
        (void)appendix_series(params, std::vector<std::int64_t>{100, 100}),
        ValidationError);
}

TEST_CASE("divergence classification across the parameter grid") {
    // For every admissible (p, delta): the weighted-norm series has exponent
    // 1 + delta > 1 (convergent), while the bare coupling exponent is
    // 2*delta < 1 (divergent). The verdict separates them at every scale.
    const std::vector<std::int64_t> checkpoints{1000, 10'000};
    for (double p : {4.5, 5.0, 6.0, 8.0}) {
        for (double delta : {0.01, 0.05, 0.1}) {
            const AppendixParams params = appendix_params(p, delta, 10'000);
            const double q_conv = p * params.theta - delta;
            const double q1 =
                (p - 2.0) * params.phi + 2.0 * params.theta - 1.0;
            CHECK(q_conv == doctest::Approx(1.0 + delta).epsilon(1e-13));
            CHECK(q1 == doctest::Approx(2.0 * delta).epsilon(1e-13));
            CHECK(q_conv > 1.0);
            CHECK(q1 < 1.0);
            const SeriesReport r = appendix_series(params, checkpoints);
            CHECK(r.verdict.convergent_tail_bounded);
            // The bare divergent sums grow between checkpoints.
            CHECK(r.checkpoints[1].i1_bare_partial >
                  r.checkpoints[0].i1_bare_partial);
            CHECK(r.checkpoints[1].i2_bare_partial >
                  r.checkpoints[0].i2_bare_partial);
        }
    }
}

TEST_CASE("appendix instance realizes the series data") {
    const AppendixParams params = appendix_params(6.0, 0.1, 1000);
    const AppendixInstance inst = appendix_instance(params, 1000);
    const GraphInstance& g = inst.graph;
    CHECK(g.vertex_count() == 1001);
    CHECK(g.mu[g.index_of(3)] == 3.0);
    CHECK(g.mu[0] == 1.0);
    CHECK(g.mu[1000] == 1000.0);
    // Path topology: two endpoints of degree 1, the rest of degree 2.
    CHECK(g.adjacency[0].size() == 1);
    CHECK(g.adjacency[1000].size() == 1);
    CHECK(g.adjacency[500].size() == 2);

    const double ln10 = std::log(10.0);
    CHECK(rel_gap(g.a[10], std::pow(ln10, 0.1)) <= 1e-15);
    CHECK(g.a[10] == g.b[10]);
    CHECK(g.a[2] == 1.0);
    CHECK(rel_gap(inst.u_values[10],
                  std::pow(10.0, -1.0 / 3.0) * std::pow(ln10, -0.2)) <= 1e-15);
    CHECK(inst.u_values[0] == 0.0);
    CHECK(inst.u_values[2] == 0.0);
    CHECK(inst.v_values[10] == inst.u_values[10]); // theta = phi

    CHECK_THROWS_AS((void)appendix_instance(params, 2), ValidationError);
}

TEST_CASE("field-level integrals reproduce the series partial sums") {
    // Two independent routes to the same numbers: the energy pipeline on the
    // truncated half-line instance versus the direct series accumulation.
    const AppendixParams params = appendix_params(6.0, 0.1, 1000);
    const AppendixInstance inst = appendix_instance(params, 1000);
    const GraphInstance& g = inst.graph;
    const std::vector<std::int64_t> checkpoints{1000};
    const SeriesReport series = appendix_series(params, checkpoints);
    const SeriesCheckpoint& cp = series.checkpoints.front();

    // Weighted p-mass of u: a(n) |u(n)|^p integrates to the convergent sum.
    std::vector<double> density(static_cast<std::size_t>(g.vertex_count()));
    for (std::size_t i = 0; i < density.size(); ++i) {
        density[i] = g.a[i] * pow_abs(inst.u_values[i], 6.0);
    }
    CHECK(rel_gap(integrate(density, g), cp.convergent_partial) <= 1e-12);

    // The energy breakdown's log integrals are exactly the coupling series.
    const FieldPair fp = make_pair(g, inst.u_values, inst.v_values);
    const EnergyBreakdown eb = energy(fp, ProblemSpec::base(6.0));
    CHECK(rel_gap(eb.log_vu, cp.i1_partial) <= 1e-12);
    CHECK(rel_gap(eb.log_uv, cp.i2_partial) <= 1e-12);
}

TEST_CASE("embedding constant on the single vertex is exact") {
    const GraphInstance g = make_graph({0}, {1.0}, {2.0}, {1.0}, {});
    const auto [empirical6, bound6] =
        embedding_constant(g, 6.0, 6.0, g.a, 50, 1);
    const double expected = std::pow(2.0, -1.0 / 6.0);
    CHECK(rel_gap(bound6, expected) <= 1e-15);
    CHECK(rel_gap(empirical6, expected) <= 1e-14);

    const auto [empirical12, bound12] =
        embedding_constant(g, 6.0, 12.0, g.a, 50, 1);
    CHECK(rel_gap(bound12, expected) <= 1e-15);
    CHECK(rel_gap(empirical12, expected) <= 1e-14);
}

TEST_CASE("embedding bound dominates the sampled ratios") {
    Rng rng(61);
    for (int trial = 0; trial < 4; ++trial) {
        const GraphInstance g = testutil::random_graph(rng, 8);
        for (auto [p, q] : std::vector<std::pair<double, double>>{
                 {6.0, 6.0}, {6.0, 12.0}, {5.0, 10.0}}) {
            const auto [empirical, bound] =
                embedding_constant(g, p, q, g.a, 200, 17 + trial);
            CHECK(empirical > 0.0);
            CHECK(empirical <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("embedding constant guards its inputs") {
    const GraphInstance g = testutil::path_graph(3);
    const std::vector<double> with_zero{1.0, 0.0, 1.0};
    CHECK_THROWS_AS((void)embedding_constant(g, 6.0, 6.0, with_zero, 10, 1),
                    PotentialNotPositive);
    CHECK_THROWS_AS((void)embedding_constant(g, 6.0, 5.0, g.a, 10, 1),
                    ValidationError);
    CHECK_THROWS_AS((void)embedding_constant(g, 6.0, 6.0, g.a, 0, 1),
                    ValidationError);
}
