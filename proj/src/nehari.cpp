#include "graphlog/nehari.hpp"

#include <algorithm>
#include <cmath>

#include "graphlog/errors.hpp"
#include "graphlog/num_format.hpp"

namespace graphlog {

FiberingCoefficients fibering_coefficients(const FieldPair& fp,
                                           const ProblemSpec& spec) {
    if (is_zero_pair(fp)) throw ZeroPair("fibering coefficients of the zero pair");
    EnergyBreakdown eb = energy(fp, spec);
    FiberingCoefficients fc;
    fc.N = eb.norm_u_p + eb.norm_v_p;
    fc.B = eb.coupling_B;
    fc.C = (2.0 / spec.p) * eb.coupling_B + eb.log_uv + eb.log_vu;
    return fc;
}

NehariProjection project_to_nehari(const FieldPair& fp, const ProblemSpec& spec) {
    FiberingCoefficients fc = fibering_coefficients(fp, spec);
    if (fc.B <= 0.0)
        throw CouplingDegenerate(
            "no vertex carries both components (coupling integral is " +
            format_shortest(fc.B) + "); the ray misses the manifold");
    double exponent = (fc.N - fc.C) / (2.0 * fc.B);
    if (std::abs(exponent) > 700.0)
        throw RayOverflow("projection exponent " + format_shortest(exponent) +
                          " exceeds 700; rescale the pair first");
    NehariProjection out;
    out.t_star = std::exp(exponent);
    out.projected = scaled(fp, out.t_star);
    return out;
}

bool fibering_maximality_check(const FieldPair& fp, const ProblemSpec& spec,
                               std::span<const double> t_grid) {
    NehariProjection proj = project_to_nehari(fp, spec);
    const double j_star = energy(proj.projected, spec).J;
    const double slack = 1e-12 * std::max(1.0, std::abs(j_star));
    for (double t : t_grid) {
        if (!(t > 0.0))
            throw ValidationError("fibering grid must contain positive scales, got " +
                                  format_shortest(t));
        const double j_t = energy(scaled(fp, t), spec).J;
        if (std::abs(t - proj.t_star) <= 1e-9 * std::max(1.0, proj.t_star)) {
            if (j_star < j_t - slack) return false;
        } else {
            if (!(j_star > j_t)) return false;
        }
    }
    return true;
}

bool on_manifold(const FieldPair& fp, const ProblemSpec& spec) {
    FiberingCoefficients fc = fibering_coefficients(fp, spec);
    double defect = nehari_defect(fp, spec);
    double scale = std::max({fc.N, fc.C, fc.B, 1.0});
    return std::abs(defect) <= 1e-9 * scale;
}

double nehari_level(std::span<const FieldPair> candidates, const ProblemSpec& spec) {
    if (candidates.empty())
        throw EmptyCandidates("no candidates to take a level over");
    double best = 0.0;
    bool have = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const FieldPair& fp = candidates[i];
        if (!on_manifold(fp, spec))
            throw ValidationError("candidate " + format_int(static_cast<std::int64_t>(i)) +
                                  " is not on the constraint manifold");
        EnergyBreakdown eb = energy(fp, spec);
        double via_coupling = (2.0 / (spec.p * spec.p)) * eb.coupling_B;
        if (std::abs(eb.J - via_coupling) > 1e-10 * std::max(1.0, std::abs(eb.J)))
            throw ValidationError(
                "candidate " + format_int(static_cast<std::int64_t>(i)) +
                ": energy " + format_17(eb.J) + " and coupling route " +
                format_17(via_coupling) + " disagree beyond 1e-10");
        if (!have || eb.J < best) {
            best = eb.J;
            have = true;
        }
    }
    return best;
}

} // namespace graphlog
