#ifndef GRAPHLOG_NEHARI_HPP
#define GRAPHLOG_NEHARI_HPP

#include <span>

#include "graphlog/energy.hpp"

namespace graphlog {

// Scaling coefficients of the ray through (u, v): along (tu, tv) the
// constraint defect equals t^p (N - C) - t^p log(t^2) B.
struct FiberingCoefficients {
    double N = 0.0; // norm_u_p + norm_v_p
    double B = 0.0; // coupling integral
    double C = 0.0; // (2/p) B + both log integrals
};

// Assembled from the energy breakdown. Throws ZeroPair on (0, 0).
FiberingCoefficients fibering_coefficients(const FieldPair& fp,
                                           const ProblemSpec& spec);

struct NehariProjection {
    double t_star = 0.0;
    FieldPair projected;
};

// Unique positive root of the ray defect: t_star = exp((N - C) / (2B)).
// Requires a vertex carrying both components (B > 0), else
// CouplingDegenerate; RayOverflow when the exponent magnitude exceeds 700.
NehariProjection project_to_nehari(const FieldPair& fp, const ProblemSpec& spec);

// True iff the projected point maximizes the energy along its ray over the
// given sample of scales: J at t_star beats J at every grid t, strictly away
// from t_star.
bool fibering_maximality_check(const FieldPair& fp, const ProblemSpec& spec,
                               std::span<const double> t_grid);

// Relative defect tolerance below which a pair counts as on-manifold:
// |defect| <= 1e-9 * max(N, C, B, 1).
bool on_manifold(const FieldPair& fp, const ProblemSpec& spec);

// Minimum energy over candidates, each of which must lie on the manifold.
// Evaluated twice (energy directly, and (2/p^2) B); the two routes must agree
// to 1e-10 relative, else the offending candidate is reported.
double nehari_level(std::span<const FieldPair> candidates, const ProblemSpec& spec);

} // namespace graphlog

#endif
