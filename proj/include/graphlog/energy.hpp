#ifndef GRAPHLOG_ENERGY_HPP
#define GRAPHLOG_ENERGY_HPP

#include <span>
#include <utility>
#include <vector>

#include "graphlog/calculus.hpp"
#include "graphlog/field.hpp"

namespace graphlog {

enum class Variant { base, lambda, dirichlet };

// Which system the energy describes: the base coupled system, the
// penalized family with potentials 1 + lambda*a and 1 + lambda*b, or the
// zero-boundary problem on (omega_a, omega_b). p must exceed 4: below that
// the residual term |u|^{p-4} u is singular at 0.
struct ProblemSpec {
    double p = 0.0;
    Variant variant = Variant::base;
    double lambda = 0.0;
    std::vector<int> omega_a; // sorted dense indices, dirichlet only
    std::vector<int> omega_b;

    static ProblemSpec base(double p);
    static ProblemSpec with_lambda(double p, double lambda);
    static ProblemSpec with_dirichlet(double p, std::vector<int> omega_a,
                                      std::vector<int> omega_b);
};

// s^2 log(s^2), continuously extended by 0 at s = 0.
double log_sq(double s);

// Every scalar integral entering the energy, its derivative, and the
// fibering map, with the logarithmic integrals split into positive and
// negative parts.
struct EnergyBreakdown {
    double norm_u_p = 0.0; // p-th power of the u-norm for the active variant
    double norm_v_p = 0.0;
    double coupling_B = 0.0; // integral of |v|^{p-2}u^2 + |u|^{p-2}v^2
    double log_uv = 0.0;     // integral of |u|^{p-2} v^2 log v^2
    double log_vu = 0.0;     // integral of |v|^{p-2} u^2 log u^2
    double log_uv_pos = 0.0;
    double log_uv_neg = 0.0;
    double log_vu_pos = 0.0;
    double log_vu_neg = 0.0;
    double J = 0.0; // (norms - log terms) / p
};

// Computes the full breakdown. For the dirichlet variant the fields must
// vanish outside their omega sets (BoundaryViolation), the norms are the
// zero-boundary norms, and the coupling integrals range over the union of
// the omega sets. Throws NonFiniteValue if any component fails to be finite.
EnergyBreakdown energy(const FieldPair& fp, const ProblemSpec& spec);

// Directional derivative of J at fp applied to the test pair. The gradient
// terms are realized through the gradient form (the exact derivative of the
// discrete norm), so this matches central finite differences of J to
// truncation error. For the dirichlet variant the test pair is restricted to
// the omega sets (variations outside are ignored).
double derivative_pairing(const FieldPair& fp, const FieldPair& test,
                          const ProblemSpec& spec);

// Pointwise residual fields of the system's two equations; a pair is a
// solution iff both vanish identically. The pairing identity
//   derivative_pairing(fp, test) = integral of (res_u * xi + res_v * eta)
// holds exactly on finite graphs. For the dirichlet variant the residual is
// evaluated on the omega interiors and is zero elsewhere.
std::pair<Field, Field> residual(const FieldPair& fp, const ProblemSpec& spec);

// derivative_pairing of fp with itself: zero exactly on the constraint
// manifold of nontrivial pairs.
double nehari_defect(const FieldPair& fp, const ProblemSpec& spec);

// lhs = J - (1/p) * defect, rhs = (2/p^2) * coupling_B. These agree for
// every pair, constrained or not; disagreement indicates a defect in the
// energy assembly.
std::pair<double, double> ground_level_identity(const FieldPair& fp,
                                                const ProblemSpec& spec);

} // namespace graphlog

#endif
