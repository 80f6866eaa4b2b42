#ifndef GRAPHLOG_CALCULUS_HPP
#define GRAPHLOG_CALCULUS_HPP

#include <span>
#include <vector>

#include "graphlog/field.hpp"
#include "graphlog/graph.hpp"

namespace graphlog {

// |x|^e with the continuous extension 0^e = 0 for e > 0; 0^0 = 1, so the
// gradient weight |grad u|^{p-2} degenerates to the linear case at p = 2.
double pow_abs(double x, double e);

// Gradient form at x: (1/(2 mu(x))) * sum over neighbors y of
// (u(y)-u(x)) * (w(y)-w(x)). Symmetric and bilinear in (u, w).
double gradient_form(const Field& u, const Field& w, int x);

// |grad u|(x) = sqrt of the gradient form of u with itself.
double gradient_length(const Field& u, int x);

// All vertices at once; reused by the energy layer's integrand loops.
std::vector<double> gradient_length_all(const Field& u);

// (1/(2 mu(x))) * sum over neighbors y of
// (|grad u|^{p-2}(y) + |grad u|^{p-2}(x)) * (u(y)-u(x)). Defined for p >= 2;
// InvalidP below that.
double p_laplacian(const Field& u, double p, int x);

// Measure integral: sum over vertices of mu(x) * f(x), compensated.
double integrate(std::span<const double> f, const GraphInstance& g);

// (sum mu |u|^q)^{1/q}; q may be infinity (sup of |u|). Requires q >= 1.
double lp_norm(const Field& u, double q);

// [ integral of (|grad u|^p + potential * |u|^p) ]^{1/p}. A negative
// potential value is never silently accepted: it is flagged through
// negative_potential when given, and thrown as NegativePotentialWarning when
// not.
double h_norm(const Field& u, std::span<const double> potential, double p,
              bool* negative_potential = nullptr);

// The p-th power of h_norm (no root taken), same warning contract.
double h_norm_pow(const Field& u, std::span<const double> potential, double p,
                  bool* negative_potential = nullptr);

// Zero-boundary norm on omega (sorted dense indices):
// ( integral over omega and its boundary of |grad u|^p
//   + integral over omega of |u|^p )^{1/p}.
// Values outside omega and its boundary are ignored (treated as 0); values on
// the boundary must be exactly 0, else BoundaryViolation.
double dirichlet_norm(const Field& u, std::span<const int> omega, double p);
double dirichlet_norm_pow(const Field& u, std::span<const int> omega, double p);

} // namespace graphlog

#endif
