#include "graphlog/calculus.hpp"

#include <cmath>
#include <limits>

#include "graphlog/errors.hpp"
#include "graphlog/kahan.hpp"
#include "graphlog/num_format.hpp"

namespace graphlog {

namespace {

void require_vertex(const GraphInstance& g, int x) {
    if (!g.has_vertex(x))
        throw UnknownVertex("vertex index " + format_int(x) +
                            " out of range (graph has " +
                            format_int(g.vertex_count()) + " vertices)");
}

void require_same_graph(const Field& u, const Field& w) {
    if (u.graph == nullptr || u.graph != w.graph)
        throw ValidationError("fields live on different graphs");
}

} // namespace

double pow_abs(double x, double e) {
    if (x == 0.0) return e == 0.0 ? 1.0 : 0.0;
    return std::pow(std::abs(x), e);
}

double gradient_form(const Field& u, const Field& w, int x) {
    require_same_graph(u, w);
    const GraphInstance& g = *u.graph;
    require_vertex(g, x);
    KahanSum s;
    const double ux = u.values[x], wx = w.values[x];
    for (int y : g.adjacency[x]) s.add((u.values[y] - ux) * (w.values[y] - wx));
    return s.value() / (2.0 * g.mu[x]);
}

double gradient_length(const Field& u, int x) {
    return std::sqrt(gradient_form(u, u, x));
}

std::vector<double> gradient_length_all(const Field& u) {
    const GraphInstance& g = *u.graph;
    std::vector<double> out(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) {
        KahanSum s;
        const double ux = u.values[x];
        for (int y : g.adjacency[x]) {
            double d = u.values[y] - ux;
            s.add(d * d);
        }
        out[x] = std::sqrt(s.value() / (2.0 * g.mu[x]));
    }
    return out;
}

double p_laplacian(const Field& u, double p, int x) {
    if (!(p >= 2.0))
        throw InvalidP("p-Laplacian requires p >= 2, got " + format_shortest(p));
    const GraphInstance& g = *u.graph;
    require_vertex(g, x);
    std::vector<double> grad = gradient_length_all(u);
    KahanSum s;
    const double wx = pow_abs(grad[x], p - 2.0);
    const double ux = u.values[x];
    for (int y : g.adjacency[x])
        s.add((pow_abs(grad[y], p - 2.0) + wx) * (u.values[y] - ux));
    return s.value() / (2.0 * g.mu[x]);
}

double integrate(std::span<const double> f, const GraphInstance& g) {
    if (static_cast<int>(f.size()) != g.vertex_count())
        throw ValidationError("integrand length does not match vertex count");
    KahanSum s;
    for (int x = 0; x < g.vertex_count(); ++x) s.add(g.mu[x] * f[x]);
    return s.value();
}

double lp_norm(const Field& u, double q) {
    const GraphInstance& g = *u.graph;
    if (std::isinf(q)) {
        double sup = 0.0;
        for (double x : u.values) sup = std::max(sup, std::abs(x));
        return sup;
    }
    if (!(q >= 1.0))
        throw ValidationError("lp_norm requires q >= 1 or infinity, got " +
                              format_shortest(q));
    KahanSum s;
    for (int x = 0; x < g.vertex_count(); ++x)
        s.add(g.mu[x] * pow_abs(u.values[x], q));
    return std::pow(s.value(), 1.0 / q);
}

double h_norm_pow(const Field& u, std::span<const double> potential, double p,
                  bool* negative_potential) {
    const GraphInstance& g = *u.graph;
    if (static_cast<int>(potential.size()) != g.vertex_count())
        throw ValidationError("potential length does not match vertex count");
    if (!(p >= 1.0))
        throw InvalidP("h_norm requires p >= 1, got " + format_shortest(p));
    bool negative = false;
    int witness = 0;
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (potential[x] < 0.0) {
            negative = true;
            witness = x;
            break;
        }
    }
    if (negative) {
        if (negative_potential)
            *negative_potential = true;
        else
            throw NegativePotentialWarning(
                "potential is negative at vertex " + format_int(g.ids[witness]) +
                "; the norm may be undefined");
    } else if (negative_potential) {
        *negative_potential = false;
    }
    std::vector<double> grad = gradient_length_all(u);
    KahanSum s;
    for (int x = 0; x < g.vertex_count(); ++x)
        s.add(g.mu[x] * (pow_abs(grad[x], p) + potential[x] * pow_abs(u.values[x], p)));
    return s.value();
}

double h_norm(const Field& u, std::span<const double> potential, double p,
              bool* negative_potential) {
    return std::pow(h_norm_pow(u, potential, p, negative_potential), 1.0 / p);
}

double dirichlet_norm_pow(const Field& u, std::span<const int> omega, double p) {
    const GraphInstance& g = *u.graph;
    if (!(p >= 1.0))
        throw InvalidP("dirichlet_norm requires p >= 1, got " + format_shortest(p));
    if (omega.empty()) throw ValidationError("omega is empty");
    std::vector<int> bdry = boundary_of(g, omega);
    for (int x : bdry) {
        if (u.values[x] != 0.0)
            throw BoundaryViolation("field is nonzero on boundary vertex " +
                                    format_int(g.ids[x]) + " (value " +
                                    format_shortest(u.values[x]) + ")");
    }
    // Interior values survive, everything else (boundary included) is 0.
    Field um = masked(u, omega);
    std::vector<double> grad = gradient_length_all(um);
    KahanSum s;
    for (int x : omega)
        s.add(g.mu[x] * (pow_abs(grad[x], p) + pow_abs(um.values[x], p)));
    for (int x : bdry) s.add(g.mu[x] * pow_abs(grad[x], p));
    return s.value();
}

double dirichlet_norm(const Field& u, std::span<const int> omega, double p) {
    return std::pow(dirichlet_norm_pow(u, omega, p), 1.0 / p);
}

} // namespace graphlog
