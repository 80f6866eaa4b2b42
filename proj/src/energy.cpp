#include "graphlog/energy.hpp"

#include <algorithm>
#include <cmath>

#include "graphlog/errors.hpp"
#include "graphlog/kahan.hpp"
#include "graphlog/num_format.hpp"

namespace graphlog {

namespace {

// s * log(s^2), continuously extended by 0 at s = 0.
double x_log_x2(double s) {
    if (s == 0.0) return 0.0;
    return s * std::log(s * s);
}

void validate_p(double p) {
    if (!std::isfinite(p) || !(p > 4.0))
        throw InvalidP("p must exceed 4, got " + format_shortest(p));
}

std::vector<int> sorted_unique(std::vector<int> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// Potentials entering the norm integrals. The dirichlet variant carries unit
// potential; its norm is assembled separately.
std::pair<std::vector<double>, std::vector<double>>
norm_potentials(const ProblemSpec& spec, const GraphInstance& g) {
    const int n = g.vertex_count();
    std::vector<double> pu(n), pv(n);
    switch (spec.variant) {
    case Variant::base:
        pu = g.a;
        pv = g.b;
        break;
    case Variant::lambda:
        for (int x = 0; x < n; ++x) {
            pu[x] = 1.0 + spec.lambda * g.a[x];
            pv[x] = 1.0 + spec.lambda * g.b[x];
        }
        break;
    case Variant::dirichlet:
        std::fill(pu.begin(), pu.end(), 1.0);
        std::fill(pv.begin(), pv.end(), 1.0);
        break;
    }
    return {std::move(pu), std::move(pv)};
}

void require_vanishes_outside(const Field& f, std::span<const int> omega,
                              const char* name) {
    const GraphInstance& g = *f.graph;
    std::vector<char> inside(g.vertex_count(), 0);
    for (int x : omega) {
        if (!g.has_vertex(x))
            throw UnknownVertex("omega contains invalid vertex index " + format_int(x));
        inside[x] = 1;
    }
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (!inside[x] && f.values[x] != 0.0)
            throw BoundaryViolation(std::string(name) + " must vanish outside omega; vertex " +
                                    format_int(g.ids[x]) + " carries " +
                                    format_shortest(f.values[x]));
    }
}

void validate_dirichlet_fields(const FieldPair& fp, const ProblemSpec& spec) {
    require_vanishes_outside(fp.u, spec.omega_a, "u");
    require_vanishes_outside(fp.v, spec.omega_b, "v");
}

// Vertices the coupling integrals range over: everything for base/lambda,
// the union of the omega sets for dirichlet.
std::vector<int> coupling_domain(const ProblemSpec& spec, const GraphInstance& g) {
    if (spec.variant != Variant::dirichlet) {
        std::vector<int> all(g.vertex_count());
        for (int x = 0; x < g.vertex_count(); ++x) all[x] = x;
        return all;
    }
    std::vector<int> dom = spec.omega_a;
    dom.insert(dom.end(), spec.omega_b.begin(), spec.omega_b.end());
    return sorted_unique(std::move(dom));
}

void require_finite(double value, const char* what) {
    if (!std::isfinite(value))
        throw NonFiniteValue(std::string(what) + " is not finite");
}

} // namespace

ProblemSpec ProblemSpec::base(double p) {
    validate_p(p);
    ProblemSpec s;
    s.p = p;
    s.variant = Variant::base;
    return s;
}

ProblemSpec ProblemSpec::with_lambda(double p, double lambda) {
    validate_p(p);
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw ValidationError("lambda must be a nonnegative real, got " +
                              format_shortest(lambda));
    ProblemSpec s;
    s.p = p;
    s.variant = Variant::lambda;
    s.lambda = lambda;
    return s;
}

ProblemSpec ProblemSpec::with_dirichlet(double p, std::vector<int> omega_a,
                                        std::vector<int> omega_b) {
    validate_p(p);
    ProblemSpec s;
    s.p = p;
    s.variant = Variant::dirichlet;
    s.omega_a = sorted_unique(std::move(omega_a));
    s.omega_b = sorted_unique(std::move(omega_b));
    if (s.omega_a.empty() || s.omega_b.empty())
        throw ValidationError("dirichlet omega sets must be nonempty");
    return s;
}

double log_sq(double s) {
    if (s == 0.0) return 0.0;
    double s2 = s * s;
    return s2 * std::log(s2);
}

EnergyBreakdown energy(const FieldPair& fp, const ProblemSpec& spec) {
    require_same_graph(fp);
    const GraphInstance& g = *fp.u.graph;
    const double p = spec.p;
    EnergyBreakdown eb;

    if (spec.variant == Variant::dirichlet) {
        validate_dirichlet_fields(fp, spec);
        eb.norm_u_p = dirichlet_norm_pow(fp.u, spec.omega_a, p);
        eb.norm_v_p = dirichlet_norm_pow(fp.v, spec.omega_b, p);
    } else {
        auto [pu, pv] = norm_potentials(spec, g);
        bool warn = false; // sign handling is the integrand's own business here
        eb.norm_u_p = h_norm_pow(fp.u, pu, p, &warn);
        eb.norm_v_p = h_norm_pow(fp.v, pv, p, &warn);
    }

    KahanSum B, uv_pos, uv_neg, vu_pos, vu_neg;
    for (int x : coupling_domain(spec, g)) {
        const double mu = g.mu[x];
        const double uu = fp.u.values[x];
        const double vv = fp.v.values[x];
        const double up2 = pow_abs(uu, p - 2.0);
        const double vp2 = pow_abs(vv, p - 2.0);
        B.add(mu * (vp2 * uu * uu + up2 * vv * vv));
        const double luv = up2 * log_sq(vv);
        if (luv >= 0.0)
            uv_pos.add(mu * luv);
        else
            uv_neg.add(-mu * luv);
        const double lvu = vp2 * log_sq(uu);
        if (lvu >= 0.0)
            vu_pos.add(mu * lvu);
        else
            vu_neg.add(-mu * lvu);
    }
    eb.coupling_B = B.value();
    eb.log_uv_pos = uv_pos.value();
    eb.log_uv_neg = uv_neg.value();
    eb.log_vu_pos = vu_pos.value();
    eb.log_vu_neg = vu_neg.value();
    eb.log_uv = eb.log_uv_pos - eb.log_uv_neg;
    eb.log_vu = eb.log_vu_pos - eb.log_vu_neg;
    eb.J = (eb.norm_u_p + eb.norm_v_p) / p - (eb.log_uv + eb.log_vu) / p;

    require_finite(eb.norm_u_p, "norm_u_p");
    require_finite(eb.norm_v_p, "norm_v_p");
    require_finite(eb.coupling_B, "coupling_B");
    require_finite(eb.log_uv, "log_uv");
    require_finite(eb.log_vu, "log_vu");
    require_finite(eb.J, "J");
    return eb;
}

double derivative_pairing(const FieldPair& fp, const FieldPair& test,
                          const ProblemSpec& spec) {
    require_same_graph(fp);
    require_same_graph(test);
    if (test.u.graph != fp.u.graph)
        throw ValidationError("test pair lives on a different graph");
    const GraphInstance& g = *fp.u.graph;
    const double p = spec.p;

    Field xi = test.u;
    Field eta = test.v;
    if (spec.variant == Variant::dirichlet) {
        validate_dirichlet_fields(fp, spec);
        xi = masked(test.u, spec.omega_a); // variations live on omega only
        eta = masked(test.v, spec.omega_b);
    }
    auto [pu, pv] = norm_potentials(spec, g);

    const std::vector<double> grad_u = gradient_length_all(fp.u);
    const std::vector<double> grad_v = gradient_length_all(fp.v);

    KahanSum grad_terms, pot_terms, log_u_terms, mixed_u_terms, log_v_terms,
        mixed_v_terms;
    for (int x = 0; x < g.vertex_count(); ++x) {
        const double mu = g.mu[x];
        const double uu = fp.u.values[x];
        const double vv = fp.v.values[x];
        const double wu = pow_abs(grad_u[x], p - 2.0);
        const double wv = pow_abs(grad_v[x], p - 2.0);
        grad_terms.add(mu * (wu * gradient_form(fp.u, xi, x) +
                             wv * gradient_form(fp.v, eta, x)));
        pot_terms.add(mu * (pu[x] * pow_abs(uu, p - 2.0) * uu * xi.values[x] +
                            pv[x] * pow_abs(vv, p - 2.0) * vv * eta.values[x]));
        log_u_terms.add(mu * pow_abs(uu, p - 4.0) * uu * xi.values[x] * log_sq(vv));
        mixed_u_terms.add(mu * pow_abs(uu, p - 2.0) * eta.values[x] *
                          (x_log_x2(vv) + vv));
        log_v_terms.add(mu * pow_abs(vv, p - 4.0) * vv * eta.values[x] * log_sq(uu));
        mixed_v_terms.add(mu * pow_abs(vv, p - 2.0) * xi.values[x] *
                          (x_log_x2(uu) + uu));
    }
    double result = grad_terms.value() + pot_terms.value() -
                    ((p - 2.0) / p) * (log_u_terms.value() + log_v_terms.value()) -
                    (2.0 / p) * (mixed_u_terms.value() + mixed_v_terms.value());
    require_finite(result, "derivative pairing");
    return result;
}

std::pair<Field, Field> residual(const FieldPair& fp, const ProblemSpec& spec) {
    require_same_graph(fp);
    const GraphInstance& g = *fp.u.graph;
    const double p = spec.p;
    if (spec.variant == Variant::dirichlet) validate_dirichlet_fields(fp, spec);
    auto [pu, pv] = norm_potentials(spec, g);

    const std::vector<double> grad_u = gradient_length_all(fp.u);
    const std::vector<double> grad_v = gradient_length_all(fp.v);
    std::vector<double> wu(g.vertex_count()), wv(g.vertex_count());
    for (int x = 0; x < g.vertex_count(); ++x) {
        wu[x] = pow_abs(grad_u[x], p - 2.0);
        wv[x] = pow_abs(grad_v[x], p - 2.0);
    }

    std::vector<char> eval_u(g.vertex_count(), 1), eval_v(g.vertex_count(), 1);
    if (spec.variant == Variant::dirichlet) {
        std::fill(eval_u.begin(), eval_u.end(), 0);
        std::fill(eval_v.begin(), eval_v.end(), 0);
        for (int x : spec.omega_a) eval_u[x] = 1;
        for (int x : spec.omega_b) eval_v[x] = 1;
    }

    Field res_u = zero_field(g);
    Field res_v = zero_field(g);
    for (int x = 0; x < g.vertex_count(); ++x) {
        const double mu = g.mu[x];
        const double uu = fp.u.values[x];
        const double vv = fp.v.values[x];
        if (eval_u[x]) {
            KahanSum lap;
            for (int y : g.adjacency[x])
                lap.add((wu[y] + wu[x]) * (fp.u.values[y] - uu));
            res_u.values[x] = -lap.value() / (2.0 * mu) +
                              pu[x] * pow_abs(uu, p - 2.0) * uu -
                              ((p - 2.0) / p) * pow_abs(uu, p - 4.0) * uu * log_sq(vv) -
                              (2.0 / p) * pow_abs(vv, p - 2.0) * (x_log_x2(uu) + uu);
            require_finite(res_u.values[x], "residual_u");
        }
        if (eval_v[x]) {
            KahanSum lap;
            for (int y : g.adjacency[x])
                lap.add((wv[y] + wv[x]) * (fp.v.values[y] - vv));
            res_v.values[x] = -lap.value() / (2.0 * mu) +
                              pv[x] * pow_abs(vv, p - 2.0) * vv -
                              ((p - 2.0) / p) * pow_abs(vv, p - 4.0) * vv * log_sq(uu) -
                              (2.0 / p) * pow_abs(uu, p - 2.0) * (x_log_x2(vv) + vv);
            require_finite(res_v.values[x], "residual_v");
        }
    }
    return {std::move(res_u), std::move(res_v)};
}

double nehari_defect(const FieldPair& fp, const ProblemSpec& spec) {
    return derivative_pairing(fp, fp, spec);
}

std::pair<double, double> ground_level_identity(const FieldPair& fp,
                                                const ProblemSpec& spec) {
    EnergyBreakdown eb = energy(fp, spec);
    double defect = nehari_defect(fp, spec);
    double lhs = eb.J - defect / spec.p;
    double rhs = (2.0 / (spec.p * spec.p)) * eb.coupling_B;
    return {lhs, rhs};
}

} // namespace graphlog
