#include "graphlog/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "graphlog/errors.hpp"
#include "graphlog/num_format.hpp"

namespace graphlog {

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::object_value;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::array_value;
    return v;
}

JsonValue JsonValue::number(double value) {
    JsonValue v;
    if (std::isfinite(value)) {
        v.kind_ = Kind::number_value;
        v.num_ = value;
    } // else stays null
    return v;
}

JsonValue JsonValue::integer(std::int64_t value) {
    JsonValue v;
    v.kind_ = Kind::integer_value;
    v.int_ = value;
    return v;
}

JsonValue JsonValue::boolean(bool value) {
    JsonValue v;
    v.kind_ = Kind::boolean_value;
    v.bool_ = value;
    return v;
}

JsonValue JsonValue::text(std::string value) {
    JsonValue v;
    v.kind_ = Kind::string_value;
    v.str_ = std::move(value);
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::object_value) {
        throw ValidationError("set() requires a JSON object");
    }
    for (const auto& [existing, _] : members_) {
        if (existing == key) {
            throw ValidationError("duplicate JSON key '" + key + "'");
        }
    }
    members_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::array_value) {
        throw ValidationError("push() requires a JSON array");
    }
    items_.push_back(std::move(v));
    return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
}

void write_newline_indent(std::string& out, int indent, int depth) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

} // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
    switch (kind_) {
    case Kind::null_value:
        out += "null";
        return;
    case Kind::boolean_value:
        out += bool_ ? "true" : "false";
        return;
    case Kind::integer_value:
        out += format_int(int_);
        return;
    case Kind::number_value:
        out += format_17(num_);
        return;
    case Kind::string_value:
        write_escaped(out, str_);
        return;
    case Kind::array_value: {
        if (items_.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i > 0) out += ',';
            write_newline_indent(out, indent, depth + 1);
            items_[i].write(out, indent, depth + 1);
        }
        write_newline_indent(out, indent, depth);
        out += ']';
        return;
    }
    case Kind::object_value: {
        if (members_.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (i > 0) out += ',';
            write_newline_indent(out, indent, depth + 1);
            write_escaped(out, members_[i].first);
            out += ": ";
            members_[i].second.write(out, indent, depth + 1);
        }
        write_newline_indent(out, indent, depth);
        out += '}';
        return;
    }
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

JsonValue json_of(const Field& f) {
    JsonValue values = JsonValue::object();
    for (int i = 0; i < f.graph->vertex_count(); ++i) {
        values.set(format_int(f.graph->ids[i]), JsonValue::number(f.values[i]));
    }
    JsonValue root = JsonValue::object();
    root.set("values", std::move(values));
    return root;
}

JsonValue json_of(const EnergyBreakdown& e) {
    JsonValue v = JsonValue::object();
    v.set("norm_u_p", JsonValue::number(e.norm_u_p));
    v.set("norm_v_p", JsonValue::number(e.norm_v_p));
    v.set("coupling_B", JsonValue::number(e.coupling_B));
    v.set("log_uv", JsonValue::number(e.log_uv));
    v.set("log_vu", JsonValue::number(e.log_vu));
    v.set("log_uv_pos", JsonValue::number(e.log_uv_pos));
    v.set("log_uv_neg", JsonValue::number(e.log_uv_neg));
    v.set("log_vu_pos", JsonValue::number(e.log_vu_pos));
    v.set("log_vu_neg", JsonValue::number(e.log_vu_neg));
    v.set("J", JsonValue::number(e.J));
    return v;
}

JsonValue json_of(const FiberingCoefficients& c) {
    JsonValue v = JsonValue::object();
    v.set("N", JsonValue::number(c.N));
    v.set("B", JsonValue::number(c.B));
    v.set("C", JsonValue::number(c.C));
    return v;
}

JsonValue json_of(const CalibrationResult& c) {
    JsonValue v = JsonValue::object();
    v.set("p", JsonValue::number(c.p));
    v.set("epsilon", JsonValue::number(c.epsilon));
    v.set("s", JsonValue::number(c.s));
    v.set("p1", JsonValue::number(c.p1));
    v.set("p2", JsonValue::number(c.p2));
    v.set("t", JsonValue::number(c.t));
    return v;
}

JsonValue json_of(const HypothesisReport& h, const GraphInstance& g) {
    JsonValue v = JsonValue::object();
    v.set("v0", JsonValue::number(h.v0));
    v.set("a1_holds", JsonValue::boolean(h.a1_holds));
    JsonValue levels = JsonValue::array();
    for (std::size_t i = 0; i < h.m_values.size(); ++i) {
        JsonValue row = JsonValue::object();
        row.set("M", JsonValue::number(h.m_values[i]));
        row.set("volume_a", JsonValue::number(h.sublevel_volumes[i].first));
        row.set("volume_b", JsonValue::number(h.sublevel_volumes[i].second));
        levels.push(std::move(row));
    }
    v.set("sublevel_volumes", std::move(levels));
    v.set("m0", JsonValue::number(h.m0));
    v.set("inverse_tail_a", JsonValue::number(h.inverse_potential_tails.first));
    v.set("inverse_tail_b", JsonValue::number(h.inverse_potential_tails.second));
    JsonValue oa = JsonValue::array();
    for (int x : h.omega_a) oa.push(JsonValue::integer(g.ids[x]));
    JsonValue ob = JsonValue::array();
    for (int x : h.omega_b) ob.push(JsonValue::integer(g.ids[x]));
    v.set("omega_a", std::move(oa));
    v.set("omega_b", std::move(ob));
    return v;
}

JsonValue json_of(const SeriesReport& r) {
    JsonValue params = JsonValue::object();
    params.set("p", JsonValue::number(r.params.p));
    params.set("delta", JsonValue::number(r.params.delta));
    params.set("theta", JsonValue::number(r.params.theta));
    params.set("phi", JsonValue::number(r.params.phi));
    params.set("n_max", JsonValue::integer(r.params.n_max));

    JsonValue rows = JsonValue::array();
    for (const SeriesCheckpoint& cp : r.checkpoints) {
        JsonValue row = JsonValue::object();
        row.set("n", JsonValue::integer(cp.n));
        row.set("convergent_partial", JsonValue::number(cp.convergent_partial));
        row.set("i1_partial", JsonValue::number(cp.i1_partial));
        row.set("i2_partial", JsonValue::number(cp.i2_partial));
        row.set("i1_bare_partial", JsonValue::number(cp.i1_bare_partial));
        row.set("i2_bare_partial", JsonValue::number(cp.i2_bare_partial));
        row.set("convergent_asymptote",
                JsonValue::number(cp.convergent_asymptote));
        row.set("i1_asymptote", JsonValue::number(cp.i1_asymptote));
        row.set("i2_asymptote", JsonValue::number(cp.i2_asymptote));
        row.set("i1_relative_gap", JsonValue::number(cp.i1_relative_gap));
        row.set("i2_relative_gap", JsonValue::number(cp.i2_relative_gap));
        rows.push(std::move(row));
    }

    JsonValue verdict = JsonValue::object();
    verdict.set("convergent_tail_bound",
                JsonValue::number(r.verdict.convergent_tail_bound));
    verdict.set("convergent_tail_bounded",
                JsonValue::boolean(r.verdict.convergent_tail_bounded));
    verdict.set("i1_matches_asymptote",
                JsonValue::boolean(r.verdict.i1_matches_asymptote));
    verdict.set("i2_matches_asymptote",
                JsonValue::boolean(r.verdict.i2_matches_asymptote));
    verdict.set("i1_strictly_decreasing_from_16",
                JsonValue::boolean(r.verdict.i1_strictly_decreasing_from_16));
    verdict.set("i2_strictly_decreasing_from_16",
                JsonValue::boolean(r.verdict.i2_strictly_decreasing_from_16));
    verdict.set("i1_first_negative_n",
                JsonValue::integer(r.verdict.i1_first_negative_n));
    verdict.set("i2_first_negative_n",
                JsonValue::integer(r.verdict.i2_first_negative_n));

    JsonValue root = JsonValue::object();
    root.set("params", std::move(params));
    root.set("checkpoints", std::move(rows));
    root.set("verdict", std::move(verdict));
    return root;
}

namespace {

JsonValue json_of(const SeedResult& s) {
    JsonValue v = JsonValue::object();
    v.set("seed_index", JsonValue::integer(s.seed_index));
    v.set("converged", JsonValue::boolean(s.converged));
    v.set("energy", JsonValue::number(s.energy));
    v.set("residual_sup", JsonValue::number(s.residual_sup));
    v.set("nehari_defect", JsonValue::number(s.nehari_defect));
    v.set("iterations", JsonValue::integer(s.iterations));
    v.set("note", JsonValue::text(s.note));
    return v;
}

JsonValue json_of_pair(const FieldPair& fp) {
    JsonValue v = JsonValue::object();
    v.set("u", json_of(fp.u));
    v.set("v", json_of(fp.v));
    return v;
}

} // namespace

JsonValue json_of(const SolveReport& r) {
    JsonValue v = JsonValue::object();
    v.set("converged", JsonValue::boolean(r.converged));
    v.set("energy", JsonValue::number(r.energy));
    v.set("nehari_defect", JsonValue::number(r.nehari_defect));
    v.set("residual_sup", JsonValue::number(r.residual_sup));
    v.set("iterations", JsonValue::integer(r.iterations));
    JsonValue seeds = JsonValue::array();
    for (const SeedResult& s : r.seed_results) seeds.push(json_of(s));
    v.set("seed_results", std::move(seeds));
    v.set("trace_points", JsonValue::integer(
                              static_cast<std::int64_t>(r.trace.size())));
    if (r.best.u.graph != nullptr) {
        v.set("solution", json_of_pair(r.best));
    }
    return v;
}

JsonValue json_of(const SweepResult& r) {
    JsonValue rows = JsonValue::array();
    for (std::size_t i = 0; i < r.lambdas.size(); ++i) {
        JsonValue row = JsonValue::object();
        row.set("lambda", JsonValue::number(r.lambdas[i]));
        row.set("d_lambda", JsonValue::number(r.d_lambda[i]));
        row.set("mass_out", JsonValue::number(r.mass_out[i]));
        row.set("penalty_mass", JsonValue::number(r.penalty_mass[i]));
        row.set("converged", JsonValue::boolean(r.lambda_converged[i]));
        row.set("error", JsonValue::text(r.errors[i]));
        if (r.solutions[i].u.graph != nullptr) {
            row.set("solution", json_of_pair(r.solutions[i]));
        }
        rows.push(std::move(row));
    }
    JsonValue v = JsonValue::object();
    v.set("entries", std::move(rows));
    v.set("d_omega", JsonValue::number(r.d_omega));
    v.set("omega_converged", JsonValue::boolean(r.omega_converged));
    if (r.omega_solution.u.graph != nullptr) {
        v.set("omega_solution", json_of_pair(r.omega_solution));
    }
    return v;
}

std::string trace_csv(std::span<const TracePoint> trace) {
    std::string out = "iter,J,residual_sup,step\n";
    for (const TracePoint& t : trace) {
        out += format_int(t.iter);
        out += ',';
        out += format_17(t.J);
        out += ',';
        out += format_17(t.residual_sup);
        out += ',';
        out += format_17(t.step);
        out += '\n';
    }
    return out;
}

std::string series_csv(const SeriesReport& r) {
    std::string out =
        "N,convergent_partial,I1_partial,I2_partial,asymptote_q,relative_gap\n";
    for (const SeriesCheckpoint& cp : r.checkpoints) {
        out += format_int(cp.n);
        out += ',';
        out += format_17(cp.convergent_partial);
        out += ',';
        out += format_17(cp.i1_partial);
        out += ',';
        out += format_17(cp.i2_partial);
        out += ',';
        out += format_17(cp.i1_asymptote);
        out += ',';
        out += format_17(cp.i1_relative_gap);
        out += '\n';
    }
    return out;
}

} // namespace graphlog
