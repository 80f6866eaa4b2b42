#include "graphlog/field.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphlog/errors.hpp"
#include "graphlog/num_format.hpp"

namespace graphlog {

Field zero_field(const GraphInstance& g) {
    return Field{&g, std::vector<double>(g.vertex_count(), 0.0)};
}

Field make_field(const GraphInstance& g, std::vector<double> values) {
    if (static_cast<int>(values.size()) != g.vertex_count())
        throw ValidationError("field has " + format_int(static_cast<std::int64_t>(values.size())) +
                              " values for a graph with " +
                              format_int(g.vertex_count()) + " vertices");
    return Field{&g, std::move(values)};
}

FieldPair make_pair(const GraphInstance& g, std::vector<double> u_values,
                    std::vector<double> v_values) {
    return FieldPair{make_field(g, std::move(u_values)), make_field(g, std::move(v_values))};
}

FieldPair scaled(const FieldPair& fp, double t) {
    FieldPair out = fp;
    for (double& x : out.u.values) x *= t;
    for (double& x : out.v.values) x *= t;
    return out;
}

Field masked(const Field& f, std::span<const int> keep) {
    Field out = zero_field(*f.graph);
    for (int x : keep) out.values[x] = f.values[x];
    return out;
}

bool is_zero_pair(const FieldPair& fp) {
    auto all_zero = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    return all_zero(fp.u.values) && all_zero(fp.v.values);
}

void require_same_graph(const FieldPair& fp) {
    if (fp.u.graph == nullptr || fp.u.graph != fp.v.graph)
        throw ValidationError("field pair components live on different graphs");
}

Field parse_field(const std::string& json_text, const GraphInstance& g) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field JSON: ") + e.what());
    }
    Field f = zero_field(g);
    try {
        if (!doc.is_object() || !doc.contains("values"))
            throw ParseError("field JSON: expected object with \"values\"");
        for (const auto& [key, val] : doc.at("values").items()) {
            std::int64_t id = 0;
            try {
                id = std::stoll(key);
            } catch (...) {
                throw ParseError("field JSON: key \"" + key + "\" is not a vertex id");
            }
            f.values[g.index_of(id)] = val.get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field JSON: ") + e.what());
    }
    return f;
}

Field load_field(const std::string& path, const GraphInstance& g) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open field file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_field(buf.str(), g);
}

std::string serialize_field(const Field& f) {
    std::string out = "{\"values\":{";
    const GraphInstance& g = *f.graph;
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (x) out += ',';
        out += '"' + format_int(g.ids[x]) + "\":" + format_17(f.values[x]);
    }
    out += "}}";
    return out;
}

void save_field(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open field file for writing: " + path);
    out << serialize_field(f) << '\n';
}

} // namespace graphlog
