#include "graphlog/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "graphlog/errors.hpp"
#include "graphlog/kahan.hpp"
#include "graphlog/num_format.hpp"

namespace graphlog {

double GraphInstance::mu_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : mu) m = std::min(m, v);
    return m;
}

int GraphInstance::index_of(std::int64_t original_id) const {
    auto it = id_index_.find(original_id);
    if (it == id_index_.end())
        throw UnknownVertex("unknown vertex id " + format_int(original_id));
    return it->second;
}

GraphInstance make_graph(std::vector<std::int64_t> ids, std::vector<double> mu,
                         std::vector<double> a, std::vector<double> b,
                         const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
    const std::size_t n = ids.size();
    if (n == 0) throw ValidationError("graph has no vertices");
    if (mu.size() != n || a.size() != n || b.size() != n)
        throw ValidationError("vertex attribute arrays disagree in length");

    GraphInstance g;
    g.ids = std::move(ids);
    g.mu = std::move(mu);
    g.a = std::move(a);
    g.b = std::move(b);
    g.adjacency.assign(n, {});

    for (std::size_t i = 0; i < n; ++i) {
        auto [it, fresh] = g.id_index_.emplace(g.ids[i], static_cast<int>(i));
        if (!fresh)
            throw ValidationError("duplicate vertex id " + format_int(g.ids[i]));
        if (!(g.mu[i] > 0.0))
            throw ValidationError("vertex " + format_int(g.ids[i]) +
                                  " has nonpositive measure mu=" + format_shortest(g.mu[i]));
        if (!std::isfinite(g.mu[i]) || !std::isfinite(g.a[i]) || !std::isfinite(g.b[i]))
            throw ValidationError("vertex " + format_int(g.ids[i]) +
                                  " has a non-finite attribute");
    }

    std::set<std::pair<int, int>> seen;
    for (const auto& [pa, pb] : edges) {
        auto ia = g.id_index_.find(pa);
        auto ib = g.id_index_.find(pb);
        std::string label = "(" + format_int(pa) + "," + format_int(pb) + ")";
        if (ia == g.id_index_.end() || ib == g.id_index_.end())
            throw ValidationError("edge " + label + " references an unknown vertex");
        int x = ia->second, y = ib->second;
        if (x == y)
            throw ValidationError("self-loop at vertex " + format_int(pa));
        auto key = std::minmax(x, y);
        if (!seen.insert({key.first, key.second}).second)
            throw ValidationError("duplicate edge " + label);
        g.adjacency[x].push_back(y);
        g.adjacency[y].push_back(x);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());

    // Connectivity by breadth-first search from vertex 0.
    std::vector<char> reached(n, 0);
    std::deque<int> queue{0};
    reached[0] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int y : g.adjacency[x]) {
            if (!reached[y]) {
                reached[y] = 1;
                ++count;
                queue.push_back(y);
            }
        }
    }
    if (count != n) {
        for (std::size_t i = 0; i < n; ++i)
            if (!reached[i])
                throw ValidationError("graph is disconnected: vertex " +
                                      format_int(g.ids[i]) +
                                      " is unreachable from vertex " +
                                      format_int(g.ids[0]));
    }
    return g;
}

GraphInstance parse_graph(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
            throw ParseError("graph JSON: expected object with \"vertices\" and \"edges\"");
        std::vector<std::int64_t> ids;
        std::vector<double> mu, a, b;
        for (const auto& v : doc.at("vertices")) {
            ids.push_back(v.at("id").get<std::int64_t>());
            mu.push_back(v.at("mu").get<double>());
            a.push_back(v.at("a").get<double>());
            b.push_back(v.at("b").get<double>());
        }
        std::vector<std::pair<std::int64_t, std::int64_t>> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("graph JSON: each edge must be a pair of vertex ids");
            edges.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
        }
        return make_graph(std::move(ids), std::move(mu), std::move(a), std::move(b), edges);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
}

GraphInstance load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string serialize_graph(const GraphInstance& g) {
    std::string out = "{\"vertices\":[";
    for (int i = 0; i < g.vertex_count(); ++i) {
        if (i) out += ',';
        out += "{\"id\":" + format_int(g.ids[i]);
        out += ",\"mu\":" + format_shortest(g.mu[i]);
        out += ",\"a\":" + format_shortest(g.a[i]);
        out += ",\"b\":" + format_shortest(g.b[i]);
        out += '}';
    }
    out += "],\"edges\":[";
    bool first = true;
    for (int x = 0; x < g.vertex_count(); ++x) {
        for (int y : g.adjacency[x]) {
            if (y <= x) continue; // each undirected edge once
            if (!first) out += ',';
            first = false;
            out += '[' + format_int(g.ids[x]) + ',' + format_int(g.ids[y]) + ']';
        }
    }
    out += "]}";
    return out;
}

void save_graph(const GraphInstance& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open graph file for writing: " + path);
    out << serialize_graph(g) << '\n';
}

std::vector<int> ball(const GraphInstance& g, int center, int radius) {
    if (!g.has_vertex(center))
        throw UnknownVertex("ball center " + format_int(center) +
                            " is not a vertex index (graph has " +
                            format_int(g.vertex_count()) + " vertices)");
    if (radius < 0)
        throw ValidationError("ball radius must be nonnegative");
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<int> queue{center};
    dist[center] = 0;
    std::vector<int> inside{center};
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (dist[x] == radius) continue;
        for (int y : g.adjacency[x]) {
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                inside.push_back(y);
                queue.push_back(y);
            }
        }
    }
    std::sort(inside.begin(), inside.end());
    return inside;
}

std::vector<int> boundary_of(const GraphInstance& g, std::span<const int> omega) {
    std::vector<char> in_omega(g.vertex_count(), 0);
    for (int x : omega) {
        if (!g.has_vertex(x))
            throw UnknownVertex("omega contains invalid vertex index " + format_int(x));
        in_omega[x] = 1;
    }
    std::vector<int> bdry;
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (in_omega[x]) continue;
        for (int y : g.adjacency[x]) {
            if (in_omega[y]) {
                bdry.push_back(x);
                break;
            }
        }
    }
    return bdry;
}

HypothesisReport check_hypotheses(const GraphInstance& g,
                                  std::span<const double> m_values, double m0) {
    HypothesisReport rep;
    rep.v0 = std::numeric_limits<double>::infinity();
    for (int x = 0; x < g.vertex_count(); ++x)
        rep.v0 = std::min(rep.v0, std::min(g.a[x], g.b[x]));
    rep.a1_holds = rep.v0 > 0.0;

    rep.m_values.assign(m_values.begin(), m_values.end());
    for (double m : m_values) {
        KahanSum vol_a, vol_b;
        for (int x = 0; x < g.vertex_count(); ++x) {
            if (g.a[x] <= m) vol_a.add(g.mu[x]);
            if (g.b[x] <= m) vol_b.add(g.mu[x]);
        }
        rep.sublevel_volumes.emplace_back(vol_a.value(), vol_b.value());
    }

    rep.m0 = m0;
    KahanSum tail_a, tail_b;
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (g.a[x] > m0) tail_a.add(g.mu[x] / g.a[x]);
        if (g.b[x] > m0) tail_b.add(g.mu[x] / g.b[x]);
    }
    rep.inverse_potential_tails = {tail_a.value(), tail_b.value()};

    for (int x = 0; x < g.vertex_count(); ++x) {
        if (g.a[x] == 0.0) rep.omega_a.push_back(x);
        if (g.b[x] == 0.0) rep.omega_b.push_back(x);
    }
    return rep;
}

} // namespace graphlog
