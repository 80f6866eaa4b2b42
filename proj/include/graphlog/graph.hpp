#ifndef GRAPHLOG_GRAPH_HPP
#define GRAPHLOG_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace graphlog {

// Finite weighted graph: undirected, simple, connected, with a positive
// vertex measure mu and two real potentials a, b. Immutable after
// construction and safe to share across threads; every operation on it is a
// pure read.
//
// Vertices are dense indices 0..n-1 in file order; the ids vector retains the
// original file ids for round-tripping and error messages.
struct GraphInstance {
    std::vector<std::int64_t> ids;
    std::vector<std::vector<int>> adjacency; // sorted dense neighbor lists
    std::vector<double> mu;
    std::vector<double> a;
    std::vector<double> b;

    int vertex_count() const { return static_cast<int>(mu.size()); }

    double mu_min() const;

    // Dense index for an original file id; throws UnknownVertex.
    int index_of(std::int64_t original_id) const;

    bool has_vertex(int x) const { return x >= 0 && x < vertex_count(); }

private:
    friend GraphInstance make_graph(std::vector<std::int64_t>,
                                    std::vector<double>, std::vector<double>,
                                    std::vector<double>,
                                    const std::vector<std::pair<std::int64_t, std::int64_t>>&);
    mutable std::unordered_map<std::int64_t, int> id_index_;
};

// Builds and validates an instance from per-vertex data and an undirected
// edge list given in original ids. Throws ValidationError on self-loops,
// duplicate ids or edges, nonpositive mu, unknown endpoints, or a
// disconnected graph, naming the offending vertex or edge.
GraphInstance make_graph(std::vector<std::int64_t> ids, std::vector<double> mu,
                         std::vector<double> a, std::vector<double> b,
                         const std::vector<std::pair<std::int64_t, std::int64_t>>& edges);

// File schema:
//   { "vertices": [{"id": int, "mu": float, "a": float, "b": float}, ...],
//     "edges": [[int, int], ...] }
// Floats round-trip exactly (shortest-representation decimals on save).
GraphInstance load_graph(const std::string& path);
GraphInstance parse_graph(const std::string& json_text);
std::string serialize_graph(const GraphInstance& g);
void save_graph(const GraphInstance& g, const std::string& path);

// Closed metric ball {x : d(center, x) <= radius} by breadth-first search,
// returned as sorted dense indices.
std::vector<int> ball(const GraphInstance& g, int center, int radius);

// Vertices outside omega with at least one neighbor in omega. omega holds
// sorted dense indices.
std::vector<int> boundary_of(const GraphInstance& g, std::span<const int> omega);

// Coercivity diagnostics for the potentials: uniform lower bound, sublevel
// volumes, inverse-potential tails, and the zero sets.
struct HypothesisReport {
    double v0 = 0.0;   // min over vertices of min(a, b)
    bool a1_holds = false; // v0 > 0
    std::vector<double> m_values;
    // (Vol of {a <= M}, Vol of {b <= M}) per entry of m_values, Vol = mu-sum.
    std::vector<std::pair<double, double>> sublevel_volumes;
    double m0 = 0.0;
    // (sum of mu/a over a > m0, sum of mu/b over b > m0).
    std::pair<double, double> inverse_potential_tails{0.0, 0.0};
    std::vector<int> omega_a; // {x : a(x) == 0}, sorted
    std::vector<int> omega_b; // {x : b(x) == 0}, sorted
};

HypothesisReport check_hypotheses(const GraphInstance& g,
                                  std::span<const double> m_values, double m0);

} // namespace graphlog

#endif
