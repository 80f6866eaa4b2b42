#ifndef GRAPHLOG_FIELD_HPP
#define GRAPHLOG_FIELD_HPP

#include <span>
#include <string>
#include <vector>

#include "graphlog/graph.hpp"

namespace graphlog {

// Real-valued function on the vertex set, stored densely. The graph is
// referenced, not owned: it must outlive the field.
struct Field {
    const GraphInstance* graph = nullptr;
    std::vector<double> values;
};

Field zero_field(const GraphInstance& g);
Field make_field(const GraphInstance& g, std::vector<double> values);

// The unknowns (u, v); both components must live on the same graph.
struct FieldPair {
    Field u;
    Field v;
};

FieldPair make_pair(const GraphInstance& g, std::vector<double> u_values,
                    std::vector<double> v_values);

// (t*u, t*v).
FieldPair scaled(const FieldPair& fp, double t);

// Zeroes every value outside the keep set (sorted dense indices).
Field masked(const Field& f, std::span<const int> keep);

bool is_zero_pair(const FieldPair& fp);

// Requires both components on the same non-null graph.
void require_same_graph(const FieldPair& fp);

// File schema: { "values": {"<vertex id>": float, ...} }; ids not listed
// default to 0. Serialization walks vertices in dense order with
// 17-significant-digit floats.
Field parse_field(const std::string& json_text, const GraphInstance& g);
Field load_field(const std::string& path, const GraphInstance& g);
std::string serialize_field(const Field& f);
void save_field(const Field& f, const std::string& path);

} // namespace graphlog

#endif
