#ifndef GRAPHLOG_REPORT_JSON_HPP
#define GRAPHLOG_REPORT_JSON_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphlog/analysis.hpp"
#include "graphlog/energy.hpp"
#include "graphlog/graph.hpp"
#include "graphlog/nehari.hpp"
#include "graphlog/solver.hpp"

namespace graphlog {

// Insertion-ordered JSON tree with deterministic text output: object keys
// appear exactly in insertion order, doubles print with 17 significant
// digits, and non-finite doubles become null. Two identical trees always
// dump to identical bytes.
class JsonValue {
public:
    JsonValue() : kind_(Kind::null_value) {}

    static JsonValue object();
    static JsonValue array();
    static JsonValue number(double v); // non-finite collapses to null
    static JsonValue integer(std::int64_t v);
    static JsonValue boolean(bool v);
    static JsonValue text(std::string v);

    // Object member in insertion order; replaces nothing — keys are expected
    // to be distinct, and a duplicate throws.
    JsonValue& set(const std::string& key, JsonValue v);
    // Array element.
    JsonValue& push(JsonValue v);

    std::string dump(int indent = 2) const;

private:
    enum class Kind { null_value, boolean_value, integer_value, number_value,
                      string_value, array_value, object_value };
    Kind kind_;
    bool bool_ = false;
    std::int64_t int_ = 0;
    double num_ = 0.0;
    std::string str_;
    std::vector<JsonValue> items_;
    std::vector<std::pair<std::string, JsonValue>> members_;

    void write(std::string& out, int indent, int depth) const;
};

// Field as the standalone file schema: {"values": {original-id: value}}.
JsonValue json_of(const Field& f);

JsonValue json_of(const EnergyBreakdown& e);
JsonValue json_of(const FiberingCoefficients& c);
JsonValue json_of(const CalibrationResult& c);
JsonValue json_of(const HypothesisReport& h, const GraphInstance& g);
JsonValue json_of(const SeriesReport& r);
// Includes the winning pair inline plus every start's outcome.
JsonValue json_of(const SolveReport& r);
// Includes the per-lambda solutions and the boundary-problem solution inline.
JsonValue json_of(const SweepResult& r);

// One row per iterate of the winning run: iter, J, residual_sup, step.
std::string trace_csv(std::span<const TracePoint> trace);

// One row per checkpoint: N, convergent_partial, I1_partial, I2_partial,
// asymptote_q (closed-form integral for the dominant divergent exponent),
// relative_gap (bare first-series distance to that asymptote).
std::string series_csv(const SeriesReport& r);

} // namespace graphlog

#endif
