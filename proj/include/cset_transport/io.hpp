#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cset_transport/cset.hpp"
#include "cset_transport/markov.hpp"

namespace cst {

using Json = nlohmann::ordered_json;

/// Version tag written into every JSON document the tools emit.
inline constexpr const char* kSchema = "cset-transport/1";

/// Reads the instance format: theory (builtin name or DSL text), sets, maps,
/// and optional metrics, measures and fixed objects. Validates the result.
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& x);

/// Parses JSON text, mapping syntax errors to ParseError with line/column.
Json parse_json(std::string_view text);

/// A file path, or "builtin:<name>" for a shipped example.
Instance load_instance(const std::string& source);

/// fig5x, fig5y, fig6x, fig6y, fig7x, fig7y, fig8y, fig9x, fig9y, asetx,
/// asety, and C<n> for the directed n-cycle. Graphs carry the weak
/// configuration: shortest-path metric on V, discrete on E, counting
/// measures.
Instance builtin_instance(std::string_view name);
std::vector<std::string> builtin_instance_names();

/// The directed cycle on n vertices in the weak configuration.
Instance cycle_graph(std::size_t n);

/// Explicit matrices may contain the string "inf".
MetricData metric_from_json(const Json& j);
Json metric_to_json(const MetricData& d);
MeasureData measure_from_json(const Json& j);
Json measure_to_json(const MeasureData& mu);

/// {"rows": r, "cols": c, "p": [[...]]}
FiniteKernel kernel_from_json(const Json& j);
Json kernel_to_json(const FiniteKernel& k);

/// Object name -> component.
Json transformation_to_json(const Instance& x, const Transformation& t);
Json markov_to_json(const Instance& x, const MarkovTransformation& phi);

/// A number, or the string "inf".
Json ext_real_to_json(ExtReal v);

}  // namespace cst
