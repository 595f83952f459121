#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "leakproof/flow.hpp"
#include "leakproof/graph.hpp"
#include "leakproof/planarity.hpp"

namespace leakproof {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ParseError with the byte offset.
Json parse_json(std::string_view text, std::string_view source = "input");
std::string read_file(const std::string& path);

Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);
/// One "u v" pair per line; blank lines and lines starting with '#' are skipped.
Graph graph_from_edge_list(std::string_view text);
/// JSON if the first non-blank character is '{', edge list otherwise.
Graph parse_graph(std::string_view text, std::string_view source = "input");

Json rotation_to_json(const RotationSystem& r);
RotationSystem rotation_from_json(const Graph& g, const Json& j);

Json witness_to_json(const MinorWitness& w, const Graph& host);
MinorWitness witness_from_json(const Graph& host, const Json& j);

Json faces_to_json(const RotationSystem& r, const std::vector<BoundaryWalk>& walks);

Json flow_to_json(const GroupFlow& f);
/// The group is rebuilt from its spec string, so cayley: flows need the file.
GroupFlow flow_from_json(const Json& j, std::size_t max_order = kDefaultMaxGroupOrder);

Json leak_verdict_to_json(const GroupFlow& f, const LeakVerdict& v);

}  // namespace leakproof
