#include "leakproof/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "leakproof/error.hpp"

namespace leakproof {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& member(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) fail(std::string(where) + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string(where) + ": missing \"" + key + "\"");
  return *it;
}

std::string id_string(const Json& j, const char* where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(std::string(where) + ": vertex ids must be strings or integers");
}

Vertex vertex_of(const Graph& g, const Json& j, const char* where) { return g.at(id_string(j, where)); }

Json edge_json(const Graph& g, Edge e) { return Json::array({g.label(e.u), g.label(e.v)}); }

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // byte is 1-based and points just past the offending character.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(std::string(source) + ": malformed JSON at byte " + std::to_string(e.byte) + " (line " + std::to_string(line) +
         ", column " + std::to_string(column) + ")");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (Edge e : g.edges()) edges.push_back(edge_json(g, e));
  return {{"vertices", g.labels()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const Json& j) {
  const Json& edges = member(j, "edges", "graph");
  if (!edges.is_array()) fail("graph: \"edges\" must be an array");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Json& e : edges) {
    if (!e.is_array() || e.size() != 2) fail("graph: every edge must be a pair of vertex ids");
    pairs.emplace_back(id_string(e[0], "graph"), id_string(e[1], "graph"));
  }
  std::vector<std::string> labels;
  if (auto it = j.find("vertices"); it != j.end()) {
    if (!it->is_array()) fail("graph: \"vertices\" must be an array");
    for (const Json& v : *it) labels.push_back(id_string(v, "graph"));
  } else {
    std::set<std::string> seen;
    for (const auto& [a, b] : pairs) {
      if (seen.insert(a).second) labels.push_back(a);
      if (seen.insert(b).second) labels.push_back(b);
    }
  }
  return Graph(std::move(labels), pairs);
}

Graph graph_from_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> labels;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string a, b, extra;
    if (!(words >> a) || a[0] == '#') continue;
    if (!(words >> b) || (words >> extra))
      fail("edge list line " + std::to_string(line_no) + ": expected exactly two vertex ids");
    pairs.emplace_back(a, b);
    if (seen.insert(a).second) labels.push_back(a);
    if (seen.insert(b).second) labels.push_back(b);
  }
  return Graph(std::move(labels), pairs);
}

Graph parse_graph(std::string_view text, std::string_view source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return graph_from_json(parse_json(text, source));
  return graph_from_edge_list(text);
}

Json rotation_to_json(const RotationSystem& r) {
  const Graph& g = r.graph();
  Json rotation = Json::object();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Json order = Json::array();
    for (Vertex u : r.order(v)) order.push_back(g.label(u));
    rotation[g.label(v)] = std::move(order);
  }
  return {{"rotation", std::move(rotation)}};
}

RotationSystem rotation_from_json(const Graph& g, const Json& j) {
  const Json& rotation = member(j, "rotation", "rotation");
  if (!rotation.is_object()) fail("rotation: \"rotation\" must be an object");
  std::vector<std::vector<Vertex>> order(static_cast<std::size_t>(g.vertex_count()));
  for (const auto& [key, list] : rotation.items()) {
    const Vertex v = g.at(key);
    if (!list.is_array()) fail("rotation: the order around " + key + " must be an array");
    for (const Json& u : list) order[std::size_t(v)].push_back(vertex_of(g, u, "rotation"));
  }
  return RotationSystem(g, std::move(order));
}

Json witness_to_json(const MinorWitness& w, const Graph& host) {
  Json sets = Json::object();
  for (Vertex m = 0; m < w.model.vertex_count(); ++m) {
    Json members = Json::array();
    for (Vertex v : w.branch_sets[std::size_t(m)]) members.push_back(host.label(v));
    sets[w.model.label(m)] = std::move(members);
  }
  Json forest = Json::array();
  for (Edge e : w.forest_edges) forest.push_back(edge_json(host, e));
  return {{"model", graph_to_json(w.model)}, {"branch_sets", std::move(sets)}, {"forest_edges", std::move(forest)}};
}

MinorWitness witness_from_json(const Graph& host, const Json& j) {
  MinorWitness w;
  w.model = graph_from_json(member(j, "model", "witness"));
  const Json& sets = member(j, "branch_sets", "witness");
  if (!sets.is_object()) fail("witness: \"branch_sets\" must be an object");
  w.branch_sets.resize(static_cast<std::size_t>(w.model.vertex_count()));
  for (const auto& [key, list] : sets.items()) {
    const Vertex m = w.model.at(key);
    if (!list.is_array()) fail("witness: branch set " + key + " must be an array");
    for (const Json& v : list) w.branch_sets[std::size_t(m)].push_back(vertex_of(host, v, "witness"));
  }
  for (const Json& e : member(j, "forest_edges", "witness")) {
    if (!e.is_array() || e.size() != 2) fail("witness: forest edges must be pairs");
    w.forest_edges.push_back(Edge::of(vertex_of(host, e[0], "witness"), vertex_of(host, e[1], "witness")));
  }
  return w;
}

Json faces_to_json(const RotationSystem& r, const std::vector<BoundaryWalk>& walks) {
  const Graph& g = r.graph();
  Json list = Json::array();
  for (const auto& walk : walks) {
    Json seq = Json::array();
    for (Vertex v : walk.sequence) seq.push_back(g.label(v));
    list.push_back(std::move(seq));
  }
  return {{"faces", std::move(list)}, {"planar", euler_planar_check(r)}};
}

Json flow_to_json(const GroupFlow& f) {
  const Graph& g = f.graph();
  Json values = Json::array();
  for (Edge e : g.edges()) values.push_back({g.label(e.u), g.label(e.v), f.group().name(f(e.u, e.v))});
  return {{"group", f.group().spec()}, {"graph", graph_to_json(g)}, {"values", std::move(values)}};
}

GroupFlow flow_from_json(const Json& j, std::size_t max_order) {
  const Json& spec = member(j, "group", "flow");
  if (!spec.is_string()) fail("flow: \"group\" must be a group spec string");
  GroupPtr group = standard_group(spec.get<std::string>(), max_order);
  Graph g = graph_from_json(member(j, "graph", "flow"));
  GroupFlow f(g, group);
  for (const Json& row : member(j, "values", "flow")) {
    if (!row.is_array() || row.size() != 3 || !row[2].is_string()) fail("flow: values must be [u, v, element] triples");
    f.set(vertex_of(g, row[0], "flow"), vertex_of(g, row[1], "flow"), group->parse_word(row[2].get<std::string>()));
  }
  return f;
}

Json leak_verdict_to_json(const GroupFlow& f, const LeakVerdict& v) {
  const Graph& g = f.graph();
  Json out = {{"kind", std::string(to_string(v.kind))}};
  switch (v.kind) {
    case LeakVerdict::Kind::NotTractable:
      out["vertex"] = g.label(v.vertex);
      break;
    case LeakVerdict::Kind::LeaksAt:
      out["vertex"] = g.label(v.vertex);
      out["value"] = f.group().name(v.value);
      break;
    case LeakVerdict::Kind::MultipleNonConserving: {
      Json list = Json::array();
      for (Vertex u : v.vertices) list.push_back(g.label(u));
      out["vertices"] = std::move(list);
      break;
    }
    case LeakVerdict::Kind::ConservingEverywhere:
      break;
  }
  return out;
}

}  // namespace leakproof
