#include "leakproof/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "leakproof/error.hpp"

namespace leakproof {

namespace {

bool is_integer_id(std::string_view s) {
  if (s.empty() || s.size() > 18) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t parse_size(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorKind::ParseError, "expected a number in graph name '" + std::string(whole) + "'");
  return value;
}

}  // namespace

bool vertex_id_less(std::string_view a, std::string_view b) {
  const bool ia = is_integer_id(a), ib = is_integer_id(b);
  if (ia != ib) return ia;
  if (ia) {
    std::size_t x = 0, y = 0;
    std::from_chars(a.data(), a.data() + a.size(), x);
    std::from_chars(b.data(), b.data() + b.size(), y);
    if (x != y) return x < y;
  }
  return a < b;
}

Graph::Graph(int n) : adj_(std::size_t(std::max(n, 0))) {
  for (int i = 1; i <= n; ++i) labels_.push_back(std::to_string(i));
}

Graph::Graph(std::vector<std::string> labels,
             const std::vector<std::pair<std::string, std::string>>& edges)
    : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end(), vertex_id_less);
  for (std::size_t i = 1; i < labels_.size(); ++i)
    if (labels_[i] == labels_[i - 1]) throw Error(ErrorKind::ParseError, "duplicate vertex '" + labels_[i] + "'");
  adj_.assign(labels_.size(), {});
  for (const auto& [a, b] : edges) add_edge(at(a), at(b));
}

std::optional<Vertex> Graph::find(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label,
                             [](const std::string& x, std::string_view y) { return vertex_id_less(x, y); });
  if (it == labels_.end() || *it != label) return std::nullopt;
  return Vertex(it - labels_.begin());
}

Vertex Graph::at(std::string_view label) const {
  if (auto v = find(label)) return *v;
  throw Error(ErrorKind::ParseError, "unknown vertex '" + std::string(label) + "'");
}

bool Graph::has_edge(Vertex a, Vertex b) const { return neighbor_slot(a, b) >= 0; }

int Graph::neighbor_slot(Vertex a, Vertex b) const {
  const auto& n = adj_[std::size_t(a)];
  auto it = std::lower_bound(n.begin(), n.end(), b);
  if (it == n.end() || *it != b) return -1;
  return int(it - n.begin());
}

void Graph::add_edge(Vertex a, Vertex b) {
  if (a == b) throw Error(ErrorKind::ParseError, "loop at vertex '" + label(a) + "'");
  if (has_edge(a, b))
    throw Error(ErrorKind::ParseError, "repeated edge {" + label(a) + "," + label(b) + "}");
  auto insert_sorted = [](std::vector<Vertex>& list, Vertex x) {
    list.insert(std::lower_bound(list.begin(), list.end(), x), x);
  };
  insert_sorted(adj_[std::size_t(a)], b);
  insert_sorted(adj_[std::size_t(b)], a);
  const Edge e = Edge::of(a, b);
  edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
}

void Graph::remove_edge(Vertex a, Vertex b) {
  if (!has_edge(a, b)) throw Error(ErrorKind::EdgeMissing, "no edge {" + label(a) + "," + label(b) + "}");
  auto erase = [](std::vector<Vertex>& list, Vertex x) { list.erase(std::lower_bound(list.begin(), list.end(), x)); };
  erase(adj_[std::size_t(a)], b);
  erase(adj_[std::size_t(b)], a);
  edges_.erase(std::lower_bound(edges_.begin(), edges_.end(), Edge::of(a, b)));
}

Graph Graph::with_edge(Vertex a, Vertex b) const {
  Graph g = *this;
  g.add_edge(a, b);
  return g;
}

Graph Graph::without_edge(Vertex a, Vertex b) const {
  Graph g = *this;
  g.remove_edge(a, b);
  return g;
}

Graph Graph::spanning_subgraph(const std::vector<Edge>& keep) const {
  Graph g;
  g.labels_ = labels_;
  g.adj_.assign(labels_.size(), {});
  for (const Edge& e : keep) {
    if (!has_edge(e.u, e.v)) throw Error(ErrorKind::NotSubgraph, "edge {" + label(e.u) + "," + label(e.v) + "} is not in the graph");
    g.add_edge(e.u, e.v);
  }
  return g;
}

Graph named_graph(std::string_view name) {
  const auto colon = name.find(':');
  const std::string_view head = name.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
  auto complete_bipartite = [](int a, int b) {
    Graph g(a + b);
    for (int i = 0; i < a; ++i)
      for (int j = a; j < a + b; ++j) g.add_edge(i, j);
    return g;
  };
  auto complete = [](int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
  };

  if (head == "complete") return complete(int(parse_size(arg, name)));
  if (head == "complete_bipartite") {
    const auto comma = arg.find(',');
    if (comma == std::string_view::npos) throw Error(ErrorKind::ParseError, "complete_bipartite needs a,b");
    return complete_bipartite(int(parse_size(arg.substr(0, comma), name)), int(parse_size(arg.substr(comma + 1), name)));
  }
  if (head == "path") {
    const int n = int(parse_size(arg, name));
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }
  if (head == "cycle") {
    const int n = int(parse_size(arg, name));
    if (n < 3) throw Error(ErrorKind::ParseError, "cycle:n needs n >= 3");
    Graph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
  }
  if (head == "petersen" && colon == std::string_view::npos) {
    // outer 5-cycle 1..5, spokes i -- i+5, inner pentagram on 6..10
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
      g.add_edge(i, (i + 1) % 5);
      g.add_edge(i, i + 5);
      g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
  }
  // Remove the edge between the two lowest-labelled adjacent vertices.
  if (head == "k5minus" && colon == std::string_view::npos) return complete(5).without_edge(0, 1);
  if (head == "k33minus" && colon == std::string_view::npos) return complete_bipartite(3, 3).without_edge(0, 3);
  throw Error(ErrorKind::ParseError, "unknown graph name '" + std::string(name) + "'");
}

bool is_subgraph_of(const Graph& h, const Graph& g) {
  for (const auto& l : h.labels())
    if (!g.find(l)) return false;
  for (const Edge& e : h.edges())
    if (!g.has_edge(g.at(h.label(e.u)), g.at(h.label(e.v)))) return false;
  return true;
}

Components components(const Graph& g) {
  Components c;
  c.id.assign(std::size_t(g.vertex_count()), -1);
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (c.id[std::size_t(s)] >= 0) continue;
    const int idx = int(c.parts.size());
    std::vector<Vertex> part{s};
    c.id[std::size_t(s)] = idx;
    for (std::size_t i = 0; i < part.size(); ++i)
      for (Vertex w : g.neighbors(part[i]))
        if (c.id[std::size_t(w)] < 0) {
          c.id[std::size_t(w)] = idx;
          part.push_back(w);
        }
    std::sort(part.begin(), part.end());
    c.parts.push_back(std::move(part));
  }
  return c;
}

std::vector<Edge> bridges(const Graph& g) {
  const auto n = std::size_t(g.vertex_count());
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<Edge> out;
  int time = 0;
  struct Frame {
    Vertex v;
    Vertex parent;
    std::size_t next;
  };
  for (Vertex root = 0; root < g.vertex_count(); ++root) {
    if (disc[std::size_t(root)] >= 0) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[std::size_t(root)] = low[std::size_t(root)] = time++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& nb = g.neighbors(f.v);
      if (f.next < nb.size()) {
        const Vertex w = nb[f.next++];
        if (w == f.parent) continue;
        if (disc[std::size_t(w)] >= 0) {
          low[std::size_t(f.v)] = std::min(low[std::size_t(f.v)], disc[std::size_t(w)]);
        } else {
          disc[std::size_t(w)] = low[std::size_t(w)] = time++;
          stack.push_back({w, f.v, 0});
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (done.parent >= 0) {
          auto& lp = low[std::size_t(done.parent)];
          lp = std::min(lp, low[std::size_t(done.v)]);
          if (low[std::size_t(done.v)] > disc[std::size_t(done.parent)]) out.push_back(Edge::of(done.parent, done.v));
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph spanning_forest(const Graph& g) {
  std::vector<Edge> keep;
  std::vector<char> seen(std::size_t(g.vertex_count()), 0);
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (seen[std::size_t(s)]) continue;
    seen[std::size_t(s)] = 1;
    std::vector<Vertex> queue{s};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (Vertex w : g.neighbors(queue[i]))
        if (!seen[std::size_t(w)]) {
          seen[std::size_t(w)] = 1;
          keep.push_back(Edge::of(queue[i], w));
          queue.push_back(w);
        }
  }
  return g.spanning_subgraph(keep);
}

bool is_forest(const Graph& g) {
  return g.edge_count() == g.vertex_count() - int(components(g).parts.size());
}

Contraction contract(const Graph& g, const Graph& h) {
  if (h.labels() != g.labels()) throw Error(ErrorKind::NotSpanning, "forest must have exactly the vertices of the graph");
  for (const Edge& e : h.edges())
    if (!g.has_edge(e.u, e.v)) throw Error(ErrorKind::NotSubgraph, "forest edge {" + g.label(e.u) + "," + g.label(e.v) + "} is not in the graph");
  if (!is_forest(h)) throw Error(ErrorKind::NotForest, "contracted subgraph contains a cycle");

  const Components comps = components(h);
  std::vector<std::string> labels;
  for (const auto& part : comps.parts) labels.push_back(g.label(part.front()));
  Contraction c;
  c.quotient = Graph(labels, {});
  c.vertex_map.assign(comps.id.begin(), comps.id.end());
  for (const Edge& e : g.edges()) {
    const Vertex a = c.vertex_map[std::size_t(e.u)], b = c.vertex_map[std::size_t(e.v)];
    if (a != b && !c.quotient.has_edge(a, b)) c.quotient.add_edge(a, b);
  }
  return c;
}

Contraction contract_edge(const Graph& g, Vertex a, Vertex b) {
  if (!g.has_edge(a, b)) throw Error(ErrorKind::EdgeMissing, "no edge {" + g.label(a) + "," + g.label(b) + "}");
  return contract(g, g.spanning_subgraph({Edge::of(a, b)}));
}

}  // namespace leakproof
