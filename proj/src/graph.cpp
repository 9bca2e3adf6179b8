#include "graphrank/graph.hpp"

#include <algorithm>
#include <string>

#include "graphrank/error.hpp"

namespace graphrank {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw Error(ErrorKind::contract,
                  "edge endpoint out of range for n=" + std::to_string(n));
    }
    if (u == v) {
      throw Error(ErrorKind::contract,
                  "self-loop at vertex " + std::to_string(u + 1));
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& row : g.adjacency_) {
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw Error(ErrorKind::contract, "duplicate edge");
    }
  }
  g.edge_count_ = edges.size();
  return g;
}

bool Graph::adjacent(Vertex u, Vertex v) const noexcept {
  const auto& row = adjacency_[u];
  return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < adjacency_.size(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph Graph::induced_prefix(std::size_t m) const {
  m = std::min(m, order());
  Graph g(m);
  std::size_t twice = 0;
  for (Vertex u = 0; u < m; ++u) {
    const auto& row = adjacency_[u];
    auto end = std::lower_bound(row.begin(), row.end(), static_cast<Vertex>(m));
    g.adjacency_[u].assign(row.begin(), end);
    twice += g.adjacency_[u].size();
  }
  g.edge_count_ = twice / 2;
  return g;
}

namespace families {

Graph empty(std::size_t n) { return Graph(n); }

Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return Graph::from_edges(n, edges);
}

Graph cycle(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::domain, "cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  edges.emplace_back(0, static_cast<Vertex>(n - 1));
  return Graph::from_edges(n, edges);
}

Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, edges);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  const auto shift = static_cast<Vertex>(a.order());
  std::vector<Edge> edges = a.edges();
  for (auto [u, v] : b.edges()) edges.emplace_back(u + shift, v + shift);
  return Graph::from_edges(a.order() + b.order(), edges);
}

}  // namespace families

}  // namespace graphrank
