#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphrank {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on vertices 0..n-1 (printed 1-based).
///
/// Neighbor lists are sorted and symmetric; there are no loops or parallel
/// edges. Values are immutable once built.
class Graph {
 public:
  Graph() = default;
  /// Edgeless graph on n vertices.
  explicit Graph(std::size_t n) : adjacency_(n) {}

  /// Validating constructor; throws ErrorKind::contract on loops, repeated
  /// edges or endpoints >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t order() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return adjacency_[v];
  }
  std::size_t degree(Vertex v) const noexcept { return adjacency_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const noexcept;

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  /// Subgraph induced on vertices 0..m-1.
  Graph induced_prefix(std::size_t m) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

namespace families {

Graph empty(std::size_t n);
Graph complete(std::size_t n);
/// Path 1-2-...-n.
Graph path(std::size_t n);
/// Cycle 1-2-...-n-1; n >= 3.
Graph cycle(std::size_t n);
/// Star K_{1,m}: centre is vertex 0, leaves 1..m.
Graph star(std::size_t leaves);
/// Vertices of `b` are shifted past those of `a`.
Graph disjoint_union(const Graph& a, const Graph& b);

}  // namespace families

}  // namespace graphrank
