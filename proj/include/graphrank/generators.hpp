#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "graphrank/graph.hpp"
#include "graphrank/rng.hpp"

namespace graphrank {

/// How G(n,p) decides each of the C(n,2) pairs.
enum class GnpMethod {
  geometric_skip,  // sample the gap to the next edge; O(n + edges)
  bernoulli,       // one coin per pair; O(n^2), kept as a reference sampler
};

/// Vertex-exposure process of G(n,p).
///
/// Pairs {i, j} (i < j) are visited in exposure order: by j, then by i. Step m
/// reveals vertex m-1 together with its edges to vertices 0..m-2, so the graph
/// after m steps is the subgraph induced on the first m vertices. gnp() is
/// defined as this stream run to completion, hence for a given seed the final
/// graph of exposure_stream(n, p, seed) *is* gnp(n, p, seed).
class ExposureStream {
 public:
  ExposureStream(std::size_t n, double p, std::uint64_t seed,
                 GnpMethod method = GnpMethod::geometric_skip);

  std::size_t order() const noexcept { return n_; }
  double probability() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Number of vertices exposed so far.
  std::size_t exposed() const noexcept { return exposed_; }
  bool done() const noexcept { return exposed_ == n_; }

  /// Exposes the next vertex; returns its (sorted) neighbors among the
  /// previously exposed vertices. Must not be called when done().
  std::vector<Vertex> advance();

  /// Induced subgraph on the exposed vertices.
  Graph current() const;

 private:
  std::optional<Edge> next_edge();

  std::size_t n_;
  double p_;
  std::uint64_t seed_;
  GnpMethod method_;
  Rng rng_;
  double log_keep_ = 0.0;  // log(1 - p), geometric skipping only
  std::uint64_t total_pairs_;
  std::uint64_t next_index_ = 0;
  std::uint64_t row_ = 1;       // larger endpoint of the pair at row_base_
  std::uint64_t row_base_ = 0;  // linear index of pair (0, row_)
  std::optional<Edge> pending_;
  std::size_t exposed_ = 0;
  std::vector<Edge> revealed_;
};

ExposureStream exposure_stream(std::size_t n, double p, std::uint64_t seed);

Graph gnp(std::size_t n, double p, std::uint64_t seed,
          GnpMethod method = GnpMethod::geometric_skip);

struct RegularSample {
  Graph graph;
  std::size_t restarts = 0;  // rejected pairings before acceptance
};

inline constexpr std::size_t kDefaultRegularBudget = 10'000;

/// Uniform random simple d-regular graph via the pairing (configuration)
/// model with full restarts on loops or multi-edges.
RegularSample random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                             std::size_t max_restarts = kDefaultRegularBudget);

}  // namespace graphrank
