#include "graphrank/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphrank/error.hpp"

namespace graphrank {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::config,
                "edge probability " + std::to_string(p) + " outside [0, 1]");
  }
}

}  // namespace

ExposureStream::ExposureStream(std::size_t n, double p, std::uint64_t seed,
                               GnpMethod method)
    : n_(n),
      p_(p),
      seed_(seed),
      method_(method),
      rng_(seed),
      total_pairs_(static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2) {
  check_probability(p);
  if (method_ == GnpMethod::geometric_skip && p > 0.0 && p < 1.0) {
    log_keep_ = portable_log(1.0 - p);
  }
  pending_ = next_edge();
}

std::optional<Edge> ExposureStream::next_edge() {
  if (p_ == 0.0) return std::nullopt;
  std::uint64_t index = next_index_;
  if (p_ < 1.0) {
    if (method_ == GnpMethod::geometric_skip) {
      // Number of failures before the next success is floor(log U / log(1-p)).
      const double u = 1.0 - rng_.uniform01();  // (0, 1]
      const double gap = std::floor(portable_log(u) / log_keep_);
      if (gap >= static_cast<double>(total_pairs_ - std::min(index, total_pairs_)))
        return std::nullopt;
      index += static_cast<std::uint64_t>(gap);
    } else {
      while (index < total_pairs_ && !rng_.bernoulli(p_)) ++index;
    }
  }
  if (index >= total_pairs_) return std::nullopt;
  next_index_ = index + 1;
  while (index >= row_base_ + row_) {
    row_base_ += row_;
    ++row_;
  }
  return Edge{static_cast<Vertex>(index - row_base_), static_cast<Vertex>(row_)};
}

std::vector<Vertex> ExposureStream::advance() {
  if (done()) {
    throw Error(ErrorKind::contract, "exposure stream already exhausted");
  }
  const auto vertex = static_cast<Vertex>(exposed_);
  std::vector<Vertex> neighbors;
  while (pending_ && pending_->second == vertex) {
    neighbors.push_back(pending_->first);
    revealed_.push_back(*pending_);
    pending_ = next_edge();
  }
  ++exposed_;
  return neighbors;
}

Graph ExposureStream::current() const {
  return Graph::from_edges(exposed_, revealed_);
}

ExposureStream exposure_stream(std::size_t n, double p, std::uint64_t seed) {
  return ExposureStream(n, p, seed);
}

Graph gnp(std::size_t n, double p, std::uint64_t seed, GnpMethod method) {
  ExposureStream stream(n, p, seed, method);
  while (!stream.done()) stream.advance();
  return stream.current();
}

RegularSample random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                             std::size_t max_restarts) {
  if ((n * d) % 2 != 0) {
    throw Error(ErrorKind::parity, "n*d = " + std::to_string(n * d) +
                                       " is odd; no " + std::to_string(d) +
                                       "-regular graph on " + std::to_string(n) +
                                       " vertices");
  }
  if (d >= n && !(n == 0 && d == 0)) {
    throw Error(ErrorKind::infeasible,
                "degree " + std::to_string(d) + " needs at least " +
                    std::to_string(d + 1) + " vertices");
  }
  Rng rng(seed);
  const std::size_t points = n * d;
  std::vector<Vertex> owner(points);
  std::vector<Edge> edges;
  edges.reserve(points / 2);
  std::vector<std::vector<Vertex>> seen(n);

  for (std::size_t attempt = 0; attempt <= max_restarts; ++attempt) {
    for (std::size_t k = 0; k < points; ++k) owner[k] = static_cast<Vertex>(k / d);
    for (std::size_t k = points; k > 1; --k) {
      std::swap(owner[k - 1], owner[rng.below(k)]);
    }
    edges.clear();
    for (auto& row : seen) row.clear();
    bool simple = true;
    for (std::size_t k = 0; k + 1 < points; k += 2) {
      Vertex u = owner[k];
      Vertex v = owner[k + 1];
      if (u == v ||
          std::find(seen[u].begin(), seen[u].end(), v) != seen[u].end()) {
        simple = false;
        break;
      }
      seen[u].push_back(v);
      seen[v].push_back(u);
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (simple) return {Graph::from_edges(n, edges), attempt};
  }
  throw Error(ErrorKind::budget,
              "pairing model rejected " + std::to_string(max_restarts + 1) +
                  " pairings for n=" + std::to_string(n) +
                  ", d=" + std::to_string(d) +
                  "; acceptance decays like exp(-(d^2-1)/4), so use a smaller "
                  "d or raise the restart budget");
}

}  // namespace graphrank
