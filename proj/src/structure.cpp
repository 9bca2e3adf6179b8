#include "graphrank/structure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "graphrank/error.hpp"
#include "graphrank/rng.hpp"

namespace graphrank {

Thresholds thresholds(std::size_t n, double p) {
  if (n < 3) {
    throw Error(ErrorKind::domain,
                "thresholds need n >= 3 (ln ln n is undefined below e)");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::domain, "thresholds need 0 < p < 1");
  }
  const double ln_n = std::log(static_cast<double>(n));
  const double lnln = std::log(ln_n);
  const double raw_k = std::floor(lnln / (2.0 * p));
  Thresholds t{};
  t.k = raw_k < 1.0 ? 1 : static_cast<std::size_t>(std::min(raw_k, 1e18));
  t.low_degree = std::max(1.0, lnln);
  t.small_set_bound = std::max(1.0, static_cast<double>(n) / std::pow(ln_n, 1.5));
  t.few_low_degree_bound = std::max(1.0, 1.0 / (p * ln_n));
  return t;
}

std::size_t isolated_count(const Graph& graph) {
  std::size_t count = 0;
  for (Vertex v = 0; v < graph.order(); ++v) count += graph.degree(v) == 0;
  return count;
}

std::string_view to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::isolated_vertex: return "isolated-vertex";
    case WitnessKind::cherry: return "cherry";
    case WitnessKind::duplicate_row_class: return "duplicate-row-class";
  }
  return "unknown";
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::certified: return "certified";
    case VerdictKind::counterexample: return "counterexample";
    case VerdictKind::no_counterexample_found: return "no-counterexample-found";
  }
  return "unknown";
}

std::vector<DeficiencyWitness> find_witnesses(const Graph& graph) {
  std::vector<DeficiencyWitness> out;
  const auto n = static_cast<Vertex>(graph.order());
  for (Vertex v = 0; v < n; ++v) {
    if (graph.degree(v) == 0) {
      out.push_back({WitnessKind::isolated_vertex, {v}, std::nullopt, 1});
    }
  }
  for (Vertex c = 0; c < n; ++c) {
    std::vector<Vertex> leaves;
    for (Vertex w : graph.neighbors(c))
      if (graph.degree(w) == 1) leaves.push_back(w);
    for (std::size_t a = 0; a < leaves.size(); ++a)
      for (std::size_t b = a + 1; b < leaves.size(); ++b)
        out.push_back({WitnessKind::cherry, {leaves[a], leaves[b]}, c, 0});
  }
  std::vector<Vertex> order;
  for (Vertex v = 0; v < n; ++v)
    if (graph.degree(v) > 0) order.push_back(v);
  auto by_row = [&](Vertex a, Vertex b) {
    auto ra = graph.neighbors(a);
    auto rb = graph.neighbors(b);
    if (!std::ranges::equal(ra, rb)) {
      return std::ranges::lexicographical_compare(ra, rb);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), by_row);
  std::vector<std::vector<Vertex>> classes;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() &&
           std::ranges::equal(graph.neighbors(order[i]), graph.neighbors(order[j])))
      ++j;
    if (j - i >= 2) classes.emplace_back(order.begin() + i, order.begin() + j);
    i = j;
  }
  std::sort(classes.begin(), classes.end());
  for (auto& cls : classes) {
    const std::size_t excess = cls.size() - 1;
    out.push_back({WitnessKind::duplicate_row_class, std::move(cls), std::nullopt,
                   excess});
  }
  return out;
}

std::size_t duplicate_row_excess(std::span<const DeficiencyWitness> witnesses) {
  std::size_t total = 0;
  for (const auto& w : witnesses)
    if (w.kind == WitnessKind::duplicate_row_class) total += w.deficiency_contribution;
  return total;
}

std::size_t cherry_count(std::span<const DeficiencyWitness> witnesses) {
  return static_cast<std::size_t>(std::ranges::count_if(
      witnesses, [](const auto& w) { return w.kind == WitnessKind::cherry; }));
}

SeparationVerdict is_well_separated(const Graph& graph, double low_degree) {
  const auto n = static_cast<Vertex>(graph.order());
  auto low = [&](Vertex v) {
    return static_cast<double>(graph.degree(v)) <= low_degree;
  };
  for (Vertex v = 0; v < n; ++v) {
    if (!low(v)) continue;
    for (Vertex w : graph.neighbors(v)) {
      if (low(w)) return {false, Edge{std::min(v, w), std::max(v, w)}};
    }
    for (Vertex w : graph.neighbors(v)) {
      for (Vertex x : graph.neighbors(w)) {
        if (x != v && low(x)) return {false, Edge{std::min(v, x), std::max(v, x)}};
      }
    }
  }
  return {true, std::nullopt};
}

std::size_t boundary_size(const Graph& graph, std::span<const Vertex> subset) {
  std::vector<char> in(graph.order(), 0);
  for (Vertex v : subset) in[v] = 1;
  std::size_t edges = 0;
  for (Vertex v : subset)
    for (Vertex w : graph.neighbors(v)) edges += !in[w];
  return edges;
}

namespace {

std::vector<Vertex> non_isolated(const Graph& graph) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < graph.order(); ++v)
    if (graph.degree(v) > 0) out.push_back(v);
  return out;
}

std::size_t floor_cap(double bound, std::size_t cap) {
  if (!(bound >= 1.0)) return 0;
  return static_cast<std::size_t>(std::min(std::floor(bound), static_cast<double>(cap)));
}

std::vector<Vertex> mask_to_vertices(std::uint32_t mask) {
  std::vector<Vertex> out;
  while (mask) {
    out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

ExpansionVerdict expander_exact(const Graph& graph, std::size_t cap) {
  const auto candidates = non_isolated(graph);
  std::vector<std::uint32_t> adj(graph.order(), 0);
  for (Vertex v = 0; v < graph.order(); ++v)
    for (Vertex w : graph.neighbors(v)) adj[v] |= std::uint32_t{1} << w;

  std::optional<std::uint32_t> found;
  std::function<void(std::size_t, std::uint32_t, std::size_t, std::size_t)> dfs =
      [&](std::size_t start, std::uint32_t mask, std::size_t size,
          std::size_t boundary) {
        for (std::size_t idx = start; idx < candidates.size() && !found; ++idx) {
          const Vertex v = candidates[idx];
          const std::size_t inside = std::popcount(adj[v] & mask);
          const std::size_t next_boundary = boundary + graph.degree(v) - 2 * inside;
          const std::uint32_t next_mask = mask | (std::uint32_t{1} << v);
          if (next_boundary < size + 1) {
            found = next_mask;
            return;
          }
          if (size + 1 < cap) dfs(idx + 1, next_mask, size + 1, next_boundary);
        }
      };
  dfs(0, 0, 0, 0);
  if (found) return {VerdictKind::counterexample, mask_to_vertices(*found)};
  return {VerdictKind::certified, {}};
}

ExpansionVerdict expander_randomized(const Graph& graph, std::size_t cap,
                                     const SearchOptions& options) {
  const auto candidates = non_isolated(graph);
  const std::size_t n = graph.order();

  // Small components leak no edges at all.
  std::vector<int> component(n, -1);
  for (Vertex root : candidates) {
    if (component[root] >= 0) continue;
    std::vector<Vertex> members{root};
    component[root] = static_cast<int>(root);
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (Vertex w : graph.neighbors(members[head])) {
        if (component[w] < 0) {
          component[w] = static_cast<int>(root);
          members.push_back(w);
        }
      }
    }
    if (members.size() <= cap) {
      std::sort(members.begin(), members.end());
      return {VerdictKind::counterexample, std::move(members)};
    }
  }

  // Greedy growth minimising e(S, S^c) - |S| from random seeds.
  std::vector<char> in(n, 0);
  std::vector<std::uint32_t> hits(n, 0);  // |N(x) cap S|
  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    Rng rng(derive_seed(options.seed, restart));
    std::vector<Vertex> subset{candidates[rng.below(candidates.size())]};
    std::vector<Vertex> touched;
    auto add = [&](Vertex v) {
      in[v] = 1;
      for (Vertex w : graph.neighbors(v)) {
        if (hits[w]++ == 0) touched.push_back(w);
      }
    };
    add(subset.front());
    long boundary = static_cast<long>(graph.degree(subset.front()));
    while (subset.size() < cap) {
      long best_score = 0;
      Vertex best = 0;
      std::size_t ties = 0;
      for (Vertex x : touched) {
        if (in[x]) continue;
        const long next_boundary = boundary + static_cast<long>(graph.degree(x)) -
                                   2 * static_cast<long>(hits[x]);
        const long score = next_boundary - static_cast<long>(subset.size() + 1);
        if (ties == 0 || score < best_score) {
          best_score = score;
          best = x;
          ties = 1;
        } else if (score == best_score && rng.below(++ties) == 0) {
          best = x;
        }
      }
      if (ties == 0) break;
      subset.push_back(best);
      boundary += static_cast<long>(graph.degree(best)) - 2 * static_cast<long>(hits[best]);
      add(best);
      if (best_score < 0) break;
    }
    const bool violated = boundary < static_cast<long>(subset.size());
    for (Vertex v : subset) in[v] = 0;
    for (Vertex w : touched) hits[w] = 0;
    if (violated) {
      std::sort(subset.begin(), subset.end());
      if (boundary_size(graph, subset) < subset.size()) {
        return {VerdictKind::counterexample, std::move(subset)};
      }
    }
  }
  return {VerdictKind::no_counterexample_found, {}};
}

}  // namespace

ExpansionVerdict is_small_set_expander(const Graph& graph, double small_set_bound,
                                       CheckMode mode,
                                       const SearchOptions& options) {
  if (mode == CheckMode::exact && graph.order() > kExactExpanderMaxOrder) {
    throw Error(ErrorKind::mode, "exact expander check limited to n <= " +
                                     std::to_string(kExactExpanderMaxOrder));
  }
  const std::size_t eligible = non_isolated(graph).size();
  const std::size_t cap = floor_cap(small_set_bound, eligible);
  if (cap == 0) return {VerdictKind::certified, {}};
  if (mode == CheckMode::exact) return expander_exact(graph, cap);
  return expander_randomized(graph, cap, options);
}

bool is_nice(const Graph& graph, std::span<const Vertex> subset,
             bool strict_outside) {
  if (subset.empty()) throw Error(ErrorKind::domain, "nice-set check needs a non-empty set");
  std::vector<char> in(graph.order(), 0);
  std::vector<std::uint32_t> hits(graph.order(), 0);
  for (Vertex v : subset) {
    if (v >= graph.order()) throw Error(ErrorKind::domain, "vertex out of range");
    in[v] = 1;
  }
  for (Vertex v = 0; v < graph.order(); ++v) {
    if (!in[v]) continue;
    for (Vertex w : graph.neighbors(v)) ++hits[w];
  }
  std::size_t witnesses = 0;
  for (Vertex w = 0; w < graph.order(); ++w) {
    if (hits[w] == 1 && !(strict_outside && in[w])) ++witnesses;
  }
  return witnesses >= 2;
}

namespace {

// Incrementally tracks, for a growing/shrinking S, how many vertices have
// exactly one neighbor in S (overall and outside S).
class NiceCounter {
 public:
  explicit NiceCounter(const Graph& graph)
      : graph_(graph), in_(graph.order(), 0), hits_(graph.order(), 0) {}

  void add(Vertex v) {
    if (hits_[v] == 1) --ones_outside_;
    in_[v] = 1;
    for (Vertex w : graph_.neighbors(v)) bump(w, +1);
  }
  void remove(Vertex v) {
    for (Vertex w : graph_.neighbors(v)) bump(w, -1);
    in_[v] = 0;
    if (hits_[v] == 1) ++ones_outside_;
  }
  bool contains(Vertex v) const { return in_[v] != 0; }

  std::size_t witnesses(bool strict_outside) const {
    return strict_outside ? ones_outside_ : ones_;
  }

  // Witness count if v were added, without changing state.
  std::size_t witnesses_if_added(Vertex v, bool strict_outside) const {
    long ones = static_cast<long>(ones_);
    long outside = static_cast<long>(ones_outside_);
    if (hits_[v] == 1) --outside;
    for (Vertex w : graph_.neighbors(v)) {
      const bool out = !in_[w] && w != v;
      if (hits_[w] == 0) {
        ++ones;
        if (out) ++outside;
      } else if (hits_[w] == 1) {
        --ones;
        if (out) --outside;
      }
    }
    return static_cast<std::size_t>(strict_outside ? outside : ones);
  }

 private:
  void bump(Vertex w, int delta) {
    const auto before = hits_[w];
    hits_[w] = static_cast<std::uint32_t>(static_cast<int>(before) + delta);
    const auto after = hits_[w];
    const bool out = !in_[w];
    if (before == 1) {
      --ones_;
      if (out) --ones_outside_;
    }
    if (after == 1) {
      ++ones_;
      if (out) ++ones_outside_;
    }
  }

  const Graph& graph_;
  std::vector<char> in_;
  std::vector<std::uint32_t> hits_;
  std::size_t ones_ = 0;
  std::size_t ones_outside_ = 0;
};

double subsets_up_to(std::size_t n, std::size_t k) {
  double total = 0.0;
  double binom = 1.0;  // C(n, s)
  for (std::size_t s = 1; s <= k; ++s) {
    binom = binom * static_cast<double>(n - s + 1) / static_cast<double>(s);
    if (s >= 2) total += binom;
  }
  return total;
}

}  // namespace

GoodnessVerdict is_good(const Graph& graph, std::size_t k,
                        double few_low_degree_bound, CheckMode mode,
                        const SearchOptions& options, bool strict_outside) {
  GoodnessVerdict verdict;
  for (Vertex v = 0; v < graph.order(); ++v)
    verdict.low_degree_count += graph.degree(v) < 2;
  if (static_cast<double>(verdict.low_degree_count) > few_low_degree_bound) {
    verdict.kind = VerdictKind::counterexample;
    verdict.failure = GoodnessFailure::too_many_low_degree;
    return verdict;
  }

  const auto candidates = non_isolated(graph);
  const std::size_t cap = std::min(k, candidates.size());

  if (mode == CheckMode::exact) {
    if (graph.order() > kExactGoodnessMaxOrder && k > kExactGoodnessMaxK) {
      throw Error(ErrorKind::mode, "exact goodness check needs n <= " +
                                       std::to_string(kExactGoodnessMaxOrder) +
                                       " or k <= " +
                                       std::to_string(kExactGoodnessMaxK));
    }
    if (subsets_up_to(candidates.size(), cap) > kEnumerationBudget) {
      throw Error(ErrorKind::mode, "exact goodness check exceeds the enumeration budget");
    }
  }
  if (cap < 2) return verdict;

  NiceCounter counter(graph);
  std::vector<Vertex> subset;

  if (mode == CheckMode::exact) {
    bool found = false;
    std::function<void(std::size_t)> dfs = [&](std::size_t start) {
      for (std::size_t idx = start; idx < candidates.size() && !found; ++idx) {
        const Vertex v = candidates[idx];
        counter.add(v);
        subset.push_back(v);
        if (subset.size() >= 2 && counter.witnesses(strict_outside) < 2) {
          found = true;
          return;
        }
        if (subset.size() < cap) dfs(idx + 1);
        if (found) return;
        subset.pop_back();
        counter.remove(v);
      }
    };
    dfs(0);
    if (found) {
      verdict.kind = VerdictKind::counterexample;
      verdict.failure = GoodnessFailure::not_nice;
      std::sort(subset.begin(), subset.end());
      verdict.subset = subset;
    }
    return verdict;
  }

  // Randomized: start from a random vertex and a random vertex within
  // distance two, then greedily add the vertex (within distance two of S)
  // that leaves the fewest single-neighbor witnesses, until no move helps.
  const std::size_t depth = std::min(cap, options.max_search_size);
  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    Rng rng(derive_seed(options.seed, restart));
    subset.clear();
    const Vertex first = candidates[rng.below(candidates.size())];
    counter.add(first);
    subset.push_back(first);
    bool violated = false;
    std::size_t plateau = 0;
    while (subset.size() < depth) {
      std::vector<Vertex> frontier;
      for (Vertex v : subset) {
        for (Vertex w : graph.neighbors(v)) {
          if (!counter.contains(w)) frontier.push_back(w);
          for (Vertex x : graph.neighbors(w))
            if (!counter.contains(x)) frontier.push_back(x);
        }
      }
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      if (frontier.empty()) break;
      Vertex pick;
      if (subset.size() == 1) {
        pick = frontier[rng.below(frontier.size())];
      } else {
        std::size_t best = SIZE_MAX;
        std::size_t ties = 0;
        pick = frontier.front();
        for (Vertex x : frontier) {
          const std::size_t score = counter.witnesses_if_added(x, strict_outside);
          if (score < best) {
            best = score;
            pick = x;
            ties = 1;
          } else if (score == best && rng.below(++ties) == 0) {
            pick = x;
          }
        }
        // Descent: stop at a local minimum, allowing a short plateau walk.
        const std::size_t current = counter.witnesses(strict_outside);
        if (best > current || (best == current && ++plateau > 2)) break;
      }
      counter.add(pick);
      subset.push_back(pick);
      if (counter.witnesses(strict_outside) < 2) {
        violated = true;
        break;
      }
    }
    for (Vertex v : subset) counter.remove(v);
    if (violated) {
      std::sort(subset.begin(), subset.end());
      if (!is_nice(graph, subset, strict_outside)) {
        verdict.kind = VerdictKind::counterexample;
        verdict.failure = GoodnessFailure::not_nice;
        verdict.subset = subset;
        return verdict;
      }
    }
  }
  verdict.kind = VerdictKind::no_counterexample_found;
  return verdict;
}

bool is_normal_pair(const Graph& small, const Graph& big) {
  const std::size_t m = small.order();
  if (big.order() != m + 1 || !(big.induced_prefix(m) == small)) {
    throw Error(ErrorKind::contract,
                "normal-pair check needs the larger graph to extend the smaller "
                "by exactly one vertex");
  }
  for (Vertex w : big.neighbors(static_cast<Vertex>(m))) {
    if (small.degree(w) == 0) return false;
  }
  return true;
}

}  // namespace graphrank
