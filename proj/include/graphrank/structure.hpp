#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "graphrank/graph.hpp"

namespace graphrank {

/// Size and degree cut-offs used by the structural predicates, each guarded
/// below by 1 so the predicates stay meaningful at small n.
struct Thresholds {
  std::size_t k;                // subset-size cap for goodness: ln ln n / (2p)
  double low_degree;            // ln ln n
  double small_set_bound;       // n / (ln n)^{3/2}
  double few_low_degree_bound;  // 1 / (p ln n)
};

/// Requires n >= 3 and 0 < p < 1 (ErrorKind::domain otherwise).
Thresholds thresholds(std::size_t n, double p);

std::size_t isolated_count(const Graph& graph);

enum class WitnessKind { isolated_vertex, cherry, duplicate_row_class };

std::string_view to_string(WitnessKind kind);

/// A structural reason for rank deficiency.
///
///  - isolated_vertex: one zero row; contributes 1.
///  - cherry: two degree-1 vertices with a common neighbor (`vertices` holds
///    the two leaves, `center` the neighbor). Contributes 0: its effect is
///    already counted by the duplicate-row class containing both leaves.
///  - duplicate_row_class: a maximal set of >= 2 vertices with identical
///    nonzero neighborhoods; contributes (size - 1).
///
/// Summing contributions gives i(G) + duplicate excess, and
/// rank(Q_G) <= n - (that sum).
struct DeficiencyWitness {
  WitnessKind kind;
  std::vector<Vertex> vertices;
  std::optional<Vertex> center;
  std::size_t deficiency_contribution;

  friend bool operator==(const DeficiencyWitness&,
                         const DeficiencyWitness&) = default;
};

std::vector<DeficiencyWitness> find_witnesses(const Graph& graph);

/// Sum over duplicate-row classes of (class size - 1).
std::size_t duplicate_row_excess(std::span<const DeficiencyWitness> witnesses);
std::size_t cherry_count(std::span<const DeficiencyWitness> witnesses);

// ---------------------------------------------------------------------------
// Well-separation

struct SeparationVerdict {
  bool well_separated;
  std::optional<Edge> violating_pair;  // (u, v), u < v, when not separated
};

/// No two distinct vertices of degree <= low_degree are adjacent or share a
/// neighbor.
SeparationVerdict is_well_separated(const Graph& graph, double low_degree);

// ---------------------------------------------------------------------------
// Search modes for the subset predicates

enum class CheckMode { exact, randomized };

struct SearchOptions {
  std::size_t restarts = 1000;
  std::uint64_t seed = 0;
  std::size_t max_search_size = 64;  // cap on greedy subset growth
};

inline constexpr std::size_t kExactExpanderMaxOrder = 24;
inline constexpr std::size_t kExactGoodnessMaxOrder = 16;
inline constexpr std::size_t kExactGoodnessMaxK = 3;
inline constexpr double kEnumerationBudget = 1e8;

enum class VerdictKind {
  certified,                // exhaustive check passed
  counterexample,           // a violating object was found and verified
  no_counterexample_found,  // randomized search failed to find one; NOT proof
};

std::string_view to_string(VerdictKind kind);

// ---------------------------------------------------------------------------
// Small-set expansion

struct ExpansionVerdict {
  VerdictKind kind = VerdictKind::certified;
  std::vector<Vertex> counterexample;  // S with e(S, S^c) < |S|
};

/// Number of edges between S and its complement.
std::size_t boundary_size(const Graph& graph, std::span<const Vertex> subset);

/// Every S with |S| <= small_set_bound and no isolated vertex has at least
/// |S| edges leaving it. Exact mode enumerates and requires
/// n <= kExactExpanderMaxOrder (ErrorKind::mode otherwise). Randomized mode
/// first scans small connected components, then runs seeded greedy local
/// search on e(S, S^c) - |S|.
ExpansionVerdict is_small_set_expander(const Graph& graph,
                                       double small_set_bound, CheckMode mode,
                                       const SearchOptions& options = {});

// ---------------------------------------------------------------------------
// Nice sets and goodness

/// At least two vertices have exactly one neighbor in S. With
/// strict_outside, only vertices outside S count. Empty S is a domain error.
bool is_nice(const Graph& graph, std::span<const Vertex> subset,
             bool strict_outside = false);

enum class GoodnessFailure { none, not_nice, too_many_low_degree };

struct GoodnessVerdict {
  VerdictKind kind = VerdictKind::certified;
  GoodnessFailure failure = GoodnessFailure::none;
  std::vector<Vertex> subset;          // non-nice subset when failure == not_nice
  std::size_t low_degree_count = 0;    // vertices of degree < 2
};

/// (1) every isolated-free subset of size 2..k is nice and (2) at most
/// few_low_degree_bound vertices have degree < 2. Condition 2 is always
/// exact. Condition 1 is enumerated in exact mode, which requires
/// n <= kExactGoodnessMaxOrder or k <= kExactGoodnessMaxK, and at most
/// kEnumerationBudget subsets (ErrorKind::mode otherwise).
GoodnessVerdict is_good(const Graph& graph, std::size_t k,
                        double few_low_degree_bound, CheckMode mode,
                        const SearchOptions& options = {},
                        bool strict_outside = false);

// ---------------------------------------------------------------------------
// Normal pairs

/// The vertex added to go from `small` (m vertices) to `big` (m + 1) has no
/// neighbor that was isolated in `small`. Throws ErrorKind::contract unless
/// `big` restricted to its first m vertices equals `small`.
bool is_normal_pair(const Graph& small, const Graph& big);

}  // namespace graphrank
