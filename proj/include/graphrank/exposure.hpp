#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphrank/exact_rank.hpp"
#include "graphrank/generators.hpp"
#include "graphrank/graph.hpp"
#include "graphrank/prime.hpp"
#include "graphrank/stats.hpp"

namespace graphrank {

/// State after m vertices have been exposed, plus the transition to m + 1.
struct ExposureStep {
  std::size_t m = 0;
  std::size_t rank = 0;
  std::size_t isolated = 0;
  std::int64_t deficiency = 0;  // Y_m = m - rank - isolated

  // Transition m -> m + 1; empty on the final step.
  std::optional<std::size_t> newly_attached;  // Z_m
  std::optional<bool> normal;                 // Z_m == 0
  std::optional<std::size_t> jump;            // rank_{m+1} - rank_m
  std::optional<BorderCase> border_case;
};

struct ExposureTrace {
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t prime = 0;
  std::vector<ExposureStep> steps;  // steps[m - 1] describes Q_m
};

/// X_m without the goodness gate: 4^Y if Y > 0, else 0.
double ungated_x(std::int64_t deficiency);

/// Runs the stream to completion, tracking rank by bordered updates.
ExposureTrace trace_exposure(ExposureStream stream, PrimeModulus prime);

/// Exposes a fixed graph in vertex order (seed and p recorded as 0).
ExposureTrace trace_exposure(const Graph& graph, PrimeModulus prime);

/// Human-readable descriptions of every violated per-step identity:
/// Y >= 0, jump in {0,1,2}, i_{m+1} = i_m - Z_m + [new vertex isolated], and
/// for normal steps Y_{m+1} = Y_m + 1 - jump (or Y_m when the new vertex is
/// isolated).
std::vector<std::string> trace_violations(const ExposureTrace& trace);

// ---------------------------------------------------------------------------
// Jump statistics

struct JumpCell {
  bool deficient;  // Y_m > 0
  bool normal;
  std::size_t steps = 0;
  std::array<std::size_t, 3> jumps{};     // counts of jump 0, 1, 2
  std::array<Interval, 3> intervals{};    // Wilson 95% per jump value
};

struct JumpTable {
  std::size_t m_start = 0;
  std::vector<JumpCell> cells;  // non-empty cells only, (Y=0|Y>0) x (normal|not)
};

/// Unconditional frequencies of rank jumps over steps m >= m_start with a
/// successor. ErrorKind::domain on empty input or m_start >= n.
JumpTable jump_statistics(const std::vector<ExposureTrace>& traces,
                          std::size_t m_start);

// ---------------------------------------------------------------------------
// Supermartingale check for X_m (ungated)

struct MartingaleRow {
  std::size_t m = 0;
  std::size_t traces = 0;
  double mean_x = 0.0;       // mean of X_m
  double mean_x_next = 0.0;  // mean of X_{m+1}
  double contraction = 0.0;  // (3/5) * mean_x
  double pointwise_violation_fraction = 0.0;  // X_{m+1} > (3/5) X_m
  bool within_slack = false;  // mean_x_next <= contraction + slack
};

struct MartingaleReport {
  double slack = 0.0;
  bool small_sample = false;  // fewer than kMartingaleMinTraces traces
  std::vector<MartingaleRow> rows;
  double fraction_within_slack = 0.0;
};

inline constexpr double kMartingaleContraction = 0.6;
inline constexpr double kDefaultMartingaleSlack = 0.5;
inline constexpr std::size_t kMartingaleMinTraces = 30;

/// The bound is on the expectation, so pointwise violations are expected and
/// reported separately. ErrorKind::domain as for jump_statistics.
MartingaleReport supermartingale_check(const std::vector<ExposureTrace>& traces,
                                       std::size_t m_start,
                                       double slack = kDefaultMartingaleSlack);

/// ceil(fraction * n), the default analysis start.
std::size_t default_m_start(std::size_t n, double fraction = 0.3);

}  // namespace graphrank
