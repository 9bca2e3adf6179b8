#include "graphrank/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "graphrank/error.hpp"

namespace graphrank {

double ungated_x(std::int64_t deficiency) {
  return deficiency > 0 ? std::ldexp(1.0, static_cast<int>(2 * deficiency)) : 0.0;
}

namespace {

// Drives the bordered rank state with one neighbor list per new vertex.
ExposureTrace run_trace(std::size_t n, PrimeModulus prime,
                        const std::function<std::vector<Vertex>()>& next_vertex) {
  ExposureTrace trace;
  trace.n = n;
  trace.prime = prime.value();
  trace.steps.reserve(n);

  SymmetricRankState state(prime);
  std::vector<std::size_t> degree;
  degree.reserve(n);
  std::size_t isolated = 0;
  std::vector<Residue> column;

  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<Vertex> neighbors = next_vertex();
    std::size_t attached = 0;
    for (Vertex w : neighbors) attached += degree[w] == 0;

    column.assign(j + 1, 0);
    for (Vertex w : neighbors) column[w] = 1;
    const BorderUpdate update = state.extend(column);

    if (!trace.steps.empty()) {
      auto& previous = trace.steps.back();
      previous.newly_attached = attached;
      previous.normal = attached == 0;
      previous.jump = update.jump;
      previous.border_case = update.kind;
    }

    for (Vertex w : neighbors) ++degree[w];
    degree.push_back(neighbors.size());
    isolated = isolated - attached + (neighbors.empty() ? 1 : 0);

    ExposureStep step;
    step.m = j + 1;
    step.rank = state.rank();
    step.isolated = isolated;
    step.deficiency = static_cast<std::int64_t>(step.m) -
                      static_cast<std::int64_t>(step.rank) -
                      static_cast<std::int64_t>(step.isolated);
    trace.steps.push_back(step);
  }
  return trace;
}

}  // namespace

ExposureTrace trace_exposure(ExposureStream stream, PrimeModulus prime) {
  const std::size_t n = stream.order();
  auto trace = run_trace(n, prime, [&] { return stream.advance(); });
  trace.p = stream.probability();
  trace.seed = stream.seed();
  return trace;
}

ExposureTrace trace_exposure(const Graph& graph, PrimeModulus prime) {
  Vertex next = 0;
  return run_trace(graph.order(), prime, [&] {
    std::vector<Vertex> earlier;
    for (Vertex w : graph.neighbors(next)) {
      if (w < next) earlier.push_back(w);
    }
    ++next;
    return earlier;
  });
}

std::vector<std::string> trace_violations(const ExposureTrace& trace) {
  std::vector<std::string> out;
  auto note = [&](std::size_t m, const std::string& what) {
    std::ostringstream s;
    s << "m=" << m << ": " << what;
    out.push_back(s.str());
  };
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& step = trace.steps[k];
    if (step.deficiency < 0) note(step.m, "Y_m < 0");
    if (!step.jump) continue;
    if (*step.jump > 2) note(step.m, "jump outside {0,1,2}");
    if (k + 1 >= trace.steps.size()) continue;
    const auto& next = trace.steps[k + 1];
    if (next.rank != step.rank + *step.jump) note(step.m, "jump disagrees with ranks");
    // i_{m+1} = i_m - Z_m + [new vertex isolated]
    const std::int64_t indicator = static_cast<std::int64_t>(next.isolated) +
                                   static_cast<std::int64_t>(*step.newly_attached) -
                                   static_cast<std::int64_t>(step.isolated);
    if (indicator < 0 || indicator > 1 || (indicator == 1 && *step.jump != 0)) {
      note(step.m, "isolated-count recurrence broken");
    }
    const bool new_isolated = indicator == 1;
    if (*step.normal) {
      const std::int64_t expected =
          new_isolated ? step.deficiency
                       : step.deficiency + 1 - static_cast<std::int64_t>(*step.jump);
      if (next.deficiency != expected) note(step.m, "Y recurrence broken on a normal step");
      if (step.deficiency > 0 && *step.jump == 2 &&
          next.deficiency != step.deficiency - 1) {
        note(step.m, "normal step with jump 2 did not lower Y");
      }
      if (*step.jump < 2 && next.deficiency > step.deficiency + 1) {
        note(step.m, "normal step raised Y by more than one");
      }
    }
  }
  return out;
}

namespace {

void check_inputs(const std::vector<ExposureTrace>& traces, std::size_t m_start) {
  if (traces.empty()) throw Error(ErrorKind::domain, "no traces supplied");
  for (const auto& t : traces) {
    if (m_start >= t.n) {
      throw Error(ErrorKind::domain, "m_start must be below every trace's n");
    }
  }
}

}  // namespace

JumpTable jump_statistics(const std::vector<ExposureTrace>& traces,
                          std::size_t m_start) {
  check_inputs(traces, m_start);
  // Cell index: 2 * deficient + !normal.
  std::array<JumpCell, 4> cells{{{false, true}, {false, false}, {true, true}, {true, false}}};
  for (const auto& trace : traces) {
    for (const auto& step : trace.steps) {
      if (step.m < m_start || !step.jump) continue;
      const std::size_t index = 2 * (step.deficiency > 0) + (*step.normal ? 0 : 1);
      ++cells[index].steps;
      ++cells[index].jumps[std::min<std::size_t>(*step.jump, 2)];
    }
  }
  JumpTable table;
  table.m_start = m_start;
  for (auto& cell : cells) {
    if (cell.steps == 0) continue;
    for (std::size_t j = 0; j < 3; ++j)
      cell.intervals[j] = wilson_interval(cell.jumps[j], cell.steps);
    table.cells.push_back(cell);
  }
  return table;
}

MartingaleReport supermartingale_check(const std::vector<ExposureTrace>& traces,
                                       std::size_t m_start, double slack) {
  check_inputs(traces, m_start);
  MartingaleReport report;
  report.slack = slack;
  report.small_sample = traces.size() < kMartingaleMinTraces;
  std::size_t max_n = 0;
  for (const auto& t : traces) max_n = std::max(max_n, t.n);

  std::size_t satisfied = 0;
  for (std::size_t m = std::max<std::size_t>(m_start, 1); m < max_n; ++m) {
    MartingaleRow row;
    row.m = m;
    std::size_t violations = 0;
    for (const auto& t : traces) {
      if (m + 1 > t.n) continue;
      const double x = ungated_x(t.steps[m - 1].deficiency);
      const double x_next = ungated_x(t.steps[m].deficiency);
      row.mean_x += x;
      row.mean_x_next += x_next;
      violations += x_next > kMartingaleContraction * x;
      ++row.traces;
    }
    if (row.traces == 0) continue;
    const double count = static_cast<double>(row.traces);
    row.mean_x /= count;
    row.mean_x_next /= count;
    row.contraction = kMartingaleContraction * row.mean_x;
    row.pointwise_violation_fraction = static_cast<double>(violations) / count;
    row.within_slack = row.mean_x_next <= row.contraction + slack;
    satisfied += row.within_slack;
    report.rows.push_back(row);
  }
  if (!report.rows.empty()) {
    report.fraction_within_slack =
        static_cast<double>(satisfied) / static_cast<double>(report.rows.size());
  }
  return report;
}

std::size_t default_m_start(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
}

}  // namespace graphrank
