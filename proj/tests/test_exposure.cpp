#include <cmath>

#include <gtest/gtest.h>

#include "graphrank/error.hpp"
#include "graphrank/exposure.hpp"
#include "graphrank/generators.hpp"
#include "graphrank/certify.hpp"

namespace gr = graphrank;
namespace fam = graphrank::families;
using gr::Graph;

namespace {

const gr::PrimeModulus kPrime(2147483647);

std::vector<std::int64_t> deficiencies(const gr::ExposureTrace& t) {
  std::vector<std::int64_t> out;
  for (const auto& s : t.steps) out.push_back(s.deficiency);
  return out;
}

std::vector<gr::ExposureTrace> campaign(std::size_t n, double c, std::size_t count,
                                        std::uint64_t seed) {
  const double p = c * std::log(double(n)) / double(n);
  std::vector<gr::ExposureTrace> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(gr::trace_exposure(gr::exposure_stream(n, p, gr::derive_seed(seed, i)), kPrime));
  return out;
}

}  // namespace

TEST(Trace, EmptyAndComplete) {
  const auto empty = gr::trace_exposure(gr::exposure_stream(3, 0.0, 1), kPrime);
  EXPECT_EQ(deficiencies(empty), (std::vector<std::int64_t>{0, 0, 0}));
  const auto k3 = gr::trace_exposure(gr::exposure_stream(3, 1.0, 1), kPrime);
  ASSERT_EQ(k3.steps.size(), 3u);
  EXPECT_EQ(k3.steps[0].rank, 0u);
  EXPECT_EQ(k3.steps[1].rank, 2u);
  EXPECT_EQ(k3.steps[2].rank, 3u);
  EXPECT_EQ(k3.steps[0].isolated, 1u);
  EXPECT_EQ(k3.steps[1].isolated, 0u);
  EXPECT_EQ(deficiencies(k3), (std::vector<std::int64_t>{0, 0, 0}));
  EXPECT_EQ(k3.steps[0].newly_attached, 1u);
  EXPECT_EQ(k3.steps[0].normal, false);
  EXPECT_EQ(k3.steps[1].normal, true);
  EXPECT_FALSE(k3.steps[2].jump.has_value());
  EXPECT_EQ(k3.n, 3u);
  EXPECT_EQ(k3.prime, kPrime.value());
}

TEST(Trace, PathExposedLeafLeafCentre) {
  const Graph g = Graph::from_edges(3, std::vector<gr::Edge>{{0, 2}, {1, 2}});
  const auto t = gr::trace_exposure(g, kPrime);
  EXPECT_EQ(deficiencies(t), (std::vector<std::int64_t>{0, 0, 1}));
  EXPECT_EQ(t.steps[1].newly_attached, 2u);
  EXPECT_EQ(t.steps[1].normal, false);
  EXPECT_EQ(t.steps[1].jump, 2u);
  EXPECT_TRUE(gr::trace_violations(t).empty());
}

TEST(Trace, UngatedX) {
  EXPECT_EQ(gr::ungated_x(0), 0.0);
  EXPECT_EQ(gr::ungated_x(1), 4.0);
  EXPECT_EQ(gr::ungated_x(3), 64.0);
}

TEST(Trace, IdentitiesHoldOnRandomStreams) {
  for (const auto& t : campaign(120, 1.0, 30, 3)) {
    EXPECT_TRUE(gr::trace_violations(t).empty());
    for (std::size_t m = 0; m + 1 < t.steps.size(); ++m) {
      const auto& s = t.steps[m];
      const auto& next = t.steps[m + 1];
      EXPECT_GE(s.deficiency, 0);
      EXPECT_LE(*s.jump, 2u);
      if (*s.normal && s.deficiency > 0 && *s.jump == 2) {
        EXPECT_EQ(next.deficiency, s.deficiency - 1);
      }
      if (*s.normal && *s.jump < 2) {
        EXPECT_LE(next.deficiency, s.deficiency + 1);
      }
    }
  }
}

TEST(Trace, ViolationsAreDetected) {
  auto t = gr::trace_exposure(fam::path(4), kPrime);
  t.steps[2].jump = 3;
  EXPECT_FALSE(gr::trace_violations(t).empty());
  auto u = gr::trace_exposure(fam::path(4), kPrime);
  u.steps[3].deficiency = -1;
  EXPECT_FALSE(gr::trace_violations(u).empty());
}

TEST(Trace, MatchesFromScratchRanks) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double p = 0.04 + 0.03 * double(seed);
    const auto t = gr::trace_exposure(gr::exposure_stream(40, p, seed), kPrime);
    const Graph full = gr::gnp(40, p, seed);
    for (std::size_t m = 1; m <= 40; ++m) {
      const auto minor = full.induced_prefix(m);
      ASSERT_EQ(t.steps[m - 1].rank, gr::rank_mod_p(gr::FieldMatrix::adjacency(minor, kPrime)));
      ASSERT_EQ(t.steps[m - 1].isolated, gr::isolated_count(minor));
    }
    EXPECT_EQ(t.steps.back().rank, gr::certify_rank(full, std::vector{kPrime}).rank);
  }
}

TEST(Jumps, CompleteGraphExample) {
  const auto t = gr::trace_exposure(gr::exposure_stream(3, 1.0, 1), kPrime);
  const auto table = gr::jump_statistics({t}, 1);
  // m = 1 attaches the isolated first vertex, so it is not normal.
  std::size_t total = 0;
  for (const auto& c : table.cells) {
    EXPECT_FALSE(c.deficient);
    total += c.steps;
    if (c.normal) {
      EXPECT_EQ(c.jumps[1], 1u);
    } else {
      EXPECT_EQ(c.jumps[2], 1u);
    }
  }
  EXPECT_EQ(total, 2u);
}

TEST(Jumps, EmptyTracesAndSingleRow) {
  std::vector<gr::ExposureTrace> traces;
  for (int s = 0; s < 3; ++s) traces.push_back(gr::trace_exposure(gr::exposure_stream(6, 0.0, s), kPrime));
  const auto table = gr::jump_statistics(traces, 1);
  ASSERT_EQ(table.cells.size(), 1u);
  EXPECT_TRUE(table.cells[0].normal);
  EXPECT_FALSE(table.cells[0].deficient);
  EXPECT_EQ(table.cells[0].jumps[0], 15u);
  EXPECT_EQ(table.cells[0].intervals[0].high, 1.0);
  const auto single = gr::jump_statistics({traces[0]}, 5);
  ASSERT_EQ(single.cells.size(), 1u);
  EXPECT_EQ(single.cells[0].steps, 1u);
  EXPECT_THROW(gr::jump_statistics({}, 1), gr::Error);
  EXPECT_THROW(gr::jump_statistics(traces, 6), gr::Error);
}

TEST(Martingale, ZeroDeficiencyPassesTrivially) {
  std::vector<gr::ExposureTrace> traces;
  for (int s = 0; s < 3; ++s) traces.push_back(gr::trace_exposure(gr::exposure_stream(8, 1.0, s), kPrime));
  const auto r = gr::supermartingale_check(traces, 1);
  EXPECT_TRUE(r.small_sample);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.mean_x, 0.0);
    EXPECT_TRUE(row.within_slack);
  }
  EXPECT_EQ(r.fraction_within_slack, 1.0);
}

TEST(Martingale, PathTraceFlagsSmallSample) {
  const Graph g = Graph::from_edges(3, std::vector<gr::Edge>{{0, 2}, {1, 2}});
  const auto r = gr::supermartingale_check({gr::trace_exposure(g, kPrime)}, 2, 0.0);
  EXPECT_TRUE(r.small_sample);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].mean_x_next, 4.0);
  EXPECT_EQ(r.rows[0].contraction, 0.0);
  EXPECT_FALSE(r.rows[0].within_slack);
  EXPECT_EQ(r.rows[0].pointwise_violation_fraction, 1.0);
}

TEST(Martingale, EmpiricalContractionAtCTwo) {
  const auto traces = campaign(300, 2.0, 100, 20240601);
  const auto r = gr::supermartingale_check(traces, gr::default_m_start(300));
  EXPECT_FALSE(r.small_sample);
  EXPECT_GE(r.fraction_within_slack, 0.9);
}

TEST(Martingale, DefaultStart) {
  EXPECT_EQ(gr::default_m_start(300), 90u);
  EXPECT_EQ(gr::default_m_start(10), 3u);
  EXPECT_EQ(gr::default_m_start(11), 4u);
}
