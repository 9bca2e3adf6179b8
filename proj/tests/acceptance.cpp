// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails. Tolerances and seeds are fixed below.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "graphrank/anticoncentration.hpp"
#include "graphrank/certify.hpp"
#include "graphrank/exact_rank.hpp"
#include "graphrank/experiments.hpp"
#include "graphrank/exposure.hpp"
#include "graphrank/generators.hpp"
#include "graphrank/graph.hpp"
#include "graphrank/matrix.hpp"
#include "graphrank/rng.hpp"
#include "graphrank/structure.hpp"

namespace gr = graphrank;
namespace fam = graphrank::families;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kMasterSeed = 20260101;

// Pinned thresholds.
constexpr double kOracleSeconds = 10.0;
constexpr double kEqualitySeconds = 300.0;
constexpr double kEqualityRate = 0.99;
constexpr double kCherryRate = 0.80;
constexpr double kScaledAtomBound = 1.0;
constexpr double kEnumerationTolerance = 1e-12;
constexpr double kCubicNonsingularRate = 0.95;

struct Outcome {
  bool pass;
  std::string detail;
};

std::size_t parallel() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

gr::ExperimentConfig make_config(gr::ExperimentKind kind, std::size_t n, std::vector<double> grid,
                                 std::size_t samples, std::size_t workers = 1) {
  gr::ExperimentConfig c;
  c.kind = kind;
  c.n = n;
  c.grid = std::move(grid);
  c.samples = samples;
  c.master_seed = kMasterSeed;
  c.workers = workers;
  return c;
}

std::vector<gr::ExperimentRecord> select(const std::vector<gr::ExperimentRecord>& records,
                                         gr::RecordType type) {
  std::vector<gr::ExperimentRecord> out;
  for (const auto& r : records)
    if (r.type == type) out.push_back(r);
  return out;
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const gr::PrimeModulus prime = gr::default_primes().front();
  const double ps[] = {0.1, 0.3, 0.5, 0.9};
  std::size_t agree = 0;
  constexpr std::size_t kGraphs = 500;
  for (std::size_t i = 0; i < kGraphs; ++i) {
    const std::size_t n = 1 + i % 10;
    const auto g = gr::gnp(n, ps[(i / 10) % 4], gr::derive_seed(kMasterSeed, 1, i));
    const auto modp = gr::rank_mod_p(gr::FieldMatrix::adjacency(g, prime));
    agree += modp == gr::rational_rank(gr::IntegerMatrix::adjacency(g));
  }
  const double secs = seconds_since(start);
  return {agree == kGraphs && secs < kOracleSeconds,
          fmt("%zu/%zu agree, %.3f s (limit %.0f s)", agree, kGraphs, secs, kOracleSeconds)};
}

Outcome closed_forms() {
  const auto primes = gr::default_primes();
  std::size_t checked = 0, failed = 0;
  auto check = [&](const gr::Graph& g, std::size_t expected) {
    const auto cert = gr::certify_rank(g, primes);
    const auto exact = gr::rational_rank(gr::IntegerMatrix::adjacency(g));
    ++checked;
    failed += !(cert.rank_exact && cert.rank == expected && exact == expected);
  };
  for (std::size_t n = 1; n <= 64; ++n) {
    if (n >= 2) check(fam::complete(n), n);
    if (n >= 3) check(fam::cycle(n), n - (n % 4 == 0 ? 2 : 0));
    check(fam::path(n), n - n % 2);
    if (n >= 2) check(fam::star(n - 1), 2);
  }
  return {failed == 0, fmt("%zu/%zu graphs match", checked - failed, checked)};
}

Outcome equality_above_threshold() {
  const auto start = Clock::now();
  const auto records = gr::sweep_threshold(make_config(gr::ExperimentKind::threshold_sweep, 500, {2.0}, 200));
  const double secs = seconds_since(start);
  const auto cell = select(records, gr::RecordType::cell).at(0);
  const double rate = cell.outcome.at("rate").get<double>();
  return {rate >= kEqualityRate && secs <= kEqualitySeconds,
          fmt("certified-equal rate %.3f (need >= %.2f), %.1f s single-threaded", rate,
              kEqualityRate, secs)};
}

Outcome sub_threshold() {
  const auto records = gr::sweep_threshold(make_config(gr::ExperimentKind::threshold_sweep, 2000, {0.3}, 100, parallel()));
  std::size_t cherry_deficient = 0, bound_ok = 0, trials = 0;
  for (const auto& t : select(records, gr::RecordType::trial)) {
    const auto& o = t.outcome;
    const auto rank = o.at("rank").get<std::size_t>();
    const auto fact_one = o.at("fact_one_bound").get<std::size_t>();
    const auto status = o.at("status").get<std::string>();
    const bool deficient = status == "certified-deficient" ||
                           (status == "lower-bound-only" && rank < fact_one);
    cherry_deficient += o.at("cherries").get<std::size_t>() > 0 && deficient;
    bound_ok += rank <= fact_one - o.at("duplicate_excess").get<std::size_t>();
    ++trials;
  }
  const double rate = static_cast<double>(cherry_deficient) / static_cast<double>(trials);
  return {rate >= kCherryRate && bound_ok == trials,
          fmt("cherry+deficient %.2f (need >= %.2f), structural bound %zu/%zu", rate, kCherryRate,
              bound_ok, trials)};
}

Outcome threshold_shape() {
  const auto records = gr::sweep_threshold(
      make_config(gr::ExperimentKind::threshold_sweep, 1000, {0.3, 0.45, 0.55, 0.8, 1.2}, 100, parallel()));
  const auto cells = select(records, gr::RecordType::cell);
  const auto& lo = cells.front().outcome.at("ci95");
  const auto& hi = cells.back().outcome.at("ci95");
  const double lo_hi = lo[1].get<double>(), hi_lo = hi[0].get<double>();
  return {lo_hi < hi_lo,
          fmt("c=0.3 rate %.2f [%.3f, %.3f]; c=1.2 rate %.2f [%.3f, %.3f]",
              cells.front().outcome.at("rate").get<double>(), lo[0].get<double>(), lo_hi,
              cells.back().outcome.at("rate").get<double>(), hi_lo, hi[1].get<double>())};
}

Outcome exposure_process() {
  const gr::PrimeModulus prime = gr::default_primes().front();
  const std::size_t n = 300;
  const double p = 2.0 * std::log(double(n)) / double(n);
  std::size_t steps = 0, good = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto trace = gr::trace_exposure(gr::exposure_stream(n, p, gr::derive_seed(kMasterSeed, 6, i)), prime);
    for (const auto& s : trace.steps) {
      ++steps;
      const bool jump_ok = !s.jump || *s.jump <= 2;
      good += s.deficiency >= 0 && jump_ok;
    }
  }
  std::size_t minors = 0, minors_ok = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto seed = gr::derive_seed(kMasterSeed, 7, i);
    const double q = 0.05 + 0.02 * double(i);
    const auto trace = gr::trace_exposure(gr::exposure_stream(40, q, seed), prime);
    const auto full = gr::gnp(40, q, seed);
    for (std::size_t m = 1; m <= 40; ++m) {
      ++minors;
      const auto minor = full.induced_prefix(m);
      minors_ok += trace.steps[m - 1].rank == gr::rank_mod_p(gr::FieldMatrix::adjacency(minor, prime)) &&
                   trace.steps[m - 1].rank == gr::rational_rank(gr::IntegerMatrix::adjacency(minor));
    }
  }
  return {good == steps && minors_ok == minors,
          fmt("%zu/%zu steps valid, %zu/%zu incremental ranks match", good, steps, minors_ok, minors)};
}

// Exact atom of sum of Bernoulli(p) over n all-ones coefficients, by walking
// all 2^n outcomes.
double enumerated_ones_atom(std::size_t n, double p) {
  std::vector<double> mass(n + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int k = std::popcount(mask);
    mass[k] += std::pow(p, k) * std::pow(1 - p, double(n) - k);
  }
  return *std::max_element(mass.begin(), mass.end());
}

Outcome littlewood_offord() {
  const std::size_t ns[] = {16, 64, 256, 1024, 4096};
  const double ps[] = {0.5, 0.1};
  gr::ScalingOptions opts;
  opts.family = gr::CoefficientFamily::all_ones;
  const auto rows = gr::lo_scaling_experiment(ns, ps, opts);
  double worst = 0.0;
  std::size_t cells = 0, over = 0;
  for (const auto& r : rows) {
    if (r.skipped) continue;
    ++cells;
    worst = std::max(worst, *r.ones_scaled);
    over += *r.ones_scaled > kScaledAtomBound;
  }
  double enum_err = 0.0;
  for (std::size_t n : {4u, 8u, 12u, 16u})
    for (double p : ps) {
      const auto est = gr::linear_atom_exact(gr::CoefficientVector::all_ones(n), p);
      enum_err = std::max(enum_err, std::abs(est.value - enumerated_ones_atom(n, p)));
    }
  return {cells > 0 && over == 0 && enum_err <= kEnumerationTolerance,
          fmt("%zu cells, max atom*sqrt(np) %.4f (bound %.1f), enumeration error %.1e", cells,
              worst, kScaledAtomBound, enum_err)};
}

Outcome decoupling() {
  // X and Y each take four values (two bits); every subset of the 16 cells
  // is an event. Several laws, including strongly dependent ones.
  std::vector<gr::JointDistribution> laws;
  laws.push_back(gr::JointDistribution(4, std::vector<double>(4, 1.0 / 16)));
  gr::JointDistribution diag(4, std::vector<double>(4, 0.0));
  for (int i = 0; i < 4; ++i) diag[i][i] = 0.25;
  laws.push_back(diag);
  gr::Rng rng(kMasterSeed);
  for (int k = 0; k < 3; ++k) {
    gr::JointDistribution law(4, std::vector<double>(4));
    double total = 0.0;
    for (auto& row : law)
      for (auto& v : row) total += v = rng.uniform01() * (k == 2 ? rng.uniform01() : 1.0);
    for (auto& row : law)
      for (auto& v : row) v /= total;
    laws.push_back(law);
  }
  std::size_t events = 0, violations = 0;
  for (const auto& law : laws) {
    for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
      const auto r = gr::decoupling_check(law, [mask](std::size_t x, std::size_t y) {
        return ((mask >> (4 * x + y)) & 1u) != 0;
      });
      ++events;
      violations += !r.holds;
    }
  }
  return {violations == 0, fmt("%zu events over %zu laws, %zu violations", events, laws.size(), violations)};
}

Outcome regular_graphs() {
  const auto small = gr::dregular_experiment(make_config(gr::ExperimentKind::d_regular, 200, {1, 2}, 100, parallel()));
  const auto cells = select(small, gr::RecordType::cell);
  const double matching = cells.at(0).outcome.at("rate").get<double>();
  const double agree = cells.at(1).outcome.at("oracle_agreement").at("rate").get<double>();
  const auto cubic = gr::dregular_experiment(make_config(gr::ExperimentKind::d_regular, 100, {3}, 100, parallel()));
  const double cubic_rate = select(cubic, gr::RecordType::cell).at(0).outcome.at("rate").get<double>();
  return {matching == 1.0 && agree == 1.0 && cubic_rate >= kCubicNonsingularRate,
          fmt("d=1 nonsingular %.2f, d=2 oracle agreement %.2f, d=3 nonsingular %.2f (need >= %.2f)",
              matching, agree, cubic_rate, kCubicNonsingularRate)};
}

Outcome g_of_y() {
  const auto records = gr::estimate_g(make_config(gr::ExperimentKind::g_of_y, 1000, {1, 2, 4, 8}, 50, parallel()));
  std::string means;
  for (const auto& c : select(records, gr::RecordType::cell))
    means += fmt("%.4f ", c.outcome.at("rank_fraction").at("mean").get<double>());
  std::size_t ok = 0, trials = 0;
  for (const auto& t : select(records, gr::RecordType::trial)) {
    ++trials;
    ok += t.outcome.at("rank").get<std::size_t>() <= t.outcome.at("fact_one_bound").get<std::size_t>();
  }
  const bool increasing = records.back().outcome.at("strictly_increasing").get<bool>();
  return {increasing && ok == trials,
          fmt("mean rank/n %s%s, rank <= n - i(G) in %zu/%zu", means.c_str(),
              increasing ? "(strictly increasing)" : "(NOT increasing)", ok, trials)};
}

Outcome determinism() {
  std::size_t runs = 0, identical = 0;
  for (auto kind : {gr::ExperimentKind::threshold_sweep, gr::ExperimentKind::rank_equality,
                    gr::ExperimentKind::g_of_y, gr::ExperimentKind::d_regular,
                    gr::ExperimentKind::exposure_campaign}) {
    std::vector<double> grid = kind == gr::ExperimentKind::d_regular       ? std::vector<double>{2, 3}
                               : kind == gr::ExperimentKind::rank_equality ? std::vector<double>{0.02, 0.1}
                                                                           : std::vector<double>{0.5, 2};
    auto cfg = make_config(kind, 120, grid, 16, 1);
    const auto reference = gr::to_jsonl(gr::run_experiment(cfg), false);
    for (std::size_t workers : {1u, 2u, 3u, 8u}) {
      cfg.workers = workers;
      ++runs;
      identical += gr::to_jsonl(gr::run_experiment(cfg), false) == reference;
    }
  }
  return {identical == runs, fmt("%zu/%zu reruns byte-identical across 1, 2, 3, 8 workers", identical, runs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"closed forms", closed_forms},
      {"rank equality above threshold", equality_above_threshold},
      {"sub-threshold deficiency", sub_threshold},
      {"threshold shape", threshold_shape},
      {"exposure process", exposure_process},
      {"atom scaling", littlewood_offord},
      {"decoupling", decoupling},
      {"regular graphs", regular_graphs},
      {"g(y) sanity", g_of_y},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %2zu  %-30s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
