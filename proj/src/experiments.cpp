#include "graphrank/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "graphrank/certify.hpp"
#include "graphrank/error.hpp"
#include "graphrank/exposure.hpp"
#include "graphrank/generators.hpp"
#include "graphrank/prime.hpp"
#include "graphrank/rng.hpp"
#include "graphrank/stats.hpp"
#include "graphrank/structure.hpp"

namespace graphrank {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::threshold_sweep, "threshold-sweep"},
    {ExperimentKind::rank_equality, "rank-equality"},
    {ExperimentKind::g_of_y, "g-of-y"},
    {ExperimentKind::d_regular, "d-regular"},
    {ExperimentKind::exposure_campaign, "exposure-campaign"},
};

constexpr std::pair<RecordType, std::string_view> kTypeNames[] = {
    {RecordType::config, "config"},
    {RecordType::trial, "trial"},
    {RecordType::cell, "cell"},
    {RecordType::summary, "summary"},
};

std::string_view grid_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::rank_equality: return "p";
    case ExperimentKind::g_of_y: return "y";
    case ExperimentKind::d_regular: return "d";
    default: return "c";
  }
}

std::vector<PrimeModulus> resolve_primes(const ExperimentConfig& config) {
  std::vector<PrimeModulus> out;
  if (config.primes.empty()) return default_primes();
  for (auto p : config.primes) out.emplace_back(p);
  return out;
}

double log_scaled_p(double c, std::size_t n) {
  const double dn = static_cast<double>(n);
  return c * std::log(dn) / dn;
}

json interval_json(const Interval& ci) { return json::array({ci.low, ci.high}); }

json rate_json(std::size_t successes, std::size_t trials) {
  return {{"successes", successes},
          {"trials", trials},
          {"rate", trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0},
          {"ci95", interval_json(wilson_interval(successes, trials))}};
}

json moments_json(std::span<const double> values) {
  const auto ms = mean_std(values);
  return {{"mean", ms.mean}, {"std", ms.stddev}};
}

json certificate_json(const Graph& graph, const RankCertificate& cert) {
  const auto excess = duplicate_row_excess(cert.witnesses);
  std::size_t classes = 0;
  for (const auto& w : cert.witnesses) classes += w.kind == WitnessKind::duplicate_row_class;
  return {{"n", cert.n},
          {"edges", graph.edge_count()},
          {"rank", cert.rank},
          {"rank_exact", cert.rank_exact},
          {"status", std::string(to_string(cert.status))},
          {"isolated", cert.isolated},
          {"fact_one_bound", cert.fact_one_bound()},
          {"structural_bound", cert.structural_bound},
          {"duplicate_excess", excess},
          {"duplicate_classes", classes},
          {"cherries", cherry_count(cert.witnesses)},
          {"primes_used", cert.primes_used},
          {"rational_confirmed", cert.rational_confirmed}};
}

// Runs trial(t, seed) for t in [0, samples) on up to `workers` threads and
// returns the trial records in index order.
using TrialFn = std::function<json(std::size_t trial, std::uint64_t seed)>;

class Campaign {
 public:
  explicit Campaign(const ExperimentConfig& config)
      : config_(config), digest_(config_digest(config)) {
    validate(config);
    json params = config_json(config);
    params.erase("output");
    params.erase("workers");
    records_.push_back(make(RecordType::config, 0, 0, 0, std::move(params), json::object()));
    records_.back().runtime = {{"output", config.output}, {"workers", config.workers}};
  }

  ExperimentRecord make(RecordType type, std::size_t cell, std::size_t trial,
                        std::uint64_t seed, json params, json outcome) const {
    ExperimentRecord r;
    r.kind = config_.kind;
    r.type = type;
    r.digest = digest_;
    r.master_seed = config_.master_seed;
    r.cell = cell;
    r.trial = trial;
    r.seed = seed;
    r.params = std::move(params);
    r.outcome = std::move(outcome);
    return r;
  }

  std::vector<json> run_cell(std::size_t cell, const json& params, const TrialFn& fn) {
    const std::size_t samples = config_.samples;
    std::vector<ExperimentRecord> trials(samples);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t t; (t = next.fetch_add(1)) < samples;) {
        const std::uint64_t seed = derive_seed(config_.master_seed, cell, t);
        try {
          const auto start = std::chrono::steady_clock::now();
          json outcome = fn(t, seed);
          const auto stop = std::chrono::steady_clock::now();
          trials[t] = make(RecordType::trial, cell, t, seed, params, std::move(outcome));
          trials[t].wall_ms =
              std::chrono::duration<double, std::milli>(stop - start).count();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = samples;
        }
      }
    };
    const std::size_t threads = std::clamp<std::size_t>(config_.workers, 1, samples);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<json> outcomes;
    outcomes.reserve(samples);
    for (auto& r : trials) {
      outcomes.push_back(r.outcome);
      records_.push_back(std::move(r));
    }
    return outcomes;
  }

  void add_cell(std::size_t cell, const json& params, json outcome) {
    records_.push_back(make(RecordType::cell, cell, 0, 0, params, std::move(outcome)));
  }

  void skip_cell(std::size_t cell, const json& params, const std::string& notice) {
    add_cell(cell, params, {{"skipped", true}, {"notice", notice}});
  }

  std::vector<ExperimentRecord> finish(json summary) {
    records_.push_back(make(RecordType::summary, 0, 0, 0, json::object(), std::move(summary)));
    return std::move(records_);
  }

  const ExperimentConfig& config() const { return config_; }

 private:
  ExperimentConfig config_;
  std::string digest_;
  std::vector<ExperimentRecord> records_;
};

json cell_params(const ExperimentConfig& config, double value, std::optional<double> p) {
  json params = {{"n", config.n}, {std::string(grid_name(config.kind)), value}};
  if (p) params["p"] = *p;
  return params;
}

std::size_t count_if_true(const std::vector<json>& outcomes, const char* key) {
  return static_cast<std::size_t>(std::count_if(
      outcomes.begin(), outcomes.end(), [&](const json& o) { return o.at(key).get<bool>(); }));
}

std::vector<double> column(const std::vector<json>& outcomes, const char* key) {
  std::vector<double> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.at(key).get<double>());
  return out;
}

json certified_trial(const ExperimentConfig& config, double p, std::uint64_t seed,
                     const std::vector<PrimeModulus>& primes) {
  const Graph graph = gnp(config.n, p, seed);
  const auto cert = certify_rank(graph, primes);
  json out = certificate_json(graph, cert);
  out["certified_equal"] = cert.status == CertificateStatus::certified_equal;
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void check_fact_one(const ExperimentRecord& record) {
  const auto& o = record.outcome;
  if (!o.is_object() || !o.contains("rank") || !o.contains("fact_one_bound")) return;
  if (o.at("rank").get<std::size_t>() > o.at("fact_one_bound").get<std::size_t>()) {
    throw Error(ErrorKind::contract,
                "record violates rank <= n - i(G) (cell " + std::to_string(record.cell) +
                    ", trial " + std::to_string(record.trial) + ")");
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (auto [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (auto [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(RecordType type) {
  for (auto [t, name] : kTypeNames)
    if (t == type) return name;
  return "unknown";
}

std::optional<RecordType> parse_record_type(std::string_view name) {
  for (auto [t, n] : kTypeNames)
    if (n == name) return t;
  return std::nullopt;
}

void validate(const ExperimentConfig& config) {
  if (config.n == 0) throw Error(ErrorKind::config, "n must be positive");
  if (config.samples == 0) throw Error(ErrorKind::config, "samples must be at least 1");
  if (config.workers == 0) throw Error(ErrorKind::config, "workers must be at least 1");
  if (config.grid.empty()) throw Error(ErrorKind::domain, "parameter grid is empty");
  for (auto p : config.primes) PrimeModulus{p};
  for (double v : config.grid) {
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "grid values must be finite");
    switch (config.kind) {
      case ExperimentKind::rank_equality:
        if (v < 0.0 || v > 1.0) throw Error(ErrorKind::domain, "p grid must lie in [0, 1]");
        break;
      case ExperimentKind::threshold_sweep:
      case ExperimentKind::exposure_campaign:
        if (v <= 0.0) throw Error(ErrorKind::domain, "c grid must be positive");
        if (config.n < 2) throw Error(ErrorKind::config, "c ln n / n needs n >= 2");
        break;
      case ExperimentKind::g_of_y:
        if (v < 0.0) throw Error(ErrorKind::domain, "y grid must be non-negative");
        break;
      case ExperimentKind::d_regular:
        if (v < 0.0 || v != std::floor(v))
          throw Error(ErrorKind::domain, "d grid must hold non-negative integers");
        break;
    }
  }
  if (config.kind == ExperimentKind::exposure_campaign &&
      !(config.exposure_fraction >= 0.0 && config.exposure_fraction < 1.0)) {
    throw Error(ErrorKind::config, "exposure fraction must lie in [0, 1)");
  }
}

json config_json(const ExperimentConfig& config) {
  std::vector<std::uint32_t> primes = config.primes;
  if (primes.empty())
    for (const auto& p : default_primes()) primes.push_back(p.value());
  json out = {{"kind", std::string(to_string(config.kind))},
              {"n", config.n},
              {std::string(grid_name(config.kind)), config.grid},
              {"samples", config.samples},
              {"master_seed", config.master_seed},
              {"primes", primes},
              {"output", config.output},
              {"workers", config.workers}};
  if (config.kind == ExperimentKind::exposure_campaign)
    out["exposure_fraction"] = config.exposure_fraction;
  return out;
}

std::string config_digest(const ExperimentConfig& config) {
  json canonical = config_json(config);
  canonical.erase("output");
  canonical.erase("workers");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical.dump())));
  return buf;
}

json record_json(const ExperimentRecord& record, bool with_timing) {
  json out = {{"kind", std::string(to_string(record.kind))},
              {"type", std::string(to_string(record.type))},
              {"digest", record.digest},
              {"master_seed", record.master_seed},
              {"cell", record.cell},
              {"trial", record.trial},
              {"seed", record.seed},
              {"params", record.params},
              {"outcome", record.outcome}};
  if (with_timing) {
    json timing = record.runtime;
    timing["wall_ms"] = record.wall_ms;
    out["timing"] = std::move(timing);
  }
  return out;
}

ExperimentRecord record_from_json(const json& value) {
  ExperimentRecord r;
  const auto kind = parse_kind(value.at("kind").get<std::string>());
  const auto type = parse_record_type(value.at("type").get<std::string>());
  if (!kind) throw Error(ErrorKind::parse, "unknown experiment kind");
  if (!type) throw Error(ErrorKind::parse, "unknown record type");
  r.kind = *kind;
  r.type = *type;
  r.digest = value.at("digest").get<std::string>();
  r.master_seed = value.at("master_seed").get<std::uint64_t>();
  r.cell = value.at("cell").get<std::size_t>();
  r.trial = value.at("trial").get<std::size_t>();
  r.seed = value.at("seed").get<std::uint64_t>();
  r.params = value.at("params");
  r.outcome = value.at("outcome");
  if (value.contains("timing")) {
    r.runtime = value.at("timing");
    r.wall_ms = r.runtime.at("wall_ms").get<double>();
    r.runtime.erase("wall_ms");
  }
  return r;
}

std::vector<ExperimentRecord> run_rank_equality(const ExperimentConfig& config) {
  Campaign campaign(config);
  const auto primes = resolve_primes(config);
  json rates = json::array();
  for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
    const double p = config.grid[cell];
    const json params = cell_params(config, p, std::nullopt);
    const auto outcomes = campaign.run_cell(cell, params, [&](std::size_t, std::uint64_t seed) {
      return certified_trial(config, p, seed, primes);
    });
    json cell_out = rate_json(count_if_true(outcomes, "certified_equal"), outcomes.size());
    rates.push_back(cell_out["rate"]);
    campaign.add_cell(cell, params, std::move(cell_out));
  }
  return campaign.finish({{"rates", rates}});
}

std::vector<ExperimentRecord> sweep_threshold(const ExperimentConfig& config) {
  Campaign campaign(config);
  const auto primes = resolve_primes(config);
  json rates = json::array();
  for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
    const double c = config.grid[cell];
    const double p = log_scaled_p(c, config.n);
    const json params = cell_params(config, c, p);
    if (p > 1.0) {
      campaign.skip_cell(cell, params, "skipped: p = c ln n / n exceeds 1");
      rates.push_back(nullptr);
      continue;
    }
    const auto outcomes = campaign.run_cell(cell, params, [&](std::size_t, std::uint64_t seed) {
      json out = certified_trial(config, p, seed, primes);
      const auto gap = out["fact_one_bound"].get<std::size_t>() - out["rank"].get<std::size_t>();
      const auto explained = out["duplicate_excess"].get<std::size_t>();
      out["gap"] = gap;
      out["unexplained"] = gap - std::min(gap, explained);
      return out;
    });
    json cell_out = rate_json(count_if_true(outcomes, "certified_equal"), outcomes.size());
    std::size_t with_cherry = 0;
    json residue = json::array();
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      with_cherry += outcomes[t]["cherries"].get<std::size_t>() > 0;
      if (outcomes[t]["unexplained"].get<std::size_t>() > 0) residue.push_back(t);
    }
    cell_out["cherries"] = moments_json(column(outcomes, "cherries"));
    cell_out["cherry_trials"] = rate_json(with_cherry, outcomes.size());
    cell_out["duplicate_excess"] = moments_json(column(outcomes, "duplicate_excess"));
    cell_out["gap"] = moments_json(column(outcomes, "gap"));
    cell_out["unexplained_trials"] = residue;
    rates.push_back(cell_out["rate"]);
    campaign.add_cell(cell, params, std::move(cell_out));
  }
  return campaign.finish({{"rates", rates}});
}

std::vector<ExperimentRecord> estimate_g(const ExperimentConfig& config) {
  Campaign campaign(config);
  const auto primes = resolve_primes(config);
  const double dn = static_cast<double>(config.n);
  json means = json::array();
  std::optional<double> previous;
  bool increasing = true;
  std::size_t checked = 0;
  std::size_t holds = 0;
  for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
    const double y = config.grid[cell];
    const double p = y / dn;
    const json params = cell_params(config, y, p);
    if (p > 1.0) {
      campaign.skip_cell(cell, params, "skipped: p = y / n exceeds 1");
      continue;
    }
    const auto outcomes = campaign.run_cell(cell, params, [&](std::size_t, std::uint64_t seed) {
      json out = certified_trial(config, p, seed, primes);
      out["rank_fraction"] = out["rank"].get<double>() / dn;
      out["isolated_fraction"] = out["isolated"].get<double>() / dn;
      out["fact_one_holds"] =
          out["rank"].get<std::size_t>() <= out["fact_one_bound"].get<std::size_t>();
      return out;
    });
    const auto rank_fraction = column(outcomes, "rank_fraction");
    json cell_out = {{"rank_fraction", moments_json(rank_fraction)},
                     {"isolated_fraction", moments_json(column(outcomes, "isolated_fraction"))},
                     {"fact_one_holds", rate_json(count_if_true(outcomes, "fact_one_holds"),
                                                  outcomes.size())},
                     {"exact_trials", count_if_true(outcomes, "rank_exact")},
                     {"reference_upper", 1.0 - std::exp(-y)}};
    checked += outcomes.size();
    holds += count_if_true(outcomes, "fact_one_holds");
    const double mean = cell_out["rank_fraction"]["mean"].get<double>();
    if (previous && !(mean > *previous)) increasing = false;
    previous = mean;
    means.push_back(mean);
    campaign.add_cell(cell, params, std::move(cell_out));
  }
  return campaign.finish({{"mean_rank_fraction", means},
                          {"strictly_increasing", increasing},
                          {"fact_one_holds", rate_json(holds, checked)}});
}

std::size_t cycle_union_rank(std::span<const std::size_t> cycle_lengths) {
  std::size_t rank = 0;
  for (auto len : cycle_lengths) rank += len - (len % 4 == 0 ? 2 : 0);
  return rank;
}

namespace {

std::vector<std::size_t> component_sizes(const Graph& graph) {
  std::vector<bool> seen(graph.order(), false);
  std::vector<std::size_t> sizes;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < graph.order(); ++s) {
    if (seen[s]) continue;
    std::size_t size = 0;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      ++size;
      for (Vertex w : graph.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

}  // namespace

std::vector<ExperimentRecord> dregular_experiment(const ExperimentConfig& config) {
  Campaign campaign(config);
  const auto primes = resolve_primes(config);
  json rates = json::array();
  bool oracle_agrees = true;
  for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
    const auto d = static_cast<std::size_t>(config.grid[cell]);
    const json params = cell_params(config, static_cast<double>(d), std::nullopt);
    std::vector<json> outcomes;
    try {
      outcomes = campaign.run_cell(cell, params, [&](std::size_t, std::uint64_t seed) {
        const auto sample = random_regular(config.n, d, seed);
        const auto cert = certify_rank(sample.graph, primes);
        json out = certificate_json(sample.graph, cert);
        out["restarts"] = sample.restarts;
        out["nonsingular"] = cert.status == CertificateStatus::certified_equal &&
                             cert.rank == config.n;
        if (d == 2) {
          const auto cycles = component_sizes(sample.graph);
          const auto oracle = cycle_union_rank(cycles);
          out["oracle_rank"] = oracle;
          out["oracle_agrees"] = oracle == cert.rank;
        }
        return out;
      });
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::parity && e.kind() != ErrorKind::infeasible &&
          e.kind() != ErrorKind::budget)
        throw;
      campaign.skip_cell(cell, params, std::string("skipped: ") + e.what());
      rates.push_back(nullptr);
      continue;
    }
    json cell_out = rate_json(count_if_true(outcomes, "nonsingular"), outcomes.size());
    cell_out["restarts"] = moments_json(column(outcomes, "restarts"));
    if (d == 2) {
      const auto agree = count_if_true(outcomes, "oracle_agrees");
      cell_out["oracle_agreement"] = rate_json(agree, outcomes.size());
      oracle_agrees = oracle_agrees && agree == outcomes.size();
    }
    rates.push_back(cell_out["rate"]);
    campaign.add_cell(cell, params, std::move(cell_out));
  }
  return campaign.finish({{"rates", rates}, {"oracle_agrees", oracle_agrees}});
}

std::vector<ExperimentRecord> exposure_campaign(const ExperimentConfig& config) {
  Campaign campaign(config);
  const auto primes = resolve_primes(config);
  const PrimeModulus prime = primes.front();
  std::size_t total_steps = 0;
  std::size_t total_violations = 0;
  for (std::size_t cell = 0; cell < config.grid.size(); ++cell) {
    const double c = config.grid[cell];
    const double p = log_scaled_p(c, config.n);
    const json params = cell_params(config, c, p);
    if (p > 1.0) {
      campaign.skip_cell(cell, params, "skipped: p = c ln n / n exceeds 1");
      continue;
    }
    std::vector<ExposureTrace> traces(config.samples);
    const auto outcomes = campaign.run_cell(cell, params, [&](std::size_t t, std::uint64_t seed) {
      traces[t] = trace_exposure(exposure_stream(config.n, p, seed), prime);
      const auto& steps = traces[t].steps;
      const auto violations = trace_violations(traces[t]);
      std::array<std::size_t, 3> jumps{};
      std::size_t normal = 0;
      std::int64_t max_y = 0;
      for (const auto& s : steps) {
        if (s.jump && *s.jump < 3) ++jumps[*s.jump];
        normal += s.normal.value_or(false);
        max_y = std::max(max_y, s.deficiency);
      }
      const auto& last = steps.back();
      json out = {{"n", config.n},
                  {"steps", steps.size()},
                  {"rank", last.rank},
                  {"isolated", last.isolated},
                  {"fact_one_bound", config.n - last.isolated},
                  {"final_deficiency", last.deficiency},
                  {"max_deficiency", max_y},
                  {"normal_steps", normal},
                  {"jumps", jumps},
                  {"violations", violations.size()}};
      if (!violations.empty()) out["first_violation"] = violations.front();
      return out;
    });
    std::vector<double> y_mean(config.n, 0.0), y_sd(config.n, 0.0);
    for (std::size_t m = 0; m < config.n; ++m) {
      std::vector<double> ys;
      for (const auto& tr : traces) ys.push_back(static_cast<double>(tr.steps[m].deficiency));
      const auto ms = mean_std(ys);
      y_mean[m] = ms.mean;
      y_sd[m] = ms.stddev;
    }
    std::size_t violations = 0;
    std::size_t steps = 0;
    for (const auto& o : outcomes) {
      violations += o["violations"].get<std::size_t>();
      steps += o["steps"].get<std::size_t>();
    }
    total_steps += steps;
    total_violations += violations;
    json cell_out = {{"steps", steps}, {"violations", violations},
                     {"deficiency_mean", y_mean}, {"deficiency_std", y_sd}};
    const std::size_t m_start = default_m_start(config.n, config.exposure_fraction);
    if (config.n >= 2 && m_start < config.n) {
      const auto table = jump_statistics(traces, m_start);
      json cells = json::array();
      for (const auto& jc : table.cells) {
        cells.push_back({{"deficient", jc.deficient},
                         {"normal", jc.normal},
                         {"steps", jc.steps},
                         {"jumps", jc.jumps}});
      }
      const auto report = supermartingale_check(traces, m_start);
      cell_out["m_start"] = m_start;
      cell_out["jump_table"] = cells;
      cell_out["martingale"] = {{"slack", report.slack},
                                {"small_sample", report.small_sample},
                                {"fraction_within_slack", report.fraction_within_slack}};
    }
    campaign.add_cell(cell, params, std::move(cell_out));
  }
  return campaign.finish({{"steps", total_steps}, {"violations", total_violations}});
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::rank_equality: return run_rank_equality(config);
    case ExperimentKind::threshold_sweep: return sweep_threshold(config);
    case ExperimentKind::g_of_y: return estimate_g(config);
    case ExperimentKind::d_regular: return dregular_experiment(config);
    case ExperimentKind::exposure_campaign: return exposure_campaign(config);
  }
  throw Error(ErrorKind::config, "unknown experiment kind");
}

std::string to_jsonl(std::span<const ExperimentRecord> records, bool with_timing) {
  std::string out;
  for (const auto& r : records) {
    check_fact_one(r);
    out += record_json(r, with_timing).dump();
    out += '\n';
  }
  return out;
}

std::vector<ExperimentRecord> from_jsonl(std::string_view text) {
  std::vector<ExperimentRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed record: ") + e.what());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

void persist(std::span<const ExperimentRecord> records, const std::string& path) {
  const std::string text = to_jsonl(records);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  file << text;
  if (!file) throw Error(ErrorKind::io, "write failed: " + path);
}

std::vector<ExperimentRecord> load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return from_jsonl(buffer.str());
}

namespace {

struct Series {
  std::string title;
  std::vector<std::array<double, 4>> points;  // x, y, low, high
};

std::string number(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

PlotArtifact emit_plot_script(std::span<const ExperimentRecord> records,
                              const std::string& data_file) {
  if (records.empty()) throw Error(ErrorKind::domain, "no records to plot");
  const ExperimentKind kind = records.front().kind;
  for (const auto& r : records)
    if (r.kind != kind) throw Error(ErrorKind::domain, "records mix experiment kinds");

  const std::string x_name(grid_name(kind));
  std::vector<Series> series;
  std::string y_label = "certified-equal rate";
  std::string reference;
  if (kind == ExperimentKind::exposure_campaign) {
    y_label = "Y_m = m - rank(Q_m) - i(Q_m)";
    for (const auto& r : records) {
      if (r.type != RecordType::cell || r.outcome.contains("skipped")) continue;
      Series s{"c = " + number(r.params.at("c").get<double>()), {}};
      const auto& mean = r.outcome.at("deficiency_mean");
      const auto& sd = r.outcome.at("deficiency_std");
      for (std::size_t m = 0; m < mean.size(); ++m) {
        const double mu = mean[m].get<double>();
        const double s95 = 1.96 * sd[m].get<double>();
        s.points.push_back({static_cast<double>(m + 1), mu, mu - s95, mu + s95});
      }
      series.push_back(std::move(s));
    }
  } else {
    Series s;
    for (const auto& r : records) {
      if (r.type != RecordType::cell || r.outcome.contains("skipped")) continue;
      const double x = r.params.at(x_name).get<double>();
      if (kind == ExperimentKind::g_of_y) {
        const auto& rf = r.outcome.at("rank_fraction");
        const double mu = rf.at("mean").get<double>();
        const double sd = rf.at("std").get<double>();
        s.points.push_back({x, mu, mu - sd, mu + sd});
      } else {
        const auto& ci = r.outcome.at("ci95");
        s.points.push_back({x, r.outcome.at("rate").get<double>(), ci[0].get<double>(),
                            ci[1].get<double>()});
      }
    }
    if (kind == ExperimentKind::g_of_y) {
      s.title = "mean rank/n (+/- 1 sd)";
      y_label = "rank/n";
      reference = "1 - exp(-x) title \"1 - e^{-y}\" with lines dashtype 2";
    } else if (kind == ExperimentKind::d_regular) {
      s.title = "nonsingular rate (Wilson 95%)";
      y_label = "nonsingular rate";
    } else {
      s.title = "certified-equal rate (Wilson 95%)";
    }
    series.push_back(std::move(s));
  }

  PlotArtifact artifact;
  artifact.data_file = data_file;
  std::ostringstream csv;
  csv << "# series," << (kind == ExperimentKind::exposure_campaign ? "m" : x_name)
      << ",value,low,high\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) csv << "\n\n";
    for (const auto& pt : series[i].points) {
      csv << i << ',' << number(pt[0]) << ',' << number(pt[1]) << ',' << number(pt[2])
          << ',' << number(pt[3]) << '\n';
    }
  }
  artifact.csv = csv.str();

  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << to_string(kind) << ".png'\n"
     << "set key left top\n"
     << "set xlabel '" << (kind == ExperimentKind::exposure_campaign ? "m" : x_name) << "'\n"
     << "set ylabel '" << y_label << "'\n";
  if (kind == ExperimentKind::threshold_sweep || kind == ExperimentKind::rank_equality ||
      kind == ExperimentKind::d_regular) {
    gp << "set yrange [0:1.05]\n";
  }
  gp << "plot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) gp << ", \\\n     ";
    gp << "'" << data_file << "' index " << i
       << " using 2:3:4:5 with yerrorlines title \"" << series[i].title << "\"";
  }
  if (!reference.empty()) gp << ", \\\n     " << reference;
  gp << '\n';
  artifact.script = gp.str();
  return artifact;
}

std::string summary_table(std::span<const ExperimentRecord> records) {
  std::ostringstream out;
  out.precision(4);
  for (const auto& r : records) {
    if (r.type != RecordType::cell) continue;
    const std::string key(grid_name(r.kind));
    out << "cell " << r.cell << "  n=" << r.params.value("n", std::size_t{0}) << "  " << key
        << '=' << number(r.params.at(key).get<double>());
    if (key != "p" && r.params.contains("p")) out << "  p=" << number(r.params["p"].get<double>());
    const auto& o = r.outcome;
    if (o.contains("skipped")) {
      out << "  " << o.at("notice").get<std::string>() << '\n';
      continue;
    }
    if (o.contains("rate")) {
      out << "  rate=" << o["rate"].get<double>() << " [" << o["ci95"][0].get<double>()
          << ", " << o["ci95"][1].get<double>() << "]  trials=" << o["trials"];
    }
    if (o.contains("cherry_trials"))
      out << "  mean_cherries=" << o["cherries"]["mean"].get<double>();
    if (o.contains("oracle_agreement"))
      out << "  oracle_agreement=" << o["oracle_agreement"]["rate"].get<double>();
    if (o.contains("rank_fraction")) {
      out << "  rank/n=" << o["rank_fraction"]["mean"].get<double>() << " (sd "
          << o["rank_fraction"]["std"].get<double>() << ")  i/n="
          << o["isolated_fraction"]["mean"].get<double>();
    }
    if (o.contains("violations"))
      out << "  steps=" << o["steps"] << "  violations=" << o["violations"];
    out << '\n';
  }
  return out.str();
}

}  // namespace graphrank
