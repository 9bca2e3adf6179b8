#include "graphrank/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphrank/anticoncentration.hpp"
#include "graphrank/certify.hpp"
#include "graphrank/error.hpp"
#include "graphrank/experiments.hpp"
#include "graphrank/exposure.hpp"
#include "graphrank/generators.hpp"
#include "graphrank/graph_io.hpp"
#include "graphrank/prime.hpp"
#include "graphrank/structure.hpp"

namespace graphrank::cli {

using nlohmann::json;

namespace {

// Raised for flag values that parse but make no sense; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphSource {
  std::string edges;
  std::string gnp;
  std::string regular;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> primes;
  std::string format = "json";
  std::string out;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

struct CertifyOptions {
  std::string mode = "randomized";
  std::size_t restarts = 1000;
  std::optional<double> p;
};

struct SweepOptions {
  std::size_t n = 0;
  std::vector<double> c, p, y, d;
  std::size_t samples = 100;
  bool exposure = false;
  std::string plot;
};

struct LoOptions {
  std::vector<std::size_t> n;
  std::vector<double> p;
  std::string family = "both";
  std::size_t samples = 2000;
  std::size_t quadratic_max_n = 1024;
  std::size_t distinct_max_n = 1024;
};

const std::vector<std::string> kFormats = {"json", "csv", "text"};

void add_graph_source(CLI::App& cmd, GraphSource& src) {
  auto* edges = cmd.add_option("--edges", src.edges, "Edge-list file (first line n, then 1-based 'u v' lines)");
  auto* gnp = cmd.add_option("--gnp", src.gnp, "Sample G(n,p), given as N,P");
  auto* reg = cmd.add_option("--regular", src.regular, "Sample a random d-regular graph, given as N,D");
  auto* group = cmd.add_option_group("source", "Graph source (exactly one)");
  group->add_option(edges);
  group->add_option(gnp);
  group->add_option(reg);
  group->require_option(1);
}

void add_common(CLI::App& cmd, CommonOptions& opts, bool seed_required, bool workers,
                const std::string& default_format = "json") {
  opts.format = default_format;
  auto* seed = cmd.add_option("--seed", opts.seed, "Master seed")->envname("GRAPHRANK_SEED");
  if (seed_required) seed->required();
  else seed->capture_default_str();
  cmd.add_option("--primes", opts.primes,
                 "Comma-separated primes in (2^30, 2^31) (default 2147483647,2147483629)")
      ->delimiter(',');
  cmd.add_option("--format", opts.format, "Output encoding")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  if (workers) {
    cmd.add_option("--workers", opts.workers, "Concurrent trials (default: hardware threads)")
        ->check(CLI::PositiveNumber);
  }
  cmd.add_option("--out", opts.out, "Write output to this path instead of stdout");
}

std::pair<std::string, std::string> split_pair(const std::string& flag, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw UsageError(flag + ": expected two comma-separated values, got '" + text + "'");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

template <typename T>
T parse_number(const std::string& flag, const std::string& text) {
  T value{};
  std::istringstream in(text);
  in >> value;
  if (!in || !in.eof() || (std::is_unsigned_v<T> && text.find('-') != std::string::npos))
    throw UsageError(flag + ": cannot parse '" + text + "'");
  return value;
}

std::vector<PrimeModulus> resolve_primes(const std::vector<std::uint32_t>& values) {
  if (values.empty()) return default_primes();
  std::vector<PrimeModulus> out;
  for (auto v : values) out.emplace_back(v);
  return out;
}

std::vector<std::uint32_t> prime_values(const std::vector<PrimeModulus>& primes) {
  std::vector<std::uint32_t> out;
  for (const auto& p : primes) out.push_back(p.value());
  return out;
}

struct LoadedGraph {
  Graph graph;
  json source;
  std::optional<double> p;  // generator probability when known
  std::optional<std::size_t> restarts;
};

LoadedGraph load_graph(const GraphSource& src, std::uint64_t seed) {
  if (!src.edges.empty()) {
    return {read_graph_file(src.edges), {{"edges", src.edges}}, std::nullopt, std::nullopt};
  }
  if (!src.gnp.empty()) {
    const auto [ns, ps] = split_pair("--gnp", src.gnp);
    const auto n = parse_number<std::size_t>("--gnp", ns);
    const auto p = parse_number<double>("--gnp", ps);
    return {gnp(n, p, seed), {{"gnp", {{"n", n}, {"p", p}}}, {"seed", seed}}, p, std::nullopt};
  }
  const auto [ns, ds] = split_pair("--regular", src.regular);
  const auto n = parse_number<std::size_t>("--regular", ns);
  const auto d = parse_number<std::size_t>("--regular", ds);
  auto sample = random_regular(n, d, seed);
  return {std::move(sample.graph), {{"regular", {{"n", n}, {"d", d}}}, {"seed", seed}},
          std::nullopt, sample.restarts};
}

json witness_json(const DeficiencyWitness& w) {
  json vertices = json::array();
  for (auto v : w.vertices) vertices.push_back(v + 1);
  json out = {{"kind", std::string(to_string(w.kind))},
              {"vertices", vertices},
              {"deficiency", w.deficiency_contribution}};
  if (w.center) out["center"] = *w.center + 1;
  return out;
}

json certificate_json(const RankCertificate& cert) {
  json witnesses = json::array();
  for (const auto& w : cert.witnesses) witnesses.push_back(witness_json(w));
  return {{"n", cert.n},
          {"rank", cert.rank},
          {"status", std::string(to_string(cert.status))},
          {"rank_exact", cert.rank_exact},
          {"isolated", cert.isolated},
          {"fact_one_bound", cert.fact_one_bound()},
          {"structural_bound", cert.structural_bound},
          {"primes_used", cert.primes_used},
          {"rational_confirmed", cert.rational_confirmed},
          {"witnesses", witnesses}};
}

void write_output(const CommonOptions& opts, const std::string& text, std::ostream& out) {
  if (opts.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opts.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::io, "cannot open " + opts.out + " for writing");
  file << text;
  if (!file) throw Error(ErrorKind::io, "write failed: " + opts.out);
}

std::string scalar_text(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// Flat objects as "key: value" lines or a two-line CSV; nested values are
// dumped as JSON.
std::string flat_text(const json& config, const json& fields, const std::string& format) {
  std::ostringstream s;
  if (format == "json") {
    s << json{{"config", config}, {"result", fields}}.dump(2) << '\n';
  } else if (format == "text") {
    s << "# config: " << config.dump() << '\n';
    for (const auto& [k, v] : fields.items()) s << k << ": " << scalar_text(v) << '\n';
  } else {
    s << "# config: " << config.dump() << '\n';
    bool first = true;
    for (const auto& [k, v] : fields.items()) {
      s << (first ? "" : ",") << k;
      first = false;
    }
    s << '\n';
    first = true;
    for (const auto& [k, v] : fields.items()) {
      std::string cell = scalar_text(v);
      if (cell.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : cell) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        cell = quoted + "\"";
      }
      s << (first ? "" : ",") << cell;
      first = false;
    }
    s << '\n';
  }
  return s.str();
}

json base_config(const std::string& command, const CommonOptions& opts,
                 const std::vector<PrimeModulus>& primes) {
  return {{"command", command},
          {"seed", opts.seed},
          {"primes", prime_values(primes)},
          {"format", opts.format},
          {"out", opts.out}};
}

void run_rank(const GraphSource& src, const CommonOptions& opts, std::ostream& out) {
  const auto primes = resolve_primes(opts.primes);
  const auto loaded = load_graph(src, opts.seed);
  json config = base_config("rank", opts, primes);
  config["source"] = loaded.source;
  const auto cert = certify_rank(loaded.graph, primes);
  write_output(opts, flat_text(config, certificate_json(cert), opts.format), out);
}

json structure_json(const Graph& graph, double p, const CertifyOptions& copts,
                    std::uint64_t seed) {
  const auto th = thresholds(graph.order(), p);
  const CheckMode mode = copts.mode == "exact" ? CheckMode::exact : CheckMode::randomized;
  SearchOptions search;
  search.restarts = copts.restarts;
  search.seed = seed;
  const auto sep = is_well_separated(graph, th.low_degree);
  const auto exp = is_small_set_expander(graph, th.small_set_bound, mode, search);
  const auto good = is_good(graph, th.k, th.few_low_degree_bound, mode, search);
  auto one_based = [](std::span<const Vertex> vs) {
    json a = json::array();
    for (auto v : vs) a.push_back(v + 1);
    return a;
  };
  json separated = {{"holds", sep.well_separated}};
  if (sep.violating_pair)
    separated["violating_pair"] = {sep.violating_pair->first + 1, sep.violating_pair->second + 1};
  static constexpr const char* kFailures[] = {"none", "not-nice", "too-many-low-degree"};
  return {{"p", p},
          {"mode", copts.mode},
          {"thresholds",
           {{"k", th.k},
            {"low_degree", th.low_degree},
            {"small_set_bound", th.small_set_bound},
            {"few_low_degree_bound", th.few_low_degree_bound}}},
          {"well_separated", separated},
          {"small_set_expander",
           {{"verdict", std::string(to_string(exp.kind))},
            {"counterexample", one_based(exp.counterexample)}}},
          {"good",
           {{"verdict", std::string(to_string(good.kind))},
            {"failure", kFailures[static_cast<int>(good.failure)]},
            {"subset", one_based(good.subset)},
            {"low_degree_count", good.low_degree_count}}}};
}

void run_certify(const GraphSource& src, const CommonOptions& opts, const CertifyOptions& copts,
                 std::ostream& out) {
  const auto primes = resolve_primes(opts.primes);
  const auto loaded = load_graph(src, opts.seed);
  const Graph& g = loaded.graph;
  json config = base_config("certify", opts, primes);
  config["source"] = loaded.source;
  config["mode"] = copts.mode;
  config["restarts"] = copts.restarts;
  json result = certificate_json(certify_rank(g, primes));
  std::optional<double> p = copts.p ? copts.p : loaded.p;
  if (!p && g.order() >= 2) {
    const double pairs = static_cast<double>(g.order()) * static_cast<double>(g.order() - 1) / 2;
    p = static_cast<double>(g.edge_count()) / pairs;
  }
  config["p"] = p ? json(*p) : json(nullptr);
  if (p && g.order() >= 3 && *p > 0.0 && *p < 1.0) {
    result["structure"] = structure_json(g, *p, copts, opts.seed);
  } else {
    result["structure"] = nullptr;
    result["structure_notice"] = "structural checks need n >= 3 and 0 < p < 1";
  }
  write_output(opts, flat_text(config, result, opts.format), out);
}

void run_trace(const GraphSource& src, const CommonOptions& opts, std::ostream& out) {
  const auto primes = resolve_primes(opts.primes);
  json config = base_config("trace", opts, primes);
  ExposureTrace trace;
  if (!src.gnp.empty()) {
    const auto [ns, ps] = split_pair("--gnp", src.gnp);
    const auto n = parse_number<std::size_t>("--gnp", ns);
    const auto p = parse_number<double>("--gnp", ps);
    config["source"] = {{"gnp", {{"n", n}, {"p", p}}}, {"seed", opts.seed}};
    trace = trace_exposure(exposure_stream(n, p, opts.seed), primes.front());
  } else {
    const auto loaded = load_graph(src, opts.seed);
    config["source"] = loaded.source;
    trace = trace_exposure(loaded.graph, primes.front());
  }
  const auto violations = trace_violations(trace);
  std::ostringstream s;
  if (opts.format == "json") {
    json steps = json::array();
    for (const auto& st : trace.steps) {
      json row = {{"m", st.m}, {"rank", st.rank}, {"isolated", st.isolated},
                  {"deficiency", st.deficiency}};
      if (st.jump) {
        row["newly_attached"] = *st.newly_attached;
        row["normal"] = *st.normal;
        row["jump"] = *st.jump;
        row["border_case"] = std::string(to_string(*st.border_case));
      }
      steps.push_back(std::move(row));
    }
    s << json{{"config", config},
              {"result", {{"prime", trace.prime}, {"steps", steps}, {"violations", violations}}}}
             .dump(2)
      << '\n';
  } else {
    const char sep = opts.format == "csv" ? ',' : ' ';
    s << "# config: " << config.dump() << '\n';
    s << "m" << sep << "rank" << sep << "isolated" << sep << "deficiency" << sep
      << "newly_attached" << sep << "normal" << sep << "jump" << sep << "border_case\n";
    for (const auto& st : trace.steps) {
      s << st.m << sep << st.rank << sep << st.isolated << sep << st.deficiency;
      if (st.jump) {
        s << sep << *st.newly_attached << sep << (*st.normal ? 1 : 0) << sep << *st.jump << sep
          << to_string(*st.border_case);
      } else {
        s << sep << sep << sep << sep;
      }
      s << '\n';
    }
    s << "# violations: " << violations.size() << '\n';
    for (const auto& v : violations) s << "# " << v << '\n';
  }
  write_output(opts, s.str(), out);
}

void run_campaign(ExperimentConfig config, const CommonOptions& opts, const SweepOptions& sopts,
                  std::ostream& out, std::ostream& err) {
  config.n = sopts.n;
  config.samples = sopts.samples;
  config.master_seed = opts.seed;
  config.primes = opts.primes;
  config.output = opts.out;
  config.workers = opts.workers;
  const auto records = run_experiment(config);

  std::string text;
  if (opts.format == "json") {
    text = to_jsonl(records);
  } else if (opts.format == "csv") {
    text = "# config: " + config_json(config).dump() + '\n' + emit_plot_script(records).csv;
  } else {
    text = "# config: " + config_json(config).dump() + '\n' + summary_table(records);
  }
  if (!opts.out.empty() && opts.format == "json") {
    persist(records, opts.out);
    out << "# config: " << config_json(config).dump() << '\n' << summary_table(records);
  } else {
    write_output(opts, text, out);
  }
  if (!sopts.plot.empty()) {
    const auto artifact = emit_plot_script(records, sopts.plot + ".csv");
    CommonOptions data = opts;
    data.out = sopts.plot + ".csv";
    write_output(data, artifact.csv, out);
    data.out = sopts.plot + ".gp";
    write_output(data, artifact.script, out);
    err << "wrote " << sopts.plot << ".csv and " << sopts.plot << ".gp\n";
  }
}

void run_lo(const CommonOptions& opts, const LoOptions& lopts, std::ostream& out) {
  ScalingOptions scaling;
  const auto family = parse_family(lopts.family);
  scaling.family = *family;
  scaling.quadratic_samples = lopts.samples;
  scaling.seed = opts.seed;
  scaling.quadratic_max_n = lopts.quadratic_max_n;
  scaling.distinct_max_n = lopts.distinct_max_n;
  scaling.workers = opts.workers;
  json config = {{"command", "lo"},
                 {"n", lopts.n},
                 {"p", lopts.p},
                 {"family", lopts.family},
                 {"samples", lopts.samples},
                 {"seed", opts.seed},
                 {"quadratic_max_n", lopts.quadratic_max_n},
                 {"distinct_max_n", lopts.distinct_max_n},
                 {"workers", opts.workers},
                 {"format", opts.format},
                 {"out", opts.out}};
  const auto rows = lo_scaling_experiment(lopts.n, lopts.p, scaling);
  std::ostringstream s;
  if (opts.format == "csv") {
    s << "# config: " << config.dump() << '\n' << scaling_table_csv(rows);
  } else {
    json table = json::array();
    for (const auto& r : rows) {
      json row = {{"n", r.n}, {"p", r.p}, {"skipped", r.skipped}, {"notice", r.notice}};
      auto put = [&](const char* key, const std::optional<double>& v) {
        row[key] = v ? json(*v) : json(nullptr);
      };
      put("ones_atom", r.ones_atom);
      put("ones_scaled", r.ones_scaled);
      put("distinct_atom", r.distinct_atom);
      put("distinct_scaled", r.distinct_scaled);
      put("quadratic_atom", r.quadratic_atom);
      put("quadratic_ci", r.quadratic_ci);
      put("quadratic_scaled", r.quadratic_scaled);
      table.push_back(std::move(row));
    }
    if (opts.format == "json") {
      s << json{{"config", config}, {"result", table}}.dump(2) << '\n';
    } else {
      s << "# config: " << config.dump() << '\n';
      for (const auto& row : table) s << row.dump() << '\n';
    }
  }
  write_output(opts, s.str(), out);
}

int error_exit(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::mode:
    case ErrorKind::parity:
    case ErrorKind::infeasible:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact ranks of random graph adjacency matrices and seeded experiments",
               "graphrank"};
  app.require_subcommand(1);
  app.fallthrough(false);

  GraphSource source;
  CommonOptions common;
  CommonOptions lo_common;
  CertifyOptions certify;
  SweepOptions sweep;
  LoOptions lo;

  auto* rank_cmd = app.add_subcommand("rank", "Rank certificate of one graph");
  add_graph_source(*rank_cmd, source);
  add_common(*rank_cmd, common, false, false);

  auto* certify_cmd = app.add_subcommand(
      "certify", "Rank certificate plus separation, expansion and goodness checks");
  add_graph_source(*certify_cmd, source);
  add_common(*certify_cmd, common, false, false);
  certify_cmd->add_option("--mode", certify.mode, "Subset search mode")
      ->check(CLI::IsMember({"exact", "randomized"}))
      ->capture_default_str();
  certify_cmd->add_option("--restarts", certify.restarts, "Randomized search restarts")
      ->capture_default_str();
  certify_cmd->add_option("--p", certify.p,
                          "Edge probability for the thresholds (default: generator p or edge density)");

  auto* trace_cmd = app.add_subcommand("trace", "Vertex-exposure trace of rank and deficiency");
  add_graph_source(*trace_cmd, source);
  add_common(*trace_cmd, common, false, false);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Seeded G(n,p) campaign over p = c ln n / n (or an explicit p grid)");
  sweep_cmd->add_option("--n", sweep.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
  auto* c_opt = sweep_cmd->add_option("--c", sweep.c, "Comma-separated c grid")->delimiter(',');
  auto* p_opt = sweep_cmd->add_option("--p", sweep.p, "Comma-separated p grid (rank-equality)")
                    ->delimiter(',');
  c_opt->excludes(p_opt);
  sweep_cmd->add_flag("--exposure", sweep.exposure,
                      "Run vertex-exposure traces over the c grid (not with --p)");
  sweep_cmd->add_option("--samples", sweep.samples, "Trials per cell")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--plot", sweep.plot, "Write PREFIX.csv and a gnuplot script PREFIX.gp");
  add_common(*sweep_cmd, common, true, true);

  auto* gofy_cmd = app.add_subcommand("gofy", "Mean rank/n of G(n, y/n) over a y grid");
  gofy_cmd->add_option("--n", sweep.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
  gofy_cmd->add_option("--y", sweep.y, "Comma-separated y grid")->required()->delimiter(',');
  gofy_cmd->add_option("--samples", sweep.samples, "Trials per cell")->capture_default_str()
      ->check(CLI::PositiveNumber);
  gofy_cmd->add_option("--plot", sweep.plot, "Write PREFIX.csv and a gnuplot script PREFIX.gp");
  add_common(*gofy_cmd, common, true, true);

  auto* regular_cmd = app.add_subcommand("regular", "Nonsingularity of random d-regular graphs");
  regular_cmd->add_option("--n", sweep.n, "Number of vertices")->required()->check(CLI::PositiveNumber);
  regular_cmd->add_option("--d", sweep.d, "Comma-separated degree grid")->required()->delimiter(',');
  regular_cmd->add_option("--samples", sweep.samples, "Trials per cell")->capture_default_str()
      ->check(CLI::PositiveNumber);
  regular_cmd->add_option("--plot", sweep.plot, "Write PREFIX.csv and a gnuplot script PREFIX.gp");
  add_common(*regular_cmd, common, true, true);

  auto* lo_cmd = app.add_subcommand("lo", "Small-ball (atom) scaling table");
  lo_cmd->add_option("--n", lo.n, "Comma-separated n grid")->required()->delimiter(',');
  lo_cmd->add_option("--p", lo.p, "Comma-separated p grid")->required()->delimiter(',');
  lo_cmd->add_option("--family", lo.family, "Linear coefficient family")
      ->check(CLI::IsMember({"ones", "distinct", "both"}))
      ->capture_default_str();
  lo_cmd->add_option("--samples", lo.samples, "Monte Carlo samples for the quadratic atom")
      ->capture_default_str();
  lo_cmd->add_option("--quadratic-max-n", lo.quadratic_max_n, "Largest n for the quadratic column")
      ->capture_default_str();
  lo_cmd->add_option("--distinct-max-n", lo.distinct_max_n, "Largest n for the distinct family")
      ->capture_default_str();
  add_common(*lo_cmd, lo_common, true, true, "csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (rank_cmd->parsed()) {
      run_rank(source, common, out);
    } else if (certify_cmd->parsed()) {
      run_certify(source, common, certify, out);
    } else if (trace_cmd->parsed()) {
      run_trace(source, common, out);
    } else if (sweep_cmd->parsed()) {
      ExperimentConfig config;
      if (sweep.exposure && !sweep.p.empty()) throw UsageError("--exposure cannot be combined with --p");
      if (!sweep.p.empty()) {
        config.kind = ExperimentKind::rank_equality;
        config.grid = sweep.p;
      } else {
        if (sweep.c.empty()) throw UsageError("--c or --p is required");
        config.kind = sweep.exposure ? ExperimentKind::exposure_campaign
                                     : ExperimentKind::threshold_sweep;
        config.grid = sweep.c;
      }
      run_campaign(config, common, sweep, out, err);
    } else if (gofy_cmd->parsed()) {
      ExperimentConfig config;
      config.kind = ExperimentKind::g_of_y;
      config.grid = sweep.y;
      run_campaign(config, common, sweep, out, err);
    } else if (regular_cmd->parsed()) {
      ExperimentConfig config;
      config.kind = ExperimentKind::d_regular;
      config.grid = sweep.d;
      run_campaign(config, common, sweep, out, err);
    } else if (lo_cmd->parsed()) {
      run_lo(lo_common, lo, out);
    }
  } catch (const UsageError& e) {
    err << "graphrank: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "graphrank: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return error_exit(e);
  }
  return kExitOk;
}

}  // namespace graphrank::cli
