#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace graphrank {

enum class ExperimentKind {
  threshold_sweep,    // grid: c, p = c ln n / n
  rank_equality,      // grid: p
  g_of_y,             // grid: y, p = y / n
  d_regular,          // grid: d
  exposure_campaign,  // grid: c, p = c ln n / n
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::rank_equality;
  std::size_t n = 0;
  std::vector<double> grid;
  std::size_t samples = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::uint32_t> primes;  // empty means the default pair
  std::string output;                 // not part of the digest
  std::size_t workers = 1;            // not part of the digest
  double exposure_fraction = 0.3;     // m_start = ceil(fraction * n)
};

/// ErrorKind::config or ErrorKind::domain on an invalid config.
void validate(const ExperimentConfig& config);

nlohmann::json config_json(const ExperimentConfig& config);

/// 16 hex digits of FNV-1a over the canonical config, without output/workers.
std::string config_digest(const ExperimentConfig& config);

enum class RecordType { config, trial, cell, summary };

std::string_view to_string(RecordType type);
std::optional<RecordType> parse_record_type(std::string_view name);

/// One JSONL line. Trial records carry seed = derive_seed(master, cell,
/// trial). Everything that may differ between identical runs (wall time,
/// worker count, output path) lives under "timing".
struct ExperimentRecord {
  ExperimentKind kind = ExperimentKind::rank_equality;
  RecordType type = RecordType::trial;
  std::string digest;
  std::uint64_t master_seed = 0;
  std::size_t cell = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json outcome = nlohmann::json::object();
  double wall_ms = 0.0;
  nlohmann::json runtime = nlohmann::json::object();  // extra "timing" fields

  bool operator==(const ExperimentRecord&) const = default;
};

nlohmann::json record_json(const ExperimentRecord& record, bool with_timing = true);
ExperimentRecord record_from_json(const nlohmann::json& value);

std::vector<ExperimentRecord> run_rank_equality(const ExperimentConfig& config);
std::vector<ExperimentRecord> sweep_threshold(const ExperimentConfig& config);
std::vector<ExperimentRecord> estimate_g(const ExperimentConfig& config);
std::vector<ExperimentRecord> dregular_experiment(const ExperimentConfig& config);
std::vector<ExperimentRecord> exposure_campaign(const ExperimentConfig& config);

/// Dispatches on config.kind.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

/// Rank of a 2-regular graph from its cycle lengths.
std::size_t cycle_union_rank(std::span<const std::size_t> cycle_lengths);

/// JSONL text; timing fields omitted when with_timing is false.
/// Throws ErrorKind::contract if a record has rank > n - i(G).
std::string to_jsonl(std::span<const ExperimentRecord> records, bool with_timing = true);
std::vector<ExperimentRecord> from_jsonl(std::string_view text);

/// ErrorKind::io on file failures; ErrorKind::parse with a line number on
/// malformed lines.
void persist(std::span<const ExperimentRecord> records, const std::string& path);
std::vector<ExperimentRecord> load(const std::string& path);

struct PlotArtifact {
  std::string data_file;  // name the script reads
  std::string csv;
  std::string script;     // gnuplot
};

/// Cell records of one kind to CSV plus a gnuplot script.
/// ErrorKind::domain on empty input or mixed kinds.
PlotArtifact emit_plot_script(std::span<const ExperimentRecord> records,
                              const std::string& data_file = "plot.csv");

/// Plain-text table of the cell records.
std::string summary_table(std::span<const ExperimentRecord> records);

}  // namespace graphrank
