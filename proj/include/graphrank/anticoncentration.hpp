#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphrank/matrix.hpp"

namespace graphrank {

/// Integer coefficients a_1..a_n of a random sum; q counts the nonzero ones.
class CoefficientVector {
 public:
  CoefficientVector() = default;
  explicit CoefficientVector(std::vector<std::int64_t> values);

  std::span<const std::int64_t> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t nonzero() const noexcept { return nonzero_; }

  static CoefficientVector all_ones(std::size_t n);
  /// a_i = i for i = 1..n.
  static CoefficientVector distinct(std::size_t n);

 private:
  std::vector<std::int64_t> values_;
  std::size_t nonzero_ = 0;
};

enum class AtomMode { exact, monte_carlo };

std::string_view to_string(AtomMode mode);

/// max_c P(S = c) for a discrete random sum S.
struct AtomEstimate {
  double value = 0.0;
  AtomMode mode = AtomMode::exact;
  double ci_halfwidth = 0.0;  // zero in exact mode
  std::int64_t argmax = 0;    // smallest c attaining the maximum
  // Exact mode: rational arithmetic when the vector has at most
  // kRationalAtomLimit entries (exact_fraction is then set and value is its
  // nearest double); otherwise double-precision convolution, with
  // `tolerance` bounding the absolute rounding error of `value`.
  std::optional<std::string> exact_fraction;
  double tolerance = 0.0;
  double mass_error = 0.0;  // |sum of the distribution - 1|, compensated sum
  std::size_t support = 0;  // support size (observed support in MC mode)
};

inline constexpr std::size_t kRationalAtomLimit = 64;
inline constexpr std::size_t kMaxAtomSupport = 10'000'000;
inline constexpr std::size_t kMinQuadraticSamples = 1000;

/// Exact atom of sum a_i z_i with z_i ~ Bernoulli(p). The double p is taken
/// as the exact dyadic rational it represents. ErrorKind::budget when the
/// integer support exceeds kMaxAtomSupport; ErrorKind::domain if p is not in
/// [0, 1].
AtomEstimate linear_atom_exact(const CoefficientVector& a, double p);

/// Exact atom for the signed variant P(z=1) = P(z=-1) = p, P(z=0) = 1-2p.
/// ErrorKind::domain if p is not in [0, 1/2].
AtomEstimate linear_atom_signed(const CoefficientVector& a, double p);

/// Monte Carlo atom of sum_ij a_ij z_i z_j. Sample k draws its z from
/// derive_seed(seed, k), so any split of the samples over `workers` threads
/// gives the same answer. The half-width is a normal-approximation 95%
/// interval, Bonferroni-corrected over the observed support to cover the
/// selection of the mode. ErrorKind::config if samples < kMinQuadraticSamples.
AtomEstimate quadratic_atom_mc(const IntegerMatrix& a, double p,
                               std::size_t samples, std::uint64_t seed,
                               std::size_t workers = 1);

/// Finite joint law of (X, Y): joint[x][y] = P(X = x, Y = y).
using JointDistribution = std::vector<std::vector<double>>;
using EventPredicate = std::function<bool(std::size_t x, std::size_t y)>;

struct DecouplingResult {
  double lhs = 0.0;    // P(E(X, Y))
  double joint = 0.0;  // P(E(X, Y) and E(X', Y))
  double rhs = 0.0;    // sqrt(joint)
  bool holds = false;  // lhs <= rhs (up to 1e-12)
};

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr std::size_t kMaxJointCells = 1'000'000;

/// Both sides of the decoupling inequality, computed exactly by summation.
/// X' is drawn from the law of X given Y, independently of X; when X and Y
/// are independent this is an independent copy of X. ErrorKind::input if the
/// table has negative entries, ragged rows, or does not sum to 1.
DecouplingResult decoupling_check(const JointDistribution& joint,
                                  const EventPredicate& event);

enum class CoefficientFamily { all_ones, distinct, both };

std::optional<CoefficientFamily> parse_family(std::string_view name);

struct ScalingOptions {
  CoefficientFamily family = CoefficientFamily::both;
  std::size_t quadratic_samples = 2000;
  std::uint64_t seed = 0;
  std::size_t quadratic_max_n = 1024;  // larger cells skip the MC column
  std::size_t distinct_max_n = 1024;   // a_i = i support grows as n^2
  std::size_t workers = 1;
};

struct ScalingRow {
  std::size_t n = 0;
  double p = 0.0;
  bool skipped = false;
  std::string notice;
  std::optional<double> ones_atom, ones_scaled;          // atom * sqrt(np)
  std::optional<double> distinct_atom, distinct_scaled;  // atom * sqrt(np)
  std::optional<double> quadratic_atom, quadratic_ci, quadratic_scaled;  // atom * (np)^{1/4}
};

/// One row per (n, p). Cells with np < 4 are skipped with a notice.
/// ErrorKind::domain if either grid is empty.
std::vector<ScalingRow> lo_scaling_experiment(std::span<const std::size_t> n_grid,
                                              std::span<const double> p_grid,
                                              const ScalingOptions& options = {});

std::string scaling_table_csv(std::span<const ScalingRow> rows);

}  // namespace graphrank
