#include "graphrank/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <gmpxx.h>

#include "graphrank/error.hpp"
#include "graphrank/rng.hpp"
#include "graphrank/simd/kernels.hpp"

namespace graphrank {

CoefficientVector::CoefficientVector(std::vector<std::int64_t> values)
    : values_(std::move(values)) {
  nonzero_ = static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](auto v) { return v != 0; }));
}

CoefficientVector CoefficientVector::all_ones(std::size_t n) {
  return CoefficientVector(std::vector<std::int64_t>(n, 1));
}

CoefficientVector CoefficientVector::distinct(std::size_t n) {
  std::vector<std::int64_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::int64_t>(i + 1);
  return CoefficientVector(std::move(v));
}

std::string_view to_string(AtomMode mode) {
  return mode == AtomMode::exact ? "exact" : "monte-carlo";
}

namespace {

constexpr double kUnitRoundoff = 0x1.0p-53;

// Sum of |a_i| times `spread`, plus one; throws if above the budget.
std::size_t support_size(const CoefficientVector& a, std::size_t spread) {
  std::uint64_t total = 0;
  for (auto v : a.values()) {
    const std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1
                                    : static_cast<std::uint64_t>(v);
    if (mag > kMaxAtomSupport) total = kMaxAtomSupport + 1;
    else total += mag * spread;
    if (total > kMaxAtomSupport) {
      throw Error(ErrorKind::budget,
                  "integer support exceeds " + std::to_string(kMaxAtomSupport) +
                      " points; use a Monte Carlo estimate instead");
    }
  }
  return static_cast<std::size_t>(total) + 1;
}

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) carry += (sum - t) + v;
    else carry += (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

// Distribution of a random integer sum over [low, low + mass.size()).
template <typename T>
struct Distribution {
  std::int64_t low = 0;
  std::vector<T> mass;
};

template <typename T>
AtomEstimate summarize(const Distribution<T>& dist) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < dist.mass.size(); ++k)
    if (dist.mass[k] > dist.mass[best]) best = k;
  AtomEstimate out;
  out.mode = AtomMode::exact;
  out.argmax = dist.low + static_cast<std::int64_t>(best);
  out.support = dist.mass.size();
  if constexpr (std::is_same_v<T, mpq_class>) {
    out.value = dist.mass[best].get_d();
    out.exact_fraction = dist.mass[best].get_str();
    mpq_class total = 0;
    for (const auto& v : dist.mass) total += v;
    out.mass_error = std::abs(mpq_class(total - 1).get_d());
  } else {
    out.value = dist.mass[best];
    out.mass_error = std::abs(compensated_sum(dist.mass) - 1.0);
  }
  return out;
}

// Bernoulli(p) step: new = (1-p) * old + p * (old shifted by a).
Distribution<double> convolve_bernoulli(const CoefficientVector& a, double p) {
  const auto& kernels = simd::active_kernels();
  Distribution<double> dist{0, {1.0}};
  const double keep = 1.0 - p;
  for (auto coef : a.values()) {
    if (coef == 0) continue;
    const std::size_t shift = static_cast<std::size_t>(coef < 0 ? -coef : coef);
    const std::size_t len = dist.mass.size();
    std::vector<double> next(len + shift, 0.0);
    if (coef > 0) {
      kernels.axpy_f64(next.data(), dist.mass.data(), len, keep);
      kernels.axpy_f64(next.data() + shift, dist.mass.data(), len, p);
    } else {
      kernels.axpy_f64(next.data() + shift, dist.mass.data(), len, keep);
      kernels.axpy_f64(next.data(), dist.mass.data(), len, p);
      dist.low -= static_cast<std::int64_t>(shift);
    }
    dist.mass = std::move(next);
  }
  return dist;
}

Distribution<mpq_class> convolve_bernoulli_exact(const CoefficientVector& a,
                                                 const mpq_class& p) {
  Distribution<mpq_class> dist{0, {mpq_class(1)}};
  const mpq_class keep = 1 - p;
  for (auto coef : a.values()) {
    if (coef == 0) continue;
    const std::size_t shift = static_cast<std::size_t>(coef < 0 ? -coef : coef);
    const std::size_t len = dist.mass.size();
    std::vector<mpq_class> next(len + shift);
    const std::size_t stay = coef > 0 ? 0 : shift;
    const std::size_t move = coef > 0 ? shift : 0;
    for (std::size_t k = 0; k < len; ++k) {
      next[k + stay] += keep * dist.mass[k];
      next[k + move] += p * dist.mass[k];
    }
    if (coef < 0) dist.low -= static_cast<std::int64_t>(shift);
    dist.mass = std::move(next);
  }
  return dist;
}

// Three-point step: new = (1-2p) * old + p * old(+a) + p * old(-a).
Distribution<double> convolve_signed(const CoefficientVector& a, double p) {
  const auto& kernels = simd::active_kernels();
  Distribution<double> dist{0, {1.0}};
  const double keep = 1.0 - 2.0 * p;
  for (auto coef : a.values()) {
    if (coef == 0) continue;
    const std::size_t shift = static_cast<std::size_t>(coef < 0 ? -coef : coef);
    const std::size_t len = dist.mass.size();
    std::vector<double> next(len + 2 * shift, 0.0);
    kernels.axpy_f64(next.data() + shift, dist.mass.data(), len, keep);
    kernels.axpy_f64(next.data(), dist.mass.data(), len, p);
    kernels.axpy_f64(next.data() + 2 * shift, dist.mass.data(), len, p);
    dist.low -= static_cast<std::int64_t>(shift);
    dist.mass = std::move(next);
  }
  return dist;
}

Distribution<mpq_class> convolve_signed_exact(const CoefficientVector& a,
                                              const mpq_class& p) {
  Distribution<mpq_class> dist{0, {mpq_class(1)}};
  const mpq_class keep = 1 - 2 * p;
  for (auto coef : a.values()) {
    if (coef == 0) continue;
    const std::size_t shift = static_cast<std::size_t>(coef < 0 ? -coef : coef);
    const std::size_t len = dist.mass.size();
    std::vector<mpq_class> next(len + 2 * shift);
    for (std::size_t k = 0; k < len; ++k) {
      next[k + shift] += keep * dist.mass[k];
      next[k] += p * dist.mass[k];
      next[k + 2 * shift] += p * dist.mass[k];
    }
    dist.low -= static_cast<std::int64_t>(shift);
    dist.mass = std::move(next);
  }
  return dist;
}

AtomEstimate floating_summary(const Distribution<double>& dist, std::size_t steps) {
  AtomEstimate out = summarize(dist);
  out.tolerance = out.value * static_cast<double>(3 * steps + 2) * kUnitRoundoff;
  return out;
}

}  // namespace

AtomEstimate linear_atom_exact(const CoefficientVector& a, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::domain, "Bernoulli parameter outside [0, 1]");
  }
  support_size(a, 1);
  if (a.size() <= kRationalAtomLimit) {
    return summarize(convolve_bernoulli_exact(a, mpq_class(p)));
  }
  return floating_summary(convolve_bernoulli(a, p), a.nonzero());
}

AtomEstimate linear_atom_signed(const CoefficientVector& a, double p) {
  if (!(p >= 0.0 && p <= 0.5)) {
    throw Error(ErrorKind::domain, "signed variant needs 0 <= p <= 1/2");
  }
  support_size(a, 2);
  if (a.size() <= kRationalAtomLimit) {
    return summarize(convolve_signed_exact(a, mpq_class(p)));
  }
  return floating_summary(convolve_signed(a, p), a.nonzero());
}

AtomEstimate quadratic_atom_mc(const IntegerMatrix& a, double p,
                               std::size_t samples, std::uint64_t seed,
                               std::size_t workers) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::domain, "Bernoulli parameter outside [0, 1]");
  }
  if (samples < kMinQuadraticSamples) {
    throw Error(ErrorKind::config, "quadratic atom needs at least " +
                                       std::to_string(kMinQuadraticSamples) +
                                       " samples");
  }
  const std::size_t n = a.dimension();
  auto run = [&](std::size_t begin, std::size_t end,
                 std::map<std::int64_t, std::size_t>& counts) {
    std::vector<std::size_t> support;
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng(derive_seed(seed, k));
      support.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(p)) support.push_back(i);
      std::int64_t value = 0;
      for (std::size_t i : support) {
        const auto row = a.row(i);
        for (std::size_t j : support) value += row[j];
      }
      ++counts[value];
    }
  };

  workers = std::max<std::size_t>(1, std::min(workers, samples));
  std::vector<std::map<std::int64_t, std::size_t>> partial(workers);
  if (workers == 1) {
    run(0, samples, partial[0]);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (samples + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(samples, w * chunk);
      const std::size_t end = std::min(samples, begin + chunk);
      threads.emplace_back(run, begin, end, std::ref(partial[w]));
    }
    for (auto& t : threads) t.join();
  }
  std::map<std::int64_t, std::size_t> counts;
  for (const auto& part : partial)
    for (auto [value, count] : part) counts[value] += count;

  AtomEstimate out;
  out.mode = AtomMode::monte_carlo;
  std::size_t best = 0;
  for (auto [value, count] : counts) {
    if (count > best) {
      best = count;
      out.argmax = value;
    }
  }
  const double total = static_cast<double>(samples);
  out.value = static_cast<double>(best) / total;
  out.support = counts.size();
  const double alpha = 0.05 / static_cast<double>(counts.size());
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
  out.ci_halfwidth = z * std::sqrt(out.value * (1.0 - out.value) / total);
  return out;
}

DecouplingResult decoupling_check(const JointDistribution& joint,
                                  const EventPredicate& event) {
  const std::size_t xs = joint.size();
  if (xs == 0) throw Error(ErrorKind::input, "empty joint distribution");
  const std::size_t ys = joint.front().size();
  if (ys == 0 || xs * ys > kMaxJointCells) {
    throw Error(ErrorKind::input, "joint table must have between 1 and " +
                                      std::to_string(kMaxJointCells) + " cells");
  }
  std::vector<double> cells;
  cells.reserve(xs * ys);
  for (const auto& row : joint) {
    if (row.size() != ys) throw Error(ErrorKind::input, "ragged joint table");
    for (double v : row) {
      if (!(v >= 0.0)) throw Error(ErrorKind::input, "negative probability");
      cells.push_back(v);
    }
  }
  const double mass = compensated_sum(cells);
  if (std::abs(mass - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::input, "joint probabilities sum to " +
                                      std::to_string(mass) + ", not 1");
  }
  DecouplingResult out;
  for (std::size_t y = 0; y < ys; ++y) {
    double py = 0.0;
    double hit = 0.0;  // P(E, Y = y)
    for (std::size_t x = 0; x < xs; ++x) {
      py += joint[x][y];
      if (event(x, y)) hit += joint[x][y];
    }
    out.lhs += hit;
    if (py > 0.0) out.joint += hit * hit / py;
  }
  out.rhs = std::sqrt(out.joint);
  out.holds = out.lhs <= out.rhs + kProbabilityTolerance;
  return out;
}

std::optional<CoefficientFamily> parse_family(std::string_view name) {
  if (name == "ones" || name == "all-ones") return CoefficientFamily::all_ones;
  if (name == "distinct") return CoefficientFamily::distinct;
  if (name == "both") return CoefficientFamily::both;
  return std::nullopt;
}

std::vector<ScalingRow> lo_scaling_experiment(std::span<const std::size_t> n_grid,
                                              std::span<const double> p_grid,
                                              const ScalingOptions& options) {
  if (n_grid.empty() || p_grid.empty()) {
    throw Error(ErrorKind::domain, "scaling experiment needs non-empty n and p grids");
  }
  const bool ones = options.family != CoefficientFamily::distinct;
  const bool distinct = options.family != CoefficientFamily::all_ones;
  std::vector<ScalingRow> rows;
  for (std::size_t n : n_grid) {
    for (double p : p_grid) {
      ScalingRow row;
      row.n = n;
      row.p = p;
      const double np = static_cast<double>(n) * p;
      if (!(p > 0.0 && p <= 1.0) || np < 4.0) {
        row.skipped = true;
        row.notice = "skipped: needs np >= 4";
        rows.push_back(std::move(row));
        continue;
      }
      std::vector<std::string> notes;
      if (ones) {
        const auto atom = linear_atom_exact(CoefficientVector::all_ones(n), p);
        row.ones_atom = atom.value;
        row.ones_scaled = atom.value * std::sqrt(np);
      }
      if (distinct) {
        if (n <= options.distinct_max_n) {
          const auto atom = linear_atom_exact(CoefficientVector::distinct(n), p);
          row.distinct_atom = atom.value;
          row.distinct_scaled = atom.value * std::sqrt(np);
        } else {
          notes.push_back("distinct family skipped above n=" +
                          std::to_string(options.distinct_max_n));
        }
      }
      if (n <= options.quadratic_max_n) {
        IntegerMatrix all_ones(n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) all_ones.set(i, j, 1);
        const auto atom = quadratic_atom_mc(all_ones, p, options.quadratic_samples,
                                            derive_seed(options.seed, n, rows.size()),
                                            options.workers);
        row.quadratic_atom = atom.value;
        row.quadratic_ci = atom.ci_halfwidth;
        row.quadratic_scaled = atom.value * std::pow(np, 0.25);
      } else {
        notes.push_back("quadratic column skipped above n=" +
                        std::to_string(options.quadratic_max_n));
      }
      for (std::size_t k = 0; k < notes.size(); ++k)
        row.notice += (k ? "; " : "") + notes[k];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string scaling_table_csv(std::span<const ScalingRow> rows) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "n,p,np,ones_atom,ones_scaled,distinct_atom,distinct_scaled,"
         "quadratic_atom,quadratic_ci,quadratic_scaled,notice\n";
  auto cell = [&](const std::optional<double>& v) {
    if (v) out << *v;
    out << ',';
  };
  for (const auto& row : rows) {
    out << row.n << ',' << row.p << ',' << static_cast<double>(row.n) * row.p << ',';
    cell(row.ones_atom);
    cell(row.ones_scaled);
    cell(row.distinct_atom);
    cell(row.distinct_scaled);
    cell(row.quadratic_atom);
    cell(row.quadratic_ci);
    cell(row.quadratic_scaled);
    out << row.notice << '\n';
  }
  return out.str();
}

}  // namespace graphrank
