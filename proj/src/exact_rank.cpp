#include "graphrank/exact_rank.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "graphrank/error.hpp"
#include "graphrank/simd/kernels.hpp"

namespace graphrank {

std::string_view to_string(BorderCase kind) {
  switch (kind) {
    case BorderCase::outside_column_space: return "outside-column-space";
    case BorderCase::schur_nonzero: return "schur-nonzero";
    case BorderCase::schur_zero: return "schur-zero";
  }
  return "unknown";
}

std::size_t rank_mod_p(const FieldMatrix& matrix) {
  const std::size_t n = matrix.dimension();
  if (n == 0) return 0;
  const std::uint32_t p = matrix.modulus().value();
  const auto& kernels = simd::active_kernels();

  std::vector<Residue> a(matrix.data().begin(), matrix.data().end());
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  auto cell = [&](std::size_t r, std::size_t c) -> Residue& {
    return a[rows[r] * n + c];
  };

  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && cell(pivot, col) == 0) ++pivot;
    if (pivot == n) continue;
    std::swap(rows[rank], rows[pivot]);
    const Residue inv = matrix.modulus().inverse(cell(rank, col));
    const Residue* pivot_row = &a[rows[rank] * n];
    const std::size_t tail = n - col - 1;
    for (std::size_t r = rank + 1; r < n; ++r) {
      Residue& lead = cell(r, col);
      if (lead == 0) continue;
      const Residue factor = matrix.modulus().neg(matrix.modulus().mul(lead, inv));
      kernels.axpy_mod(&a[rows[r] * n + col + 1], pivot_row + col + 1, tail,
                       factor, p);
      lead = 0;
    }
    ++rank;
  }
  return rank;
}

namespace {

void check_oracle_limit(const IntegerMatrix& matrix) {
  if (matrix.dimension() > kOracleLimit) {
    throw Error(ErrorKind::oracle_limit,
                "exact oracle limited to n <= " + std::to_string(kOracleLimit) +
                    ", got n = " + std::to_string(matrix.dimension()));
  }
}

struct EchelonResult {
  std::size_t rank;
  mpz_class last_pivot;  // determinant up to sign when rank == n
  int sign;
};

// Fraction-free echelon form. After step r every live entry is an
// (r+1)x(r+1) minor of the input, so the division by the previous pivot is
// exact.
EchelonResult fraction_free_echelon(const IntegerMatrix& matrix,
                                    bool stop_at_zero_column) {
  const std::size_t n = matrix.dimension();
  std::vector<mpz_class> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i * n + j] = static_cast<long>(matrix.at(i, j));

  mpz_class previous = 1;
  mpz_class scratch;
  std::size_t rank = 0;
  int sign = 1;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && m[pivot * n + col] == 0) ++pivot;
    if (pivot == n) {
      if (stop_at_zero_column) return {rank, 0, sign};
      continue;
    }
    if (pivot != rank) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(m[pivot * n + j], m[rank * n + j]);
      sign = -sign;
    }
    const mpz_class& lead = m[rank * n + col];
    for (std::size_t r = rank + 1; r < n; ++r) {
      mpz_class& below = m[r * n + col];
      for (std::size_t j = col + 1; j < n; ++j) {
        mpz_class& target = m[r * n + j];
        target *= lead;
        scratch = below * m[rank * n + j];
        target -= scratch;
        mpz_divexact(target.get_mpz_t(), target.get_mpz_t(),
                     previous.get_mpz_t());
      }
      below = 0;
    }
    previous = lead;
    ++rank;
  }
  return {rank, previous, sign};
}

}  // namespace

mpz_class bareiss_determinant(const IntegerMatrix& matrix) {
  check_oracle_limit(matrix);
  if (matrix.dimension() == 0) return 1;
  const auto result = fraction_free_echelon(matrix, /*stop_at_zero_column=*/true);
  if (result.rank < matrix.dimension()) return 0;
  return result.sign * result.last_pivot;
}

std::size_t rational_rank(const IntegerMatrix& matrix) {
  check_oracle_limit(matrix);
  return fraction_free_echelon(matrix, /*stop_at_zero_column=*/false).rank;
}

// ---------------------------------------------------------------------------
// Bordered symmetric rank

bool SymmetricRankState::reduce(std::vector<Residue>& values,
                                std::vector<Residue>& combination) const {
  const auto& kernels = simd::active_kernels();
  const std::uint32_t p = modulus_.value();
  for (const auto& row : basis_) {
    const Residue lead = values[row.pivot];
    if (lead == 0) continue;
    const Residue factor = modulus_.neg(lead);
    kernels.axpy_mod(values.data() + row.pivot, row.values.data() + row.pivot,
                     values.size() - row.pivot, factor, p);
    kernels.axpy_mod(combination.data(), row.combination.data(),
                     combination.size(), factor, p);
  }
  return std::any_of(values.begin(), values.end(),
                     [](Residue v) { return v != 0; });
}

void SymmetricRankState::insert_basis_row(std::vector<Residue> values,
                                          std::vector<Residue> combination) {
  const auto first = std::find_if(values.begin(), values.end(),
                                  [](Residue v) { return v != 0; });
  const auto pivot = static_cast<std::size_t>(first - values.begin());
  const Residue inv = modulus_.inverse(*first);
  for (auto& v : values) v = modulus_.mul(v, inv);
  for (auto& c : combination) c = modulus_.mul(c, inv);
  auto at = std::lower_bound(
      basis_.begin(), basis_.end(), pivot,
      [](const BasisRow& row, std::size_t key) { return row.pivot < key; });
  basis_.insert(at, BasisRow{pivot, std::move(values), std::move(combination)});
}

BorderUpdate SymmetricRankState::extend(std::span<const Residue> column) {
  if (column.size() != m_ + 1) {
    throw Error(ErrorKind::contract,
                "border column has length " + std::to_string(column.size()) +
                    ", expected " + std::to_string(m_ + 1));
  }
  if (column[m_] != 0) {
    throw Error(ErrorKind::contract, "border column must have a zero diagonal entry");
  }
  for (Residue v : column) {
    if (v >= modulus_.value()) {
      throw Error(ErrorKind::contract, "border column entry not reduced");
    }
  }
  const auto& kernels = simd::active_kernels();
  const std::uint32_t p = modulus_.value();
  const Residue* u = column.data();

  // u is in col(Q_m) iff it is orthogonal to every left null vector.
  std::vector<Residue> null_dots(null_rows_.size());
  std::size_t witness = null_rows_.size();
  for (std::size_t k = 0; k < null_rows_.size(); ++k) {
    null_dots[k] = kernels.dot_mod(null_rows_[k].data(), u, m_, p);
    if (null_dots[k] != 0 && witness == null_rows_.size()) witness = k;
  }

  // Every stored row gains the coordinate for the new column.
  for (auto& row : basis_) {
    row.values.push_back(kernels.dot_mod(row.combination.data(), u, m_, p));
    row.combination.push_back(0);
  }
  for (auto& c : null_rows_) c.push_back(0);

  std::vector<Residue> values(column.begin(), column.end());
  std::vector<Residue> combination(m_ + 1, 0);
  combination[m_] = 1;

  BorderUpdate update{};
  if (witness < null_rows_.size()) {
    // (c*, 0)^T Q_{m+1} = (0, ..., 0, t*): a new pivot in the last column.
    const Residue inv = modulus_.inverse(null_dots[witness]);
    std::vector<Residue> lifted = std::move(null_rows_[witness]);
    for (auto& c : lifted) c = modulus_.mul(c, inv);
    std::vector<std::vector<Residue>> remaining;
    remaining.reserve(null_rows_.size() - 1);
    for (std::size_t k = 0; k < null_rows_.size(); ++k) {
      if (k == witness) continue;
      if (null_dots[k] != 0) {
        kernels.axpy_mod(null_rows_[k].data(), lifted.data(), m_ + 1,
                         modulus_.neg(null_dots[k]), p);
      }
      remaining.push_back(std::move(null_rows_[k]));
    }
    null_rows_ = std::move(remaining);
    std::vector<Residue> unit(m_ + 1, 0);
    unit[m_] = 1;
    basis_.push_back(BasisRow{m_, std::move(unit), std::move(lifted)});

    const bool independent = reduce(values, combination);
    if (!independent) {
      throw Error(ErrorKind::contract, "border update lost track of the column space");
    }
    insert_basis_row(std::move(values), std::move(combination));
    update = {BorderCase::outside_column_space, 2};
  } else {
    // The remainder of (u, 0) is (0, ..., 0, -w^T u) with Q_m w = u.
    if (reduce(values, combination)) {
      insert_basis_row(std::move(values), std::move(combination));
      update = {BorderCase::schur_nonzero, 1};
    } else {
      null_rows_.push_back(std::move(combination));
      update = {BorderCase::schur_zero, 0};
    }
  }
  ++m_;
  return update;
}

BorderUpdate border_rank_update(SymmetricRankState& state,
                                std::span<const Residue> new_column) {
  return state.extend(new_column);
}

}  // namespace graphrank
