#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "graphrank/matrix.hpp"
#include "graphrank/prime.hpp"

namespace graphrank {

/// Largest dimension accepted by the exact integer oracles. Beyond it,
/// Hadamard's bound makes the fraction-free entries too large to be useful
/// as a routine check, and the oracles refuse rather than switch methods.
inline constexpr std::size_t kOracleLimit = 64;

/// Rank over GF(p) by dense row-echelon elimination. Pivot = first nonzero
/// entry in the current column. Never exceeds the rank over Q.
std::size_t rank_mod_p(const FieldMatrix& matrix);

/// Exact determinant by Bareiss fraction-free elimination.
/// Throws ErrorKind::oracle_limit when n > kOracleLimit.
mpz_class bareiss_determinant(const IntegerMatrix& matrix);

/// Exact rank over Q by fraction-free echelon elimination.
/// Throws ErrorKind::oracle_limit when n > kOracleLimit.
std::size_t rational_rank(const IntegerMatrix& matrix);

/// How the rank changed when a symmetric matrix was bordered by one
/// row/column (u, 0).
enum class BorderCase {
  outside_column_space,  // u not in col(Q): rank + 2
  schur_nonzero,         // Q w = u and w^T u != 0: rank + 1
  schur_zero,            // Q w = u and w^T u == 0: rank + 0
};

std::string_view to_string(BorderCase kind);

struct BorderUpdate {
  BorderCase kind;
  std::size_t jump;  // 2, 1 or 0
};

/// Incremental rank of a symmetric matrix over GF(p) that grows by bordering:
///
///   Q_{m+1} = [ Q_m  u ]
///             [ u^T  0 ]
///
/// The state keeps an echelon basis of the row space of Q_m in which each
/// basis row also records its combination of the original rows, together
/// with a basis of the left null space. u lies in col(Q_m) exactly when it is
/// orthogonal to that null space; otherwise the basis rows give w with
/// Q_m w = u, and the rank grows by one iff w^T u != 0.
class SymmetricRankState {
 public:
  explicit SymmetricRankState(PrimeModulus modulus) : modulus_(modulus) {}

  std::size_t dimension() const noexcept { return m_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const PrimeModulus& modulus() const noexcept { return modulus_; }

  /// `column` has length dimension() + 1 and a zero last entry (the new
  /// diagonal element); entries must be reduced. Throws
  /// ErrorKind::contract otherwise.
  BorderUpdate extend(std::span<const Residue> column);

 private:
  struct BasisRow {
    std::size_t pivot;               // first nonzero column; value there is 1
    std::vector<Residue> values;     // this row of the echelon form
    std::vector<Residue> combination;  // coefficients over the rows of Q_m
  };

  // Reduces (values, combination) against the basis. Returns true if a
  // nonzero remainder was left.
  bool reduce(std::vector<Residue>& values,
              std::vector<Residue>& combination) const;
  void insert_basis_row(std::vector<Residue> values,
                        std::vector<Residue> combination);

  PrimeModulus modulus_;
  std::size_t m_ = 0;
  std::vector<BasisRow> basis_;                 // sorted by pivot
  std::vector<std::vector<Residue>> null_rows_;  // c with c^T Q_m = 0
};

/// Functional form of SymmetricRankState::extend.
BorderUpdate border_rank_update(SymmetricRankState& state,
                                std::span<const Residue> new_column);

}  // namespace graphrank
