#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "graphrank/graph.hpp"
#include "graphrank/prime.hpp"

namespace graphrank {

/// Dense square matrix of exact signed integers, row-major.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntegerMatrix adjacency(const Graph& graph);

  std::size_t dimension() const noexcept { return n_; }
  std::int64_t at(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * n_ + j];
  }
  void set(std::size_t i, std::size_t j, std::int64_t value) noexcept {
    entries_[i * n_ + j] = value;
  }
  std::span<const std::int64_t> row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }
  bool is_symmetric() const noexcept;

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> entries_;
};

/// Dense square matrix over Z/pZ with entries kept in [0, p).
class FieldMatrix {
 public:
  FieldMatrix(std::size_t n, PrimeModulus modulus)
      : n_(n), modulus_(modulus), entries_(n * n, 0) {}

  /// Adjacency matrix Q_G: symmetric, zero diagonal, 0/1 entries.
  static FieldMatrix adjacency(const Graph& graph, PrimeModulus modulus);
  static FieldMatrix reduce(const IntegerMatrix& matrix, PrimeModulus modulus);

  std::size_t dimension() const noexcept { return n_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }

  Residue at(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * n_ + j];
  }
  /// Throws ErrorKind::contract if value is not reduced.
  void set(std::size_t i, std::size_t j, Residue value);

  std::span<const Residue> row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }
  std::span<const Residue> data() const noexcept { return entries_; }

  /// Debug dump: one row per line, residues separated by single spaces.
  std::string dump() const;

 private:
  std::size_t n_;
  PrimeModulus modulus_;
  std::vector<Residue> entries_;
};

}  // namespace graphrank
