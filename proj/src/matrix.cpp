#include "graphrank/matrix.hpp"

#include <sstream>

#include "graphrank/error.hpp"

namespace graphrank {

IntegerMatrix::IntegerMatrix(
    std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : n_(rows.size()), entries_() {
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(ErrorKind::contract, "IntegerMatrix rows must be square");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

IntegerMatrix IntegerMatrix::adjacency(const Graph& graph) {
  IntegerMatrix m(graph.order());
  for (auto [u, v] : graph.edges()) {
    m.set(u, v, 1);
    m.set(v, u, 1);
  }
  return m;
}

bool IntegerMatrix::is_symmetric() const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

FieldMatrix FieldMatrix::adjacency(const Graph& graph, PrimeModulus modulus) {
  if (graph.order() >= modulus.value()) {
    throw Error(ErrorKind::contract, "graph order must stay below the modulus");
  }
  FieldMatrix m(graph.order(), modulus);
  for (Vertex u = 0; u < graph.order(); ++u)
    for (Vertex v : graph.neighbors(u)) m.entries_[u * m.n_ + v] = 1;
  return m;
}

FieldMatrix FieldMatrix::reduce(const IntegerMatrix& matrix,
                                PrimeModulus modulus) {
  FieldMatrix m(matrix.dimension(), modulus);
  for (std::size_t i = 0; i < m.n_; ++i)
    for (std::size_t j = 0; j < m.n_; ++j)
      m.entries_[i * m.n_ + j] = modulus.reduce(matrix.at(i, j));
  return m;
}

void FieldMatrix::set(std::size_t i, std::size_t j, Residue value) {
  if (value >= modulus_.value()) {
    throw Error(ErrorKind::contract, "residue not reduced modulo p");
  }
  entries_[i * n_ + j] = value;
}

std::string FieldMatrix::dump() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) out << ' ';
      out << at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace graphrank
