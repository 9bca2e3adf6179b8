#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "graphrank/graph.hpp"
#include "graphrank/prime.hpp"
#include "graphrank/structure.hpp"

namespace graphrank {

enum class CertificateStatus {
  certified_equal,      // rank(Q_G) = n - i(G), exact
  certified_deficient,  // rank(Q_G) < n - i(G), proven
  lower_bound_only,     // mod-p rank < n - i(G), but no proof of deficiency
};

std::string_view to_string(CertificateStatus status);

/// Rank of Q_G sandwiched between mod-p lower bounds and the isolated-vertex
/// upper bound n - i(G).
///
/// `rank` is the best lower bound found (exact when rank_exact is set).
/// `structural_bound` = n - i(G) - duplicate-row excess is an upper bound on
/// the rational rank; whenever rank reaches it the value is exact as well.
struct RankCertificate {
  std::size_t rank = 0;
  std::size_t n = 0;
  std::size_t isolated = 0;
  CertificateStatus status = CertificateStatus::lower_bound_only;
  bool rank_exact = false;
  bool rational_confirmed = false;  // the exact oracle was consulted
  std::size_t structural_bound = 0;
  std::vector<std::uint32_t> primes_used;
  std::vector<DeficiencyWitness> witnesses;

  std::size_t fact_one_bound() const noexcept { return n - isolated; }
};

/// Escalation: primes in order until one reaches n - i(G); if none does, the
/// exact rational oracle (n <= kOracleLimit) or a duplicate-row witness
/// decides deficiency. Throws ErrorKind::config on an empty prime list.
RankCertificate certify_rank(const Graph& graph,
                             std::span<const PrimeModulus> primes);

}  // namespace graphrank
