#include "graphrank/certify.hpp"

#include <algorithm>

#include "graphrank/error.hpp"
#include "graphrank/exact_rank.hpp"
#include "graphrank/matrix.hpp"

namespace graphrank {

std::string_view to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::certified_equal: return "certified-equal";
    case CertificateStatus::certified_deficient: return "certified-deficient";
    case CertificateStatus::lower_bound_only: return "lower-bound-only";
  }
  return "unknown";
}

RankCertificate certify_rank(const Graph& graph,
                             std::span<const PrimeModulus> primes) {
  if (primes.empty()) {
    throw Error(ErrorKind::config, "certify_rank needs at least one prime");
  }
  RankCertificate cert;
  cert.n = graph.order();
  cert.isolated = isolated_count(graph);
  cert.witnesses = find_witnesses(graph);
  cert.structural_bound =
      cert.fact_one_bound() - duplicate_row_excess(cert.witnesses);

  const std::size_t target = cert.fact_one_bound();
  for (const auto& prime : primes) {
    cert.primes_used.push_back(prime.value());
    cert.rank = std::max(cert.rank, rank_mod_p(FieldMatrix::adjacency(graph, prime)));
    if (cert.rank == target) break;
  }

  if (cert.rank == target) {
    cert.status = CertificateStatus::certified_equal;
    cert.rank_exact = true;
    return cert;
  }
  if (cert.n <= kOracleLimit) {
    cert.rank = rational_rank(IntegerMatrix::adjacency(graph));
    cert.rational_confirmed = true;
    cert.rank_exact = true;
    cert.status = cert.rank == target ? CertificateStatus::certified_equal
                                      : CertificateStatus::certified_deficient;
    return cert;
  }
  cert.rank_exact = cert.rank == cert.structural_bound;
  cert.status = cert.structural_bound < target
                    ? CertificateStatus::certified_deficient
                    : CertificateStatus::lower_bound_only;
  return cert;
}

}  // namespace graphrank
