#include "graphrank/error.hpp"

namespace graphrank {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::parse: return "parse";
    case ErrorKind::oracle_limit: return "oracle-limit";
    case ErrorKind::budget: return "budget";
    case ErrorKind::contract: return "contract";
    case ErrorKind::mode: return "mode";
    case ErrorKind::parity: return "parity";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::input: return "input";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace graphrank
