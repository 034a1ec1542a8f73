#include "fhj/error.hpp"

namespace fhj {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::pole: return "pole";
    case ErrorCode::convergence_budget: return "convergence-budget-exceeded";
    case ErrorCode::tail_not_negligible: return "tail-not-negligible";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::node_out_of_range: return "node-out-of-range";
    case ErrorCode::cfl_violation: return "cfl-violation";
    case ErrorCode::blow_up: return "blow-up";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::oracle_unavailable: return "oracle-unavailable";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace fhj
