#pragma once

#include <stdexcept>
#include <string>

namespace fhj {

enum class ErrorCode {
  domain,             // argument outside the operator's domain
  pole,               // gamma at a non-positive integer
  convergence_budget, // series/iteration budget exhausted
  tail_not_negligible,
  divergence,         // improper integral fails its small-tau bound
  node_out_of_range,
  cfl_violation,
  blow_up,
  grid_mismatch,
  oracle_unavailable,
  config,
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Config errors carry the JSON path of the offending field ("hamiltonian.type").
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& what)
      : Error(ErrorCode::config, field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Blow-up keeps the time step at which a non-finite value appeared.
class BlowUpError : public Error {
public:
  BlowUpError(std::size_t step, const std::string& what)
      : Error(ErrorCode::blow_up, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

}  // namespace fhj
