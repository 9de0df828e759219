#pragma once

#include <stdexcept>
#include <string>

namespace jamison {

enum class errc {
  invalid_sequence,
  horizon_exceeds_sequence,
  invalid_resolution,
  empty_horizons,
  invalid_eta,
  precondition_violated,
  out_of_domain,
  degenerate_input,
  depth_exceeds_sequence,
  invalid_index,
  index_out_of_range,
  negative_degree,
  size_mismatch,
  non_square,
  weight_list_too_short,
  budget_infeasible,
  budgets_not_certified,
  spectrum_outside_domain,
  degenerate_spectrum,
  config_invalid,
  io_error,
};

inline const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_sequence: return "InvalidSequence";
    case errc::horizon_exceeds_sequence: return "HorizonExceedsSequence";
    case errc::invalid_resolution: return "InvalidResolution";
    case errc::empty_horizons: return "EmptyHorizons";
    case errc::invalid_eta: return "InvalidEta";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::depth_exceeds_sequence: return "DepthExceedsSequence";
    case errc::invalid_index: return "InvalidIndex";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::negative_degree: return "NegativeDegree";
    case errc::size_mismatch: return "SizeMismatch";
    case errc::non_square: return "NonSquare";
    case errc::weight_list_too_short: return "WeightListTooShort";
    case errc::budget_infeasible: return "BudgetInfeasible";
    case errc::budgets_not_certified: return "BudgetsNotCertified";
    case errc::spectrum_outside_domain: return "SpectrumOutsideDomain";
    case errc::degenerate_spectrum: return "DegenerateSpectrum";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Base exception; carries a machine-readable code.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Raised when no admissible eigenvalue offset exists at some level.
class budget_infeasible : public error {
 public:
  budget_infeasible(int level, std::string predicate, const std::string& detail)
      : error(errc::budget_infeasible,
              "level " + std::to_string(level) + " (" + predicate + "): " + detail),
        level_(level),
        predicate_(std::move(predicate)) {}
  int level() const noexcept { return level_; }
  const std::string& predicate() const noexcept { return predicate_; }

 private:
  int level_;
  std::string predicate_;
};

}  // namespace jamison
