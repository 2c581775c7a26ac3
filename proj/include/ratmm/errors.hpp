#ifndef RATMM_ERRORS_HPP
#define RATMM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratmm {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  duplicate_nodes,
  too_few_nodes,
  denominator_vanishes,
  zero_denominator,
  rank_deficient,
  degenerate_denominator_space,
  eigen_solve_failure,
  all_zero_errors,
  infeasible_sign,
  precondition_violated,
  lp_failure,
  cycle_detected,
  numerical_breakdown,
  parse_error,
  io_error,
  unknown_shape,
  bad_count,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::duplicate_nodes: return "DuplicateNodes";
    case ErrorKind::too_few_nodes: return "TooFewNodes";
    case ErrorKind::denominator_vanishes: return "DenominatorVanishes";
    case ErrorKind::zero_denominator: return "ZeroDenominator";
    case ErrorKind::rank_deficient: return "RankDeficient";
    case ErrorKind::degenerate_denominator_space: return "DegenerateDenominatorSpace";
    case ErrorKind::eigen_solve_failure: return "EigenSolveFailure";
    case ErrorKind::all_zero_errors: return "AllZeroErrors";
    case ErrorKind::infeasible_sign: return "InfeasibleSign";
    case ErrorKind::precondition_violated: return "PreconditionViolated";
    case ErrorKind::lp_failure: return "LPFailure";
    case ErrorKind::cycle_detected: return "CycleDetected";
    case ErrorKind::numerical_breakdown: return "NumericalBreakdown";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::io_error: return "IOError";
    case ErrorKind::unknown_shape: return "UnknownShape";
    case ErrorKind::bad_count: return "BadCount";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind. `index` is the offending node
/// for node-local failures (pole at a node, duplicate node), otherwise npos.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorKind kind, const std::string& what, std::size_t index = npos)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::size_t index_;
};

}  // namespace ratmm

#endif  // RATMM_ERRORS_HPP
