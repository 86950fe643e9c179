#pragma once

#include <stdexcept>
#include <string>

namespace curv4 {

enum class ErrorCode {
  invalid_argument,
  symmetry_violation,
  non_orthonormal_frame,
  convention_mismatch,
  unknown_name,
  bad_params,
  out_of_domain,
  singular_metric,
  missing_potential,
  not_steady,
  non_constant_energy,
  shooting_failed,
  step_failure,
  unknown_campaign,
  constraint_mismatch,
  rejection_budget_exceeded,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::symmetry_violation: return "SymmetryViolation";
    case ErrorCode::non_orthonormal_frame: return "NonOrthonormalFrame";
    case ErrorCode::convention_mismatch: return "ConventionMismatch";
    case ErrorCode::unknown_name: return "UnknownName";
    case ErrorCode::bad_params: return "BadParams";
    case ErrorCode::out_of_domain: return "OutOfDomain";
    case ErrorCode::singular_metric: return "SingularMetric";
    case ErrorCode::missing_potential: return "MissingPotential";
    case ErrorCode::not_steady: return "NotSteady";
    case ErrorCode::non_constant_energy: return "NonConstantEnergy";
    case ErrorCode::shooting_failed: return "ShootingFailed";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::unknown_campaign: return "UnknownCampaign";
    case ErrorCode::constraint_mismatch: return "ConstraintMismatch";
    case ErrorCode::rejection_budget_exceeded: return "RejectionBudgetExceeded";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace curv4
