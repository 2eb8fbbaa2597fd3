#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace marchenko {

enum class ErrorCode {
  InvalidArgument,
  SupportViolation,
  NegativeWeight,
  BadR,
  NegativeMomentAtZero,
  OnSupport,
  BranchAmbiguity,
  NonConvergent,
  MomentMismatch,
  InadmissibleSigma,
  HankelBreakdown,
  AdmissibilityRequired,
  FreeOperator,
  TruncationBlowup,
  StepTooLarge,
  BlowUp,
  SchemaError,
  UnknownCommand,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library is reported through this type. The optional
// fields carry the machine-readable context that the CLI serializes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // JSON pointer into the input document (schema errors).
  const std::string& pointer() const noexcept { return pointer_; }
  Error& with_pointer(std::string p) {
    pointer_ = std::move(p);
    return *this;
  }

  // Offending location (position x, atom position t, ...). NaN when unset.
  double location() const noexcept { return location_; }
  Error& with_location(double x) {
    location_ = x;
    return *this;
  }

  // Offending index (Hankel pivot, moment order, ...). -1 when unset.
  long index() const noexcept { return index_; }
  Error& with_index(long i) {
    index_ = i;
    return *this;
  }

 private:
  ErrorCode code_;
  std::string pointer_;
  double location_ = std::numeric_limits<double>::quiet_NaN();
  long index_ = -1;
};

}  // namespace marchenko
