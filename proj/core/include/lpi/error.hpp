#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpi {

enum class Errc {
  DuplicateId,
  NonPositiveWeight,
  BadExponent,
  NonFiniteValue,
  SpaceMismatch,
  UnknownCell,
  BadFractions,
  NonPositiveDensity,
  BadR,
  ArityMismatch,
  SublatticeMismatch,
  TargetOutOfRange,
  InvalidDistribution,
  PreconditionFailed,
  NonTermination,
  GuardExceeded,
  MassMismatch,
  ParseError,
  ValidationError,
  UnknownReference,
};

std::string_view to_string(Errc code) noexcept;

/// The single exception type thrown by the library. `code()` names the
/// violated contract; `what()` carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lpi
