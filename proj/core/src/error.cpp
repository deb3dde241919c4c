#include "lpi/error.hpp"

namespace lpi {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::BadExponent: return "BadExponent";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::UnknownCell: return "UnknownCell";
    case Errc::BadFractions: return "BadFractions";
    case Errc::NonPositiveDensity: return "NonPositiveDensity";
    case Errc::BadR: return "BadR";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::SublatticeMismatch: return "SublatticeMismatch";
    case Errc::TargetOutOfRange: return "TargetOutOfRange";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::NonTermination: return "NonTermination";
    case Errc::GuardExceeded: return "GuardExceeded";
    case Errc::MassMismatch: return "MassMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::UnknownReference: return "UnknownReference";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace lpi
