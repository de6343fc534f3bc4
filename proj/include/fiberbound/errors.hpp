#pragma once

#include <stdexcept>
#include <string>

namespace fiberbound {

enum class Errc {
    NotDivisible,
    ArityMismatch,
    PthPowerHazard,
    RationalModeUnsupported,
    SOutOfRange,
    AllMinorsZero,
    CharDividesDegree,
    FDoesNotDivideMinor,
    SingularChange,
    AllCombinationsZero,
    ChainViolation,
    BasePointError,
    ParseError,
    NotHomogeneous,
    MixedDegrees,
    CommonFactor,
    BadPoint,
    InvalidField,
};

inline const char* errc_name(Errc code)
{
    switch (code) {
        case Errc::NotDivisible: return "NotDivisible";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::PthPowerHazard: return "PthPowerHazard";
        case Errc::RationalModeUnsupported: return "RationalModeUnsupported";
        case Errc::SOutOfRange: return "SOutOfRange";
        case Errc::AllMinorsZero: return "AllMinorsZero";
        case Errc::CharDividesDegree: return "CharDividesDegree";
        case Errc::FDoesNotDivideMinor: return "FDoesNotDivideMinor";
        case Errc::SingularChange: return "SingularChange";
        case Errc::AllCombinationsZero: return "AllCombinationsZero";
        case Errc::ChainViolation: return "ChainViolation";
        case Errc::BasePointError: return "BasePointError";
        case Errc::ParseError: return "ParseError";
        case Errc::NotHomogeneous: return "NotHomogeneous";
        case Errc::MixedDegrees: return "MixedDegrees";
        case Errc::CommonFactor: return "CommonFactor";
        case Errc::BadPoint: return "BadPoint";
        case Errc::InvalidField: return "InvalidField";
    }
    return "Unknown";
}

/** Every failure raised by the library carries one of the codes above. */
class Error : public std::runtime_error
{
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    { }

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

} // namespace fiberbound
