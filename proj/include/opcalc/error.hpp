#ifndef OPCALC_ERROR_HPP
#define OPCALC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace opcalc {

/// Error codes mirror the failure modes of the public operations; every
/// throw site attaches one so callers (and the CLI) can map failures to
/// exit codes without string matching.
enum class Errc {
    ContainmentViolation,
    NotAChainMap,
    NotAComplex,
    InvalidAlgebra,
    NoFrobeniusForm,
    CyclicAxiomViolation,
    ArityOverflow,
    DegeneracyNotPreserved,
    NotNormalized,
    UntrustedDegree,
    NotACocycle,
    BNotExact,
    NotQuasiIso,
    LiftNotFound,
    BracketNonzero,
    BadInput,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ContainmentViolation: return "ContainmentViolation";
        case Errc::NotAChainMap: return "NotAChainMap";
        case Errc::NotAComplex: return "NotAComplex";
        case Errc::InvalidAlgebra: return "InvalidAlgebra";
        case Errc::NoFrobeniusForm: return "NoFrobeniusForm";
        case Errc::CyclicAxiomViolation: return "CyclicAxiomViolation";
        case Errc::ArityOverflow: return "ArityOverflow";
        case Errc::DegeneracyNotPreserved: return "DegeneracyNotPreserved";
        case Errc::NotNormalized: return "NotNormalized";
        case Errc::UntrustedDegree: return "UntrustedDegree";
        case Errc::NotACocycle: return "NotACocycle";
        case Errc::BNotExact: return "BNotExact";
        case Errc::NotQuasiIso: return "NotQuasiIso";
        case Errc::LiftNotFound: return "LiftNotFound";
        case Errc::BracketNonzero: return "BracketNonzero";
        case Errc::BadInput: return "BadInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace opcalc

#endif
