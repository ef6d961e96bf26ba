#pragma once

#include <stdexcept>
#include <string>

namespace hirota {

// Error taxonomy mirrored by the CLI exit codes:
//   InputError            -> 2
//   AccuracyError family  -> 3
//   DomainError family    -> 4
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Asymptotic machinery needs two real critical points of the phase; outside
// that region the query is answerable only by other methods.
struct NoRealPhasePoints : DomainError {
    using DomainError::DomainError;
};

// |s11| fell below the guard threshold on the real axis.
struct SpectralSingularitySuspected : DomainError {
    using DomainError::DomainError;
};

// Winding count and refined roots disagree after the subdivision limit.
struct SpectrumResolutionFailure : AccuracyError {
    using AccuracyError::AccuracyError;
};

struct SolitonSystemSingular : AccuracyError {
    using AccuracyError::AccuracyError;
};

struct BlowupDetected : AccuracyError {
    double last_good_time = 0.0;
    explicit BlowupDetected(const std::string& msg, double t_last)
        : AccuracyError(msg), last_good_time(t_last) {}
};

}  // namespace hirota
