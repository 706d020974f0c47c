#ifndef BILLIARD_ERRORS_HPP
#define BILLIARD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace billiard {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Table construction
struct RadiusError : Error { using Error::Error; };
struct OverlapError : Error { using Error::Error; };

// Horizon scan
struct CutoffTooSmall : Error { using Error::Error; };

// Flow
struct HorizonViolation : Error { using Error::Error; };

// Tangent diagnostics
struct GrazingDerivative : Error { using Error::Error; };
struct UndefinedCone : Error { using Error::Error; };
struct NotHomogeneous : Error { using Error::Error; };

// Encounter solver
struct EmptyWindow : Error { using Error::Error; };

// Sampling / statistics
struct RejectionStall : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };
struct EnsembleFault : Error { using Error::Error; };

// Configuration / I/O
struct SceneFormatError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct OutOfRangeLambda : Error { using Error::Error; };

} // namespace billiard

#endif
