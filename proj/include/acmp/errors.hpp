#ifndef ACMP_ERRORS_HPP
#define ACMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace acmp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// graph construction / queries
struct IndexOutOfRange : Error { using Error::Error; };
struct NegativeWeight : Error { using Error::Error; };
struct DuplicateEdge : Error { using Error::Error; };
struct AsymmetricConflict : Error { using Error::Error; };
struct SelfLoop : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct MissingLabels : Error { using Error::Error; };
struct GraphTooLargeForDenseSpectrum : Error { using Error::Error; };
struct InvalidProbability : Error { using Error::Error; };

// coupling
struct MissingExplicitEntry : Error { using Error::Error; };
struct InvalidStrength : Error { using Error::Error; };

// time integration
struct MaxStepsExceeded : Error { using Error::Error; };
struct StepUnderflow : Error { using Error::Error; };
struct ObserverError : Error { using Error::Error; };

// configuration / io
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace acmp

#endif
