#pragma once

#include <stdexcept>
#include <string>

namespace groupoidal {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Equality tolerance for assertions on computed structure data.
inline constexpr double kDefaultTolerance = 1e-9;
// Residuals of exact algebraic identities on well-conditioned data.
inline constexpr double kResidualTolerance = 1e-12;
// Spectral clustering threshold when splitting centers and corners.
inline constexpr double kClusterThreshold = 1e-7;
// Relative singular value threshold below which a pairing is degenerate.
inline constexpr double kDegeneracyThreshold = 1e-8;
// Generator-map extensions that disagree by more than this are rejected.
inline constexpr double kExtensionThreshold = 1e-8;
// Haar projection eigenvalues within this distance of 0 or 1 are snapped.
inline constexpr double kSnapThreshold = 1e-6;

/// Default tolerance, overridden by the GROUPOIDAL_TOL environment variable
/// when it holds a positive number.
double default_tolerance();

class AlgebraError : public std::runtime_error {
 public:
  explicit AlgebraError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a construction cannot proceed (singular pairing, no Haar
// projection, inconsistent generator map). The CLI maps it to exit code 2.
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed serialized input; what() names the offending JSON path. The CLI
// maps it to exit code 3.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace groupoidal
