#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ellface {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

// Error taxonomy.  All conditions are recoverable contract violations and
// carry a human-readable message; suites surface them as case failures with
// reason codes instead of crashing.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnlistedPatternError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProjectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Global model parameters.  crossing_c is tied to (rank, hbar) and never set
// independently; nome_p is derived from tau.
struct ModelParams {
  cplx tau{0.0, 1.0};
  cplx hbar{0.123, 0.0456};
  int rank_n{2};
  int truncation_M{24};

  cplx nome_p() const { return std::exp(2.0 * kPi * kI * tau); }
  cplx crossing_c() const { return -static_cast<double>(rank_n + 1) * hbar; }

  // Throws ConfigError when an invariant fails.
  void validate() const;
};

}  // namespace ellface
