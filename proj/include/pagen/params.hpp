#pragma once

#include <cstdint>
#include <stdexcept>

namespace pagen {

/// Parameters of the preferential-attachment family and the derived
/// constants used throughout the library.
///
/// Each new vertex sends m edges; every edge endpoint is chosen uniformly
/// with probability alpha and preferentially (proportional to current
/// degree) with probability 1 - alpha.  The derived quantities are
///
///   u       = alpha / (1 - alpha)
///   chi     = (1 + 2u) / (2 + 2u)            (power-law exponent of S_k)
///   psi_exp = (1 - chi) / chi = 1 / (1 + 2u) (tail exponent, in (0, 1])
///   a       = m + 2 m u                      (gamma/beta shape parameter)
///
/// Handy identities kept as invariants: psi_exp * chi == 1 - chi,
/// 1 / chi == psi_exp + 1 and 1 / psi_exp == chi / (1 - chi).
struct ModelParams {
    int m = 1;          ///< edges sent per new vertex (>= 1)
    double alpha = 0.0; ///< uniform-attachment probability, in [0, 1)

    // derived
    double u = 0.0;
    double chi = 0.5;
    double psi_exp = 1.0;
    double a = 1.0;
};

/// Validate (m, alpha) and fill in the derived constants.
///
/// Throws std::invalid_argument if m <= 0 or alpha is outside [0, 1).
/// m == 1 is permitted (useful for the closed-form distribution checks)
/// even though the graph-growth routines are mostly exercised with m >= 2.
ModelParams derive_params(int m, double alpha);

/// Effective uniform-attachment weight for slot i (1-based) of vertex n in
/// the slot-by-slot growth rule.  Equals
///   alpha * 2m(n-1) / (2m(n-2) + 2m*alpha + (1-alpha)(i-1))
/// and vanishes when alpha == 0.
double tilde_alpha(const ModelParams& p, std::uint64_t n, int i);

} // namespace pagen
