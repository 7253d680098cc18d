#pragma once

// Closed-form and semi-closed-form limit quantities of the
// preferential-attachment family:
//
//  * degree_dist_pmf / neighbor_degree_dist_pmf — limiting degree law of a
//    uniformly random vertex, and of a uniform target of such a vertex;
//  * joint_degree_pmf — joint law of those two degrees (one 1-D quadrature);
//  * expected_degree — mean degree of an early vertex in a finite graph;
//  * estimate_Fk — Monte Carlo samples of the normalized urn-product limit;
//  * coupling_map_fk — the quantile map pairing beta strengths with
//    i.i.d. gamma variables.

#include <vector>

#include "pagen/params.hpp"
#include "pagen/rng.hpp"

namespace pagen {

/// Probability mass function on {offset, offset+1, ...} truncated to a
/// finite window, together with the exact mass beyond the window.
struct Pmf {
    int offset = 0;             ///< smallest support value
    std::vector<double> probs;  ///< probs[i] = P(X = offset + i)
    double tail_bound = 0.0;    ///< mass of P(X > offset + probs.size() - 1)

    /// Σ probs + tail_bound, accumulated in extended precision.
    double total_with_tail() const;

    /// Throws std::logic_error unless all masses are finite and
    /// non-negative and total_with_tail() is within 1e-9 of 1.
    void check_invariants() const;

    /// P(X = value); zero outside the stored window.
    double at(long long value) const;
};

/// Limiting degree law of a uniformly chosen vertex:
///   P(D = m + k) = ((ψ+1)/ψ) · Γ(a+1/ψ+1)/Γ(a) · Γ(k+a)/Γ(a+1/ψ+k+2)
/// for k = 0..k_max, evaluated via log-gamma.  The stored tail is the exact
/// remainder sum (the gamma-ratio series telescopes in closed form), so
/// total_with_tail() equals 1 to rounding error.
Pmf degree_dist_pmf(const ModelParams& p, int k_max);

/// Limiting degree law of a vertex picked uniformly among the m targets of
/// a uniformly chosen vertex:
///   P(D' = m+1+k) = ((ψ+1)/ψ²) · Γ(a+1/ψ+1)/Γ(a+1) · (k+1)Γ(k+a+1)/Γ(a+1/ψ+k+3).
/// Offset is m+1; the tail is again the exact remainder sum.
Pmf neighbor_degree_dist_pmf(const ModelParams& p, int k_max);

/// Joint limit law P(D' = m+1+k, D = m+j) of the degrees of a random vertex
/// and a uniform target of it,
///   ((ψ+1)/ψ²) · Γ(k+a+1)/(k!Γ(a+1)) · Γ(j+a)/(j!Γ(a))
///       · ∫₀¹ dv (1−v)^k v^{a+1/ψ} ∫_v¹ du (1−u)^j u^a.
/// The inner integral is an incomplete beta function; the outer integral is
/// evaluated by adaptive quadrature to absolute tolerance 1e-10.
/// Throws QuadratureError (with the achieved tolerance) on non-convergence.
double joint_degree_pmf(const ModelParams& p, int j, int k);

/// Σ_{k ≥ k_min} P(D' = m+1+k, D = m+j), evaluated with a single quadrature
/// by folding the negative-binomial upper tail into the integrand.  Used to
/// close the k-marginalization identity without summing the slow k-tail.
/// Requires k_min >= 1.
double joint_degree_tail_k(const ModelParams& p, int j, int k_min);

/// Leading-order expected degree of vertex k in a graph of size n:
///   m · [1 + (χ/(1−χ)) · ((n/k)^{1−χ} − 1)].
/// The omitted correction is O(n^{1−χ}/k^{2−χ}); see
/// expected_degree_error_bound.  Requires 1 <= k <= n.
double expected_degree(const ModelParams& p, std::uint64_t n, std::uint64_t k);

/// Engineering bound on the correction term excluded from expected_degree:
///   m · C · n^{1−χ}/k^{2−χ} with C = 4χ/(1−χ),
/// the constant coming from the (1 + 4/k) bracketing of the product formula
/// for E[d_n(k)].  Upper bound, not an exact remainder.
double expected_degree_error_bound(const ModelParams& p, std::uint64_t n,
                                   std::uint64_t k);

/// One Monte Carlo sample of the truncated product
///   F_k ≈ (ℓ/k)^χ · Π_{j=k+1}^{ℓ} (1 − ψ_j),
/// computed in log space.  The limit ℓ → ∞ exists a.s. with E[F_k] = 1 + O(1/k)
/// and sd(log F_k) = O(k^{-1/2}).  Requires ell > k >= 1.
///
/// When the beta shape a is a small integer the factors are drawn through
/// the product-of-powers representation
///   1 − ψ_j  =  Π_{i=0}^{a-1} U_i^{1/(b_j+i)},
/// which needs only exponential draws; otherwise each ψ_j is a beta draw.
double estimate_Fk(const ModelParams& p, std::uint64_t k, std::uint64_t ell,
                   RandomStream& rng);

/// Quantile coupling map f_k defined by P(ψ_k ≤ f_k(x)) = P(χ_k ≤ x) with
/// χ_k ~ Gamma(a, 1) and ψ_k ~ Beta(a, b_k):
///   f_k(x) = BetaInvCDF_{a,b_k}( GammaCDF_{a,1}(x) ).
/// Evaluated through the upper-tail (complement) functions when the gamma
/// CDF exceeds 1/2 so that f_k stays strictly increasing up to x = log²k and
/// beyond, where the lower CDF saturates at 1 in double precision.
/// For small x, f_k(x) ≈ x / (2mk(1+u)).  Requires k >= 2, x >= 0.
/// Throws std::runtime_error if the inverse CDF fails to converge.
double coupling_map_fk(const ModelParams& p, std::uint64_t k, double x);

}  // namespace pagen
