#pragma once

// Degree-preserving injective homomorphism counts on finite graphs and the
// matching limit frequencies: Monte Carlo over sampled Pólya-point trees and,
// for small patterns, direct quadrature of the closed-form density.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pagen/graph.hpp"
#include "pagen/limit_tree.hpp"
#include "pagen/params.hpp"
#include "pagen/rng.hpp"

namespace pagen {

/// A connected rooted pattern with edge multiplicities and per-vertex
/// degree excess.  Vertices are 1..k with the root fixed at 1; the match
/// condition is degree-exact: a map Φ counts only when
/// deg_G(Φ(i)) = d_F(i) + excess(i) for every pattern vertex, degrees
/// counting multiplicity on both sides.
struct SubgraphPattern {
    int k = 1;                               ///< number of vertices
    std::vector<std::array<int, 3>> edges;   ///< rows (i, j, mult), 1 <= i < j <= k
    std::vector<std::int64_t> excess;        ///< excess[i-1] = n(i) >= 0

    /// Throws std::invalid_argument on malformed/disconnected patterns.
    void validate() const;

    /// True when every multiplicity is 1 and the edge count is k-1
    /// (i.e. the pattern is a simple tree); only such patterns have a
    /// non-zero limit frequency.
    bool is_tree() const;

    /// Multiplicity-weighted pattern degrees d_F, index 0 = vertex 1.
    std::vector<std::int64_t> degrees() const;

    /// Max distance from the root (requires a valid connected pattern).
    int depth() const;

    /// JSON round trip:
    ///   {"vertices": k, "edges": [[i,j,mult],...], "root": 1,
    ///    "excess": {"i": n_i, ...}}
    /// Vertices absent from "excess" default to 0. "root" must be 1.
    static SubgraphPattern parse_json(const std::string& text);
    static SubgraphPattern load_json_file(const std::string& path);
    std::string to_json() const;
};

/// Weighted count of degree-preserving injective maps of the pattern into
/// the graph:  Σ_Φ Π_{ij ∈ E(F)} m_{Φ(i)Φ(j)}(G)^{m_ij(F)}  over injective
/// Φ with exact degrees; maps sending a pattern edge to a non-edge
/// contribute weight 0.  All vertex placements are counted (the root is
/// not pinned), so (1/n)·count_inj estimates the per-vertex frequency.
std::uint64_t count_inj(const SubgraphPattern& f, const PAGraph& g);

/// Result of a Monte Carlo limit-frequency estimate.
struct THatEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples_used = 0;        ///< non-truncated trees averaged
    std::uint64_t excluded_truncated = 0;  ///< trees dropped at the node cap
};

/// Limit subgraph frequency t̂(F, n) as the mean over sampled Pólya-point
/// trees (radius = pattern depth + 1) of the number of degree-preserving
/// injective maps sending the pattern root to the tree root.  Non-tree
/// patterns return zero immediately: their limit frequency vanishes.
THatEstimate estimate_t_hat_mc(const SubgraphPattern& f, const ModelParams& p,
                               std::uint64_t samples, RandomStream& rng,
                               std::uint64_t max_nodes = kDefaultMaxTreeNodes);

/// Density of a degree-preserving rooted embedding of the pattern at
/// positions x (pattern vertex i at x[i-1] ∈ (0,1]) with strengths gamma,
/// given the position order theta (theta[r] = 0-based pattern vertex with
/// rank r, positions strictly increasing along theta):
///
///   p = (ψ+1) x_1^ψ Π_i (m_-(i))_{|L(i)|} · e^{-H_i} H_i^{n'(i)} / n'(i)!
///         · Π_{j∈L(i)} 1/x_i · Π_{j∈R(i)} γ_i ψ x_j^{ψ-1} / x_i^ψ ,
///
/// where H_i = γ_i (1-x_i^ψ)/x_i^ψ, children split into L/R by position
/// relative to x_i, n'(i) = n(i) - m_-(i) + |L(i)| is the number of
/// unmatched right-children, m_-(i) is m for the root and L-vertices and
/// m-1 for R-vertices, and (m)_ℓ is the falling factorial counting the
/// injective assignment of matched left-children to the m_- uniform slots.
/// Returns 0 when any n'(i) < 0 or |L(i)| > m_-(i).
/// Throws std::invalid_argument on inconsistent x/theta or a non-tree
/// pattern.
double eval_density(const SubgraphPattern& f, const ModelParams& p,
                    const std::vector<double>& x,
                    const std::vector<double>& gamma,
                    const std::vector<int>& theta);

/// t̂(F, n) by quadrature: the strengths are integrated analytically
/// (each γ_i appears as a gamma density times e^{-γ_i κ_i} γ_i^{power},
/// giving a closed-form gamma-function ratio), and the positions are
/// integrated by nested adaptive quadrature over each of the k! orderings.
/// Implemented for k <= 3; throws std::invalid_argument beyond that.
/// Non-tree patterns return 0.
double t_hat_quadrature(const SubgraphPattern& f, const ModelParams& p,
                        double abs_tol = 1e-8);

}  // namespace pagen
