#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pagen/graph.hpp"
#include "pagen/params.hpp"
#include "pagen/rng.hpp"

namespace pagen {

/// Realisation of the urn strengths behind the attachment process.
///
/// psi[1] == 1 and psi[j] ~ Beta(a, (2j-3)m + 2mu(j-1)) independently for
/// j >= 2.  From them,
///   S[k]   = prod_{j>k} (1 - psi[j])        (computed backwards, S[n] = 1)
///   phi[k] = psi[k] * S[k]
/// so that S[k] == sum_{j<=k} phi[j] and the intervals
/// I_j = [S[j-1], S[j]) partition [0, 1).  Arrays are 1-based (index 0
/// unused) and S is strictly increasing with S[n] == 1.
struct UrnState {
    std::uint32_t n = 0;
    ModelParams params;
    SeedSpec seed;
    std::vector<double> psi;
    std::vector<double> phi;
    std::vector<double> S;
};

/// Beta shape pair of psi_j (j >= 2): shape1 = a = m + 2mu,
/// shape2 = (2j-3)m + 2mu(j-1).
double psi_shape2(const ModelParams& p, std::uint64_t j);

/// One draw of psi_j.  Requires j >= 2.
double sample_psi(const ModelParams& p, std::uint64_t j, RandomStream& rng);

/// Draw all strengths for an n-vertex urn and assemble S/phi by the
/// backward recurrence S[k-1] = S[k] (1 - psi[k]).  Requires n >= 2.
UrnState build_urn_state(const ModelParams& p, std::uint32_t n, SeedSpec seed);

/// Same, drawing the strengths from a caller-owned stream (the stored
/// `seed` is documentation only).  Lets a caller keep consuming the same
/// stream afterwards.
UrnState build_urn_state_on(const ModelParams& p, std::uint32_t n, SeedSpec seed,
                            RandomStream& rng);

/// Locate the interval containing `point`: returns the unique j with
/// S[j-1] <= point < S[j] (S[0] := 0).  `S_prefix` is the number of
/// leading entries of S to search (the candidate set {1..S_prefix});
/// point must satisfy 0 <= point < S[S_prefix].  Throws
/// std::invalid_argument otherwise.
std::uint32_t locate_interval(const UrnState& urn, double point, std::uint32_t S_prefix);
inline std::uint32_t locate_interval(const UrnState& urn, double point) {
    return locate_interval(urn, point, urn.n);
}

/// Grow a graph directly from urn strengths: vertex 2 sends all m edges
/// to vertex 1; each vertex k >= 3 draws its m targets by throwing
/// uniform points on [0, S[k-1]) and reading off the interval.  The
/// returned graph is distributed identically to the sequential rule.
///
/// The RNG consumption order is fixed (strengths for j = 2..n first, then
/// targets in (vertex, slot) order), so a (seed, n, params) triple
/// reproduces the same graph bit-for-bit.  If `keep_urn` is non-null the
/// urn realisation is moved there.
PAGraph generate_polya(const ModelParams& p, std::uint32_t n, SeedSpec seed,
                       UrnState* keep_urn = nullptr);

/// Same growth rule on an externally supplied urn realisation (the RNG is
/// used only for the uniform throws).
PAGraph generate_polya_given(const UrnState& urn, RandomStream& rng);

/// Dump "k psi phi S" rows as TSV (debugging / fixtures).
void write_urn_tsv(const UrnState& urn, std::ostream& out);

} // namespace pagen
