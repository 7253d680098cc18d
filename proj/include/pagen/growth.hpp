#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pagen/graph.hpp"
#include "pagen/params.hpp"
#include "pagen/rng.hpp"

namespace pagen {

/// Fenwick (binary indexed) tree over non-negative integer weights,
/// 1-based.  Supports point updates, prefix sums, and sampling: given a
/// cumulative offset t < prefix_sum(k), find_owner(t) returns the unique
/// index i with prefix_sum(i-1) <= t < prefix_sum(i), in O(log size).
///
/// Growth generators keep one cell per vertex holding its current degree
/// (with multiplicity), so degree-proportional target draws are exact
/// integer arithmetic: draw t uniform on {0, ..., prefix_sum(n-1)-1} and
/// take find_owner(t).
class CumulativeWeightTree {
public:
    explicit CumulativeWeightTree(std::uint32_t size);

    std::uint32_t size() const { return size_; }
    void add(std::uint32_t i, std::int64_t delta);
    std::uint64_t prefix_sum(std::uint32_t i) const; ///< sum of cells 1..i (0 for i == 0)
    std::uint64_t total() const { return prefix_sum(size_); }
    std::uint32_t find_owner(std::uint64_t t) const; ///< requires t < total()

private:
    std::uint32_t size_ = 0;
    std::uint32_t top_bit_ = 0; ///< largest power of two <= size_
    std::vector<std::uint64_t> cells_;
};

/// Grow a graph with per-slot law: with probability alpha the target is
/// uniform on {1,...,n-1}, otherwise degree-proportional in the
/// (n-1)-vertex graph (normalizer 2m(n-2)); the m slots of a vertex are
/// i.i.d. given that graph.  Starts from two vertices joined by m
/// parallel edges.  Requires n >= 2, m >= 2.
PAGraph generate_independent(const ModelParams& p, std::uint32_t n, SeedSpec seed);

/// Same per-slot law as generate_independent, but each vertex's m-target
/// block is resampled until pairwise distinct, and growth starts from a
/// predetermined seed graph (default: complete simple graph on
/// {1,...,m+1}, pass nullptr).  The degree-proportional normalizer is the
/// current total degree, which equals 2m(n-2) only for the default seed.
/// Requires n >= seed size and at least m seed vertices.  Throws
/// std::runtime_error if a vertex rejects 10^6 blocks in a row
/// (pathological parameters, e.g. too little spread-out mass).
PAGraph generate_conditional(const ModelParams& p, std::uint32_t n, SeedSpec seed,
                             const SeedGraph* seed_graph = nullptr);

/// Grow a graph with the update-within-the-round rule: the i-th slot of
/// vertex n picks k in {1,...,n-1} with probability
///
///     ( 2 m alpha + (1-alpha) deg'(k) ) / ( 2m(n-2) + 2m alpha + (1-alpha)(i-1) )
///
/// where deg' counts all previously placed edges including this vertex's
/// earlier slots.  Sampling splits the law into its uniform part (weight
/// tilde_alpha(p, n, i)) and its degree-proportional part, which keeps
/// every draw in exact integer arithmetic.  Requires n >= 2, m >= 2.
PAGraph generate_sequential(const ModelParams& p, std::uint32_t n, SeedSpec seed);

/// A sequential-rule graph and an independent-rule graph grown jointly so
/// that, vertex by vertex, the pair of target vectors (e_n, f_n) is drawn
/// from a coupling of the two models' conditional laws that maximizes
/// P(e_n = f_n) (exactly while the vector support is small, greedily
/// slot-by-slot afterwards).  Marginally, g_seq and g_ind are distributed
/// exactly as generate_sequential and generate_independent output.
struct CoupledPair {
    PAGraph g_seq;
    PAGraph g_ind;

    /// Vertices whose target vectors differ, with the 1-based slots that
    /// disagree.  Vertices with e_n == f_n are not listed.
    struct Diff {
        std::uint32_t vertex = 0;
        std::vector<std::uint32_t> slots;
    };
    std::vector<Diff> discrepancy_log;

    /// Largest vertex whose target vector was coupled by exact support
    /// enumeration; vertices beyond it used the greedy slot-wise rule.
    std::uint32_t exact_vector_limit = 0;

    bool approximate() const { return g_seq.n > exact_vector_limit; }
    /// "exact-vector" or "slotwise-greedy" (for output metadata).
    std::string method_label() const;
};

/// Vertices whose target-vector support exceeds this are coupled
/// slot-by-slot instead of by exhaustive enumeration.
inline constexpr std::uint64_t kExactCouplingMaxVectors = 4096;

CoupledPair generate_coupled(const ModelParams& p, std::uint32_t n, SeedSpec seed);

/// Probability that vertex v's target vector equals w (1-based targets,
/// w.size() == m) under the sequential rule, given the running degree
/// array of a valid (v-1)-vertex history.
double sequential_vector_prob(const ModelParams& p, std::uint32_t v,
                              const std::vector<std::uint32_t>& deg_seq,
                              const std::vector<std::uint32_t>& w);

/// Same under the independent rule (slots i.i.d. given the history).
double independent_vector_prob(const ModelParams& p, std::uint32_t v,
                               const std::vector<std::uint32_t>& deg_ind,
                               const std::vector<std::uint32_t>& w);

/// One maximally coupled draw of the two models' target vectors for
/// vertex v given the two chains' degree arrays, by exhaustive support
/// enumeration: P(e == f) equals one minus the total-variation distance
/// between the two vector laws.  Residual mass (when the draws must
/// differ) is matched through both residual quantile functions in
/// lexicographic vector order, slot 1 most significant, so slots whose
/// marginals agree still couple almost surely.  Requires
/// (v-1)^m <= kExactCouplingMaxVectors.
void couple_vertex_exact(const ModelParams& p, std::uint32_t v,
                         const std::vector<std::uint32_t>& deg_seq,
                         const std::vector<std::uint32_t>& deg_ind, RandomStream& rng,
                         std::vector<std::uint32_t>& e, std::vector<std::uint32_t>& f);

/// Fraction of vertices k in {k_min,...,n} whose received-edge sets
/// differ between the two coupled graphs, i.e. some slot (sender, i)
/// points at k in exactly one of them.
double received_set_discrepancy_fraction(const CoupledPair& pair, std::uint32_t k_min);

} // namespace pagen
