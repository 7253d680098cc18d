#pragma once

// Local structure around a vertex: rooted balls, the edge-ordered exploration
// tree, canonical codes for rooted multigraphs, and empirical ball
// distributions compared against the Pólya-point limit sampler.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pagen/graph.hpp"
#include "pagen/limit_tree.hpp"
#include "pagen/params.hpp"
#include "pagen/rng.hpp"
#include "pagen/urn.hpp"

namespace pagen {

/// Which edges a radius-r ball keeps.
enum class BallRule {
    /// All edges with at least one endpoint at distance <= r-1 from the root
    /// (the modified ball; boundary-boundary edges are dropped).  This is the
    /// notion the exploration tree traverses, so it is the default.
    hat,
    /// All edges with both endpoints at distance <= r (plain induced ball).
    induced,
};

/// A rooted multigraph extracted around a vertex.  Local ids are dense,
/// 0 = root.  No self-loops (the growth models never create any).
struct RootedBall {
    std::vector<std::uint64_t> vertices;  ///< original vertex ids; [0] = root
    std::vector<int> depth;               ///< BFS distance from the root
    /// Distinct edges as (u_local, v_local, multiplicity), u < v, sorted.
    std::vector<std::array<std::uint32_t, 3>> edges;
    /// Per local vertex: birth ranks (global edge ids, ascending) of its
    /// incident ball edges, one entry per parallel edge.
    std::vector<std::vector<std::uint64_t>> birth_order;

    std::size_t size() const { return vertices.size(); }
    /// Multiplicity-weighted degree of a local vertex inside the ball.
    std::uint64_t degree_in_ball(std::uint32_t local) const;
    /// Throws std::logic_error on malformed structure (root missing,
    /// unsorted/duplicate edge rows, depth inconsistencies).
    void check_invariants() const;
};

/// BFS ball of radius r around v.  Edge multiplicities are preserved.
RootedBall extract_ball(const PAGraph& g, std::uint64_t v, int r,
                        BallRule rule = BallRule::hat);

/// As above but reuses a prebuilt undirected adjacency index (the index
/// build is O(n) and dominates when sampling many roots from one graph).
RootedBall extract_ball(const PAGraph& g, const UndirectedIndex& idx,
                        std::uint64_t v, int r, BallRule rule = BallRule::hat);

/// Forget positions, strengths and types of a sampled limit tree, keeping
/// the rooted shape.  Birth ranks are synthesised from the construction
/// order of the tree's nodes.
RootedBall ball_from_limit_tree(const PolyaPointTree& t);

/// Exploration tree of the graph around a root: children of a node are all
/// incident edges of its image except the one parent edge, ordered by edge
/// birth time; a child is type L ("early") when its image was born before
/// the image of its parent node, else type R.  Revisited graph vertices
/// appear as distinct tree nodes, so the node -> vertex map need not be
/// injective; when it is injective the tree is isomorphic to the radius-r
/// ball (hat rule).
struct ExplorationTree {
    struct Node {
        std::uint64_t vertex = 0;   ///< image k_a in the graph
        std::uint32_t parent = npos;
        std::uint64_t parent_edge = 0;  ///< edge id used to reach this node
        NodeType type = NodeType::root;
        int depth = 0;
        std::uint32_t child_begin = 0, child_end = 0;
    };
    static constexpr std::uint32_t npos = 0xffffffffu;

    std::vector<Node> nodes;  ///< BFS order; [0] = root
    int radius = 0;
    bool injective = true;   ///< all node images distinct
    bool truncated = false;  ///< stopped at the node cap

    std::uint32_t child_count(std::uint32_t i) const {
        return nodes[i].child_end - nodes[i].child_begin;
    }
};

constexpr std::uint32_t kDefaultMaxExplorationNodes = 1u << 20;

ExplorationTree build_exploration_tree(
    const PAGraph& g, std::uint64_t v, int r,
    std::uint32_t max_nodes = kDefaultMaxExplorationNodes);
ExplorationTree build_exploration_tree(
    const PAGraph& g, const UndirectedIndex& idx, std::uint64_t v, int r,
    std::uint32_t max_nodes = kDefaultMaxExplorationNodes);

/// Canonical byte string: two rooted balls receive equal codes iff they are
/// isomorphic as rooted multigraphs.  Balls whose underlying simple graph is
/// a tree are coded by bottom-up subtree sorting with edge multiplicities
/// ('T' prefix); general balls fall back to iterative colour refinement from
/// the root with individualisation backtracking, returning the minimal
/// adjacency encoding ('G' prefix).  A ball is coded by exactly one of the
/// two paths, chosen by its (isomorphism-invariant) shape, so codes from the
/// two paths never need to be compared.
/// Throws std::invalid_argument when the ball exceeds max_vertices.
std::string canonical_code(const RootedBall& ball,
                           std::size_t max_vertices = 10000);

/// Empirical distribution over canonical codes.
struct BallDistribution {
    std::map<std::string, double> freq;   ///< code -> fraction of included samples
    std::uint64_t samples = 0;            ///< included samples
    std::uint64_t excluded_truncated = 0; ///< limit trees dropped at the node cap

    void check_invariants() const;  ///< frequencies >= 0 and sum to 1 (1e-9)
};

/// Distribution of radius-r balls around uniformly sampled roots of g.
BallDistribution ball_distribution_graph(const PAGraph& g, int r,
                                         std::uint64_t samples,
                                         RandomStream& rng);

/// Distribution of radius-r balls of sampled Pólya-point trees.  Trees that
/// hit the node cap are excluded from the frequencies and counted.
BallDistribution ball_distribution_limit(
    const ModelParams& p, int r, std::uint64_t samples, RandomStream& rng,
    std::uint64_t max_nodes = kDefaultMaxTreeNodes);

/// Total variation distance (1/2)·Σ_codes |p - q| over the union of keys.
double tv_distance(const std::map<std::string, double>& p,
                   const std::map<std::string, double>& q);
double tv_distance(const BallDistribution& a, const BallDistribution& b);

/// Per-vertex agreement between urn positions and the k/n scaling inside a
/// ball: reports |S_{k-1} - (k/n)^chi| for every vertex k of the radius-r
/// ball around v.
struct PositionReport {
    std::vector<std::uint64_t> vertex;  ///< ball vertices (BFS order)
    std::vector<double> discrepancy;    ///< |S_{k-1} - (k/n)^chi| per vertex
    double max_discrepancy = 0.0;

    /// Nearest-rank quantile of the discrepancies, q in [0,1].
    double quantile(double q) const;
};

/// Requires the urn state the graph was generated from (same n).
/// Throws std::invalid_argument if sizes disagree.
PositionReport position_check(const PAGraph& g, const UrnState& urn,
                              std::uint64_t v, int r);

/// Standard base64 (RFC 4648) of an arbitrary byte string; used when codes
/// are exported to JSON.
std::string base64_encode(const std::string& bytes);

}  // namespace pagen
