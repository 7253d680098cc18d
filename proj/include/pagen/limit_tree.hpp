#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pagen/params.hpp"
#include "pagen/rng.hpp"

namespace pagen {

/// Node classification in rooted neighborhood trees: a non-root node is
/// type L ("left"/early) when its vertex was born before its parent's,
/// type R ("right"/late) otherwise.
enum class NodeType : std::uint8_t { root, L, R };

const char* to_string(NodeType t);

/// A radius-truncated sample of the Pólya-point tree, the weak local
/// limit of the growth models.  Nodes are stored in breadth-first
/// creation order with contiguous child ranges, so nodes[0] is the root
/// and every node's children appear later in the array.
///
/// Construction (all draws from one stream, in documented order):
///  - root: position x_0 = y_0^chi with y_0 uniform, then strength.
///  - expanding node b of type t at depth < r:
///      1. m_-(b) i.i.d. positions uniform on [0, x_b]      (type-L kids;
///         m_- is m for root/L nodes, m-1 for R nodes)
///      2. Poisson count q_b with mean gamma_b kappa(x_b),
///         kappa(x) = (1-x^psi_exp)/x^psi_exp
///      3. q_b positions on [x_b, 1] by inverse CDF of the normalized
///         intensity and sorted ascending                    (type-R kids)
///      4. one strength per child in final child order:
///         Gamma(a, 1) for type R, Gamma(a+1, 1) for type L
///
/// If creating children would push the node count past max_nodes, the
/// tree is returned partially expanded with `truncated` set; comparison
/// statistics must exclude such trees.
struct PolyaPointTree {
    static constexpr std::uint32_t npos = 0xffffffffu;

    struct Node {
        double x = 0.0;
        double gamma = 0.0;
        NodeType type = NodeType::root;
        std::uint32_t parent = npos;
        std::uint32_t label_in_parent = 0; ///< 1-based child index; 0 for the root
        std::uint32_t depth = 0;
        std::uint32_t child_begin = 0;
        std::uint32_t child_end = 0;
        std::uint32_t n_left = 0; ///< leading children of type L
        bool expanded = false;    ///< children fully sampled
    };

    std::vector<Node> nodes;
    int radius = 0;
    bool truncated = false;
    ModelParams params;

    std::uint32_t child_count(std::uint32_t i) const {
        return nodes[i].child_end - nodes[i].child_begin;
    }
    /// Degree of node i in the infinite tree (parent edge + children);
    /// meaningful only for expanded nodes.
    std::uint32_t degree(std::uint32_t i) const {
        return child_count(i) + (nodes[i].parent == npos ? 0 : 1);
    }
};

/// One strength draw: Gamma(a, 1) for root/type-R nodes, Gamma(a+1, 1)
/// for type-L nodes (a = m + 2mu).
double sample_strength(const ModelParams& p, NodeType type, RandomStream& rng);

/// The type-R child positions of a node at x_parent with the given
/// strength: a Poisson(gamma kappa(x_parent)) count of i.i.d. draws with
/// density psi_exp x^(psi_exp-1) / (1 - x_parent^psi_exp) on
/// [x_parent, 1], returned sorted ascending.  x_parent == 1 yields an
/// empty list almost surely.
std::vector<double> sample_right_children(const ModelParams& p, double x_parent,
                                          double gamma, RandomStream& rng);

/// Sample the tree truncated to the given radius, guarding against the
/// heavy tail of subtree sizes with max_nodes (see PolyaPointTree).
PolyaPointTree sample_tree(const ModelParams& p, int r, std::uint64_t max_nodes,
                           RandomStream& rng);

inline constexpr std::uint64_t kDefaultMaxTreeNodes = 1'000'000;

/// Histogram of the root degree m + q_0 over radius-1 samples.
struct RootDegreeHistogram {
    std::vector<std::uint64_t> counts; ///< counts[d] = trees with root degree d
    std::uint64_t samples = 0;         ///< trees included
    std::uint64_t truncated_excluded = 0;
};

RootDegreeHistogram root_degree_pmf_empirical(const ModelParams& p, std::uint64_t samples,
                                              RandomStream& rng);

/// Serialize as JSON: nested nodes {label, x, gamma, type, children},
/// with the full label path (0, a_1, ..., a_l) per node.
void write_tree_json(const PolyaPointTree& tree, std::ostream& out);

} // namespace pagen
