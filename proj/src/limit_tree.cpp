#include "pagen/limit_tree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pagen {

const char* to_string(NodeType t) {
    switch (t) {
        case NodeType::root: return "root";
        case NodeType::L: return "L";
        case NodeType::R: return "R";
    }
    return "?";
}

double sample_strength(const ModelParams& p, NodeType type, RandomStream& rng) {
    return rng.gamma(type == NodeType::L ? p.a + 1.0 : p.a);
}

namespace {

/// kappa(x) = (1 - x^psi) / x^psi, computed as expm1(-psi log x) so it
/// stays accurate for x near 1.
double kappa(double x, double psi) { return std::expm1(-psi * std::log(x)); }

/// Inverse CDF of the normalized type-R intensity on [x_parent, 1]:
/// position with CDF value u, i.e. (x_p^psi + u (1 - x_p^psi))^(1/psi).
double right_position(double x_parent, double psi, double u) {
    const double t = psi * std::log(x_parent); // <= 0
    const double mass = std::exp(t) - u * std::expm1(t);
    return std::exp(std::log(mass) / psi);
}

} // namespace

std::vector<double> sample_right_children(const ModelParams& p, double x_parent,
                                          double gamma, RandomStream& rng) {
    if (!(x_parent > 0.0 && x_parent <= 1.0))
        throw std::invalid_argument("sample_right_children: x_parent must be in (0, 1]");
    if (!(gamma > 0.0)) throw std::invalid_argument("sample_right_children: gamma must be > 0");
    const long long q = rng.poisson(gamma * kappa(x_parent, p.psi_exp));
    std::vector<double> xs(static_cast<std::size_t>(q));
    for (auto& x : xs) x = right_position(x_parent, p.psi_exp, rng.uniform01());
    std::sort(xs.begin(), xs.end());
    return xs;
}

PolyaPointTree sample_tree(const ModelParams& p, int r, std::uint64_t max_nodes,
                           RandomStream& rng) {
    if (r < 0) throw std::invalid_argument("sample_tree: radius must be >= 0");
    if (max_nodes < 1) throw std::invalid_argument("sample_tree: max_nodes must be >= 1");

    PolyaPointTree tree;
    tree.radius = r;
    tree.params = p;

    PolyaPointTree::Node root;
    root.x = std::pow(rng.uniform01(), p.chi);
    root.gamma = sample_strength(p, NodeType::root, rng);
    tree.nodes.push_back(root);

    std::vector<double> right;
    for (std::uint32_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].depth >= static_cast<std::uint32_t>(r)) break; // BFS: leaves follow
        if (tree.truncated) break;

        const double x = tree.nodes[i].x;
        const double gamma = tree.nodes[i].gamma;
        const auto m_minus = static_cast<std::uint32_t>(
            tree.nodes[i].type == NodeType::R ? p.m - 1 : p.m);
        if (tree.nodes.size() + m_minus > max_nodes) {
            tree.truncated = true;
            break;
        }

        const std::uint32_t begin = static_cast<std::uint32_t>(tree.nodes.size());
        for (std::uint32_t j = 0; j < m_minus; ++j) {
            PolyaPointTree::Node c;
            c.x = rng.uniform01() * x;
            c.type = NodeType::L;
            c.parent = i;
            c.label_in_parent = j + 1;
            c.depth = tree.nodes[i].depth + 1;
            tree.nodes.push_back(c);
        }

        bool capped = false;
        const long long budget = static_cast<long long>(max_nodes - tree.nodes.size());
        const long long q = rng.poisson_capped(gamma * kappa(x, p.psi_exp), budget, &capped);
        if (capped) {
            // Children of i stay unsampled; the whole tree is flagged.
            tree.nodes.resize(begin);
            tree.truncated = true;
            break;
        }
        right.resize(static_cast<std::size_t>(q));
        for (auto& y : right) y = right_position(x, p.psi_exp, rng.uniform01());
        std::sort(right.begin(), right.end());
        for (long long j = 0; j < q; ++j) {
            PolyaPointTree::Node c;
            c.x = right[static_cast<std::size_t>(j)];
            c.type = NodeType::R;
            c.parent = i;
            c.label_in_parent = m_minus + static_cast<std::uint32_t>(j) + 1;
            c.depth = tree.nodes[i].depth + 1;
            tree.nodes.push_back(c);
        }

        tree.nodes[i].child_begin = begin;
        tree.nodes[i].child_end = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes[i].n_left = m_minus;
        tree.nodes[i].expanded = true;
        for (std::uint32_t c = begin; c < tree.nodes[i].child_end; ++c)
            tree.nodes[c].gamma = sample_strength(p, tree.nodes[c].type, rng);
    }
    return tree;
}

RootDegreeHistogram root_degree_pmf_empirical(const ModelParams& p, std::uint64_t samples,
                                              RandomStream& rng) {
    if (samples < 1)
        throw std::invalid_argument("root_degree_pmf_empirical: need samples >= 1");
    RootDegreeHistogram h;
    for (std::uint64_t s = 0; s < samples; ++s) {
        PolyaPointTree t = sample_tree(p, 1, kDefaultMaxTreeNodes, rng);
        if (t.truncated) {
            ++h.truncated_excluded;
            continue;
        }
        const std::uint32_t d = t.child_count(0);
        if (d >= h.counts.size()) h.counts.resize(d + 1, 0);
        ++h.counts[d];
        ++h.samples;
    }
    return h;
}

namespace {

nlohmann::json node_to_json(const PolyaPointTree& tree, std::uint32_t i,
                            std::vector<std::uint32_t>& label) {
    const auto& n = tree.nodes[i];
    nlohmann::json j;
    j["label"] = label;
    j["x"] = n.x;
    j["gamma"] = n.gamma;
    j["type"] = to_string(n.type);
    j["children"] = nlohmann::json::array();
    for (std::uint32_t c = n.child_begin; c < n.child_end; ++c) {
        label.push_back(tree.nodes[c].label_in_parent);
        j["children"].push_back(node_to_json(tree, c, label));
        label.pop_back();
    }
    return j;
}

} // namespace

void write_tree_json(const PolyaPointTree& tree, std::ostream& out) {
    std::vector<std::uint32_t> label{0};
    nlohmann::json j;
    j["radius"] = tree.radius;
    j["truncated"] = tree.truncated;
    j["m"] = tree.params.m;
    j["alpha"] = tree.params.alpha;
    j["root"] = node_to_json(tree, 0, label);
    out << j.dump(2) << '\n';
}

} // namespace pagen
