#include "pagen/local_view.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace pagen {

// ---------------------------------------------------------------------------
// RootedBall
// ---------------------------------------------------------------------------

std::uint64_t RootedBall::degree_in_ball(std::uint32_t local) const {
    return birth_order[local].size();
}

void RootedBall::check_invariants() const {
    const std::size_t nv = vertices.size();
    if (nv == 0) throw std::logic_error("RootedBall: empty");
    if (depth.size() != nv || birth_order.size() != nv)
        throw std::logic_error("RootedBall: per-vertex arrays disagree");
    if (depth[0] != 0) throw std::logic_error("RootedBall: root depth != 0");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i - 1] >= edges[i])
            throw std::logic_error("RootedBall: edge rows unsorted/duplicated");
    }
    std::uint64_t mult_total = 0;
    for (const auto& e : edges) {
        if (e[0] >= e[1] || e[1] >= nv || e[2] == 0)
            throw std::logic_error("RootedBall: malformed edge row");
        mult_total += e[2];
    }
    std::uint64_t incident_total = 0;
    for (const auto& b : birth_order) {
        incident_total += b.size();
        if (!std::is_sorted(b.begin(), b.end()))
            throw std::logic_error("RootedBall: birth ranks unsorted");
    }
    if (incident_total != 2 * mult_total)
        throw std::logic_error("RootedBall: handshake mismatch");
}

namespace {

struct BallScan {
    std::vector<std::uint32_t> order;                    // original ids, BFS
    std::unordered_map<std::uint32_t, std::uint32_t> local;  // id -> local
    std::vector<int> depth;
};

BallScan bfs_vertices(const UndirectedIndex& idx, std::uint32_t v, int r) {
    BallScan s;
    s.order.push_back(v);
    s.local.emplace(v, 0);
    s.depth.push_back(0);
    std::size_t head = 0;
    while (head < s.order.size()) {
        const std::uint32_t u = s.order[head];
        const int d = s.depth[head];
        ++head;
        if (d == r) continue;
        for (const auto* e = idx.begin(u); e != idx.end(u); ++e) {
            if (s.local.emplace(e->neighbor, static_cast<std::uint32_t>(s.order.size())).second) {
                s.order.push_back(e->neighbor);
                s.depth.push_back(d + 1);
            }
        }
    }
    return s;
}

RootedBall assemble_ball(const UndirectedIndex& idx, const BallScan& s, int r,
                         BallRule rule) {
    RootedBall ball;
    ball.vertices.assign(s.order.begin(), s.order.end());
    ball.depth = s.depth;
    ball.birth_order.resize(s.order.size());

    // Collect qualifying edges once each: scan every ball vertex's incident
    // list and keep an entry if this endpoint is the edge's designated owner
    // (smaller vertex id among in-ball endpoints that qualify; using the
    // entry where the rule first applies avoids double counting).
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mult;  // (u_loc,v_loc) -> count
    for (std::uint32_t li = 0; li < s.order.size(); ++li) {
        const std::uint32_t u = s.order[li];
        for (const auto* e = idx.begin(u); e != idx.end(u); ++e) {
            auto it = s.local.find(e->neighbor);
            if (it == s.local.end()) continue;  // endpoint outside the ball
            const std::uint32_t lj = it->second;
            bool keep;
            if (rule == BallRule::hat) {
                keep = s.depth[li] <= r - 1 || s.depth[lj] <= r - 1;
            } else {
                keep = true;  // both endpoints inside => induced ball keeps it
            }
            if (!keep) continue;
            if (u > e->neighbor) continue;  // count each edge from its lower endpoint
            const std::uint32_t a = std::min(li, lj), b = std::max(li, lj);
            ++mult[{a, b}];
            ball.birth_order[li].push_back(e->edge_id);
            ball.birth_order[lj].push_back(e->edge_id);
        }
    }
    for (const auto& [key, m] : mult)
        ball.edges.push_back({key.first, key.second, m});
    for (auto& b : ball.birth_order) std::sort(b.begin(), b.end());
    return ball;
}

}  // namespace

RootedBall extract_ball(const PAGraph& g, const UndirectedIndex& idx,
                        std::uint64_t v, int r, BallRule rule) {
    if (v < 1 || v > g.n)
        throw std::invalid_argument("extract_ball: vertex out of range");
    if (r < 0) throw std::invalid_argument("extract_ball: negative radius");
    const BallScan s = bfs_vertices(idx, static_cast<std::uint32_t>(v), r);
    return assemble_ball(idx, s, r, rule);
}

RootedBall extract_ball(const PAGraph& g, std::uint64_t v, int r, BallRule rule) {
    const UndirectedIndex idx = build_undirected_index(g);
    return extract_ball(g, idx, v, r, rule);
}

RootedBall ball_from_limit_tree(const PolyaPointTree& t) {
    RootedBall ball;
    const std::size_t nv = t.nodes.size();
    ball.vertices.resize(nv);
    ball.depth.resize(nv);
    ball.birth_order.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        ball.vertices[i] = i;  // tree nodes have no graph identity
        ball.depth[i] = static_cast<int>(t.nodes[i].depth);
        if (t.nodes[i].parent != PolyaPointTree::npos) {
            // Edge id := child node index (nodes are in creation order).
            const std::uint32_t pa = t.nodes[i].parent;
            ball.edges.push_back({pa, static_cast<std::uint32_t>(i), 1});
            ball.birth_order[pa].push_back(i);
            ball.birth_order[i].push_back(i);
        }
    }
    // Parent index < child index in BFS storage, so rows are already sorted.
    return ball;
}

// ---------------------------------------------------------------------------
// Exploration tree
// ---------------------------------------------------------------------------

namespace {

ExplorationTree build_exploration_tree_impl(const PAGraph& g,
                                            const UndirectedIndex& idx,
                                            std::uint64_t v, int r,
                                            std::uint32_t max_nodes) {
    if (v < 1 || v > g.n)
        throw std::invalid_argument("build_exploration_tree: vertex out of range");
    if (r < 0)
        throw std::invalid_argument("build_exploration_tree: negative radius");

    ExplorationTree t;
    t.radius = r;
    t.nodes.push_back({static_cast<std::uint64_t>(v), ExplorationTree::npos, 0,
                       NodeType::root, 0, 0, 0});
    std::set<std::uint64_t> seen{v};

    for (std::uint32_t i = 0; i < t.nodes.size(); ++i) {
        // Copy the node header: pushing children may reallocate the vector.
        const std::uint64_t ku = t.nodes[i].vertex;
        const int d = t.nodes[i].depth;
        const bool is_root = t.nodes[i].parent == ExplorationTree::npos;
        const std::uint64_t pe = t.nodes[i].parent_edge;
        if (d == r) break;  // BFS order: all remaining nodes are at depth r
        t.nodes[i].child_begin = static_cast<std::uint32_t>(t.nodes.size());
        bool parent_skipped = is_root;  // the root has no parent edge to skip
        const std::uint32_t u32 = static_cast<std::uint32_t>(ku);
        for (const auto* e = idx.begin(u32); e != idx.end(u32); ++e) {
            if (!parent_skipped && e->edge_id == pe) {
                parent_skipped = true;  // skip exactly one copy of the parent edge
                continue;
            }
            if (t.nodes.size() >= max_nodes) {
                t.truncated = true;
                t.nodes[i].child_end = static_cast<std::uint32_t>(t.nodes.size());
                return t;
            }
            const NodeType type = e->neighbor < ku ? NodeType::L : NodeType::R;
            if (!seen.insert(e->neighbor).second) t.injective = false;
            t.nodes.push_back({e->neighbor, i, e->edge_id, type, d + 1, 0, 0});
        }
        t.nodes[i].child_end = static_cast<std::uint32_t>(t.nodes.size());
    }
    return t;
}

}  // namespace

ExplorationTree build_exploration_tree(const PAGraph& g,
                                       const UndirectedIndex& idx,
                                       std::uint64_t v, int r,
                                       std::uint32_t max_nodes) {
    return build_exploration_tree_impl(g, idx, v, r, max_nodes);
}

ExplorationTree build_exploration_tree(const PAGraph& g, std::uint64_t v, int r,
                                       std::uint32_t max_nodes) {
    const UndirectedIndex idx = build_undirected_index(g);
    return build_exploration_tree_impl(g, idx, v, r, max_nodes);
}

// ---------------------------------------------------------------------------
// Canonical codes
// ---------------------------------------------------------------------------

namespace {

struct Adjacency {
    // per vertex: (neighbor, multiplicity), sorted by neighbor
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> nbr;
};

Adjacency adjacency_of(const RootedBall& ball) {
    Adjacency adj;
    adj.nbr.resize(ball.size());
    for (const auto& e : ball.edges) {
        adj.nbr[e[0]].push_back({e[1], e[2]});
        adj.nbr[e[1]].push_back({e[0], e[2]});
    }
    for (auto& row : adj.nbr) std::sort(row.begin(), row.end());
    return adj;
}

bool is_tree_shaped(const RootedBall& ball) {
    // Underlying simple graph is connected with nv-1 edges.  Balls are
    // connected by construction, so the edge count settles it.
    return ball.edges.size() + 1 == ball.size();
}

void append_uint(std::string& s, std::uint64_t v) {
    char buf[24];
    const int len = std::snprintf(buf, sizeof buf, "%llu",
                                  static_cast<unsigned long long>(v));
    s.append(buf, static_cast<size_t>(len));
}

// Bottom-up subtree codes with the parent-edge multiplicity folded into each
// child's contribution; complete for multiplicity-labelled rooted trees.
std::string tree_code(const Adjacency& adj, std::uint32_t v, std::uint32_t parent) {
    std::vector<std::string> kids;
    for (const auto& [w, mult] : adj.nbr[v]) {
        if (w == parent) continue;
        std::string c;
        append_uint(c, mult);
        c += ':';
        c += tree_code(adj, w, v);
        kids.push_back(std::move(c));
    }
    std::sort(kids.begin(), kids.end());
    std::string code = "(";
    for (const auto& k : kids) code += k;
    code += ')';
    return code;
}

// --- general path: colour refinement + individualisation ---

struct RefineState {
    const Adjacency* adj;
    std::vector<int> color;
    int classes = 0;
};

// One full refinement sweep to a fixed point.  New colour ids are assigned
// by sorting the (old colour, neighbourhood profile) keys, which depends
// only on the isomorphism class, never on vertex labels.
void refine_to_fixpoint(RefineState& st) {
    const std::size_t nv = st.color.size();
    using Key = std::pair<int, std::vector<std::pair<int, std::uint32_t>>>;
    for (;;) {
        std::vector<Key> keys(nv);
        for (std::size_t v = 0; v < nv; ++v) {
            Key k{st.color[v], {}};
            k.second.reserve(st.adj->nbr[v].size());
            for (const auto& [w, mult] : st.adj->nbr[v])
                k.second.push_back({st.color[w], mult});
            std::sort(k.second.begin(), k.second.end());
            keys[v] = std::move(k);
        }
        std::vector<Key> distinct = keys;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        const int new_classes = static_cast<int>(distinct.size());
        for (std::size_t v = 0; v < nv; ++v) {
            st.color[v] = static_cast<int>(
                std::lower_bound(distinct.begin(), distinct.end(), keys[v]) -
                distinct.begin());
        }
        if (new_classes == st.classes) return;
        st.classes = new_classes;
    }
}

// Adjacency encoding of a discretely coloured ball, in canonical index
// order (colour order).  Upper-triangle sparse rows.
std::string encode_discrete(const RefineState& st) {
    const std::size_t nv = st.color.size();
    std::vector<std::uint32_t> canon(nv);  // colour -> vertex
    for (std::size_t v = 0; v < nv; ++v)
        canon[static_cast<std::size_t>(st.color[v])] = static_cast<std::uint32_t>(v);
    std::string out;
    append_uint(out, nv);
    out += '#';
    for (std::size_t ci = 0; ci < nv; ++ci) {
        const std::uint32_t v = canon[ci];
        std::vector<std::pair<int, std::uint32_t>> row;
        for (const auto& [w, mult] : st.adj->nbr[v]) {
            if (st.color[w] > static_cast<int>(ci)) row.push_back({st.color[w], mult});
        }
        std::sort(row.begin(), row.end());
        for (const auto& [cw, mult] : row) {
            append_uint(out, static_cast<std::uint64_t>(cw));
            out += '.';
            append_uint(out, mult);
            out += ',';
        }
        out += ';';
    }
    return out;
}

struct CanonSearch {
    std::string best;
    bool have_best = false;
    std::uint64_t labelings = 0;
    static constexpr std::uint64_t kMaxLabelings = 1u << 20;
};

// True when swapping u and v (leaving everything else fixed) is an
// automorphism: their adjacency rows agree entry-for-entry once the mutual
// edge is ignored.  Rows are sorted by neighbour, so a filtered linear
// comparison suffices.
bool swap_equivalent(const Adjacency& adj, std::uint32_t u, std::uint32_t v) {
    const auto& ru = adj.nbr[u];
    const auto& rv = adj.nbr[v];
    std::size_t i = 0, j = 0;
    for (;;) {
        while (i < ru.size() && ru[i].first == v) ++i;
        while (j < rv.size() && rv[j].first == u) ++j;
        if (i == ru.size() || j == rv.size()) return i == ru.size() && j == rv.size();
        if (ru[i] != rv[j]) return false;
        ++i, ++j;
    }
}

void canon_backtrack(RefineState st, CanonSearch& out) {
    refine_to_fixpoint(st);
    const std::size_t nv = st.color.size();
    if (st.classes == static_cast<int>(nv)) {
        if (++out.labelings > CanonSearch::kMaxLabelings)
            throw std::runtime_error(
                "canonical_code: symmetry search exceeded the labeling cap");
        std::string code = encode_discrete(st);
        if (!out.have_best || code < out.best) {
            out.best = std::move(code);
            out.have_best = true;
        }
        return;
    }
    // Find the smallest non-singleton colour class and branch on its members,
    // but only once per family of pairwise-interchangeable vertices: branches
    // that differ by an automorphism reach the same set of discrete codes, and
    // interchangeable twins (e.g. leaves hanging off one hub) would otherwise
    // cost a factorial blow-up.
    std::vector<int> count(static_cast<std::size_t>(st.classes), 0);
    for (int c : st.color) ++count[static_cast<std::size_t>(c)];
    int target = 0;
    while (count[static_cast<std::size_t>(target)] == 1) ++target;
    std::vector<std::uint32_t> cell;
    for (std::size_t v = 0; v < nv; ++v)
        if (st.color[v] == target) cell.push_back(static_cast<std::uint32_t>(v));
    std::vector<bool> covered(cell.size(), false);
    for (std::size_t i = 0; i < cell.size(); ++i) {
        if (covered[i]) continue;
        for (std::size_t j = i + 1; j < cell.size(); ++j)
            if (!covered[j] && swap_equivalent(*st.adj, cell[i], cell[j]))
                covered[j] = true;
        RefineState branch = st;
        branch.color[cell[i]] = st.classes;  // individualise with a fresh colour
        branch.classes += 1;
        canon_backtrack(std::move(branch), out);
    }
}

}  // namespace

std::string canonical_code(const RootedBall& ball, std::size_t max_vertices) {
    if (ball.size() > max_vertices)
        throw std::invalid_argument("canonical_code: ball exceeds vertex cap");
    const Adjacency adj = adjacency_of(ball);
    if (is_tree_shaped(ball)) {
        return "T" + tree_code(adj, 0, 0xffffffffu);
    }
    RefineState st;
    st.adj = &adj;
    st.color.assign(ball.size(), 1);
    st.color[0] = 0;  // the root is always its own class
    st.classes = ball.size() == 1 ? 1 : 2;
    CanonSearch search;
    canon_backtrack(std::move(st), search);
    return "G" + search.best;
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

void BallDistribution::check_invariants() const {
    double total = 0.0;
    for (const auto& [code, f] : freq) {
        if (!(f >= 0.0)) throw std::logic_error("BallDistribution: negative frequency");
        total += f;
    }
    if (!freq.empty() && std::abs(total - 1.0) > 1e-9)
        throw std::logic_error("BallDistribution: frequencies do not sum to 1");
}

BallDistribution ball_distribution_graph(const PAGraph& g, int r,
                                         std::uint64_t samples,
                                         RandomStream& rng) {
    if (samples < 1)
        throw std::invalid_argument("ball_distribution_graph: samples < 1");
    const UndirectedIndex idx = build_undirected_index(g);
    std::map<std::string, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const std::uint64_t v = rng.uniform_index(g.n) + 1;
        ++counts[canonical_code(extract_ball(g, idx, v, r))];
    }
    BallDistribution dist;
    dist.samples = samples;
    for (const auto& [code, c] : counts)
        dist.freq[code] = static_cast<double>(c) / static_cast<double>(samples);
    return dist;
}

BallDistribution ball_distribution_limit(const ModelParams& p, int r,
                                         std::uint64_t samples,
                                         RandomStream& rng,
                                         std::uint64_t max_nodes) {
    if (samples < 1)
        throw std::invalid_argument("ball_distribution_limit: samples < 1");
    std::map<std::string, std::uint64_t> counts;
    BallDistribution dist;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const PolyaPointTree t = sample_tree(p, r, max_nodes, rng);
        if (t.truncated) {
            ++dist.excluded_truncated;
            continue;
        }
        ++counts[canonical_code(ball_from_limit_tree(t))];
    }
    dist.samples = samples - dist.excluded_truncated;
    if (dist.samples > 0) {
        for (const auto& [code, c] : counts)
            dist.freq[code] = static_cast<double>(c) / static_cast<double>(dist.samples);
    }
    return dist;
}

double tv_distance(const std::map<std::string, double>& p,
                   const std::map<std::string, double>& q) {
    double sum = 0.0;
    auto ip = p.begin();
    auto iq = q.begin();
    while (ip != p.end() || iq != q.end()) {
        if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
            sum += std::abs(ip->second);
            ++ip;
        } else if (ip == p.end() || iq->first < ip->first) {
            sum += std::abs(iq->second);
            ++iq;
        } else {
            sum += std::abs(ip->second - iq->second);
            ++ip;
            ++iq;
        }
    }
    return 0.5 * sum;
}

double tv_distance(const BallDistribution& a, const BallDistribution& b) {
    return tv_distance(a.freq, b.freq);
}

// ---------------------------------------------------------------------------
// Position agreement
// ---------------------------------------------------------------------------

PositionReport position_check(const PAGraph& g, const UrnState& urn,
                              std::uint64_t v, int r) {
    if (urn.n != g.n)
        throw std::invalid_argument("position_check: urn and graph sizes differ");
    const RootedBall ball = extract_ball(g, v, r);
    PositionReport rep;
    rep.vertex.reserve(ball.size());
    rep.discrepancy.reserve(ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const std::uint64_t k = ball.vertices[i];
        const double s_prev = urn.S[static_cast<std::size_t>(k - 1)];
        const double scaled = std::pow(static_cast<double>(k) / g.n, g.params.chi);
        const double d = std::abs(s_prev - scaled);
        rep.vertex.push_back(k);
        rep.discrepancy.push_back(d);
        rep.max_discrepancy = std::max(rep.max_discrepancy, d);
    }
    return rep;
}

double PositionReport::quantile(double q) const {
    if (discrepancy.empty())
        throw std::logic_error("PositionReport::quantile: empty report");
    std::vector<double> sorted = discrepancy;
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t idx = static_cast<std::size_t>(std::llround(std::ceil(pos)));
    return sorted[std::min(idx, sorted.size() - 1)];
}

// ---------------------------------------------------------------------------
// base64
// ---------------------------------------------------------------------------

std::string base64_encode(const std::string& bytes) {
    static const char* tbl =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= bytes.size()) {
        const std::uint32_t x = (static_cast<unsigned char>(bytes[i]) << 16) |
                                (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                                static_cast<unsigned char>(bytes[i + 2]);
        out += tbl[(x >> 18) & 63];
        out += tbl[(x >> 12) & 63];
        out += tbl[(x >> 6) & 63];
        out += tbl[x & 63];
        i += 3;
    }
    const std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        const std::uint32_t x = static_cast<unsigned char>(bytes[i]) << 16;
        out += tbl[(x >> 18) & 63];
        out += tbl[(x >> 12) & 63];
        out += "==";
    } else if (rem == 2) {
        const std::uint32_t x = (static_cast<unsigned char>(bytes[i]) << 16) |
                                (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += tbl[(x >> 18) & 63];
        out += tbl[(x >> 12) & 63];
        out += tbl[(x >> 6) & 63];
        out += '=';
    }
    return out;
}

}  // namespace pagen
