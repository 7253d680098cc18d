#include "pagen/subgraph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pagen/quadrature.hpp"

namespace pagen {

// ---------------------------------------------------------------------------
// Pattern plumbing
// ---------------------------------------------------------------------------

void SubgraphPattern::validate() const {
    if (k < 1) throw std::invalid_argument("SubgraphPattern: k < 1");
    if (excess.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("SubgraphPattern: excess size != k");
    for (std::int64_t e : excess)
        if (e < 0) throw std::invalid_argument("SubgraphPattern: negative excess");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e[0] < 1 || e[1] <= e[0] || e[1] > k || e[2] < 1)
            throw std::invalid_argument("SubgraphPattern: malformed edge row");
        if (!seen.insert({e[0], e[1]}).second)
            throw std::invalid_argument("SubgraphPattern: duplicate edge row");
    }
    // connectivity over the underlying simple graph
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
    for (const auto& e : edges) {
        adj[static_cast<std::size_t>(e[0] - 1)].push_back(e[1] - 1);
        adj[static_cast<std::size_t>(e[1] - 1)].push_back(e[0] - 1);
    }
    std::vector<char> vis(static_cast<std::size_t>(k), 0);
    std::vector<int> stack{0};
    vis[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!vis[static_cast<std::size_t>(w)]) {
                vis[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != k)
        throw std::invalid_argument("SubgraphPattern: not connected");
}

bool SubgraphPattern::is_tree() const {
    if (edges.size() + 1 != static_cast<std::size_t>(k)) return false;
    for (const auto& e : edges)
        if (e[2] != 1) return false;
    return true;  // connected is part of validate(); k-1 simple edges + connected = tree
}

std::vector<std::int64_t> SubgraphPattern::degrees() const {
    std::vector<std::int64_t> d(static_cast<std::size_t>(k), 0);
    for (const auto& e : edges) {
        d[static_cast<std::size_t>(e[0] - 1)] += e[2];
        d[static_cast<std::size_t>(e[1] - 1)] += e[2];
    }
    return d;
}

namespace {

// BFS from the root over the underlying simple graph: returns (order of
// 0-based vertices, parent of each in that order, depth per vertex).
struct PatternBfs {
    std::vector<int> order;
    std::vector<int> parent;  // per vertex, -1 for the root
    std::vector<int> depth;   // per vertex
};

PatternBfs pattern_bfs(const SubgraphPattern& f) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(f.k));
    for (const auto& e : f.edges) {
        adj[static_cast<std::size_t>(e[0] - 1)].push_back(e[1] - 1);
        adj[static_cast<std::size_t>(e[1] - 1)].push_back(e[0] - 1);
    }
    PatternBfs b;
    b.parent.assign(static_cast<std::size_t>(f.k), -1);
    b.depth.assign(static_cast<std::size_t>(f.k), -1);
    b.order.push_back(0);
    b.depth[0] = 0;
    for (std::size_t head = 0; head < b.order.size(); ++head) {
        const int v = b.order[head];
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (b.depth[static_cast<std::size_t>(w)] < 0) {
                b.depth[static_cast<std::size_t>(w)] = b.depth[static_cast<std::size_t>(v)] + 1;
                b.parent[static_cast<std::size_t>(w)] = v;
                b.order.push_back(w);
            }
        }
    }
    return b;
}

}  // namespace

int SubgraphPattern::depth() const {
    const PatternBfs b = pattern_bfs(*this);
    int d = 0;
    for (int x : b.depth) d = std::max(d, x);
    return d;
}

SubgraphPattern SubgraphPattern::parse_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SubgraphPattern f;
    f.k = j.at("vertices").get<int>();
    if (j.contains("root") && j.at("root").get<int>() != 1)
        throw std::invalid_argument("SubgraphPattern: root must be vertex 1");
    f.excess.assign(static_cast<std::size_t>(std::max(f.k, 0)), 0);
    if (j.contains("edges")) {
        for (const auto& row : j.at("edges")) {
            if (row.size() < 2 || row.size() > 3)
                throw std::invalid_argument("SubgraphPattern: edge row needs 2 or 3 entries");
            int a = row[0].get<int>(), b = row[1].get<int>();
            const int mult = row.size() == 3 ? row[2].get<int>() : 1;
            if (a > b) std::swap(a, b);
            f.edges.push_back({a, b, mult});
        }
    }
    std::sort(f.edges.begin(), f.edges.end());
    if (j.contains("excess")) {
        for (const auto& [key, val] : j.at("excess").items()) {
            const int i = std::stoi(key);
            if (i < 1 || i > f.k)
                throw std::invalid_argument("SubgraphPattern: excess key out of range");
            f.excess[static_cast<std::size_t>(i - 1)] = val.get<std::int64_t>();
        }
    }
    f.validate();
    return f;
}

SubgraphPattern SubgraphPattern::load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("SubgraphPattern: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

std::string SubgraphPattern::to_json() const {
    nlohmann::json j;
    j["vertices"] = k;
    j["root"] = 1;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges) j["edges"].push_back({e[0], e[1], e[2]});
    nlohmann::json ex = nlohmann::json::object();
    for (int i = 0; i < k; ++i) {
        if (excess[static_cast<std::size_t>(i)] != 0)
            ex[std::to_string(i + 1)] = excess[static_cast<std::size_t>(i)];
    }
    j["excess"] = ex;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Finite-graph counting
// ---------------------------------------------------------------------------

namespace {

// Multiplicity of the edge (u, v) in the graph, by scanning u's incidence
// list (cheap: callers only reach here for u of small, exact degree).
std::uint32_t edge_multiplicity(const UndirectedIndex& idx, std::uint32_t u,
                                std::uint32_t v) {
    std::uint32_t c = 0;
    for (const auto* e = idx.begin(u); e != idx.end(u); ++e)
        if (e->neighbor == v) ++c;
    return c;
}

struct CountContext {
    const SubgraphPattern* f;
    const PAGraph* g;
    const UndirectedIndex* idx;
    std::vector<std::int64_t> required;       // per pattern vertex (0-based)
    std::vector<int> order, parent_of;        // BFS order and parents
    // pattern edges (other endpoint, multiplicity) incident to each vertex
    std::vector<std::vector<std::pair<int, int>>> pedges;
    std::vector<std::uint32_t> image;         // pattern vertex -> graph vertex
    std::uint64_t total = 0;

    void search(std::size_t t, std::uint64_t weight);
    void try_candidate(std::size_t t, std::uint32_t cand, std::uint64_t weight);
};

void CountContext::try_candidate(std::size_t t, std::uint32_t cand,
                                 std::uint64_t weight) {
    const int pv = order[t];
    if (g->degree(cand) != static_cast<std::uint64_t>(required[static_cast<std::size_t>(pv)]))
        return;
    for (std::size_t s = 0; s < t; ++s)
        if (image[static_cast<std::size_t>(order[s])] == cand) return;  // injectivity
    // weight of all pattern edges from pv into the already-mapped prefix
    std::uint64_t w = weight;
    for (const auto& [other, mult] : pedges[static_cast<std::size_t>(pv)]) {
        const std::uint32_t img_other = image[static_cast<std::size_t>(other)];
        if (img_other == 0) continue;  // not mapped yet
        const std::uint32_t gm = edge_multiplicity(*idx, cand, img_other);
        if (gm == 0) return;
        for (int rep = 0; rep < mult; ++rep) w *= gm;
    }
    image[static_cast<std::size_t>(pv)] = cand;
    search(t + 1, w);
    image[static_cast<std::size_t>(pv)] = 0;
}

void CountContext::search(std::size_t t, std::uint64_t weight) {
    if (t == order.size()) {
        total += weight;
        return;
    }
    const int pv = order[t];
    const int pp = parent_of[static_cast<std::size_t>(pv)];
    // candidates: distinct neighbors of the parent's image
    const std::uint32_t anchor = image[static_cast<std::size_t>(pp)];
    std::uint32_t last = 0;
    std::vector<std::uint32_t> cands;
    for (const auto* e = idx->begin(anchor); e != idx->end(anchor); ++e)
        cands.push_back(e->neighbor);
    std::sort(cands.begin(), cands.end());
    for (std::uint32_t c : cands) {
        if (c == last) continue;
        last = c;
        try_candidate(t, c, weight);
    }
}

}  // namespace

std::uint64_t count_inj(const SubgraphPattern& f, const PAGraph& g) {
    f.validate();
    const UndirectedIndex idx = build_undirected_index(g);

    CountContext ctx;
    ctx.f = &f;
    ctx.g = &g;
    ctx.idx = &idx;
    const std::vector<std::int64_t> df = f.degrees();
    ctx.required.resize(static_cast<std::size_t>(f.k));
    for (int i = 0; i < f.k; ++i)
        ctx.required[static_cast<std::size_t>(i)] =
            df[static_cast<std::size_t>(i)] + f.excess[static_cast<std::size_t>(i)];
    const PatternBfs b = pattern_bfs(f);
    ctx.order = b.order;
    ctx.parent_of = b.parent;
    ctx.pedges.resize(static_cast<std::size_t>(f.k));
    for (const auto& e : f.edges) {
        ctx.pedges[static_cast<std::size_t>(e[0] - 1)].push_back({e[1] - 1, e[2]});
        ctx.pedges[static_cast<std::size_t>(e[1] - 1)].push_back({e[0] - 1, e[2]});
    }
    ctx.image.assign(static_cast<std::size_t>(f.k), 0);

    // root candidates: every vertex of the required degree
    for (std::uint32_t v = 1; v <= g.n; ++v)
        ctx.try_candidate(0, v, 1);
    return ctx.total;
}

// ---------------------------------------------------------------------------
// Monte Carlo limit frequency
// ---------------------------------------------------------------------------

namespace {

struct TreeCountContext {
    const PolyaPointTree* t;
    std::vector<std::int64_t> required;
    std::vector<int> order, parent_of;
    std::vector<std::uint32_t> image;
    std::uint64_t total = 0;

    void search(std::size_t s);
    void try_node(std::size_t s, std::uint32_t cand);
};

void TreeCountContext::try_node(std::size_t s, std::uint32_t cand) {
    const int pv = order[s];
    if (!t->nodes[cand].expanded) return;  // degree unknown: cannot match
    if (t->degree(cand) != static_cast<std::uint64_t>(required[static_cast<std::size_t>(pv)]))
        return;
    for (std::size_t q = 0; q < s; ++q)
        if (image[static_cast<std::size_t>(order[q])] == cand) return;
    image[static_cast<std::size_t>(pv)] = cand;
    search(s + 1);
    image[static_cast<std::size_t>(pv)] = PolyaPointTree::npos;
}

void TreeCountContext::search(std::size_t s) {
    if (s == order.size()) {
        ++total;
        return;
    }
    const int pv = order[s];
    const std::uint32_t anchor =
        image[static_cast<std::size_t>(parent_of[static_cast<std::size_t>(pv)])];
    const auto& an = t->nodes[anchor];
    for (std::uint32_t c = an.child_begin; c < an.child_end; ++c) try_node(s, c);
    if (an.parent != PolyaPointTree::npos) try_node(s, an.parent);
}

}  // namespace

THatEstimate estimate_t_hat_mc(const SubgraphPattern& f, const ModelParams& p,
                               std::uint64_t samples, RandomStream& rng,
                               std::uint64_t max_nodes) {
    f.validate();
    if (samples < 1)
        throw std::invalid_argument("estimate_t_hat_mc: samples < 1");
    if (!f.is_tree()) return {};  // non-tree limit frequency is identically 0

    const int r = f.depth() + 1;
    const std::vector<std::int64_t> df = f.degrees();
    TreeCountContext ctx;
    ctx.required.resize(static_cast<std::size_t>(f.k));
    for (int i = 0; i < f.k; ++i)
        ctx.required[static_cast<std::size_t>(i)] =
            df[static_cast<std::size_t>(i)] + f.excess[static_cast<std::size_t>(i)];
    const PatternBfs b = pattern_bfs(f);
    ctx.order = b.order;
    ctx.parent_of = b.parent;

    THatEstimate out;
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const PolyaPointTree tree = sample_tree(p, r, max_nodes, rng);
        if (tree.truncated) {
            ++out.excluded_truncated;
            continue;
        }
        ctx.t = &tree;
        ctx.total = 0;
        ctx.image.assign(static_cast<std::size_t>(f.k), PolyaPointTree::npos);
        // the pattern root is pinned to the tree root
        ctx.try_node(0, 0);
        const double c = static_cast<double>(ctx.total);
        sum += c;
        sum_sq += c * c;
        ++out.samples_used;
    }
    if (out.samples_used > 0) {
        const double n = static_cast<double>(out.samples_used);
        out.estimate = sum / n;
        const double var = std::max(0.0, sum_sq / n - out.estimate * out.estimate);
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form density and quadrature
// ---------------------------------------------------------------------------

namespace {

// Per-vertex bookkeeping induced by a position order theta.
struct OrderInfo {
    bool feasible = true;
    std::vector<int> parent;          // -1 for root
    std::vector<int> n_left, n_right; // |L(v)|, |R(v)| within the pattern
    std::vector<long long> n_prime;   // unmatched right-children
    std::vector<double> alpha;        // strength shape: a or a+1
    std::vector<int> m_minus;         // m or m-1
};

OrderInfo order_info(const SubgraphPattern& f, const ModelParams& p,
                     const std::vector<int>& theta) {
    const std::size_t k = static_cast<std::size_t>(f.k);
    if (theta.size() != k)
        throw std::invalid_argument("order: theta size mismatch");
    std::vector<int> rank(k, -1);
    for (std::size_t r = 0; r < k; ++r) {
        const int v = theta[r];
        if (v < 0 || v >= f.k || rank[static_cast<std::size_t>(v)] != -1)
            throw std::invalid_argument("order: theta is not a permutation");
        rank[static_cast<std::size_t>(v)] = static_cast<int>(r);
    }

    const PatternBfs b = pattern_bfs(f);
    OrderInfo info;
    info.parent = b.parent;
    info.n_left.assign(k, 0);
    info.n_right.assign(k, 0);
    info.n_prime.assign(k, 0);
    info.alpha.assign(k, p.a);
    info.m_minus.assign(k, p.m);
    for (int v = 1; v < f.k; ++v) {
        const int pa = b.parent[static_cast<std::size_t>(v)];
        const bool left = rank[static_cast<std::size_t>(v)] < rank[static_cast<std::size_t>(pa)];
        if (left) {
            ++info.n_left[static_cast<std::size_t>(pa)];
            info.alpha[static_cast<std::size_t>(v)] = p.a + 1.0;  // discovered from the right
        } else {
            ++info.n_right[static_cast<std::size_t>(pa)];
            info.m_minus[static_cast<std::size_t>(v)] = p.m - 1;
        }
    }
    for (std::size_t v = 0; v < k; ++v) {
        info.n_prime[v] =
            f.excess[v] - info.m_minus[v] + info.n_left[v];
        if (info.n_prime[v] < 0 || info.n_left[v] > info.m_minus[v])
            info.feasible = false;
    }
    return info;
}

double falling_factorial(int m, int l) {
    double r = 1.0;
    for (int i = 0; i < l; ++i) r *= static_cast<double>(m - i);
    return r;
}

double lfactorial(long long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

double eval_density(const SubgraphPattern& f, const ModelParams& p,
                    const std::vector<double>& x,
                    const std::vector<double>& gamma,
                    const std::vector<int>& theta) {
    f.validate();
    if (!f.is_tree())
        throw std::invalid_argument("eval_density: pattern must be a tree");
    const std::size_t k = static_cast<std::size_t>(f.k);
    if (x.size() != k || gamma.size() != k)
        throw std::invalid_argument("eval_density: x/gamma size mismatch");
    for (double xi : x)
        if (!(xi > 0.0 && xi <= 1.0))
            throw std::invalid_argument("eval_density: positions must lie in (0,1]");
    for (double gi : gamma)
        if (!(gi > 0.0))
            throw std::invalid_argument("eval_density: strengths must be positive");
    const OrderInfo info = order_info(f, p, theta);
    for (std::size_t r = 1; r < k; ++r) {
        if (!(x[static_cast<std::size_t>(theta[r - 1])] < x[static_cast<std::size_t>(theta[r])]))
            throw std::invalid_argument("eval_density: positions inconsistent with theta");
    }
    if (!info.feasible) return 0.0;

    const double psi = p.psi_exp;
    double dens = (psi + 1.0) * std::pow(x[0], psi);
    for (std::size_t v = 0; v < k; ++v) {
        const double xp = std::pow(x[v], psi);
        const double kappa = (1.0 - xp) / xp;
        const double H = gamma[v] * kappa;
        const long long np = info.n_prime[v];
        dens *= falling_factorial(info.m_minus[v], info.n_left[v]);
        dens *= std::exp(-H + np * std::log(H > 0.0 ? H : 1.0) - lfactorial(np));
        if (H == 0.0 && np > 0) return 0.0;  // Poisson(0) cannot hit np > 0
        dens *= std::pow(x[v], -static_cast<double>(info.n_left[v]));
        // right-children factors gamma_v psi x_j^{psi-1} / x_v^psi
        for (int w = 1; w < f.k; ++w) {
            if (info.parent[static_cast<std::size_t>(w)] != static_cast<int>(v)) continue;
            if (info.m_minus[static_cast<std::size_t>(w)] != p.m - 1) continue;  // w is L
            dens *= gamma[v] * psi * std::pow(x[static_cast<std::size_t>(w)], psi - 1.0) / xp;
        }
    }
    return dens;
}

namespace {

// Gamma-integrated position density for one ordering: the x-only factor of
//   (ψ+1) x_1^ψ Π_v (m_-)_{|L|} Γ(α+n'+|R|)/(n'! Γ(α))
//       (1-x_v^ψ)^{n'} x_v^{ψ α - |L|} ψ^{|R|} Π_{j∈R(v)} x_j^{ψ-1}
// obtained from ∫ γ^{α-1}e^{-γ}/Γ(α) · e^{-γκ}(γκ)^{n'}/n'! · γ^{|R|} dγ
//   = κ^{n'} Γ(α+n'+|R|) / (n'! Γ(α) (1+κ)^{α+n'+|R|}),
// rewritten with κ/(1+κ) = 1-x^ψ and 1/(1+κ) = x^ψ.
struct OrderedIntegrand {
    const SubgraphPattern* f;
    const ModelParams* p;
    OrderInfo info;
    double const_factor = 0.0;  // position-independent prefactor

    double operator()(const std::vector<double>& x) const {
        const double psi = p->psi_exp;
        double val = const_factor * std::pow(x[0], psi);
        for (std::size_t v = 0; v < x.size(); ++v) {
            const double xp = std::pow(x[v], psi);
            val *= std::pow(1.0 - xp, static_cast<double>(info.n_prime[v]));
            val *= std::pow(x[v], psi * info.alpha[v] - info.n_left[v]);
            if (v > 0 && info.m_minus[v] == p->m - 1)  // v is an R-child
                val *= psi * std::pow(x[v], psi - 1.0);
        }
        return val;
    }
};

OrderedIntegrand make_ordered_integrand(const SubgraphPattern& f,
                                        const ModelParams& p,
                                        const std::vector<int>& theta) {
    OrderedIntegrand gi;
    gi.f = &f;
    gi.p = &p;
    gi.info = order_info(f, p, theta);
    if (!gi.info.feasible) {
        gi.const_factor = 0.0;
        return gi;
    }
    double logc = std::log(p.psi_exp + 1.0);
    for (std::size_t v = 0; v < static_cast<std::size_t>(f.k); ++v) {
        const double alpha = gi.info.alpha[v];
        const long long np = gi.info.n_prime[v];
        const int nr = gi.info.n_right[v];
        logc += std::lgamma(alpha + static_cast<double>(np) + nr) - lfactorial(np) -
                std::lgamma(alpha);
        const double ff = falling_factorial(gi.info.m_minus[v], gi.info.n_left[v]);
        logc += std::log(ff);
    }
    gi.const_factor = std::exp(logc);
    return gi;
}

// Nested adaptive integration over 0 < x_{theta[0]} < ... < x_{theta[k-1]} < 1.
double integrate_ordered(const OrderedIntegrand& gi, const std::vector<int>& theta,
                         double abs_tol) {
    const std::size_t k = theta.size();
    std::vector<double> x(k, 0.0);

    // recursive lambdas over rank levels, outermost = largest position
    std::function<double(std::size_t, double)> level = [&](std::size_t rank_from_top,
                                                           double upper) -> double {
        const std::size_t rank = k - 1 - rank_from_top;
        const int v = theta[rank];
        // deeper levels get tighter tolerances so errors cannot accumulate
        const double tol = abs_tol * std::pow(0.1, static_cast<double>(rank_from_top));
        auto f1 = [&](double xv) -> double {
            x[static_cast<std::size_t>(v)] = xv;
            if (rank == 0) return gi(x);
            return level(rank_from_top + 1, xv);
        };
        return integrate_adaptive(f1, 0.0, upper, tol).value;
    };
    return level(0, 1.0);
}

}  // namespace

double t_hat_quadrature(const SubgraphPattern& f, const ModelParams& p,
                        double abs_tol) {
    f.validate();
    if (!f.is_tree()) return 0.0;
    if (f.k > 3)
        throw std::invalid_argument(
            "t_hat_quadrature: implemented for patterns with at most 3 vertices");

    std::vector<int> theta(static_cast<std::size_t>(f.k));
    std::iota(theta.begin(), theta.end(), 0);
    double total = 0.0;
    do {
        const OrderedIntegrand gi = make_ordered_integrand(f, p, theta);
        if (gi.const_factor == 0.0) continue;
        total += integrate_ordered(gi, theta, abs_tol);
    } while (std::next_permutation(theta.begin(), theta.end()));
    return total;
}

}  // namespace pagen
