#include "pagen/growth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pagen {

// ----------------------------------------------------------------------
// CumulativeWeightTree

CumulativeWeightTree::CumulativeWeightTree(std::uint32_t size)
    : size_(size), cells_(std::size_t(size) + 1, 0) {
    if (size_ > 0) {
        top_bit_ = 1;
        while (std::uint64_t(top_bit_) * 2 <= size_) top_bit_ *= 2;
    }
}

void CumulativeWeightTree::add(std::uint32_t i, std::int64_t delta) {
    if (i < 1 || i > size_) throw std::out_of_range("CumulativeWeightTree::add: bad index");
    for (; i <= size_; i += i & (~i + 1u)) cells_[i] += static_cast<std::uint64_t>(delta);
}

std::uint64_t CumulativeWeightTree::prefix_sum(std::uint32_t i) const {
    if (i > size_) throw std::out_of_range("CumulativeWeightTree::prefix_sum: bad index");
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1u)) s += cells_[i];
    return s;
}

std::uint32_t CumulativeWeightTree::find_owner(std::uint64_t t) const {
    std::uint32_t pos = 0;
    for (std::uint32_t bit = top_bit_; bit != 0; bit >>= 1) {
        const std::uint32_t next = pos + bit;
        if (next <= size_ && cells_[next] <= t) {
            t -= cells_[next];
            pos = next;
        }
    }
    if (pos >= size_)
        throw std::invalid_argument("CumulativeWeightTree::find_owner: offset >= total mass");
    return pos + 1;
}

// ----------------------------------------------------------------------
// shared scaffolding

namespace {

constexpr std::uint64_t kConditionalAttemptCap = 1'000'000;
constexpr std::uint64_t kResidualDrawCap = 100'000'000;

PAGraph uniform_scaffold(const ModelParams& p, std::uint32_t n, ModelTag tag, SeedSpec seed) {
    if (n < 2) throw std::invalid_argument("graph growth needs n >= 2");
    if (p.m < 2) throw std::invalid_argument("graph models need m >= 2");
    PAGraph g;
    g.n = n;
    g.params = p;
    g.model = tag;
    g.seed = seed;
    g.send_off.assign(std::size_t(n) + 2, 0);
    for (std::uint32_t v = 2; v <= n; ++v)
        g.send_off[v + 1] = g.send_off[v] + static_cast<std::uint64_t>(p.m);
    g.targets.reserve(std::uint64_t(p.m) * (n - 1));
    return g;
}

} // namespace

// ----------------------------------------------------------------------
// single-model generators

PAGraph generate_independent(const ModelParams& p, std::uint32_t n, SeedSpec seed) {
    PAGraph g = uniform_scaffold(p, n, ModelTag::independent, seed);
    RandomStream rng(seed, 0);
    const auto m = static_cast<std::uint32_t>(p.m);

    CumulativeWeightTree deg(n);
    for (std::uint32_t s = 0; s < m; ++s) g.targets.push_back(1);
    deg.add(1, m);
    deg.add(2, m);

    std::vector<std::uint32_t> round(m);
    for (std::uint32_t v = 3; v <= n; ++v) {
        // The m slots are i.i.d. given the (v-1)-vertex graph, so the
        // degree weights stay frozen until the whole round is placed.
        const std::uint64_t z = deg.prefix_sum(v - 1); // == 2 m (v - 2)
        for (std::uint32_t i = 0; i < m; ++i) {
            std::uint32_t k;
            if (p.alpha != 0.0 && rng.uniform01() < p.alpha)
                k = static_cast<std::uint32_t>(rng.uniform_index(v - 1)) + 1;
            else
                k = deg.find_owner(rng.uniform_index(z));
            round[i] = k;
            g.targets.push_back(k);
        }
        for (std::uint32_t i = 0; i < m; ++i) deg.add(round[i], 1);
        deg.add(v, m);
    }
    g.recompute_degrees();
    return g;
}

PAGraph generate_sequential(const ModelParams& p, std::uint32_t n, SeedSpec seed) {
    PAGraph g = uniform_scaffold(p, n, ModelTag::sequential, seed);
    RandomStream rng(seed, 0);
    const auto m = static_cast<std::uint32_t>(p.m);

    CumulativeWeightTree deg(n);
    for (std::uint32_t s = 0; s < m; ++s) g.targets.push_back(1);
    deg.add(1, m);
    deg.add(2, m);

    for (std::uint32_t v = 3; v <= n; ++v) {
        for (int i = 1; i <= p.m; ++i) {
            // Split the slot law into its uniform part (weight
            // tilde_alpha) and its degree-proportional part; the latter
            // draws an exact integer offset below the running degree
            // total 2m(v-2) + i - 1 of the candidates {1, ..., v-1}.
            std::uint32_t k;
            if (p.alpha != 0.0 && rng.uniform01() < tilde_alpha(p, v, i))
                k = static_cast<std::uint32_t>(rng.uniform_index(v - 1)) + 1;
            else
                k = deg.find_owner(rng.uniform_index(deg.prefix_sum(v - 1)));
            g.targets.push_back(k);
            deg.add(k, 1);
            deg.add(v, 1);
        }
    }
    g.recompute_degrees();
    return g;
}

PAGraph generate_conditional(const ModelParams& p, std::uint32_t n, SeedSpec seed,
                             const SeedGraph* seed_graph) {
    if (p.m < 2) throw std::invalid_argument("graph models need m >= 2");
    SeedGraph default_seed;
    const SeedGraph* sg = seed_graph;
    if (!sg) {
        default_seed = SeedGraph::complete(p.m);
        sg = &default_seed;
    }
    sg->validate(p.m);
    if (sg->size < static_cast<std::uint32_t>(p.m))
        throw std::invalid_argument(
            "conditional model: seed graph must have at least m vertices");
    if (n < sg->size)
        throw std::invalid_argument("conditional model: n smaller than the seed graph");
    if (n > sg->size && sg->edges.empty())
        throw std::invalid_argument("conditional model: seed graph has no edges to attach to");

    // Seed edges become the sends of their larger endpoint, ordered by
    // (sender, target) so the layout is deterministic.
    std::vector<std::vector<std::uint32_t>> seed_sends(sg->size + 1);
    {
        auto edges = sg->edges;
        std::sort(edges.begin(), edges.end());
        for (auto [v, t] : edges) seed_sends[v].push_back(t);
    }

    PAGraph g;
    g.n = n;
    g.params = p;
    g.model = ModelTag::conditional;
    g.seed = seed;
    g.send_off.assign(std::size_t(n) + 2, 0);
    for (std::uint32_t v = 2; v <= n; ++v)
        g.send_off[v + 1] = g.send_off[v] + (v <= sg->size ? seed_sends[v].size()
                                                           : static_cast<std::uint64_t>(p.m));
    g.targets.reserve(g.send_off[n + 1]);

    RandomStream rng(seed, 0);
    const auto m = static_cast<std::uint32_t>(p.m);
    CumulativeWeightTree deg(n);
    for (std::uint32_t v = 2; v <= sg->size; ++v) {
        for (std::uint32_t t : seed_sends[v]) {
            g.targets.push_back(t);
            deg.add(t, 1);
            deg.add(v, 1);
        }
    }

    std::vector<std::uint32_t> round(m), sorted(m);
    for (std::uint32_t v = sg->size + 1; v <= n; ++v) {
        // Slot draws follow the independent rule (frozen degree weights,
        // whose total is the doubled current edge count), but the whole
        // m-target block is redrawn until its entries are distinct.
        const std::uint64_t z = deg.prefix_sum(v - 1);
        bool accepted = false;
        for (std::uint64_t attempt = 0; attempt < kConditionalAttemptCap && !accepted;
             ++attempt) {
            for (std::uint32_t i = 0; i < m; ++i) {
                if (p.alpha != 0.0 && rng.uniform01() < p.alpha)
                    round[i] = static_cast<std::uint32_t>(rng.uniform_index(v - 1)) + 1;
                else
                    round[i] = deg.find_owner(rng.uniform_index(z));
            }
            sorted = round;
            std::sort(sorted.begin(), sorted.end());
            accepted = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        }
        if (!accepted)
            throw std::runtime_error("generate_conditional: vertex " + std::to_string(v) +
                                     " exhausted " + std::to_string(kConditionalAttemptCap) +
                                     " block attempts without m distinct targets");
        for (std::uint32_t i = 0; i < m; ++i) {
            g.targets.push_back(round[i]);
            deg.add(round[i], 1);
            deg.add(v, 1);
        }
    }
    g.recompute_degrees();
    return g;
}

// ----------------------------------------------------------------------
// maximal coupling of the sequential and independent chains

double sequential_vector_prob(const ModelParams& p, std::uint32_t v,
                              const std::vector<std::uint32_t>& deg_seq,
                              const std::vector<std::uint32_t>& w) {
    const double m = p.m;
    double prob = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::uint32_t bump = 0; // earlier slots of this vector already at w[i]
        for (std::size_t j = 0; j < i; ++j) bump += (w[j] == w[i]);
        const double denom =
            2.0 * m * (double(v) - 2.0) + 2.0 * m * p.alpha + (1.0 - p.alpha) * double(i);
        prob *= (2.0 * m * p.alpha + (1.0 - p.alpha) * (deg_seq[w[i]] + bump)) / denom;
    }
    return prob;
}

double independent_vector_prob(const ModelParams& p, std::uint32_t v,
                               const std::vector<std::uint32_t>& deg_ind,
                               const std::vector<std::uint32_t>& w) {
    const double z = 2.0 * p.m * (double(v) - 2.0);
    double prob = 1.0;
    for (std::uint32_t k : w)
        prob *= p.alpha / (double(v) - 1.0) + (1.0 - p.alpha) * deg_ind[k] / z;
    return prob;
}

namespace {

/// Number of candidate target vectors (v-1)^m, saturating above the
/// exact-coupling cap.
std::uint64_t vector_support_size(std::uint32_t v, int m) {
    std::uint64_t s = 1;
    for (int i = 0; i < m; ++i) {
        s *= (v - 1);
        if (s > kExactCouplingMaxVectors) return kExactCouplingMaxVectors + 1;
    }
    return s;
}

/// Decode the lexicographic vector index (slot 1 most significant) into
/// 1-based targets.
void decode_vector(std::uint64_t idx, std::uint32_t v, std::vector<std::uint32_t>& w) {
    for (std::size_t i = w.size(); i-- > 0;) {
        w[i] = static_cast<std::uint32_t>(idx % (v - 1)) + 1;
        idx /= (v - 1);
    }
}

} // namespace

void couple_vertex_exact(const ModelParams& p, std::uint32_t v,
                         const std::vector<std::uint32_t>& deg_seq,
                         const std::vector<std::uint32_t>& deg_ind, RandomStream& rng,
                         std::vector<std::uint32_t>& e, std::vector<std::uint32_t>& f) {
    const auto m = static_cast<std::uint32_t>(p.m);
    const std::uint64_t support = vector_support_size(v, p.m);
    if (support > kExactCouplingMaxVectors)
        throw std::invalid_argument("couple_vertex_exact: vector support too large");
    e.resize(m);
    f.resize(m);

    std::vector<double> ps(support), pi(support);
    std::vector<std::uint32_t> w(m);
    double overlap = 0.0;
    for (std::uint64_t idx = 0; idx < support; ++idx) {
        decode_vector(idx, v, w);
        ps[idx] = sequential_vector_prob(p, v, deg_seq, w);
        pi[idx] = independent_vector_prob(p, v, deg_ind, w);
        overlap += std::min(ps[idx], pi[idx]);
    }

    // One shared uniform drives the whole draw.  Below the overlap mass
    // both vectors come from the min measure (and coincide); above it,
    // the same residual offset is pushed through both residual measures'
    // inverse CDFs in lexicographic order.  Residual supports are
    // disjoint, so P(e == f) equals the overlap exactly, which is the
    // maximum any coupling can achieve.
    const double pick = rng.uniform01();
    auto walk = [&](const std::vector<double>& num, const std::vector<double>& sub,
                    double t) -> std::uint64_t {
        std::uint64_t last_positive = 0;
        bool seen = false;
        for (std::uint64_t idx = 0; idx < support; ++idx) {
            const double mass = sub.empty() ? std::min(ps[idx], pi[idx])
                                            : std::max(0.0, num[idx] - sub[idx]);
            if (mass > 0.0) {
                last_positive = idx;
                seen = true;
                if (t < mass) return idx;
                t -= mass;
            }
        }
        // Rounding pushed t past the measure's total mass: clamp to the
        // last vector that carries any.
        if (!seen) throw std::logic_error("couple_vertex_exact: empty residual measure");
        return last_positive;
    };

    if (pick < overlap) {
        static const std::vector<double> kMinMeasure; // sentinel: use min(ps, pi)
        const std::uint64_t idx = walk(ps, kMinMeasure, pick);
        decode_vector(idx, v, e);
        f = e;
    } else {
        const double t = pick - overlap;
        decode_vector(walk(ps, pi, t), v, e); // (ps - pi)+ quantile
        decode_vector(walk(pi, ps, t), v, f); // (pi - ps)+ quantile
    }
}

CoupledPair generate_coupled(const ModelParams& p, std::uint32_t n, SeedSpec seed) {
    CoupledPair cp;
    cp.g_seq = uniform_scaffold(p, n, ModelTag::sequential, seed);
    cp.g_ind = uniform_scaffold(p, n, ModelTag::independent, seed);
    RandomStream rng(seed, 0);
    const auto m = static_cast<std::uint32_t>(p.m);
    const double alpha = p.alpha;
    const double md = p.m;

    CumulativeWeightTree fen_seq(n), fen_ind(n);
    std::vector<std::uint32_t> deg_seq(std::size_t(n) + 1, 0), deg_ind(std::size_t(n) + 1, 0);
    for (std::uint32_t s = 0; s < m; ++s) {
        cp.g_seq.targets.push_back(1);
        cp.g_ind.targets.push_back(1);
    }
    for (auto* fen : {&fen_seq, &fen_ind}) {
        fen->add(1, m);
        fen->add(2, m);
    }
    deg_seq[1] = deg_seq[2] = deg_ind[1] = deg_ind[2] = m;
    cp.exact_vector_limit = 2; // vertex 2 is deterministic in both models

    std::vector<std::uint32_t> e(m), f(m);
    for (std::uint32_t v = 3; v <= n; ++v) {
        const bool exact = vector_support_size(v, p.m) <= kExactCouplingMaxVectors;
        if (exact) {
            couple_vertex_exact(p, v, deg_seq, deg_ind, rng, e, f);
            if (cp.exact_vector_limit == v - 1) cp.exact_vector_limit = v;
        } else {
            // Greedy slot-wise maximal coupling.  Slot i of the
            // sequential chain uses its running degrees; the independent
            // chain's slot law stays frozen at the (v-1)-vertex graph, so
            // its bookkeeping is committed only after the round.
            const double z_ind = 2.0 * md * (double(v) - 2.0);
            auto ind_slot_prob = [&](std::uint32_t k) {
                return alpha / (double(v) - 1.0) + (1.0 - alpha) * deg_ind[k] / z_ind;
            };
            for (std::uint32_t i = 0; i < m; ++i) {
                const double denom = 2.0 * md * (double(v) - 2.0) + 2.0 * md * alpha +
                                     (1.0 - alpha) * double(i);
                auto seq_slot_prob = [&](std::uint32_t k) {
                    return (2.0 * md * alpha + (1.0 - alpha) * deg_seq[k]) / denom;
                };
                std::uint32_t x;
                if (alpha != 0.0 && rng.uniform01() < tilde_alpha(p, v, int(i) + 1))
                    x = static_cast<std::uint32_t>(rng.uniform_index(v - 1)) + 1;
                else
                    x = fen_seq.find_owner(rng.uniform_index(fen_seq.prefix_sum(v - 1)));
                e[i] = x;
                if (rng.uniform01() * seq_slot_prob(x) <= ind_slot_prob(x)) {
                    f[i] = x;
                } else {
                    // Draw from the residual (ind - seq)+ by rejection.
                    std::uint64_t tries = 0;
                    for (;;) {
                        if (++tries > kResidualDrawCap)
                            throw std::runtime_error(
                                "generate_coupled: residual sampler stalled");
                        std::uint32_t y;
                        if (alpha != 0.0 && rng.uniform01() < alpha)
                            y = static_cast<std::uint32_t>(rng.uniform_index(v - 1)) + 1;
                        else
                            y = fen_ind.find_owner(
                                rng.uniform_index(fen_ind.prefix_sum(v - 1)));
                        if (rng.uniform01() * ind_slot_prob(y) > seq_slot_prob(y)) {
                            f[i] = y;
                            break;
                        }
                    }
                }
                fen_seq.add(x, 1);
                deg_seq[x] += 1;
                fen_seq.add(v, 1);
                deg_seq[v] += 1;
            }
        }

        CoupledPair::Diff diff;
        for (std::uint32_t i = 0; i < m; ++i) {
            cp.g_seq.targets.push_back(e[i]);
            cp.g_ind.targets.push_back(f[i]);
            if (e[i] != f[i]) diff.slots.push_back(i + 1);
        }
        if (!diff.slots.empty()) {
            diff.vertex = v;
            cp.discrepancy_log.push_back(std::move(diff));
        }

        if (exact) {
            for (std::uint32_t i = 0; i < m; ++i) {
                fen_seq.add(e[i], 1);
                deg_seq[e[i]] += 1;
            }
            fen_seq.add(v, m);
            deg_seq[v] += m;
        }
        for (std::uint32_t i = 0; i < m; ++i) {
            fen_ind.add(f[i], 1);
            deg_ind[f[i]] += 1;
        }
        fen_ind.add(v, m);
        deg_ind[v] += m;
    }
    cp.g_seq.recompute_degrees();
    cp.g_ind.recompute_degrees();
    return cp;
}

std::string CoupledPair::method_label() const {
    return approximate() ? "slotwise-greedy" : "exact-vector";
}

double received_set_discrepancy_fraction(const CoupledPair& pair, std::uint32_t k_min) {
    const PAGraph& a = pair.g_seq;
    const PAGraph& b = pair.g_ind;
    if (a.n != b.n || a.targets.size() != b.targets.size())
        throw std::invalid_argument("received_set_discrepancy_fraction: pair shape mismatch");
    if (k_min < 1 || k_min > a.n)
        throw std::invalid_argument("received_set_discrepancy_fraction: k_min out of range");

    // Slot t is the same edge of both graphs; if its targets differ, both
    // named vertices have that edge in exactly one of their incidence
    // sets.
    std::vector<char> differs(std::size_t(a.n) + 1, 0);
    for (std::size_t t = 0; t < a.targets.size(); ++t) {
        if (a.targets[t] != b.targets[t]) {
            differs[a.targets[t]] = 1;
            differs[b.targets[t]] = 1;
        }
    }
    std::uint64_t hits = 0;
    for (std::uint32_t k = k_min; k <= a.n; ++k) hits += differs[k];
    return double(hits) / double(a.n - k_min + 1);
}

} // namespace pagen
