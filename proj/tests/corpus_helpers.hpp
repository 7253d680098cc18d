// Exhaustive small-multigraph corpus used to validate the canonical rooted
// multigraph code: every connected labeled multigraph with at most six edges
// (counting multiplicity), together with a brute-force isomorphism code that
// minimizes the adjacency encoding over all root-fixing relabelings.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pagen/local_view.hpp"

namespace testutil {

struct LabeledMG {
    int nv = 0;
    std::vector<std::array<std::uint32_t, 3>> edges;  // u < v, multiplicity
};

inline bool connected_spanning(const LabeledMG& g) {
    if (g.nv == 1) return g.edges.empty();
    std::vector<int> parent(g.nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& e : g.edges) parent[find(e[0])] = find(e[1]);
    const int r = find(0);
    for (int v = 1; v < g.nv; ++v)
        if (find(v) != r) return false;
    return true;
}

inline void enumerate_multigraphs(int nv, std::vector<LabeledMG>& out) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j) pairs.push_back({i, j});
    const int P = static_cast<int>(pairs.size());
    std::vector<int> mult(P, 0);
    std::function<void(int, int)> rec = [&](int idx, int used) {
        if (idx == P) {
            if (used < nv - 1) return;
            LabeledMG g;
            g.nv = nv;
            for (int q = 0; q < P; ++q)
                if (mult[q])
                    g.edges.push_back({static_cast<std::uint32_t>(pairs[q].first),
                                       static_cast<std::uint32_t>(pairs[q].second),
                                       static_cast<std::uint32_t>(mult[q])});
            if (connected_spanning(g)) out.push_back(std::move(g));
            return;
        }
        for (int c = 0; c + used <= 6; ++c) {
            mult[idx] = c;
            rec(idx + 1, used + c);
        }
        mult[idx] = 0;
    };
    rec(0, 0);
}

// Minimum adjacency encoding over all root-fixing relabelings: the defining
// (if slow) notion of rooted-multigraph isomorphism.
inline std::string brute_code(const LabeledMG& g) {
    std::vector<int> perm(g.nv);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::vector<std::array<std::uint32_t, 3>> es;
        es.reserve(g.edges.size());
        for (auto& e : g.edges) {
            std::uint32_t a = perm[e[0]], b = perm[e[1]];
            if (a > b) std::swap(a, b);
            es.push_back({a, b, e[2]});
        }
        std::sort(es.begin(), es.end());
        std::string s;
        for (auto& e : es) {
            s.push_back(static_cast<char>('0' + e[0]));
            s.push_back(static_cast<char>('0' + e[1]));
            s.push_back(static_cast<char>('0' + e[2]));
        }
        if (best.empty() || s < best) best = s;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

inline pagen::RootedBall ball_from_multigraph(const LabeledMG& g) {
    pagen::RootedBall b;
    b.vertices.resize(g.nv);
    std::iota(b.vertices.begin(), b.vertices.end(), 0);
    b.depth.assign(g.nv, -1);
    b.depth[0] = 0;
    std::vector<std::vector<int>> adj(g.nv);
    for (auto& e : g.edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    std::vector<int> q{0};
    for (std::size_t h = 0; h < q.size(); ++h)
        for (int w : adj[q[h]])
            if (b.depth[w] < 0) {
                b.depth[w] = b.depth[q[h]] + 1;
                q.push_back(w);
            }
    b.edges = g.edges;
    std::sort(b.edges.begin(), b.edges.end());
    b.birth_order.resize(g.nv);
    std::uint64_t id = 0;
    for (auto& e : b.edges)
        for (std::uint32_t c = 0; c < e[2]; ++c) {
            b.birth_order[e[0]].push_back(id);
            b.birth_order[e[1]].push_back(id);
            ++id;
        }
    return b;
}

}  // namespace testutil
