#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pagen/params.hpp"
#include "pagen/rng.hpp"

namespace pagen {

enum class ModelTag { independent, conditional, sequential, polya };

const char* to_string(ModelTag tag);
ModelTag model_tag_from_string(const std::string& s);

/// A multigraph produced by one of the growth rules.  Vertices are
/// 1-based; vertex v stores the ordered list of targets of the edges it
/// sent (its "slots").  For the independent/sequential/polya rules every
/// vertex v >= 2 sends exactly m edges; the conditional rule additionally
/// carries a predetermined simple seed prefix whose vertices may send
/// fewer.  Edges are identified by their global birth rank: the position
/// in `targets`, which is ordered by (sender, slot).
///
/// Degrees count multiplicity: degree(v) = #sent + #received edges.
struct PAGraph {
    std::uint32_t n = 0;
    ModelParams params;
    ModelTag model = ModelTag::independent;
    SeedSpec seed;

    /// send_off[v] .. send_off[v+1] index `targets` for vertex v (1-based;
    /// size n + 2, send_off[0] == send_off[1] == 0).
    std::vector<std::uint64_t> send_off;
    std::vector<std::uint32_t> targets;
    std::vector<std::uint32_t> degrees; ///< 1-based; degrees[0] unused

    std::uint64_t edge_count() const { return targets.size(); }
    int send_count(std::uint32_t v) const {
        return static_cast<int>(send_off[v + 1] - send_off[v]);
    }
    const std::uint32_t* sends(std::uint32_t v) const { return targets.data() + send_off[v]; }
    std::uint32_t degree(std::uint32_t v) const { return degrees[v]; }

    /// Rebuild `degrees` from the edge lists (used after loading).
    void recompute_degrees();

    /// Throws std::logic_error if a structural invariant is violated:
    /// targets smaller than senders, slot counts, handshake
    /// sum(degree) == 2 |E|, and |E| == m (n - 1) for unseeded models.
    void check_invariants() const;
};

/// A simple seed prefix for the conditional rule: edges (sender, target)
/// with target < sender <= size.  Vertices are 1-based.
struct SeedGraph {
    std::uint32_t size = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    /// Complete simple graph on {1, ..., m+1}: the default seed, in which
    /// every vertex has degree m.
    static SeedGraph complete(int m);

    void validate(int m) const; ///< simple, ordered, <= m sends per vertex
};

/// Write the edge list as TSV: a single header line
///   # pa-graph n=<n> m=<m> alpha=<alpha> model=<tag> seed=<master_seed>
/// followed by one "sender<TAB>receiver<TAB>slot" row per edge in birth
/// order.  The writer is deterministic byte-for-byte.
void write_edge_tsv(const PAGraph& g, std::ostream& out);
void write_edge_tsv_file(const PAGraph& g, const std::string& path);

/// Parse an edge TSV produced by write_edge_tsv.  Throws
/// std::runtime_error on malformed input.
PAGraph read_edge_tsv(std::istream& in);
PAGraph read_edge_tsv_file(const std::string& path);

/// Undirected incidence index for neighborhood exploration: for each
/// vertex, the incident (neighbor, edge id) pairs sorted by edge birth
/// rank.  Sent and received edges both appear once.
struct UndirectedIndex {
    std::vector<std::uint64_t> off; ///< size n + 2, 1-based vertices
    struct Entry {
        std::uint32_t neighbor;
        std::uint32_t edge_id;
    };
    std::vector<Entry> entries;

    std::size_t deg(std::uint32_t v) const { return off[v + 1] - off[v]; }
    const Entry* begin(std::uint32_t v) const { return entries.data() + off[v]; }
    const Entry* end(std::uint32_t v) const { return entries.data() + off[v + 1]; }
};

UndirectedIndex build_undirected_index(const PAGraph& g);

} // namespace pagen
