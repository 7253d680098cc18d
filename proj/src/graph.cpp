#include "pagen/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pagen {

const char* to_string(ModelTag tag) {
    switch (tag) {
        case ModelTag::independent: return "independent";
        case ModelTag::conditional: return "conditional";
        case ModelTag::sequential: return "sequential";
        case ModelTag::polya: return "polya";
    }
    return "?";
}

ModelTag model_tag_from_string(const std::string& s) {
    if (s == "independent") return ModelTag::independent;
    if (s == "conditional") return ModelTag::conditional;
    if (s == "sequential") return ModelTag::sequential;
    if (s == "polya") return ModelTag::polya;
    throw std::invalid_argument("unknown model tag: " + s);
}

void PAGraph::recompute_degrees() {
    degrees.assign(n + 1, 0);
    for (std::uint32_t v = 1; v <= n; ++v) degrees[v] += send_count(v);
    for (std::uint32_t t : targets) degrees[t] += 1;
}

void PAGraph::check_invariants() const {
    if (send_off.size() != std::size_t(n) + 2 || send_off[0] != 0 || send_off[1] != 0)
        throw std::logic_error("PAGraph: bad offset table");
    if (send_off[n + 1] != targets.size())
        throw std::logic_error("PAGraph: offsets do not cover targets");
    for (std::uint32_t v = 1; v <= n; ++v) {
        if (send_off[v] > send_off[v + 1]) throw std::logic_error("PAGraph: offsets not monotone");
        for (std::uint64_t e = send_off[v]; e < send_off[v + 1]; ++e) {
            if (targets[e] < 1 || targets[e] >= v)
                throw std::logic_error("PAGraph: edge target must precede its sender");
        }
    }
    if (model != ModelTag::conditional) {
        if (edge_count() != std::uint64_t(params.m) * (n - 1))
            throw std::logic_error("PAGraph: edge count must be m (n - 1)");
        for (std::uint32_t v = 2; v <= n; ++v)
            if (send_count(v) != params.m)
                throw std::logic_error("PAGraph: every vertex >= 2 must send m edges");
    }
    std::uint64_t degree_sum = 0;
    for (std::uint32_t v = 1; v <= n; ++v) degree_sum += degrees[v];
    if (degree_sum != 2 * edge_count())
        throw std::logic_error("PAGraph: handshake identity violated");
}

SeedGraph SeedGraph::complete(int m) {
    SeedGraph s;
    s.size = static_cast<std::uint32_t>(m + 1);
    for (std::uint32_t v = 2; v <= s.size; ++v)
        for (std::uint32_t t = 1; t < v; ++t) s.edges.emplace_back(v, t);
    return s;
}

void SeedGraph::validate(int m) const {
    if (size < 2) throw std::invalid_argument("seed graph needs at least two vertices");
    std::vector<int> sends(size + 1, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto [v, t] : edges) {
        if (v < 2 || v > size || t < 1 || t >= v)
            throw std::invalid_argument("seed graph edge endpoints out of range");
        if (++sends[v] > m)
            throw std::invalid_argument("seed graph vertex sends more than m edges");
        seen.emplace_back(v, t);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("seed graph must be simple");
}

namespace {

void append_u64(std::string& buf, std::uint64_t v) {
    char tmp[24];
    auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    (void)ec;
    buf.append(tmp, p);
}

std::string format_alpha(double alpha) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", alpha);
    return tmp;
}

} // namespace

void write_edge_tsv(const PAGraph& g, std::ostream& out) {
    std::string buf;
    buf.reserve(1 << 20);
    buf += "# pa-graph n=";
    append_u64(buf, g.n);
    buf += " m=";
    append_u64(buf, static_cast<std::uint64_t>(g.params.m));
    buf += " alpha=";
    buf += format_alpha(g.params.alpha);
    buf += " model=";
    buf += to_string(g.model);
    buf += " seed=";
    append_u64(buf, g.seed.master_seed);
    buf += '\n';
    for (std::uint32_t v = 1; v <= g.n; ++v) {
        int slot = 0;
        for (std::uint64_t e = g.send_off[v]; e < g.send_off[v + 1]; ++e) {
            ++slot;
            append_u64(buf, v);
            buf += '\t';
            append_u64(buf, g.targets[e]);
            buf += '\t';
            append_u64(buf, static_cast<std::uint64_t>(slot));
            buf += '\n';
            if (buf.size() > (1 << 20)) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                buf.clear();
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_edge_tsv_file(const PAGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_edge_tsv(g, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

PAGraph read_edge_tsv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# pa-graph ", 0) != 0)
        throw std::runtime_error("edge TSV: missing '# pa-graph' header");

    auto field = [&](const std::string& key) -> std::string {
        const std::string pat = " " + key + "=";
        auto pos = header.find(pat);
        if (pos == std::string::npos)
            throw std::runtime_error("edge TSV header: missing field " + key);
        pos += pat.size();
        auto end = header.find(' ', pos);
        return header.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    };

    PAGraph g;
    g.n = static_cast<std::uint32_t>(std::stoull(field("n")));
    const int m = std::stoi(field("m"));
    const double alpha = std::stod(field("alpha"));
    g.params = derive_params(m, alpha);
    g.model = model_tag_from_string(field("model"));
    g.seed.master_seed = std::stoull(field("seed"));

    std::vector<std::vector<std::uint32_t>> sends(std::size_t(g.n) + 1);
    std::string line;
    std::uint64_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::uint64_t s = 0, t = 0, slot = 0;
        const char* p = line.c_str();
        const char* pe = p + line.size();
        auto r1 = std::from_chars(p, pe, s);
        if (r1.ec != std::errc() || *r1.ptr != '\t')
            throw std::runtime_error("edge TSV: bad row at line " + std::to_string(lineno));
        auto r2 = std::from_chars(r1.ptr + 1, pe, t);
        if (r2.ec != std::errc() || *r2.ptr != '\t')
            throw std::runtime_error("edge TSV: bad row at line " + std::to_string(lineno));
        auto r3 = std::from_chars(r2.ptr + 1, pe, slot);
        if (r3.ec != std::errc())
            throw std::runtime_error("edge TSV: bad row at line " + std::to_string(lineno));
        if (s < 2 || s > g.n || t < 1 || t >= s)
            throw std::runtime_error("edge TSV: endpoint out of range at line " +
                                     std::to_string(lineno));
        auto& vec = sends[s];
        if (slot != vec.size() + 1)
            throw std::runtime_error("edge TSV: slots of a sender must be consecutive from 1");
        vec.push_back(static_cast<std::uint32_t>(t));
    }

    g.send_off.assign(std::size_t(g.n) + 2, 0);
    for (std::uint32_t v = 1; v <= g.n; ++v)
        g.send_off[v + 1] = g.send_off[v] + sends[v].size();
    g.targets.reserve(g.send_off[g.n + 1]);
    for (std::uint32_t v = 1; v <= g.n; ++v)
        g.targets.insert(g.targets.end(), sends[v].begin(), sends[v].end());
    g.recompute_degrees();
    return g;
}

PAGraph read_edge_tsv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_edge_tsv(in);
}

UndirectedIndex build_undirected_index(const PAGraph& g) {
    UndirectedIndex idx;
    idx.off.assign(std::size_t(g.n) + 2, 0);
    for (std::uint32_t v = 1; v <= g.n; ++v) idx.off[v + 1] = g.degree(v);
    for (std::uint32_t v = 1; v <= g.n; ++v) idx.off[v + 1] += idx.off[v];
    idx.entries.resize(2 * g.edge_count());
    std::vector<std::uint64_t> cursor(idx.off.begin(), idx.off.end());
    // Edges are visited in global birth order, so every per-vertex
    // incidence list comes out sorted by edge id without a sort pass.
    for (std::uint32_t v = 1; v <= g.n; ++v) {
        for (std::uint64_t e = g.send_off[v]; e < g.send_off[v + 1]; ++e) {
            const std::uint32_t t = g.targets[e];
            const auto id = static_cast<std::uint32_t>(e);
            idx.entries[cursor[v]++] = {t, id};
            idx.entries[cursor[t]++] = {v, id};
        }
    }
    return idx;
}

} // namespace pagen
