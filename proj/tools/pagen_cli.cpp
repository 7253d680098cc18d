// pagen: command-line front end for the preferential-attachment toolkit.
//
// One binary, subcommand style:
//   pagen generate --model polya --n 100000 --m 2 --alpha 0.5 --out g.tsv
//   pagen analyze degrees --in g.tsv
//   pagen analyze pmf --m 2 --alpha 0 --kmax 10
//   pagen analyze balls --n 100000 --m 2 --alpha 0 --r 1 --samples 100000
//   pagen analyze coupling --n 10000 --m 2 --alpha 0.5
//   pagen analyze subgraph --pattern pat.json --in g.tsv
//   pagen analyze fk --m 2 --alpha 0 --k 50 --ell 100000 --samples 1000
//
// All randomness flows from --seed; when absent, a master seed is drawn
// from OS entropy and recorded in the JSON sidecar/report so every run can
// be reproduced.  Exit codes: 0 ok, 2 parameter validation, 3 runtime
// failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pagen/analytics.hpp"
#include "pagen/graph.hpp"
#include "pagen/growth.hpp"
#include "pagen/limit_tree.hpp"
#include "pagen/local_view.hpp"
#include "pagen/params.hpp"
#include "pagen/rng.hpp"
#include "pagen/subgraph.hpp"
#include "pagen/urn.hpp"

using nlohmann::json;
using namespace pagen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::uint64_t os_entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Shared options; a subset applies to each subcommand.
struct Options {
    std::string model = "sequential";
    std::uint64_t n = 0;
    int m = 2;
    double alpha = 0.0;
    std::optional<std::uint64_t> seed;
    int r = 1;
    std::uint64_t samples = 0;
    int threads = 1;
    std::string out;
    std::string format = "tsv";
    std::string config;

    std::uint64_t master_seed = 0;
    std::string seed_source = "flag";

    void resolve_seed() {
        if (seed) {
            master_seed = *seed;
            seed_source = "flag";
        } else {
            master_seed = os_entropy_seed();
            seed_source = "os-entropy";
        }
    }
};

// Fill options that were not passed on the command line from a JSON config
// (typically a sidecar of a previous run), so sidecars round-trip as configs.
void merge_config(const CLI::App& cmd, Options& o) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot open config file: " + o.config);
    json j = json::parse(in);
    auto unset = [&cmd](const std::string& flag) {
        const CLI::Option* op = cmd.get_option_no_throw(flag);
        return op != nullptr && op->count() == 0;
    };
    if (j.contains("model") && unset("--model")) o.model = j["model"].get<std::string>();
    if (j.contains("n") && unset("--n")) o.n = j["n"].get<std::uint64_t>();
    if (j.contains("m") && unset("--m")) o.m = j["m"].get<int>();
    if (j.contains("alpha") && unset("--alpha")) o.alpha = j["alpha"].get<double>();
    if (j.contains("seed") && unset("--seed")) o.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("r") && unset("--r")) o.r = j["r"].get<int>();
    if (j.contains("samples") && unset("--samples"))
        o.samples = j["samples"].get<std::uint64_t>();
    if (j.contains("threads") && unset("--threads")) o.threads = j["threads"].get<int>();
    if (j.contains("out") && unset("--out")) o.out = j["out"].get<std::string>();
    if (j.contains("format") && unset("--format"))
        o.format = j["format"].get<std::string>();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Emit to --out when given, else stdout.
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_text_file(out_path, text);
}

void write_sidecar(const std::string& out_path, const json& meta) {
    if (out_path.empty() || out_path == "-") return;
    write_text_file(out_path + ".meta.json", meta.dump(2) + "\n");
}

json base_meta(const std::string& command, const Options& o) {
    json j;
    j["command"] = command;
    j["m"] = o.m;
    j["alpha"] = o.alpha;
    j["seed"] = o.master_seed;
    j["seed_source"] = o.seed_source;
    j["threads"] = o.threads;
    if (!o.out.empty()) j["out"] = o.out;
    return j;
}

int resolved_threads(const Options& o) {
    if (o.threads < 1) throw std::invalid_argument("--threads must be >= 1");
    return o.threads;
}

// Run fn(t) on `threads` workers (inline when threads == 1).
void parallel_for_threads(int threads, const std::function<void(int)>& fn) {
    if (threads == 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(fn, t);
    for (auto& th : pool) th.join();
}

// Weighted merge of empirical ball distributions produced on worker streams.
BallDistribution merge_distributions(const std::vector<BallDistribution>& parts) {
    BallDistribution total;
    for (const auto& d : parts) {
        total.samples += d.samples;
        total.excluded_truncated += d.excluded_truncated;
    }
    for (const auto& d : parts)
        for (const auto& [code, f] : d.freq)
            total.freq[code] +=
                f * static_cast<double>(d.samples) / static_cast<double>(total.samples);
    return total;
}

json distribution_dump(const BallDistribution& d) {
    json arr = json::array();
    for (const auto& [code, f] : d.freq)
        arr.push_back({{"code", base64_encode(code)}, {"freq", f}});
    return arr;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

int cmd_generate(const CLI::App& cmd, Options o) {
    merge_config(cmd, o);
    o.resolve_seed();
    if (o.n < 2) throw std::invalid_argument("--n must be >= 2");
    if (o.n > 0xffffffffull) throw std::invalid_argument("--n exceeds vertex limit");
    if (o.m < 2) throw std::invalid_argument("graph generation requires --m >= 2");
    const ModelParams p = derive_params(o.m, o.alpha);
    const ModelTag tag = model_tag_from_string(o.model);
    if (o.out.empty()) o.out = "pa_edges." + o.format;

    const double t0 = now_seconds();
    PAGraph g;
    const SeedSpec seed{o.master_seed, 0};
    const auto n32 = static_cast<std::uint32_t>(o.n);
    switch (tag) {
        case ModelTag::independent: g = generate_independent(p, n32, seed); break;
        case ModelTag::conditional: g = generate_conditional(p, n32, seed); break;
        case ModelTag::sequential: g = generate_sequential(p, n32, seed); break;
        case ModelTag::polya: g = generate_polya(p, n32, seed); break;
    }
    const double gen_seconds = now_seconds() - t0;

    if (o.format == "tsv") {
        write_edge_tsv_file(g, o.out);
    } else {
        json jg;
        jg["n"] = g.n;
        jg["m"] = o.m;
        jg["alpha"] = o.alpha;
        jg["model"] = to_string(tag);
        jg["seed"] = o.master_seed;
        json edges = json::array();
        for (std::uint32_t v = 2; v <= g.n; ++v)
            for (std::uint64_t s = g.send_off[v]; s < g.send_off[v + 1]; ++s)
                edges.push_back({v, g.targets[s],
                                 static_cast<std::uint32_t>(s - g.send_off[v] + 1)});
        jg["edges"] = std::move(edges);
        write_text_file(o.out, jg.dump() + "\n");
    }

    json meta = base_meta("generate", o);
    meta["model"] = to_string(tag);
    meta["n"] = o.n;
    meta["format"] = o.format;
    meta["edges"] = g.edge_count();
    meta["generate_seconds"] = gen_seconds;
    meta["wall_time_seconds"] = now_seconds() - t0;
    meta["edges_per_second"] =
        gen_seconds > 0 ? static_cast<double>(g.edge_count()) / gen_seconds : 0.0;
    write_sidecar(o.out, meta);
    std::cerr << "wrote " << g.edge_count() << " edges to " << o.out << " ("
              << meta["edges_per_second"].get<double>() << " edges/s)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze degrees
// ---------------------------------------------------------------------------

int cmd_degrees(const CLI::App& cmd, Options o, const std::string& in_path) {
    merge_config(cmd, o);
    if (in_path.empty()) throw std::invalid_argument("--in edge list required");
    const double t0 = now_seconds();
    const PAGraph g = read_edge_tsv_file(in_path);
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::uint32_t v = 1; v <= g.n; ++v) ++hist[g.degrees[v]];
    std::ostringstream body;
    if (o.format == "tsv") {
        body << "degree\tcount\n";
        for (const auto& [d, c] : hist) body << d << '\t' << c << '\n';
    } else {
        json j;
        j["n"] = g.n;
        json rows = json::array();
        for (const auto& [d, c] : hist) rows.push_back({{"degree", d}, {"count", c}});
        j["histogram"] = std::move(rows);
        body << j.dump(2) << '\n';
    }
    emit(o.out, body.str());
    json meta = base_meta("analyze-degrees", o);
    meta["in"] = in_path;
    meta["n"] = g.n;
    meta["format"] = o.format;
    meta["wall_time_seconds"] = now_seconds() - t0;
    write_sidecar(o.out, meta);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze pmf
// ---------------------------------------------------------------------------

int cmd_pmf(const CLI::App& cmd, Options o, int kmax) {
    merge_config(cmd, o);
    if (kmax < 0) throw std::invalid_argument("--kmax must be >= 0");
    const ModelParams p = derive_params(o.m, o.alpha);
    const double t0 = now_seconds();
    const Pmf root = degree_dist_pmf(p, kmax);
    const Pmf nbr = neighbor_degree_dist_pmf(p, kmax);
    std::ostringstream body;
    if (o.format == "tsv") {
        body << "k\troot_degree\tp_root\tneighbor_degree\tp_neighbor\n";
        char buf[64];
        for (int k = 0; k <= kmax; ++k) {
            std::snprintf(buf, sizeof buf, "%.12g", root.probs[k]);
            body << k << '\t' << (o.m + k) << '\t' << buf;
            std::snprintf(buf, sizeof buf, "%.12g", nbr.probs[k]);
            body << '\t' << (o.m + 1 + k) << '\t' << buf << '\n';
        }
        std::snprintf(buf, sizeof buf, "%.12g", root.tail_bound);
        body << "# tail_root\t" << buf;
        std::snprintf(buf, sizeof buf, "%.12g", nbr.tail_bound);
        body << "\n# tail_neighbor\t" << buf << '\n';
    } else {
        json j;
        j["m"] = o.m;
        j["alpha"] = o.alpha;
        j["p_root"] = root.probs;
        j["p_neighbor"] = nbr.probs;
        j["tail_root"] = root.tail_bound;
        j["tail_neighbor"] = nbr.tail_bound;
        body << j.dump(2) << '\n';
    }
    emit(o.out, body.str());
    json meta = base_meta("analyze-pmf", o);
    meta["kmax"] = kmax;
    meta["format"] = o.format;
    meta["wall_time_seconds"] = now_seconds() - t0;
    write_sidecar(o.out, meta);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze balls
// ---------------------------------------------------------------------------

int cmd_balls(const CLI::App& cmd, Options o, const std::string& dump_graph,
              const std::string& dump_limit) {
    merge_config(cmd, o);
    o.resolve_seed();
    if (o.n < 2) throw std::invalid_argument("--n must be >= 2");
    if (o.m < 2) throw std::invalid_argument("ball comparison requires --m >= 2");
    if (o.r < 0) throw std::invalid_argument("--r must be >= 0");
    if (o.samples < 1) throw std::invalid_argument("--samples must be >= 1");
    const int threads = resolved_threads(o);
    const ModelParams p = derive_params(o.m, o.alpha);
    const ModelTag tag = model_tag_from_string(o.model);
    const double t0 = now_seconds();

    PAGraph g;
    const SeedSpec gseed{o.master_seed, 0};
    const auto n32 = static_cast<std::uint32_t>(o.n);
    switch (tag) {
        case ModelTag::independent: g = generate_independent(p, n32, gseed); break;
        case ModelTag::conditional: g = generate_conditional(p, n32, gseed); break;
        case ModelTag::sequential: g = generate_sequential(p, n32, gseed); break;
        case ModelTag::polya: g = generate_polya(p, n32, gseed); break;
    }

    // Ensemble parallelism: split the sample budget across worker streams and
    // merge the empirical distributions.
    auto split = [&](std::uint64_t total, int t) {
        return total / threads + (static_cast<std::uint64_t>(t) < total % threads ? 1 : 0);
    };
    std::vector<BallDistribution> graph_parts(threads), limit_parts(threads);
    parallel_for_threads(threads, [&](int t) {
        const std::uint64_t quota = split(o.samples, t);
        if (quota == 0) return;
        RandomStream rg(SeedSpec{o.master_seed, 1000 + static_cast<std::uint64_t>(t)});
        graph_parts[t] = ball_distribution_graph(g, o.r, quota, rg);
        RandomStream rl(SeedSpec{o.master_seed, 2000 + static_cast<std::uint64_t>(t)});
        limit_parts[t] = ball_distribution_limit(p, o.r, quota, rl);
    });
    const BallDistribution dg = merge_distributions(graph_parts);
    const BallDistribution dl = merge_distributions(limit_parts);
    const double tv = tv_distance(dg, dl);

    json report = base_meta("analyze-balls", o);
    report["model"] = to_string(tag);
    report["n"] = o.n;
    report["r"] = o.r;
    report["samples"] = o.samples;
    report["tv"] = tv;
    report["n_samples_a"] = dg.samples;
    report["n_samples_b"] = dl.samples;
    report["excluded_truncated"] = dl.excluded_truncated;
    report["distinct_codes_a"] = dg.freq.size();
    report["distinct_codes_b"] = dl.freq.size();
    report["wall_time_seconds"] = now_seconds() - t0;
    emit(o.out, report.dump(2) + "\n");
    if (!dump_graph.empty())
        write_text_file(dump_graph, distribution_dump(dg).dump() + "\n");
    if (!dump_limit.empty())
        write_text_file(dump_limit, distribution_dump(dl).dump() + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze coupling
// ---------------------------------------------------------------------------

int cmd_coupling(const CLI::App& cmd, Options o, const std::string& emit_prefix) {
    merge_config(cmd, o);
    o.resolve_seed();
    if (o.n < 2) throw std::invalid_argument("--n must be >= 2");
    if (o.m < 2) throw std::invalid_argument("coupling requires --m >= 2");
    const ModelParams p = derive_params(o.m, o.alpha);
    const double t0 = now_seconds();
    const CoupledPair pair =
        generate_coupled(p, static_cast<std::uint32_t>(o.n), SeedSpec{o.master_seed, 0});

    json report = base_meta("analyze-coupling", o);
    report["n"] = o.n;
    report["method"] = pair.method_label();
    report["exact_vector_limit"] = pair.exact_vector_limit;
    report["vertices_differing"] = pair.discrepancy_log.size();
    report["fraction_differing"] =
        static_cast<double>(pair.discrepancy_log.size()) / static_cast<double>(o.n);
    report["fraction_differing_late_half"] = received_set_discrepancy_fraction(
        pair, static_cast<std::uint32_t>((o.n + 1) / 2));
    constexpr std::size_t kMaxDiffRows = 10000;
    json diffs = json::array();
    for (std::size_t i = 0; i < pair.discrepancy_log.size() && i < kMaxDiffRows; ++i) {
        const auto& d = pair.discrepancy_log[i];
        diffs.push_back({{"vertex", d.vertex}, {"slots", d.slots}});
    }
    report["diffs"] = std::move(diffs);
    report["diffs_truncated"] = pair.discrepancy_log.size() > kMaxDiffRows;
    report["wall_time_seconds"] = now_seconds() - t0;
    emit(o.out, report.dump(2) + "\n");
    if (!emit_prefix.empty()) {
        write_edge_tsv_file(pair.g_seq, emit_prefix + ".seq.tsv");
        write_edge_tsv_file(pair.g_ind, emit_prefix + ".ind.tsv");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze subgraph
// ---------------------------------------------------------------------------

int cmd_subgraph(const CLI::App& cmd, Options o, const std::string& pattern_path,
                 const std::string& in_path, bool quadrature) {
    merge_config(cmd, o);
    if (pattern_path.empty()) throw std::invalid_argument("--pattern file required");
    const SubgraphPattern f = SubgraphPattern::load_json_file(pattern_path);
    f.validate();
    const double t0 = now_seconds();
    json report = base_meta("analyze-subgraph", o);
    report["pattern"] = pattern_path;

    if (!in_path.empty()) {
        const PAGraph g = read_edge_tsv_file(in_path);
        const std::uint64_t c = count_inj(f, g);
        report["mode"] = "count";
        report["in"] = in_path;
        report["n"] = g.n;
        report["count"] = c;
        report["per_vertex"] = static_cast<double>(c) / static_cast<double>(g.n);
    } else if (quadrature) {
        const ModelParams p = derive_params(o.m, o.alpha);
        report["mode"] = "quadrature";
        report["estimate"] = t_hat_quadrature(f, p);
    } else {
        if (o.samples < 1)
            throw std::invalid_argument("--samples must be >= 1 for Monte Carlo");
        o.resolve_seed();
        report["seed"] = o.master_seed;
        report["seed_source"] = o.seed_source;
        const ModelParams p = derive_params(o.m, o.alpha);
        RandomStream rng(SeedSpec{o.master_seed, 4000});
        const THatEstimate e = estimate_t_hat_mc(f, p, o.samples, rng);
        report["mode"] = "monte-carlo";
        report["samples"] = o.samples;
        report["estimate"] = e.estimate;
        report["std_error"] = e.std_error;
        report["samples_used"] = e.samples_used;
        report["excluded"] = e.excluded_truncated;
    }
    report["wall_time_seconds"] = now_seconds() - t0;
    emit(o.out, report.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze fk
// ---------------------------------------------------------------------------

int cmd_fk(const CLI::App& cmd, Options o, std::uint64_t k, std::uint64_t ell) {
    merge_config(cmd, o);
    o.resolve_seed();
    if (k < 1 || ell <= k) throw std::invalid_argument("need 1 <= k < ell");
    if (o.samples < 1) throw std::invalid_argument("--samples must be >= 1");
    const int threads = resolved_threads(o);
    const ModelParams p = derive_params(o.m, o.alpha);
    const double t0 = now_seconds();

    std::vector<std::vector<double>> parts(threads);
    parallel_for_threads(threads, [&](int t) {
        const std::uint64_t quota =
            o.samples / threads + (static_cast<std::uint64_t>(t) < o.samples % threads ? 1 : 0);
        RandomStream rng(SeedSpec{o.master_seed, 3000 + static_cast<std::uint64_t>(t)});
        parts[t].reserve(quota);
        for (std::uint64_t s = 0; s < quota; ++s)
            parts[t].push_back(estimate_Fk(p, k, ell, rng));
    });
    std::vector<double> vals;
    for (auto& part : parts) vals.insert(vals.end(), part.begin(), part.end());
    double mean = 0, m2 = 0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    for (double v : vals) m2 += (v - mean) * (v - mean);
    const double var = vals.size() > 1 ? m2 / static_cast<double>(vals.size() - 1) : 0.0;

    json report = base_meta("analyze-fk", o);
    report["k"] = k;
    report["ell"] = ell;
    report["samples"] = o.samples;
    report["mean"] = mean;
    report["std"] = std::sqrt(var);
    report["std_error"] = std::sqrt(var / static_cast<double>(vals.size()));
    report["wall_time_seconds"] = now_seconds() - t0;
    emit(o.out, report.dump(2) + "\n");
    return kExitOk;
}

void add_common_model_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--m", o.m, "edges per new vertex");
    cmd->add_option("--alpha", o.alpha, "uniform-attachment probability in [0,1)");
}

void add_common_io_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "output path ('-' = stdout)");
    cmd->add_option("--config", o.config,
                    "JSON config (e.g. a previous run's sidecar); explicit flags win");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"preferential-attachment graph toolkit"};
    app.require_subcommand(1);

    Options og, od, op, ob, oc, os, of;
    std::string in_path, pattern_path, dump_graph, dump_limit, emit_prefix;
    int kmax = 10;
    bool quadrature = false;
    std::uint64_t fk_k = 50, fk_ell = 100000;

    CLI::App* gen = app.add_subcommand("generate", "grow a graph and write its edge list");
    gen->add_option("--model", og.model, "independent|conditional|sequential|polya")
        ->check(CLI::IsMember({"independent", "conditional", "sequential", "polya"}));
    gen->add_option("--n", og.n, "number of vertices");
    add_common_model_flags(gen, og);
    gen->add_option("--seed", og.seed, "master seed (default: OS entropy, recorded)");
    gen->add_option("--threads", og.threads, "ensemble parallelism (ignored here)")
        ->envname("PAGEN_THREADS");
    gen->add_option("--format", og.format, "tsv|json")
        ->check(CLI::IsMember({"tsv", "json"}));
    add_common_io_flags(gen, og);

    CLI::App* analyze = app.add_subcommand("analyze", "statistics and comparisons");
    analyze->require_subcommand(1);

    CLI::App* deg = analyze->add_subcommand("degrees", "degree histogram of an edge list");
    deg->add_option("--in", in_path, "edge TSV produced by generate")->required();
    deg->add_option("--format", od.format, "tsv|json")
        ->check(CLI::IsMember({"tsv", "json"}));
    add_common_io_flags(deg, od);

    CLI::App* pmf = analyze->add_subcommand(
        "pmf", "closed-form root/neighbor degree distributions");
    add_common_model_flags(pmf, op);
    pmf->add_option("--kmax", kmax, "largest degree offset tabulated");
    pmf->add_option("--format", op.format, "tsv|json")
        ->check(CLI::IsMember({"tsv", "json"}));
    add_common_io_flags(pmf, op);

    CLI::App* balls = analyze->add_subcommand(
        "balls", "graph-vs-limit comparison of rooted r-ball distributions");
    balls->add_option("--model", ob.model, "graph model")
        ->check(CLI::IsMember({"independent", "conditional", "sequential", "polya"}));
    balls->add_option("--n", ob.n, "graph size");
    add_common_model_flags(balls, ob);
    balls->add_option("--r", ob.r, "ball radius");
    balls->add_option("--samples", ob.samples, "roots / trees sampled per side");
    balls->add_option("--seed", ob.seed, "master seed");
    balls->add_option("--threads", ob.threads, "worker streams")->envname("PAGEN_THREADS");
    balls->add_option("--dump-graph", dump_graph, "write graph-side code frequencies");
    balls->add_option("--dump-limit", dump_limit, "write limit-side code frequencies");
    add_common_io_flags(balls, ob);

    CLI::App* coup = analyze->add_subcommand(
        "coupling", "maximally coupled sequential/independent pair + discrepancies");
    coup->add_option("--n", oc.n, "graph size");
    add_common_model_flags(coup, oc);
    coup->add_option("--seed", oc.seed, "master seed");
    coup->add_option("--emit-graphs", emit_prefix, "also write <prefix>.{seq,ind}.tsv");
    add_common_io_flags(coup, oc);

    CLI::App* sub = analyze->add_subcommand(
        "subgraph", "pattern counting / limit frequency estimation");
    sub->add_option("--pattern", pattern_path, "pattern JSON file")->required();
    sub->add_option("--in", in_path, "edge TSV (count mode)");
    add_common_model_flags(sub, os);
    sub->add_option("--samples", os.samples, "Monte Carlo trees (estimate mode)");
    sub->add_flag("--quadrature", quadrature, "closed-form integration (k <= 3)");
    sub->add_option("--seed", os.seed, "master seed");
    add_common_io_flags(sub, os);

    CLI::App* fk = analyze->add_subcommand(
        "fk", "Monte Carlo of the degree-correction limit F_k");
    add_common_model_flags(fk, of);
    fk->add_option("--k", fk_k, "vertex index k");
    fk->add_option("--ell", fk_ell, "truncation depth (> k)");
    fk->add_option("--samples", of.samples, "number of estimates");
    fk->add_option("--seed", of.seed, "master seed");
    fk->add_option("--threads", of.threads, "worker streams")->envname("PAGEN_THREADS");
    add_common_io_flags(fk, of);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (gen->parsed()) return cmd_generate(*gen, og);
        if (deg->parsed()) return cmd_degrees(*deg, od, in_path);
        if (pmf->parsed()) return cmd_pmf(*pmf, op, kmax);
        if (balls->parsed()) return cmd_balls(*balls, ob, dump_graph, dump_limit);
        if (coup->parsed()) return cmd_coupling(*coup, oc, emit_prefix);
        if (sub->parsed()) return cmd_subgraph(*sub, os, pattern_path, in_path, quadrature);
        if (fk->parsed()) return cmd_fk(*fk, of, fk_k, fk_ell);
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cerr << "no subcommand\n";
    return kExitValidation;
}
