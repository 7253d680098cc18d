#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pagen/analytics.hpp"
#include "pagen/graph.hpp"
#include "pagen/growth.hpp"
#include "pagen/subgraph.hpp"

using namespace pagen;
using nlohmann::json;
namespace fs = std::filesystem;

#ifndef PAGEN_CLI_PATH
#error "PAGEN_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d =
            fs::path("cli_tmp_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path out = work_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = work_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = env + (env.empty() ? "" : " ") + PAGEN_CLI_PATH + " " +
                            args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("generation is reproducible from a seed and records its metadata") {
    const fs::path a = work_dir() / "gen_a.tsv";
    const fs::path b = work_dir() / "gen_b.tsv";
    const std::string flags =
        "generate --model sequential --n 500 --m 2 --alpha 0.5 --seed 8001 --out ";
    REQUIRE(run(flags + a.string()).code == 0);
    REQUIRE(run(flags + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));

    // The edge list is exactly the library's output for stream 0.
    const ModelParams p = derive_params(2, 0.5);
    const PAGraph g = generate_sequential(p, 500, SeedSpec{8001, 0});
    std::ostringstream want;
    write_edge_tsv(g, want);
    CHECK(slurp(a) == want.str());

    const json meta = json::parse(slurp(a.string() + ".meta.json"));
    CHECK(meta.at("command") == "generate");
    CHECK(meta.at("model") == "sequential");
    CHECK(meta.at("n") == 500);
    CHECK(meta.at("m") == 2);
    CHECK(meta.at("alpha") == 0.5);
    CHECK(meta.at("seed") == 8001);
    CHECK(meta.at("seed_source") == "flag");
    CHECK(meta.at("edges") == g.edge_count());

    // Without --seed the tool draws one from the OS and says so.
    const fs::path c = work_dir() / "gen_c.tsv";
    const fs::path d = work_dir() / "gen_d.tsv";
    REQUIRE(run("generate --model polya --n 50 --m 2 --out " + c.string()).code == 0);
    REQUIRE(run("generate --model polya --n 50 --m 2 --out " + d.string()).code == 0);
    const json mc = json::parse(slurp(c.string() + ".meta.json"));
    const json md = json::parse(slurp(d.string() + ".meta.json"));
    CHECK(mc.at("seed_source") == "os-entropy");
    CHECK(mc.at("seed") != md.at("seed"));
}

TEST_CASE("a run's sidecar replays the run as a config") {
    const fs::path a = work_dir() / "cfg_a.tsv";
    const fs::path b = work_dir() / "cfg_b.tsv";
    REQUIRE(run("generate --model conditional --n 300 --m 3 --alpha 0.25 "
                "--seed 8002 --out " +
                a.string())
                .code == 0);
    REQUIRE(run("generate --config " + a.string() + ".meta.json --out " +
                b.string())
                .code == 0);
    CHECK(slurp(a) == slurp(b));

    // Explicit flags beat config values.
    const fs::path c = work_dir() / "cfg_c.tsv";
    REQUIRE(run("generate --config " + a.string() + ".meta.json --n 100 --out " +
                c.string())
                .code == 0);
    CHECK(read_edge_tsv_file(c.string()).n == 100);
}

TEST_CASE("invalid parameters exit with the validation code") {
    CHECK(run("generate --model sequential --n 100 --m 2 --alpha 1.0").code == 2);
    CHECK(run("generate --model sequential --n 100 --m 1").code == 2);
    CHECK(run("generate --model sequential --n 1 --m 2").code == 2);
    CHECK(run("generate --model voronoi --n 100 --m 2").code == 2);
    CHECK(run("analyze degrees").code == 2);  // --in is required
    CHECK(run("").code == 2);                 // a subcommand is required
    CHECK(run("analyze pmf --m 2 --alpha 0 --kmax -1").code == 2);
    CHECK(run("analyze balls --model sequential --n 100 --m 2 --samples 100 "
              "--threads 0")
              .code == 2);
}

TEST_CASE("missing input files exit with the runtime code") {
    CHECK(run("analyze degrees --in /nonexistent/edges.tsv").code == 3);
    CHECK(run("analyze subgraph --pattern /nonexistent/pat.json --m 2 "
              "--alpha 0 --samples 10")
              .code == 3);
    CHECK(run("generate --config /nonexistent/conf.json --n 10 --m 2").code == 3);
}

TEST_CASE("degree histogram totals the vertex count") {
    const fs::path g = work_dir() / "deg.tsv";
    REQUIRE(run("generate --model sequential --n 400 --m 3 --seed 8003 --out " +
                g.string())
                .code == 0);
    const RunResult r = run("analyze degrees --in " + g.string());
    REQUIRE(r.code == 0);

    const PAGraph graph = read_edge_tsv_file(g.string());
    std::map<std::uint64_t, std::uint64_t> want;
    for (std::uint32_t v = 1; v <= graph.n; ++v) ++want[graph.degree(v)];

    std::istringstream lines(r.out);
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "degree\tcount");
    std::map<std::uint64_t, std::uint64_t> got;
    std::uint64_t total = 0, d = 0, c = 0;
    while (lines >> d >> c) {
        got[d] = c;
        total += c;
    }
    CHECK(total == 400);
    CHECK(got == want);

    // JSON format carries the same histogram.
    const RunResult rj = run("analyze degrees --format json --in " + g.string());
    REQUIRE(rj.code == 0);
    const json doc = json::parse(rj.out);
    CHECK(doc.at("n") == 400);
    std::uint64_t jtotal = 0;
    for (const auto& row : doc.at("histogram"))
        jtotal += row.at("count").get<std::uint64_t>();
    CHECK(jtotal == 400);
}

TEST_CASE("closed-form degree table prints the known values") {
    const RunResult r = run("analyze pmf --m 2 --alpha 0 --kmax 3");
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "k\troot_degree\tp_root\tneighbor_degree\tp_neighbor");
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 6);  // kmax+1 rows plus two tail lines
    auto starts_with = [](const std::string& s, const std::string& prefix) {
        return s.compare(0, prefix.size(), prefix) == 0;
    };
    CHECK(rows[0] == "0\t2\t0.5\t3\t0.1");
    CHECK(starts_with(rows[1], "1\t3\t0.2\t4"));
    CHECK(starts_with(rows[2], "2\t4\t0.1\t5"));
    CHECK(starts_with(rows[3], "3\t5\t0.0571428571429\t6"));
    CHECK(starts_with(rows[4], "# tail_root\t"));
    CHECK(starts_with(rows[5], "# tail_neighbor\t"));

    const RunResult rj = run("analyze pmf --m 2 --alpha 0 --kmax 5 --format json");
    REQUIRE(rj.code == 0);
    const json doc = json::parse(rj.out);
    const Pmf want = degree_dist_pmf(derive_params(2, 0.0), 5);
    REQUIRE(doc.at("p_root").size() == want.probs.size());
    for (std::size_t i = 0; i < want.probs.size(); ++i)
        CHECK(doc.at("p_root")[i].get<double>() ==
              doctest::Approx(want.probs[i]).epsilon(1e-12));
    CHECK(doc.at("tail_root").get<double>() ==
          doctest::Approx(want.tail_bound).epsilon(1e-12));
}

TEST_CASE("ball comparison is a point mass at radius zero") {
    const RunResult r = run(
        "analyze balls --model sequential --n 500 --m 2 --alpha 0 --r 0 "
        "--samples 400 --seed 8004");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("tv").get<double>() == 0.0);
    CHECK(doc.at("n_samples_a") == 400);
    CHECK(doc.at("n_samples_b") == 400);
    CHECK(doc.at("excluded_truncated") == 0);
    CHECK(doc.at("distinct_codes_a") == 1);
    CHECK(doc.at("distinct_codes_b") == 1);
    CHECK(doc.at("model") == "sequential");
    CHECK(doc.at("wall_time_seconds").get<double>() >= 0.0);
}

TEST_CASE("ball comparison converges and dumps code frequencies") {
    const fs::path dump = work_dir() / "codes.json";
    const RunResult r = run(
        "analyze balls --model sequential --n 2000 --m 2 --alpha 0 --r 1 "
        "--samples 2000 --seed 8005 --dump-graph " +
        dump.string());
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("tv").get<double>() < 0.15);
    CHECK(doc.at("r") == 1);

    const json codes = json::parse(slurp(dump));
    REQUIRE(codes.is_array());
    REQUIRE(!codes.empty());
    double total = 0.0;
    for (const auto& row : codes) {
        CHECK(!row.at("code").get<std::string>().empty());
        total += row.at("freq").get<double>();
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("worker count is part of the sampling plan, env and flag agree") {
    const std::string base =
        "analyze balls --model sequential --n 1000 --m 2 --alpha 0 --r 1 "
        "--samples 1000 --seed 8006";
    const json once = json::parse(run(base + " --threads 3").out);
    const json twice = json::parse(run(base + " --threads 3").out);
    CHECK(once.at("tv") == twice.at("tv"));
    const json via_env = json::parse(run(base, "PAGEN_THREADS=3").out);
    CHECK(via_env.at("tv") == once.at("tv"));
    CHECK(via_env.at("threads") == 3);
}

TEST_CASE("coupling report matches the in-process construction") {
    const fs::path prefix = work_dir() / "pair";
    const RunResult r = run("analyze coupling --n 3000 --m 2 --alpha 0 "
                            "--seed 8007 --emit-graphs " +
                            prefix.string());
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);

    const ModelParams p = derive_params(2, 0.0);
    const CoupledPair pair = generate_coupled(p, 3000, SeedSpec{8007, 0});
    CHECK(doc.at("n") == 3000);
    CHECK(doc.at("method") == pair.method_label());
    CHECK(doc.at("exact_vector_limit") == pair.exact_vector_limit);
    CHECK(doc.at("vertices_differing") == pair.discrepancy_log.size());
    CHECK(doc.at("fraction_differing").get<double>() ==
          doctest::Approx(static_cast<double>(pair.discrepancy_log.size()) / 2999)
              .epsilon(1e-12));
    CHECK(doc.at("fraction_differing_late_half").get<double>() ==
          doctest::Approx(received_set_discrepancy_fraction(pair, 1501))
              .epsilon(1e-12));
    CHECK(doc.at("diffs_truncated") == (pair.discrepancy_log.size() > 10'000));
    REQUIRE(doc.at("diffs").is_array());

    std::ostringstream seq_want, ind_want;
    write_edge_tsv(pair.g_seq, seq_want);
    write_edge_tsv(pair.g_ind, ind_want);
    CHECK(slurp(prefix.string() + ".seq.tsv") == seq_want.str());
    CHECK(slurp(prefix.string() + ".ind.tsv") == ind_want.str());
}

TEST_CASE("subgraph modes: census, Monte Carlo and quadrature") {
    const fs::path g = work_dir() / "sub.tsv";
    REQUIRE(run("generate --model sequential --n 2000 --m 2 --alpha 0 "
                "--seed 8008 --out " +
                g.string())
                .code == 0);
    const fs::path pat = work_dir() / "edge.json";
    {
        SubgraphPattern f;
        f.k = 2;
        f.edges = {{1, 2, 1}};
        f.excess = {1, 2};
        std::ofstream out(pat);
        out << f.to_json();
    }

    const RunResult rc = run("analyze subgraph --pattern " + pat.string() +
                             " --in " + g.string() + " --m 2 --alpha 0");
    REQUIRE(rc.code == 0);
    const json count_doc = json::parse(rc.out);
    const PAGraph graph = read_edge_tsv_file(g.string());
    const SubgraphPattern f = SubgraphPattern::load_json_file(pat.string());
    const std::uint64_t want = count_inj(f, graph);
    CHECK(count_doc.at("mode") == "count");
    CHECK(count_doc.at("count") == want);
    CHECK(count_doc.at("n") == 2000);
    CHECK(count_doc.at("per_vertex").get<double>() ==
          doctest::Approx(static_cast<double>(want) / 2000.0).epsilon(1e-12));

    const RunResult rm = run("analyze subgraph --pattern " + pat.string() +
                             " --m 2 --alpha 0 --samples 20000 --seed 8009");
    REQUIRE(rm.code == 0);
    const json mc_doc = json::parse(rm.out);
    CHECK(mc_doc.at("mode") == "monte-carlo");
    CHECK(mc_doc.at("samples_used") == 20000);
    CHECK(mc_doc.at("excluded") == 0);
    const double est = mc_doc.at("estimate").get<double>();
    const double se = mc_doc.at("std_error").get<double>();
    CHECK(se > 0.0);
    CHECK(std::abs(est - 1.0 / 7.0) <= 4.0 * se);

    const RunResult rq = run("analyze subgraph --pattern " + pat.string() +
                             " --quadrature --m 2 --alpha 0");
    REQUIRE(rq.code == 0);
    const json quad_doc = json::parse(rq.out);
    CHECK(quad_doc.at("mode") == "quadrature");
    CHECK(std::abs(quad_doc.at("estimate").get<double>() - 1.0 / 7.0) <= 2e-6);
}

TEST_CASE("urn-product statistics from the command line") {
    const RunResult r = run(
        "analyze fk --m 2 --alpha 0 --k 50 --ell 20000 --samples 400 --seed 8010");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("k") == 50);
    CHECK(doc.at("ell") == 20000);
    CHECK(doc.at("samples") == 400);
    CHECK(std::abs(doc.at("mean").get<double>() - 1.0) < 0.1);
    CHECK(doc.at("std").get<double>() > 0.0);
    CHECK(doc.at("std_error").get<double>() > 0.0);
    CHECK(run("analyze fk --m 2 --alpha 0 --k 50 --ell 50 --samples 10").code == 2);
}
