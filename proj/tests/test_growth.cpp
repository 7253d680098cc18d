#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "pagen/analytics.hpp"
#include "pagen/growth.hpp"
#include "pagen/urn.hpp"
#include "stats_helpers.hpp"

using namespace pagen;

TEST_CASE("cumulative weight tree basics") {
    CumulativeWeightTree t(5);
    CHECK(t.size() == 5);
    CHECK(t.total() == 0);
    t.add(1, 3);
    t.add(3, 2);
    t.add(5, 4);
    CHECK(t.prefix_sum(0) == 0);
    CHECK(t.prefix_sum(1) == 3);
    CHECK(t.prefix_sum(2) == 3);
    CHECK(t.prefix_sum(3) == 5);
    CHECK(t.prefix_sum(4) == 5);
    CHECK(t.prefix_sum(5) == 9);
    CHECK(t.total() == 9);

    // Owners per cumulative offset; zero-weight cells are never owners.
    CHECK(t.find_owner(0) == 1);
    CHECK(t.find_owner(2) == 1);
    CHECK(t.find_owner(3) == 3);
    CHECK(t.find_owner(4) == 3);
    CHECK(t.find_owner(5) == 5);
    CHECK(t.find_owner(8) == 5);
    CHECK_THROWS_AS(t.find_owner(9), std::invalid_argument);

    t.add(3, -2);  // deletion brings the cell back to zero
    CHECK(t.total() == 7);
    CHECK(t.find_owner(3) == 5);
}

TEST_CASE("cumulative weight tree fuzz against a flat array") {
    const std::uint32_t size = 97;  // off a power of two on purpose
    std::vector<std::uint64_t> flat(size + 1, 0);
    RandomStream rng2(SeedSpec{3001, 0});
    CumulativeWeightTree t2(size);
    for (int step = 0; step < 10'000; ++step) {
        const auto i = static_cast<std::uint32_t>(1 + rng2.uniform_index(size));
        const auto d = 1 + static_cast<std::int64_t>(rng2.uniform_index(3));
        t2.add(i, d);
        flat[i] += static_cast<std::uint64_t>(d);
    }
    std::vector<std::uint64_t> prefix(size + 1, 0);
    for (std::uint32_t i = 1; i <= size; ++i) prefix[i] = prefix[i - 1] + flat[i];
    for (std::uint32_t i = 0; i <= size; ++i) REQUIRE(t2.prefix_sum(i) == prefix[i]);

    RandomStream rng3(SeedSpec{3002, 0});
    for (int q = 0; q < 10'000; ++q) {
        const std::uint64_t off = rng3.uniform_index(t2.total());
        const std::uint32_t got = t2.find_owner(off);
        const std::uint32_t want = static_cast<std::uint32_t>(
            std::upper_bound(prefix.begin() + 1, prefix.end(), off) - prefix.begin());
        REQUIRE(got == want);
    }
}

TEST_CASE("independent growth: third-vertex slots are i.i.d. fair picks") {
    // alpha = 0, n = 3: both existing vertices have degree 2, so each of the
    // two slots picks 1 or 2 with probability 1/2, independently.
    const ModelParams p = derive_params(2, 0.0);
    std::vector<std::uint64_t> cells(4, 0);  // (w1-1)*2 + (w2-1)
    for (std::uint64_t s = 0; s < 100'000; ++s) {
        const PAGraph g = generate_independent(p, 3, SeedSpec{3003, s});
        cells[(g.sends(3)[0] - 1) * 2 + (g.sends(3)[1] - 1)]++;
    }
    const double pval =
        testutil::chi_square_gof_pvalue(cells, std::vector<double>(4, 0.25));
    CHECK(pval > 1e-4);
}

TEST_CASE("slot-by-slot growth updates degrees within the round") {
    // alpha = 0, n = 3: slot 1 is a fair pick; given w1 = 2, slot 2 sees
    // degrees (2, 3) over normalizer 5, so P(w2 = 2 | w1 = 2) = 3/5.
    const ModelParams p = derive_params(2, 0.0);
    std::uint64_t first_two = 0, both_two = 0;
    const std::uint64_t reps = 1'000'000;
    for (std::uint64_t s = 0; s < reps; ++s) {
        const PAGraph g = generate_sequential(p, 3, SeedSpec{3004, s});
        if (g.sends(3)[0] == 2) {
            ++first_two;
            if (g.sends(3)[1] == 2) ++both_two;
        }
    }
    const double p1 = static_cast<double>(first_two) / static_cast<double>(reps);
    CHECK(std::abs(p1 - 0.5) < 0.004);
    const double p2 = static_cast<double>(both_two) / static_cast<double>(first_two);
    CHECK(std::abs(p2 - 0.6) < 0.004);
}

TEST_CASE("target-vector probabilities for a three-vertex round") {
    const ModelParams p = derive_params(2, 0.0);
    const std::vector<std::uint32_t> deg = {0, 2, 2};  // 1-based, degrees of {1,2}
    CHECK(sequential_vector_prob(p, 3, deg, {2, 2}) ==
          doctest::Approx(0.5 * 0.6).epsilon(1e-14));
    CHECK(sequential_vector_prob(p, 3, deg, {2, 1}) ==
          doctest::Approx(0.5 * 0.4).epsilon(1e-14));
    CHECK(independent_vector_prob(p, 3, deg, {2, 2}) ==
          doctest::Approx(0.25).epsilon(1e-14));

    // Both laws are normalized over the full vector support.  The history
    // is the four-vertex graph state before vertex 5 attaches.
    for (double alpha : {0.0, 0.5}) {
        const ModelParams q = derive_params(2, alpha);
        const PAGraph hist = generate_sequential(q, 4, SeedSpec{3005, 0});
        std::vector<std::uint32_t> d(hist.degrees.begin(), hist.degrees.begin() + 5);
        double sum_seq = 0.0, sum_ind = 0.0;
        for (std::uint32_t w1 = 1; w1 <= 4; ++w1) {
            for (std::uint32_t w2 = 1; w2 <= 4; ++w2) {
                sum_seq += sequential_vector_prob(q, 5, d, {w1, w2});
                sum_ind += independent_vector_prob(q, 5, d, {w1, w2});
            }
        }
        CHECK(sum_seq == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sum_ind == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact vertex coupling achieves the total-variation overlap") {
    const ModelParams p = derive_params(2, 0.0);
    // A shared three-vertex history (the state before vertex 4 attaches):
    // identical degree arrays make the slot-1 marginals agree, so slot 1
    // must couple almost surely.
    const PAGraph hist = generate_sequential(p, 3, SeedSpec{3006, 0});
    std::vector<std::uint32_t> deg(hist.degrees.begin(), hist.degrees.begin() + 4);

    // Exact vector laws and their total-variation distance.
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> seq_law, ind_law;
    double tv = 0.0;
    for (std::uint32_t w1 = 1; w1 <= 3; ++w1) {
        for (std::uint32_t w2 = 1; w2 <= 3; ++w2) {
            const double ps = sequential_vector_prob(p, 4, deg, {w1, w2});
            const double pi = independent_vector_prob(p, 4, deg, {w1, w2});
            seq_law[{w1, w2}] = ps;
            ind_law[{w1, w2}] = pi;
            tv += 0.5 * std::abs(ps - pi);
        }
    }
    REQUIRE(tv > 0.01);  // the two laws genuinely differ here

    RandomStream rng(SeedSpec{3007, 0});
    std::vector<std::uint32_t> e, f;
    const int reps = 200'000;
    int unequal = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> e_hist, f_hist;
    for (int t = 0; t < reps; ++t) {
        couple_vertex_exact(p, 4, deg, deg, rng, e, f);
        REQUIRE(e.size() == 2);
        REQUIRE(f.size() == 2);
        CHECK(e[0] == f[0]);  // matching slot-1 marginals couple exactly
        if (e != f) ++unequal;
        ++e_hist[{e[0], e[1]}];
        ++f_hist[{f[0], f[1]}];
    }

    // P(e != f) equals the total variation distance (maximal coupling).
    const double frac = static_cast<double>(unequal) / reps;
    const double se = std::sqrt(tv * (1.0 - tv) / reps);
    CHECK(std::abs(frac - tv) < 4.0 * se + 1e-4);

    // Each draw has its own exact marginal law.
    std::vector<std::uint64_t> eo, fo;
    std::vector<double> ep, fp;
    for (const auto& [w, prob] : seq_law) {
        eo.push_back(e_hist[w]);
        ep.push_back(prob);
    }
    for (const auto& [w, prob] : ind_law) {
        fo.push_back(f_hist[w]);
        fp.push_back(prob);
    }
    CHECK(testutil::chi_square_gof_pvalue(eo, ep) > 1e-4);
    CHECK(testutil::chi_square_gof_pvalue(fo, fp) > 1e-4);

    CHECK_THROWS_AS(
        couple_vertex_exact(p, 100, std::vector<std::uint32_t>(100, 2),
                            std::vector<std::uint32_t>(100, 2), rng, e, f),
        std::invalid_argument);
}

TEST_CASE("coupled growth: first slots agree at alpha = 0 for tiny graphs") {
    const ModelParams p = derive_params(2, 0.0);
    for (std::uint64_t s = 0; s < 10'000; ++s) {
        const CoupledPair cp = generate_coupled(p, 3, SeedSpec{3008, s});
        CHECK(cp.g_seq.sends(3)[0] == cp.g_ind.sends(3)[0]);
        for (const auto& d : cp.discrepancy_log) {
            for (std::uint32_t slot : d.slots) CHECK(slot == 2);
        }
    }
}

TEST_CASE("coupled growth preserves both marginal degree laws") {
    const ModelParams p = derive_params(2, 0.0);
    const std::uint32_t n = 10'000;
    const int graphs = 500;
    std::map<long long, std::uint64_t> coupled_seq, coupled_ind, plain_seq, plain_ind;
    for (int g = 0; g < graphs; ++g) {
        const CoupledPair cp =
            generate_coupled(p, n, SeedSpec{3009, static_cast<std::uint64_t>(g)});
        for (std::uint32_t v = 1; v <= n; ++v) {
            ++coupled_seq[cp.g_seq.degree(v)];
            ++coupled_ind[cp.g_ind.degree(v)];
        }
        const PAGraph s =
            generate_sequential(p, n, SeedSpec{3010, static_cast<std::uint64_t>(g)});
        const PAGraph i =
            generate_independent(p, n, SeedSpec{3011, static_cast<std::uint64_t>(g)});
        for (std::uint32_t v = 1; v <= n; ++v) {
            ++plain_seq[s.degree(v)];
            ++plain_ind[i.degree(v)];
        }
    }
    CHECK(testutil::tv_counts(coupled_seq, plain_seq) <= 0.02);
    CHECK(testutil::tv_counts(coupled_ind, plain_ind) <= 0.02);
}

TEST_CASE("coupled growth bookkeeping") {
    const ModelParams p = derive_params(2, 0.0);
    const CoupledPair small = generate_coupled(p, 30, SeedSpec{3012, 0});
    // (v-1)^2 <= 4096 holds up to v = 65, so a 30-vertex pair is exact.
    CHECK(small.exact_vector_limit == 30);
    CHECK_FALSE(small.approximate());
    CHECK(small.method_label() == "exact-vector");

    const CoupledPair big = generate_coupled(p, 100, SeedSpec{3012, 1});
    CHECK(big.exact_vector_limit == 65);
    CHECK(big.approximate());
    CHECK(big.method_label() == "slotwise-greedy");

    // The discrepancy log lists exactly the vertices whose vectors differ.
    for (const auto& d : big.discrepancy_log) {
        REQUIRE(d.vertex >= 3);
        REQUIRE(!d.slots.empty());
        bool differs = false;
        for (int i = 0; i < big.g_seq.send_count(d.vertex); ++i) {
            if (big.g_seq.sends(d.vertex)[i] != big.g_ind.sends(d.vertex)[i])
                differs = true;
        }
        CHECK(differs);
        for (std::uint32_t slot : d.slots) {
            CHECK(big.g_seq.sends(d.vertex)[slot - 1] !=
                  big.g_ind.sends(d.vertex)[slot - 1]);
        }
    }

    // Determinism.
    const CoupledPair again = generate_coupled(p, 100, SeedSpec{3012, 1});
    CHECK(again.g_seq.targets == big.g_seq.targets);
    CHECK(again.g_ind.targets == big.g_ind.targets);
}

TEST_CASE("received-set discrepancy fraction matches a direct recount") {
    const ModelParams p = derive_params(2, 0.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const CoupledPair cp = generate_coupled(p, 500, SeedSpec{3013, s});
        std::set<std::uint32_t> touched;
        for (std::uint32_t v = 2; v <= cp.g_seq.n; ++v) {
            for (int i = 0; i < cp.g_seq.send_count(v); ++i) {
                const std::uint32_t a = cp.g_seq.sends(v)[i];
                const std::uint32_t b = cp.g_ind.sends(v)[i];
                if (a != b) {
                    touched.insert(a);
                    touched.insert(b);
                }
            }
        }
        for (std::uint32_t k_min : {1u, 251u, 400u}) {
            std::uint64_t cnt = 0;
            for (std::uint32_t k = k_min; k <= 500; ++k) cnt += touched.count(k);
            const double want =
                static_cast<double>(cnt) / static_cast<double>(500 - k_min + 1);
            CHECK(received_set_discrepancy_fraction(cp, k_min) ==
                  doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("conditional growth resamples until targets are distinct") {
    const ModelParams p = derive_params(3, 0.5);
    const PAGraph g = generate_conditional(p, 2000, SeedSpec{3014, 0});
    for (std::uint32_t v = 5; v <= g.n; ++v) {
        REQUIRE(g.send_count(v) == 3);
        std::set<std::uint32_t> uniq(g.sends(v), g.sends(v) + 3);
        REQUIRE(uniq.size() == 3);
    }
    // The default seed prefix is the complete graph on {1, ..., m+1}.
    std::set<std::pair<std::uint32_t, std::uint32_t>> seed_edges;
    for (std::uint32_t v = 2; v <= 4; ++v)
        for (int i = 0; i < g.send_count(v); ++i) seed_edges.insert({v, g.sends(v)[i]});
    CHECK(seed_edges ==
          std::set<std::pair<std::uint32_t, std::uint32_t>>{
              {2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}});
}

TEST_CASE("conditional and slot-by-slot growth share a degree law") {
    const ModelParams p = derive_params(2, 0.0);
    const std::uint32_t n = 100'000;
    const PAGraph a = generate_conditional(p, n, SeedSpec{3015, 0});
    const PAGraph b = generate_sequential(p, n, SeedSpec{3016, 0});
    CHECK(testutil::tv_counts(testutil::degree_histogram(a),
                              testutil::degree_histogram(b)) <= 0.03);
}

TEST_CASE("pooled degree frequencies approach the limit law") {
    const ModelParams p = derive_params(2, 0.0);
    const Pmf pmf = degree_dist_pmf(p, 10);
    const std::uint32_t n = 100'000;
    auto check_one = [&](const PAGraph& g) {
        std::vector<std::uint64_t> counts(4, 0);
        for (std::uint32_t v = 1; v <= n; ++v) {
            const std::uint32_t d = g.degree(v);
            if (d >= 2 && d <= 5) ++counts[d - 2];
        }
        for (int k = 0; k <= 3; ++k) {
            const double frac = static_cast<double>(counts[k]) / n;
            CHECK(std::abs(frac - pmf.at(2 + k)) < 0.01);
        }
    };
    check_one(generate_sequential(p, n, SeedSpec{3017, 0}));
    check_one(generate_independent(p, n, SeedSpec{3018, 0}));
    check_one(generate_conditional(p, n, SeedSpec{3019, 0}));
    check_one(generate_polya(p, n, SeedSpec{3020, 0}));
}

TEST_CASE("urn growth and slot-by-slot growth share per-step marginals") {
    // Distribution of the final vertex's target, pooled over many graphs,
    // binned dyadically; chi-square homogeneity between the two models.
    const ModelParams p = derive_params(2, 0.5);
    const std::uint32_t n = 2000;
    const int graphs = 10'000;
    auto bin_of = [](std::uint32_t target) {
        int b = 0;
        std::uint32_t hi = 1;
        while (target > hi) {
            hi *= 2;
            ++b;
        }
        return b;  // {1}, {2}, {3,4}, {5..8}, ...
    };
    std::vector<std::uint64_t> seq_slot1(12, 0), pol_slot1(12, 0);
    std::vector<std::uint64_t> seq_slot2(12, 0), pol_slot2(12, 0);
    for (int g = 0; g < graphs; ++g) {
        const PAGraph s =
            generate_sequential(p, n, SeedSpec{3021, static_cast<std::uint64_t>(g)});
        const PAGraph q =
            generate_polya(p, n, SeedSpec{3022, static_cast<std::uint64_t>(g)});
        ++seq_slot1[bin_of(s.sends(n)[0])];
        ++seq_slot2[bin_of(s.sends(n)[1])];
        ++pol_slot1[bin_of(q.sends(n)[0])];
        ++pol_slot2[bin_of(q.sends(n)[1])];
    }
    CHECK(testutil::chi_square_homogeneity_pvalue(seq_slot1, pol_slot1) > 1e-4);
    CHECK(testutil::chi_square_homogeneity_pvalue(seq_slot2, pol_slot2) > 1e-4);
}
