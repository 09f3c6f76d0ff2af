#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hybridcast/apps.hpp"
#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/util.hpp"

using namespace hybridcast;

namespace {

Engine strict_engine(const Graph& g) {
    ModelConfig cfg;
    cfg.strict = true;
    return Engine(g, cfg);
}

Graph weighted_random(int n, const char* p, std::uint64_t seed) {
    GraphSpec spec = GraphSpec::parse("random:" + std::to_string(n) + ":" + p + ":" +
                                      std::to_string(seed));
    spec.weighted = true;
    spec.weight_seed = seed + 1;
    return generate(spec);
}

Graph weighted_path(int n) {
    GraphSpec spec = GraphSpec::parse("path:" + std::to_string(n));
    spec.weighted = true;
    spec.weight_seed = 5;
    return generate(spec);
}

}  // namespace

TEST_CASE("apsp_unweighted: large eps on a path is exact") {
    Graph g = generate(GraphSpec::parse("path:100"));
    Engine eng = strict_engine(g);
    ApspReport rep = apsp_unweighted(eng, Rat(1, 2));
    // x >= D, so every pair resolves locally
    CHECK(rep.max_ratio == Rat(1));
    CHECK(rep.min_ratio == Rat(1));
    CHECK(rep.underestimates == 0);
    CHECK(eng.transcript().violations.empty());
}

TEST_CASE("apsp_unweighted: grid, eps=1/4") {
    Graph g = generate(GraphSpec::parse("grid:2:10"));
    Engine eng = strict_engine(g);
    ApspReport rep = apsp_unweighted(eng, Rat(1, 4));
    CHECK(rep.underestimates == 0);
    CHECK(rep.min_ratio >= Rat(1));
    CHECK(rep.max_ratio <= Rat(5, 4));
    CHECK(rep.oracle_rounds > 0);
    CHECK(rep.simulated_rounds > 0);
}

TEST_CASE("apsp_unweighted survives an adversarial SSSP oracle") {
    Graph g = generate(GraphSpec::parse("grid:2:8"));
    Engine eng = strict_engine(g);
    OracleConfig oc;
    oc.adversarial_sssp = true;
    ApspReport rep = apsp_unweighted(eng, Rat(1, 4), oc);
    CHECK(rep.underestimates == 0);
    CHECK(rep.max_ratio <= Rat(5, 4));
}

TEST_CASE("greedy spanner keeps every tree edge") {
    Graph g = weighted_path(32);
    Graph sp = greedy_spanner(g, 3);
    CHECK(sp.edge_count() == g.edge_count());
}

TEST_CASE("apsp_spanner: tree input is exact, random input meets stretch") {
    {
        Graph g = weighted_path(32);
        Engine eng = strict_engine(g);
        ApspReport rep = apsp_spanner(eng, Rat(1, 3));
        CHECK(rep.max_ratio == Rat(1));
        CHECK(rep.min_ratio == Rat(1));
    }
    {
        Graph g = weighted_random(64, "1/6", 21);
        Engine eng = strict_engine(g);
        ApspReport rep = apsp_spanner(eng, Rat(1, 3));
        long long k_sp = std::max<long long>(1, ceil_div(1 * ceil_log2(64), 3 * 2));
        CHECK(rep.underestimates == 0);
        CHECK(rep.max_ratio <= Rat(2 * k_sp - 1));
        CHECK(eng.transcript().violations.empty());
    }
}

TEST_CASE("skeleton with t=1 samples everyone and is exact") {
    Graph g = weighted_random(40, "1/8", 2);
    Engine eng = strict_engine(g);
    SkeletonGraph sk = build_skeleton(eng, 1, Rat(2), 0);
    CHECK(sk.sampled.size() == 40);
    CHECK(sk.connected);
    CHECK(sk.distance_exact);
}

TEST_CASE("skeleton distances are exact on most seeds") {
    Graph g = weighted_random(100, "1/12", 8);
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Engine eng = strict_engine(g);
        SkeletonGraph sk = build_skeleton(eng, 4, Rat(2), seed);
        if (sk.connected && sk.distance_exact) ++exact;
    }
    CHECK(exact >= 9);
}

TEST_CASE("apsp_skeleton: alpha=1 audit") {
    Graph g = weighted_random(60, "1/10", 15);
    int within = 0, runs = 5;
    for (int s = 0; s < runs; ++s) {
        Engine eng = strict_engine(g);
        ApspReport rep = apsp_skeleton(eng, 1, static_cast<std::uint64_t>(s));
        CHECK(rep.underestimates == 0);
        if (rep.max_ratio <= Rat(3)) ++within;
    }
    CHECK(within >= runs - 1);  // whp bound, one outlier tolerated
}

TEST_CASE("apsp_sparse_exact") {
    {
        Graph g = weighted_path(40);
        Engine eng = strict_engine(g);
        ApspReport rep = apsp_sparse_exact(eng);
        CHECK(rep.max_ratio == Rat(1));
        CHECK(rep.min_ratio == Rat(1));
        CHECK(rep.underestimates == 0);
    }
    {
        Graph g = generate(GraphSpec::parse("grid:2:12"));
        Engine eng = strict_engine(g);
        ApspReport rep = apsp_sparse_exact(eng);
        CHECK(rep.max_ratio == Rat(1));
    }
    {
        // K_20 has 190 edges > 20 * ceil(log2 20) = 100
        std::vector<NodeId> ids;
        std::vector<std::tuple<NodeId, NodeId, long long>> edges;
        for (NodeId i = 1; i <= 20; ++i) ids.push_back(i);
        for (NodeId i = 1; i <= 20; ++i)
            for (NodeId j = i + 1; j <= 20; ++j) edges.emplace_back(i, j, 1);
        Graph g = Graph::from_edges(ids, edges, false);
        Engine eng = strict_engine(g);
        CHECK_THROWS_AS(apsp_sparse_exact(eng), std::invalid_argument);
    }
}

TEST_CASE("cut oracles agree") {
    Graph g = weighted_random(16, "1/3", 31);
    long long sw = stoer_wagner_min_cut(g);
    long long best_flow = kInfDistance;
    for (int t = 1; t < g.n(); ++t) best_flow = std::min(best_flow, max_flow_min_cut(g, 0, t));
    CHECK(sw == best_flow);

    // singleton cut value is the weighted degree
    std::vector<char> side(16, 0);
    side[3] = 1;
    long long deg = 0;
    for (std::size_t i = 0; i < g.adj[3].size(); ++i) deg += g.wts[3][i];
    CHECK(cut_value(g, side) == deg);
}

TEST_CASE("cut pipeline, exact fallback") {
    Graph g = weighted_random(80, "1/16", 4);
    Engine eng = strict_engine(g);
    CutReport rep = cut_pipeline(eng, Rat(1, 2), 0);
    CHECK(rep.exact_fallback);
    CHECK(rep.max_rel_dev == Rat(0));
    CHECK(rep.min_cut_h == stoer_wagner_min_cut(g));
    CHECK(eng.transcript().violations.empty());
}

TEST_CASE("cut pipeline, sampled sparsifier") {
    Graph g = weighted_random(60, "1/2", 40);
    Engine eng = strict_engine(g);
    CutReport rep = cut_pipeline(eng, Rat(9, 10), 1);
    CHECK(!rep.exact_fallback);
    CHECK(rep.h_edges < g.edge_count());
    CHECK(rep.h.is_connected());  // the kept spanning tree guarantees this
    CHECK(rep.min_cut_h >= 1);
    CHECK(eng.transcript().violations.empty());
}
