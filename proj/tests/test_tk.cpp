#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/primitives.hpp"
#include "hybridcast/tk.hpp"
#include "hybridcast/util.hpp"

using namespace hybridcast;

namespace {

int corner_of(const Graph& g) {
    int corner = 0;
    for (int v = 0; v < g.n(); ++v)
        if (g.adj[static_cast<std::size_t>(v)].size() < g.adj[static_cast<std::size_t>(corner)].size())
            corner = v;
    return corner;
}

Graph complete(int n) {
    std::vector<NodeId> ids;
    std::vector<std::tuple<NodeId, NodeId, long long>> edges;
    for (NodeId i = 1; i <= n; ++i) ids.push_back(i);
    for (NodeId i = 1; i <= n; ++i)
        for (NodeId j = i + 1; j <= n; ++j) edges.emplace_back(i, j, 1);
    return Graph::from_edges(ids, edges, false);
}

TkResult run_distributed(const Graph& g, const std::vector<long long>& counts) {
    ModelConfig cfg;
    cfg.strict = true;
    Engine eng(g, cfg);
    eng.begin_phase("tree");
    VirtualTree tree = build_spanning_tree(eng);
    eng.end_phase();
    return tk_distributed(eng, counts, tree);
}

}  // namespace

TEST_CASE("k=1 everywhere") {
    Graph g = generate(GraphSpec::parse("random:30:1/6:2"));
    TkResult r = tk_oracle(g, 1);
    CHECK(r.tk_graph == 1);
    for (auto [v, t] : r.per_node) CHECK(t == 1);
}

TEST_CASE("path(100), k=25 -> corner value 5") {
    Graph g = generate(GraphSpec::parse("path:100"));
    TkResult r = tk_oracle(g, 25);
    CHECK(r.tk_graph == 5);  // min t with t*(t+1) >= 25
    CHECK(r.per_node.at(g.id_of(corner_of(g))) == 5);
}

TEST_CASE("grid(2,10), k=20 -> corner value 3") {
    Graph g = generate(GraphSpec::parse("grid:2:10"));
    TkResult r = tk_oracle(g, 20);
    CHECK(r.tk_graph == 3);  // r*(r+1)(r+2)/2 >= 20 first at r=3
}

TEST_CASE("histogram sums to n and max matches") {
    Graph g = generate(GraphSpec::parse("random:50:1/8:4"));
    TkResult r = tk_oracle(g, 16);
    long long total = 0;
    int maxt = 0;
    for (auto [t, c] : r.histogram) {
        total += c;
        maxt = std::max(maxt, t);
    }
    CHECK(total == g.n());
    CHECK(maxt == r.tk_graph);
}

TEST_CASE("closed forms agree with the BFS oracle at the corner") {
    for (const auto& [family, n, d] :
         std::vector<std::tuple<std::string, long long, int>>{
             {"path", 50, 1}, {"cycle", 30, 1}, {"grid", 64, 2}, {"grid", 64, 3}}) {
        int m = family == "grid" ? (d == 2 ? 8 : 4) : 0;
        Graph g = family == "grid"
                      ? generate(GraphSpec::parse("grid:" + std::to_string(d) + ":" + std::to_string(m)))
                      : generate(GraphSpec::parse(family + ":" + std::to_string(n)));
        for (long long k : {1LL, 5LL, 20LL, n, n * n, n * n * n}) {
            ClosedForm cf = tk_closed_form(family, g.n(), d, k);
            TkResult r = tk_oracle(g, k);
            CHECK(cf.corner_exact == r.per_node.at(g.id_of(corner_of(g))));
        }
    }
}

TEST_CASE("closed form regimes") {
    CHECK(tk_closed_form("path", 100, 1, 25).corner_exact == 5);
    CHECK(tk_closed_form("path", 100, 1, 25).regime == "Theta(sqrt(k))");
    CHECK(tk_closed_form("path", 100, 1, 100 * 100).regime == "D");
    CHECK(tk_closed_form("grid", 100, 2, 30).regime == "Theta(k^{1/3})");
}

TEST_CASE("grid corner ball inclusion-exclusion vs BFS") {
    Graph g = generate(GraphSpec::parse("grid:2:6"));
    int corner = corner_of(g);
    for (int r = 0; r <= 12; ++r)
        CHECK(grid_corner_ball(2, 6, r) == static_cast<long long>(ball(g, corner, r).members.size()));
}

TEST_CASE("monotone domination: grid corner vs center") {
    Graph g = generate(GraphSpec::parse("grid:2:8"));
    int corner = corner_of(g);
    int center = 0;
    for (int v = 0; v < g.n(); ++v)
        if (eccentricity(g, v) < eccentricity(g, center)) center = v;
    for (long long k : {4LL, 16LL, 40LL}) {
        TkResult r = tk_oracle(g, k);
        CHECK(r.per_node.at(g.id_of(corner)) >= r.per_node.at(g.id_of(center)));
    }
}

TEST_CASE("T_k monotone in k") {
    Graph g = generate(GraphSpec::parse("random:60:1/10:8"));
    int prev = 0;
    for (long long k : {1LL, 4LL, 16LL, 60LL, 600LL}) {
        int t = tk_oracle(g, k).tk_graph;
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("distributed equals oracle: path(5), k=4") {
    Graph g = generate(GraphSpec::parse("path:5"));
    std::vector<long long> counts(5, 0);
    counts[2] = 4;
    TkResult got = run_distributed(g, counts);
    TkResult want = tk_oracle(g, 4);
    CHECK(got.tk_graph == 2);
    CHECK(got.tk_graph == want.tk_graph);
    CHECK(got.histogram == want.histogram);
}

TEST_CASE("distributed halts at t=1 on K_8, k=8") {
    Graph g = complete(8);
    std::vector<long long> counts(8, 1);
    TkResult got = run_distributed(g, counts);
    CHECK(got.tk_graph == 1);
}

TEST_CASE("distributed equals oracle on grid(2,8) with round budget") {
    Graph g = generate(GraphSpec::parse("grid:2:8"));
    std::vector<long long> counts(static_cast<std::size_t>(g.n()), 0);
    counts[0] = 16;
    ModelConfig cfg;
    cfg.strict = true;
    Engine eng(g, cfg);
    eng.begin_phase("tree");
    VirtualTree tree = build_spanning_tree(eng);
    eng.end_phase();
    long long before = eng.transcript().simulated_rounds();
    TkResult got = tk_distributed(eng, counts, tree);
    long long spent = eng.transcript().simulated_rounds() - before;
    TkResult want = tk_oracle(g, 16);
    CHECK(got.tk_graph == want.tk_graph);
    CHECK(got.histogram == want.histogram);
    long long logn = ceil_log2(g.n());
    CHECK(spent <= 50 * got.tk_graph * logn * logn);
    CHECK(eng.transcript().violations.empty());
}

TEST_CASE("bound lemmas on path(100), k=25") {
    Graph g = generate(GraphSpec::parse("path:100"));
    BoundsReport rep = check_bounds(g, 25, {1, 2, 4, 9});
    CHECK(rep.all_pass());
}

TEST_CASE("growth lemma on path(4096) via closed form oracles") {
    Graph g = generate(GraphSpec::parse("path:512"));
    long long t64 = tk_oracle(g, 64).tk_graph;
    long long t256 = tk_oracle(g, 256).tk_graph;
    CHECK(t256 <= 6 * 2 * t64);  // alpha = 4
}
