#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "hybridcast/graph.hpp"

using namespace hybridcast;

namespace {

long long binom(long long n, long long r) {
    if (r < 0 || r > n) return 0;
    long long out = 1;
    for (long long i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

Graph grid(int d, int m) { return generate(GraphSpec::parse("grid:" + std::to_string(d) + ":" + std::to_string(m))); }

}  // namespace

TEST_CASE("path generator shape") {
    Graph g = generate(GraphSpec::parse("path:5"));
    CHECK(g.n() == 5);
    CHECK(g.edge_count() == 4);
    CHECK(diameter(g) == 4);
}

TEST_CASE("grid generator shape") {
    Graph g = grid(2, 10);
    CHECK(g.n() == 100);
    CHECK(g.edge_count() == 180);  // 2*m*(m-1)
}

TEST_CASE("grid corner ring size") {
    Graph g = grid(3, 4);
    // corner = node of minimum degree; ring N_2 = B_2 \ B_1
    int corner = 0;
    for (int v = 0; v < g.n(); ++v)
        if (g.adj[static_cast<std::size_t>(v)].size() < g.adj[static_cast<std::size_t>(corner)].size())
            corner = v;
    auto b2 = ball(g, corner, 2), b1 = ball(g, corner, 1);
    CHECK(static_cast<long long>(b2.members.size() - b1.members.size()) == binom(2 + 3 - 1, 3 - 1));
}

TEST_CASE("ball oracle") {
    Graph p5 = generate(GraphSpec::parse("path:5"));
    int corner = -1;
    for (int v = 0; v < 5; ++v)
        if (p5.adj[static_cast<std::size_t>(v)].size() == 1) { corner = v; break; }
    CHECK(ball(p5, corner, 0).members.size() == 1);
    CHECK(ball(p5, corner, 2).members.size() == 3);

    Graph g10 = grid(2, 10);
    int gc = 0;
    for (int v = 0; v < g10.n(); ++v)
        if (g10.adj[static_cast<std::size_t>(v)].size() < g10.adj[static_cast<std::size_t>(gc)].size())
            gc = v;
    CHECK(ball(g10, gc, 3).members.size() == 10);  // (r+1)(r+2)/2

    Graph r = generate(GraphSpec::parse("random:40:1/8:3"));
    CHECK(ball(r, 0, diameter(r)).members.size() == static_cast<std::size_t>(r.n()));
}

TEST_CASE("grid corner balls match binomials for r < m") {
    for (int d = 1; d <= 3; ++d) {
        int m = d == 3 ? 7 : 8;
        Graph g = grid(d, m);
        int corner = 0;
        for (int v = 0; v < g.n(); ++v)
            if (g.adj[static_cast<std::size_t>(v)].size() < g.adj[static_cast<std::size_t>(corner)].size())
                corner = v;
        for (int r = 0; r <= 6 && r < m; ++r)
            CHECK(static_cast<long long>(ball(g, corner, r).members.size()) == binom(r + d, d));
    }
}

TEST_CASE("ball growth is strict until full") {
    Graph g = generate(GraphSpec::parse("random:30:1/6:11"));
    std::size_t prev = 0;
    for (int t = 0; t <= diameter(g); ++t) {
        auto b = ball(g, 0, t);
        if (prev == static_cast<std::size_t>(g.n())) break;
        CHECK(b.members.size() > prev);
        prev = b.members.size();
    }
    CHECK(prev == static_cast<std::size_t>(g.n()));
}

TEST_CASE("exact distances") {
    Graph p5 = generate(GraphSpec::parse("path:5"));
    int a = -1, b = -1;
    for (int v = 0; v < 5; ++v)
        if (p5.adj[static_cast<std::size_t>(v)].size() == 1) (a == -1 ? a : b) = v;
    CHECK(bfs_hops(p5, a)[static_cast<std::size_t>(b)] == 4);

    // h = 1 is edge weight or the infinity sentinel
    auto d1 = hop_limited_distances(p5, a, 1);
    for (int v = 0; v < 5; ++v) {
        if (v == a) continue;
        if (p5.has_edge(a, v))
            CHECK(d1[static_cast<std::size_t>(v)] == 1);
        else
            CHECK(d1[static_cast<std::size_t>(v)] == kInfDistance);
    }

    Graph tri = Graph::from_edges({1, 2, 3}, {{1, 2, 1}, {2, 3, 1}, {1, 3, 3}}, true);
    CHECK(dijkstra(tri, tri.index_of(1))[static_cast<std::size_t>(tri.index_of(3))] == 2);
}

TEST_CASE("distance symmetry and triangle inequality") {
    GraphSpec spec = GraphSpec::parse("random:25:1/5:5");
    spec.weighted = true;
    Graph g = generate(spec);
    std::vector<int> all;
    for (int v = 0; v < g.n(); ++v) all.push_back(v);
    auto dt = exact_distances(g, all);
    for (int u = 0; u < g.n(); ++u)
        for (int v = 0; v < g.n(); ++v) {
            CHECK(dt.dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ==
                  dt.dist[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]);
            for (int w = 0; w < g.n(); ++w)
                CHECK(dt.dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] <=
                      dt.dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] +
                          dt.dist[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)]);
        }
}

TEST_CASE("weak diameter") {
    Graph p7 = generate(GraphSpec::parse("path:7"));
    CHECK(weak_diameter(p7, {3}) == 0);
    std::vector<int> all;
    for (int v = 0; v < 7; ++v) all.push_back(v);
    CHECK(weak_diameter(p7, all) == diameter(p7));
    std::vector<int> ends;
    for (int v = 0; v < 7; ++v)
        if (p7.adj[static_cast<std::size_t>(v)].size() == 1) ends.push_back(v);
    CHECK(weak_diameter(p7, ends) == 6);
}

TEST_CASE("edge list round trip") {
    GraphSpec spec = GraphSpec::parse("random:20:1/4:9");
    spec.weighted = true;
    Graph g = generate(spec);
    std::stringstream ss;
    write_edge_list(g, ss);
    Graph h = read_edge_list(ss);
    CHECK(h.n() == g.n());
    CHECK(h.edge_count() == g.edge_count());
    for (int u = 0; u < g.n(); ++u)
        for (int v : g.adj[static_cast<std::size_t>(u)]) {
            int hu = h.index_of(g.id_of(u)), hv = h.index_of(g.id_of(v));
            CHECK(h.has_edge(hu, hv));
            CHECK(h.edge_weight(hu, hv) == g.edge_weight(u, v));
        }
}

TEST_CASE("generation is deterministic") {
    GraphSpec spec = GraphSpec::parse("random:50:1/10:42");
    Graph a = generate(spec), b = generate(spec);
    CHECK(a.ids == b.ids);
    CHECK(a.adj == b.adj);
}

TEST_CASE("spec parse and describe round trip") {
    for (const char* s : {"path:100", "cycle:101", "grid:2:10", "random:200:1/20:7"}) {
        GraphSpec spec = GraphSpec::parse(s);
        GraphSpec again = GraphSpec::parse(spec.describe());
        CHECK(generate(spec).ids == generate(again).ids);
    }
}
