#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"

using namespace hybridcast;

namespace {

Graph star16() {
    // center gets the max id so it is everyone's pointer target elsewhere
    std::vector<NodeId> ids;
    std::vector<std::tuple<NodeId, NodeId, long long>> edges;
    for (NodeId i = 1; i <= 16; ++i) ids.push_back(i);
    for (NodeId i = 1; i <= 15; ++i) edges.emplace_back(i, 16, 1);
    return Graph::from_edges(ids, edges, false);
}

}  // namespace

TEST_CASE("no-op program consumes nothing") {
    Graph g = generate(GraphSpec::parse("path:10"));
    Transcript t = execute(g, [](NodeApi& api, const std::vector<Envelope>&) { api.halt(); },
                           ModelConfig{});
    CHECK(t.rounds == 0);
    CHECK(t.local_messages == 0);
    CHECK(t.global_messages == 0);
}

TEST_CASE("sender cap enforced in strict mode") {
    Graph g = star16();
    ModelConfig cfg;
    cfg.strict = true;
    bool threw = false;
    try {
        execute(g,
                [&g](NodeApi& api, const std::vector<Envelope>&) {
                    // cap is ceil(log2 16) = 4; send 5
                    for (int i = 0; i < 5; ++i) {
                        int dst = api.engine.graph().adj[static_cast<std::size_t>(api.self)].empty()
                                      ? api.self
                                      : api.engine.graph().adj[static_cast<std::size_t>(api.self)][0];
                        (void)g;
                        api.send_global(dst, {Word{static_cast<std::uint64_t>(i), false}});
                    }
                    api.halt();
                },
                cfg);
    } catch (const ProtocolViolation& v) {
        threw = true;
        CHECK(v.violation.kind == "send-cap");
    }
    CHECK(threw);
}

TEST_CASE("receiver cap: 15 leaves hit the n=16 star center") {
    Graph g = star16();
    int center = g.index_of(16);
    ModelConfig cfg;
    cfg.strict = true;
    bool threw = false;
    try {
        execute(g,
                [center](NodeApi& api, const std::vector<Envelope>&) {
                    if (api.self != center) api.send_global(center, {Word{7, false}});
                    api.halt();
                },
                cfg);
    } catch (const ProtocolViolation& v) {
        threw = true;
        CHECK(v.violation.kind == "recv-cap");
        CHECK(v.violation.node == center);
    }
    CHECK(threw);
}

TEST_CASE("oracle charges are additive and flagged") {
    Graph g = generate(GraphSpec::parse("path:10"));
    Engine eng(g, ModelConfig{});
    eng.charge_oracle("noop", 0);
    CHECK(eng.transcript().rounds == 0);

    // cited overlay-tree cost at n=256: ceil(log2 256)^2 = 64
    eng.charge_oracle("overlay-tree", 8 * 8);
    CHECK(eng.transcript().rounds == 64);

    eng.charge_oracle("a", 5);
    eng.charge_oracle("b", 7);
    CHECK(eng.transcript().rounds == 76);
    CHECK(eng.transcript().phase_total("a") == 5);
    CHECK(eng.transcript().phase_total("b") == 7);
    CHECK(eng.transcript().oracle_rounds() == 76);
    CHECK(eng.transcript().simulated_rounds() == 0);
}

TEST_CASE("flooding matches the ball oracle") {
    Graph g = generate(GraphSpec::parse("path:5"));
    int corner = -1;
    for (int v = 0; v < 5; ++v)
        if (g.adj[static_cast<std::size_t>(v)].size() == 1) { corner = v; break; }
    std::vector<std::set<std::uint64_t>> items(5);
    items[static_cast<std::size_t>(corner)].insert(99);

    {
        Engine eng(g, ModelConfig{});
        auto out = flood(eng, items, 0);
        for (int v = 0; v < 5; ++v)
            CHECK(out[static_cast<std::size_t>(v)].count(99) == (v == corner ? 1u : 0u));
        CHECK(eng.transcript().rounds == 0);
    }
    {
        Engine eng(g, ModelConfig{});
        auto out = flood(eng, items, 4);
        for (int v = 0; v < 5; ++v) CHECK(out[static_cast<std::size_t>(v)].count(99) == 1);
        CHECK(eng.transcript().rounds == 4);
    }
    {
        Engine eng(g, ModelConfig{});
        auto out = flood(eng, items, 2);
        auto b = ball(g, corner, 2);
        for (int v = 0; v < 5; ++v) {
            bool inside = std::find(b.members.begin(), b.members.end(), v) != b.members.end();
            CHECK(out[static_cast<std::size_t>(v)].count(99) == (inside ? 1u : 0u));
        }
    }
}

TEST_CASE("hybrid0 knowledge gates the global channel") {
    Graph g = generate(GraphSpec::parse("path:8"));
    ModelConfig cfg;
    cfg.mode = Mode::Hybrid0;
    cfg.strict = true;
    Engine eng(g, cfg);

    // neighbors are known from the start
    CHECK(eng.knows(0, g.adj[0][0]));
    // the far end is not
    int far = 7;
    REQUIRE(!eng.knows(0, far));
    CHECK_THROWS_AS(eng.send_global(0, far, {Word{1, false}}), ProtocolViolation);

    // receiving an id-bearing word teaches the id; plain words do not
    int mid = g.adj[0][0];
    eng.send_global(mid, 0, {Word{static_cast<std::uint64_t>(g.id_of(far)), true}});
    eng.finish_round();
    CHECK(eng.knows(0, far));
    eng.send_global(0, far, {Word{1, false}});
    eng.finish_round();
    CHECK(eng.transcript().violations.empty());
}

TEST_CASE("hybrid mode has no knowledge gate") {
    Graph g = generate(GraphSpec::parse("path:8"));
    ModelConfig cfg;
    cfg.mode = Mode::Hybrid;
    cfg.strict = true;
    Engine eng(g, cfg);
    eng.send_global(0, 7, {Word{1, false}});
    eng.finish_round();
    CHECK(eng.transcript().violations.empty());
}

TEST_CASE("payload word limit") {
    Graph g = generate(GraphSpec::parse("path:4"));
    ModelConfig cfg;
    cfg.strict = true;
    Engine eng(g, cfg);
    CHECK_THROWS_AS(eng.send_global(0, g.adj[0][0], {Word{1}, Word{2}, Word{3}}),
                    ProtocolViolation);
}

TEST_CASE("local channel requires a graph edge") {
    Graph g = generate(GraphSpec::parse("path:8"));
    ModelConfig cfg;
    cfg.strict = true;
    Engine eng(g, cfg);
    CHECK_THROWS_AS(eng.send_local(0, 7, {Word{1}}), ProtocolViolation);
}

TEST_CASE("deliver_paced respects caps and preserves content") {
    Graph g = star16();
    int center = g.index_of(16);
    ModelConfig cfg;
    cfg.mode = Mode::Hybrid;
    cfg.strict = true;
    Engine eng(g, cfg);
    std::vector<Envelope> q;
    for (int v = 0; v < g.n(); ++v) {
        if (v == center) continue;
        q.push_back({v, center, Channel::Global, {Word{static_cast<std::uint64_t>(v), false}}});
    }
    std::set<std::uint64_t> got;
    long long rounds = eng.deliver_paced(q, [&](const Envelope& e) { got.insert(e.payload[0].value); });
    // 15 messages at recv cap 4 need ceil(15/4) = 4 rounds
    CHECK(rounds == 4);
    CHECK(got.size() == 15);
    CHECK(eng.transcript().violations.empty());
}

TEST_CASE("determinism: identical runs, identical transcripts") {
    Graph g = generate(GraphSpec::parse("random:20:1/4:3"));
    auto run = [&]() {
        ModelConfig cfg;
        cfg.strict = true;
        std::vector<int> steps(static_cast<std::size_t>(g.n()), 0);
        return execute(g,
                       [&steps](NodeApi& api, const std::vector<Envelope>&) {
                           if (++steps[static_cast<std::size_t>(api.self)] > 3) { api.halt(); return; }
                           const auto& nbrs = api.engine.graph().adj[static_cast<std::size_t>(api.self)];
                           api.send_local(nbrs[0], {Word{static_cast<std::uint64_t>(api.self), false}});
                       },
                       cfg);
    };
    CHECK(run().to_json(true).dump() == run().to_json(true).dump());
}

TEST_CASE("transcript validation flags tampering") {
    Graph g = star16();
    int center = g.index_of(16);
    ModelConfig cfg;
    cfg.mode = Mode::Hybrid0;
    cfg.strict = true;
    Engine eng(g, cfg);
    // legal round: three leaves message the center (their neighbor)
    for (int v = 0; v < 3; ++v) eng.send_global(v, center, {Word{5, false}});
    eng.finish_round();
    nlohmann::json good = eng.transcript().to_json(true);
    CHECK(validate_transcript(g, good).empty());

    // inject an over-cap round: 15 sends to one destination in round 1
    nlohmann::json overload = good;
    for (int v = 3; v < 15; ++v)
        overload["global_log"].push_back(
            {{"round", 1}, {"src", v}, {"dst", center}, {"payload", {{{"value", 5}, {"is_id", false}}}}});
    auto findings = validate_transcript(g, overload);
    bool recv_finding = false;
    for (const auto& f : findings) recv_finding |= f.kind == "recv-cap";
    CHECK(recv_finding);

    // inject a send to an identifier the sender cannot know yet
    nlohmann::json unknown = good;
    unknown["global_log"].push_back(
        {{"round", 1}, {"src", 0}, {"dst", 2}, {"payload", {{{"value", 5}, {"is_id", false}}}}});
    findings = validate_transcript(g, unknown);
    bool knowledge_finding = false;
    for (const auto& f : findings) knowledge_finding |= f.kind == "knowledge";
    CHECK(knowledge_finding);
}
