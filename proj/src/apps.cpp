#include "hybridcast/apps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "hybridcast/primitives.hpp"
#include "hybridcast/tk.hpp"
#include "hybridcast/util.hpp"

namespace hybridcast {

nlohmann::json ApspReport::audit_json() const {
    return {{"method", method},
            {"max_ratio", max_ratio.str()},
            {"min_ratio", min_ratio.str()},
            {"underestimates", underestimates},
            {"seeds_failed", seeds_failed},
            {"rounds", {{"oracle", oracle_rounds}, {"simulated", simulated_rounds}}}};
}

nlohmann::json CutReport::to_json() const {
    return {{"exact_fallback", exact_fallback},
            {"h_edges", h_edges},
            {"max_rel_dev", max_rel_dev.str()},
            {"min_cut_h", min_cut_h},
            {"rounds", {{"oracle", oracle_rounds}, {"simulated", simulated_rounds}}}};
}

void audit_ratios(ApspReport& rep, const Graph& g) {
    int n = g.n();
    bool first = true;
    for (int v = 0; v < n; ++v) {
        auto exact = g.weighted ? dijkstra(g, v) : std::vector<long long>();
        auto hops = g.weighted ? std::vector<int>() : bfs_hops(g, v);
        for (int w = 0; w < n; ++w) {
            if (v == w) continue;
            long long d = g.weighted ? exact[static_cast<std::size_t>(w)]
                                     : hops[static_cast<std::size_t>(w)];
            long long est = rep.delta[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
            if (est < d) ++rep.underestimates;
            Rat r(est, d);
            if (first || r > rep.max_ratio) rep.max_ratio = r;
            if (first || r < rep.min_ratio) rep.min_ratio = r;
            first = false;
        }
    }
}

namespace {

Placement id_placement(const Graph& g) {
    Placement p;
    p.at.resize(static_cast<std::size_t>(g.n()));
    p.k = g.n();
    for (int v = 0; v < g.n(); ++v)
        p.at[static_cast<std::size_t>(v)].push_back(
            {static_cast<std::uint64_t>(v) + 1, static_cast<std::uint64_t>(g.id_of(v)),
             g.id_of(v)});
    return p;
}

// one token per edge, parked at the lower-index endpoint
Placement edge_placement(const Graph& g, const Graph& sub) {
    Placement p;
    p.at.resize(static_cast<std::size_t>(g.n()));
    std::uint64_t next = 1;
    for (int u = 0; u < sub.n(); ++u)
        for (std::size_t i = 0; i < sub.adj[static_cast<std::size_t>(u)].size(); ++i) {
            int v = sub.adj[static_cast<std::size_t>(u)][i];
            if (v < u) continue;
            long long w = sub.weighted ? sub.wts[static_cast<std::size_t>(u)][i] : 1;
            std::uint64_t payload =
                pack_fields(static_cast<std::uint64_t>(u), 14, static_cast<std::uint64_t>(v), 14,
                            static_cast<std::uint64_t>(w), 36);
            int holder = g.index_of(sub.id_of(u));
            p.at[static_cast<std::size_t>(holder)].push_back(
                {next, payload, g.id_of(holder)});
            ++next;
        }
    p.k = static_cast<long long>(next) - 1;
    return p;
}

void capture_rounds(const Engine& eng, long long& oracle, long long& simulated) {
    oracle = eng.transcript().oracle_rounds();
    simulated = eng.transcript().simulated_rounds();
}

std::vector<std::vector<long long>> all_pairs_local(const Graph& g) {
    std::vector<std::vector<long long>> d(static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) {
        if (g.weighted) {
            d[static_cast<std::size_t>(v)] = dijkstra(g, v);
        } else {
            auto h = bfs_hops(g, v);
            d[static_cast<std::size_t>(v)].assign(h.begin(), h.end());
        }
    }
    return d;
}

}  // namespace

ApspReport apsp_unweighted(Engine& eng, Rat eps, const OracleConfig& oc) {
    const Graph& g = eng.graph();
    if (g.weighted) throw std::invalid_argument("apsp_unweighted: graph must be unweighted");
    if (!(Rat(0) < eps && eps < Rat(1)))
        throw std::invalid_argument("apsp_unweighted: eps must lie in (0,1)");
    int n = g.n();
    int logn = ceil_log2(n);

    ApspReport rep;
    rep.method = "unweighted-eps";
    rep.ids = g.ids;

    auto bres = k_disseminate(eng, id_placement(g));
    if (!bres.complete) throw std::logic_error("apsp_unweighted: id broadcast incomplete");
    int tn = bres.tk;

    eng.begin_phase("cluster");
    ClusterLayout layout = cluster(eng, n, tn);
    eng.end_phase();

    // internally the algorithm runs with eps/4 everywhere
    Rat eps_int = eps / Rat(4);

    // one charged SSSP invocation per cluster center; the reference oracle is
    // exact BFS, optionally stretched to the (1+eps/4) limit
    std::map<int, std::vector<long long>> hat;
    for (int r : layout.leaders) {
        auto hops = bfs_hops(g, r);
        std::vector<long long> est(hops.begin(), hops.end());
        if (oc.adversarial_sssp)
            for (auto& e : est) e += (e * eps_int.num) / eps_int.den;
        hat[r] = std::move(est);
    }
    long long inv_eps2 = ceil_div(eps.den * eps.den, eps.num * eps.num);
    eng.charge_oracle("sssp", static_cast<long long>(layout.leaders.size()) * logn * logn * logn *
                                  inv_eps2);

    // x-hop neighborhood learning, x = 4*T_n*ceil(log n) / (eps/4)
    long long x = ceil_div(4LL * tn * logn * eps_int.den, eps_int.num);
    eng.begin_phase("learn");
    eng.charge_local_rounds(std::min<long long>(x, diameter(g)), 2 * g.edge_count());
    eng.end_phase();

    // every node broadcasts its center and the exact distance to it
    Placement pairs;
    pairs.at.resize(static_cast<std::size_t>(n));
    pairs.k = n;
    std::vector<long long> to_center(static_cast<std::size_t>(n), 0);
    for (const auto& [L, mem] : layout.members) {
        auto hops = bfs_hops(g, L);
        for (int v : mem) to_center[static_cast<std::size_t>(v)] = hops[static_cast<std::size_t>(v)];
    }
    for (int v = 0; v < n; ++v) {
        std::uint64_t payload =
            pack_fields(static_cast<std::uint64_t>(layout.leader_of[static_cast<std::size_t>(v)]),
                        14, static_cast<std::uint64_t>(to_center[static_cast<std::size_t>(v)]), 14,
                        0, 0);
        pairs.at[static_cast<std::size_t>(v)].push_back(
            {static_cast<std::uint64_t>(v) + 1, payload, g.id_of(v)});
    }
    auto pres = k_disseminate(eng, pairs);
    if (!pres.complete) throw std::logic_error("apsp_unweighted: center broadcast incomplete");

    auto hops_all = all_pairs_local(g);
    rep.delta.assign(static_cast<std::size_t>(n),
                     std::vector<long long>(static_cast<std::size_t>(n), 0));
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            if (v == w) continue;
            long long d = hops_all[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
            if (d <= x) {
                rep.delta[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] = d;
            } else {
                int cw = layout.leader_of[static_cast<std::size_t>(w)];
                rep.delta[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] =
                    hat[cw][static_cast<std::size_t>(v)] + to_center[static_cast<std::size_t>(w)];
            }
        }
    audit_ratios(rep, g);
    capture_rounds(eng, rep.oracle_rounds, rep.simulated_rounds);
    return rep;
}

Graph greedy_spanner(const Graph& g, long long stretch) {
    struct E {
        long long w;
        NodeId a, b;
    };
    std::vector<E> edges;
    for (int u = 0; u < g.n(); ++u)
        for (std::size_t i = 0; i < g.adj[static_cast<std::size_t>(u)].size(); ++i) {
            int v = g.adj[static_cast<std::size_t>(u)][i];
            if (v < u) continue;
            edges.push_back({g.weighted ? g.wts[static_cast<std::size_t>(u)][i] : 1, g.id_of(u),
                             g.id_of(v)});
        }
    std::sort(edges.begin(), edges.end(), [](const E& x, const E& y) {
        return std::tie(x.w, x.a, x.b) < std::tie(y.w, y.a, y.b);
    });
    // adjacency of the growing spanner, by node index of g
    std::vector<std::vector<std::pair<int, long long>>> adj(static_cast<std::size_t>(g.n()));
    std::vector<std::tuple<NodeId, NodeId, long long>> kept;
    std::vector<long long> dist(static_cast<std::size_t>(g.n()));
    for (const auto& e : edges) {
        int u = g.index_of(e.a), v = g.index_of(e.b);
        // bounded Dijkstra: is there already a u-v path of weight <= stretch*w?
        std::fill(dist.begin(), dist.end(), kInfDistance);
        long long limit = stretch * e.w;
        std::priority_queue<std::pair<long long, int>, std::vector<std::pair<long long, int>>,
                            std::greater<>>
            pq;
        dist[static_cast<std::size_t>(u)] = 0;
        pq.push({0, u});
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > dist[static_cast<std::size_t>(x)] || d > limit) continue;
            if (x == v) break;
            for (auto [y, w] : adj[static_cast<std::size_t>(x)])
                if (d + w < dist[static_cast<std::size_t>(y)] && d + w <= limit) {
                    dist[static_cast<std::size_t>(y)] = d + w;
                    pq.push({d + w, y});
                }
        }
        if (dist[static_cast<std::size_t>(v)] <= limit) continue;
        adj[static_cast<std::size_t>(u)].emplace_back(v, e.w);
        adj[static_cast<std::size_t>(v)].emplace_back(u, e.w);
        kept.emplace_back(e.a, e.b, e.w);
    }
    return Graph::from_edges(g.ids, kept, true);
}

ApspReport apsp_spanner(Engine& eng, Rat eps) {
    const Graph& g = eng.graph();
    int n = g.n();
    int logn = ceil_log2(n);
    if (!(Rat(0) < eps && eps <= Rat(1)))
        throw std::invalid_argument("apsp_spanner: eps must lie in (0,1]");
    if (eps.den > 64 * eps.num)
        throw std::invalid_argument("apsp_spanner: 2^{1/eps} blows up for this eps");
    long long k_sp = std::max<long long>(1, ceil_div(eps.num * logn, 2 * eps.den));

    ApspReport rep;
    rep.method = "spanner";
    rep.ids = g.ids;

    auto bres = k_disseminate(eng, id_placement(g));
    if (!bres.complete) throw std::logic_error("apsp_spanner: id broadcast incomplete");

    Graph sp = greedy_spanner(g, 2 * k_sp - 1);
    eng.charge_oracle("spanner", k_sp * logn * logn);
    // size guarantee ~ 4^{1/eps} * n^{1+1/k_sp}; assert a generous integer form
    __int128 bound = static_cast<__int128>(n) * logn;
    for (long long i = 0; i < ceil_div(eps.den, eps.num); ++i) bound *= 4;
    if (static_cast<__int128>(sp.edge_count()) > bound)
        throw std::logic_error("apsp_spanner: spanner edge count above its bound");

    auto eres = k_disseminate(eng, edge_placement(g, sp));
    if (!eres.complete) throw std::logic_error("apsp_spanner: edge broadcast incomplete");

    rep.delta.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) rep.delta[static_cast<std::size_t>(v)] = dijkstra(sp, v);
    audit_ratios(rep, g);
    capture_rounds(eng, rep.oracle_rounds, rep.simulated_rounds);
    return rep;
}

SkeletonGraph build_skeleton(Engine& eng, long long t, Rat xi, std::uint64_t seed) {
    const Graph& g = eng.graph();
    if (t < 1) throw std::invalid_argument("build_skeleton: t must be >= 1");
    int n = g.n();
    SkeletonGraph sk;
    sk.t = t;
    for (int attempt = 0;; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
        sk.sampled.clear();
        for (int v = 0; v < n; ++v)
            if (rng.chance(1, static_cast<std::uint64_t>(t))) sk.sampled.push_back(v);
        if (!sk.sampled.empty()) {
            sk.resamples = attempt;
            break;
        }
    }
    double hval = xi.to_double() * static_cast<double>(t) * std::log(static_cast<double>(n));
    sk.h = std::max<long long>(1, static_cast<long long>(std::ceil(hval)));

    eng.begin_phase("skeleton");
    eng.charge_local_rounds(sk.h, 2 * g.edge_count() * sk.h);
    eng.end_phase();

    std::vector<NodeId> ids;
    for (int v : sk.sampled) ids.push_back(g.id_of(v));
    std::vector<std::tuple<NodeId, NodeId, long long>> edges;
    for (std::size_t i = 0; i < sk.sampled.size(); ++i) {
        auto dh = hop_limited_distances(g, sk.sampled[i], static_cast<int>(sk.h));
        for (std::size_t j = i + 1; j < sk.sampled.size(); ++j) {
            long long d = dh[static_cast<std::size_t>(sk.sampled[j])];
            if (d != kInfDistance) edges.emplace_back(ids[i], ids[j], d);
        }
    }
    sk.skeleton = Graph::from_edges(ids, edges, true, /*check=*/false);
    sk.connected = sk.skeleton.is_connected();

    sk.distance_exact = sk.connected;
    if (sk.connected)
        for (std::size_t i = 0; i < sk.sampled.size() && sk.distance_exact; ++i) {
            auto ds = dijkstra(sk.skeleton, static_cast<int>(i));
            auto dg = dijkstra(g, sk.sampled[i]);
            for (std::size_t j = 0; j < sk.sampled.size(); ++j)
                if (ds[j] != dg[static_cast<std::size_t>(sk.sampled[j])]) {
                    sk.distance_exact = false;
                    break;
                }
        }
    return sk;
}

ApspReport apsp_skeleton(Engine& eng, int alpha, std::uint64_t seed) {
    const Graph& g = eng.graph();
    if (alpha < 1) throw std::invalid_argument("apsp_skeleton: alpha must be >= 1");
    int n = g.n();
    int logn = ceil_log2(n);

    ApspReport rep;
    rep.method = "skeleton";
    rep.ids = g.ids;

    auto bres = k_disseminate(eng, id_placement(g));
    if (!bres.complete) throw std::logic_error("apsp_skeleton: id broadcast incomplete");
    int tn = bres.tk;

    long long t = static_cast<long long>(
        std::ceil(std::pow(n, 1.0 / (3.0 * alpha + 1)) *
                  std::pow(static_cast<double>(tn), 2.0 / (3.0 + 1.0 / alpha))));
    t = std::max<long long>(1, t);

    if (t >= n / 2) {
        // so dense a sample that the skeleton is nearly the whole graph:
        // degrade to a full edge broadcast with exact local Dijkstra
        rep.method = "skeleton-fallback";
        auto eres = k_disseminate(eng, edge_placement(g, g));
        if (!eres.complete) throw std::logic_error("apsp_skeleton: edge broadcast incomplete");
        rep.delta = all_pairs_local(g);
        audit_ratios(rep, g);
        capture_rounds(eng, rep.oracle_rounds, rep.simulated_rounds);
        return rep;
    }

    SkeletonGraph sk;
    std::vector<int> nearest;
    std::vector<long long> d_nearest;
    std::vector<std::vector<long long>> dh_from;  // per node, h-hop-limited distances
    for (int attempt = 0;; ++attempt) {
        sk = build_skeleton(eng, t, Rat(2), seed + static_cast<std::uint64_t>(attempt));
        rep.seeds_failed += sk.resamples;
        // every node needs a sampled node inside its h-ball, and the skeleton
        // must be connected; both hold whp and failures trigger a reseed
        dh_from.assign(static_cast<std::size_t>(n), {});
        for (int v = 0; v < n; ++v)
            dh_from[static_cast<std::size_t>(v)] =
                hop_limited_distances(g, v, static_cast<int>(sk.h));
        nearest.assign(static_cast<std::size_t>(n), -1);
        d_nearest.assign(static_cast<std::size_t>(n), kInfDistance);
        bool ok = sk.connected;
        for (int v = 0; v < n && ok; ++v) {
            for (int s : sk.sampled) {
                long long d = dh_from[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
                if (d == kInfDistance) continue;
                int& cur = nearest[static_cast<std::size_t>(v)];
                long long& cd = d_nearest[static_cast<std::size_t>(v)];
                if (d < cd || (d == cd && g.id_of(s) < g.id_of(cur))) {
                    cd = d;
                    cur = s;
                }
            }
            ok = nearest[static_cast<std::size_t>(v)] != -1;
        }
        if (ok) break;
        ++rep.seeds_failed;
        if (attempt > 8) throw std::runtime_error("apsp_skeleton: no usable skeleton after reseeds");
    }

    Graph sp = greedy_spanner(sk.skeleton, 2LL * alpha - 1);
    eng.charge_oracle("skeleton-spanner", t * logn * logn);
    auto eres = k_disseminate(eng, edge_placement(g, sp));
    if (!eres.complete) throw std::logic_error("apsp_skeleton: spanner broadcast incomplete");

    // each node broadcasts its nearest sampled node and the distance to it
    Placement pairs;
    pairs.at.resize(static_cast<std::size_t>(n));
    pairs.k = n;
    for (int v = 0; v < n; ++v) {
        std::uint64_t payload = pack_fields(
            static_cast<std::uint64_t>(nearest[static_cast<std::size_t>(v)]), 14,
            static_cast<std::uint64_t>(d_nearest[static_cast<std::size_t>(v)]), 36, 0, 0);
        pairs.at[static_cast<std::size_t>(v)].push_back(
            {static_cast<std::uint64_t>(v) + 1, payload, g.id_of(v)});
    }
    auto pres = k_disseminate(eng, pairs);
    if (!pres.complete) throw std::logic_error("apsp_skeleton: anchor broadcast incomplete");

    // spanner distances between sampled nodes
    std::map<int, std::vector<long long>> dhat;  // g-index of sampled -> per skeleton index
    for (std::size_t i = 0; i < sk.sampled.size(); ++i)
        dhat[sk.sampled[i]] = dijkstra(sp, static_cast<int>(i));
    std::map<int, std::size_t> skel_pos;
    for (std::size_t i = 0; i < sk.sampled.size(); ++i) skel_pos[sk.sampled[i]] = i;

    rep.delta.assign(static_cast<std::size_t>(n),
                     std::vector<long long>(static_cast<std::size_t>(n), 0));
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            if (v == w) continue;
            long long direct = dh_from[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
            int vs = nearest[static_cast<std::size_t>(v)], ws = nearest[static_cast<std::size_t>(w)];
            long long middle = dhat[vs][skel_pos[ws]];
            long long via = d_nearest[static_cast<std::size_t>(v)] + middle +
                            d_nearest[static_cast<std::size_t>(w)];
            rep.delta[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] =
                std::min(direct, via);
        }
    audit_ratios(rep, g);
    capture_rounds(eng, rep.oracle_rounds, rep.simulated_rounds);
    return rep;
}

ApspReport apsp_sparse_exact(Engine& eng, long long density_c) {
    const Graph& g = eng.graph();
    int n = g.n();
    if (g.edge_count() > density_c * n * ceil_log2(n))
        throw std::invalid_argument("apsp_sparse_exact: graph too dense for the sparse budget");

    ApspReport rep;
    rep.method = "sparse-exact";
    rep.ids = g.ids;
    auto eres = k_disseminate(eng, edge_placement(g, g));
    if (!eres.complete) throw std::logic_error("apsp_sparse_exact: edge broadcast incomplete");
    rep.delta = all_pairs_local(g);
    audit_ratios(rep, g);
    capture_rounds(eng, rep.oracle_rounds, rep.simulated_rounds);
    return rep;
}

long long cut_value(const Graph& g, const std::vector<char>& in_s) {
    long long total = 0;
    for (int u = 0; u < g.n(); ++u)
        for (std::size_t i = 0; i < g.adj[static_cast<std::size_t>(u)].size(); ++i) {
            int v = g.adj[static_cast<std::size_t>(u)][i];
            if (v < u) continue;
            if (in_s[static_cast<std::size_t>(u)] != in_s[static_cast<std::size_t>(v)])
                total += g.weighted ? g.wts[static_cast<std::size_t>(u)][i] : 1;
        }
    return total;
}

long long stoer_wagner_min_cut(const Graph& g) {
    int n = g.n();
    if (n < 2) throw std::invalid_argument("stoer_wagner_min_cut: need at least two nodes");
    std::vector<std::vector<long long>> w(static_cast<std::size_t>(n),
                                          std::vector<long long>(static_cast<std::size_t>(n), 0));
    for (int u = 0; u < n; ++u)
        for (std::size_t i = 0; i < g.adj[static_cast<std::size_t>(u)].size(); ++i) {
            int v = g.adj[static_cast<std::size_t>(u)][i];
            w[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] +=
                g.weighted ? g.wts[static_cast<std::size_t>(u)][i] : 1;
        }
    std::vector<int> alive(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) alive[static_cast<std::size_t>(i)] = i;
    long long best = kInfDistance;
    while (alive.size() > 1) {
        // maximum adjacency order; the last vertex's attachment weight is a cut
        std::vector<char> added(static_cast<std::size_t>(n), 0);
        std::vector<long long> score(static_cast<std::size_t>(n), 0);
        int prev = -1, last = -1;
        for (std::size_t step = 0; step < alive.size(); ++step) {
            int pick = -1;
            for (int v : alive)
                if (!added[static_cast<std::size_t>(v)] &&
                    (pick == -1 || score[static_cast<std::size_t>(v)] >
                                       score[static_cast<std::size_t>(pick)]))
                    pick = v;
            if (pick < 0) throw std::logic_error("stoer_wagner_min_cut: empty adjacency sweep");
            added[static_cast<std::size_t>(pick)] = 1;
            prev = last;
            last = pick;
            for (int v : alive)
                if (!added[static_cast<std::size_t>(v)])
                    score[static_cast<std::size_t>(v)] +=
                        w[static_cast<std::size_t>(pick)][static_cast<std::size_t>(v)];
        }
        best = std::min(best, score[static_cast<std::size_t>(last)]);
        // merge last into prev
        for (int v : alive) {
            if (v == last || v == prev) continue;
            w[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)] +=
                w[static_cast<std::size_t>(last)][static_cast<std::size_t>(v)];
            w[static_cast<std::size_t>(v)][static_cast<std::size_t>(prev)] =
                w[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)];
        }
        alive.erase(std::find(alive.begin(), alive.end(), last));
    }
    return best;
}

long long max_flow_min_cut(const Graph& g, int s, int t) {
    int n = g.n();
    if (s == t) throw std::invalid_argument("max_flow_min_cut: s == t");
    std::vector<std::vector<long long>> cap(static_cast<std::size_t>(n),
                                            std::vector<long long>(static_cast<std::size_t>(n), 0));
    for (int u = 0; u < n; ++u)
        for (std::size_t i = 0; i < g.adj[static_cast<std::size_t>(u)].size(); ++i) {
            int v = g.adj[static_cast<std::size_t>(u)][i];
            cap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] +=
                g.weighted ? g.wts[static_cast<std::size_t>(u)][i] : 1;
        }
    long long flow = 0;
    while (true) {
        // BFS augmenting path on the residual network
        std::vector<int> par(static_cast<std::size_t>(n), -1);
        par[static_cast<std::size_t>(s)] = s;
        std::vector<int> q{s};
        for (std::size_t head = 0; head < q.size() && par[static_cast<std::size_t>(t)] == -1;
             ++head) {
            int u = q[head];
            for (int v = 0; v < n; ++v)
                if (par[static_cast<std::size_t>(v)] == -1 &&
                    cap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0) {
                    par[static_cast<std::size_t>(v)] = u;
                    q.push_back(v);
                }
        }
        if (par[static_cast<std::size_t>(t)] == -1) break;
        long long aug = kInfDistance;
        for (int v = t; v != s; v = par[static_cast<std::size_t>(v)])
            aug = std::min(aug, cap[static_cast<std::size_t>(par[static_cast<std::size_t>(v)])]
                                   [static_cast<std::size_t>(v)]);
        for (int v = t; v != s; v = par[static_cast<std::size_t>(v)]) {
            int u = par[static_cast<std::size_t>(v)];
            cap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] -= aug;
            cap[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] += aug;
        }
        flow += aug;
    }
    return flow;
}

CutReport cut_pipeline(Engine& eng, Rat eps, std::uint64_t seed, int test_cuts) {
    const Graph& g = eng.graph();
    if (!(Rat(0) < eps && eps < Rat(1)))
        throw std::invalid_argument("cut_pipeline: eps must lie in (0,1)");
    int n = g.n();
    int logn = ceil_log2(n);
    long long inv_eps2 = ceil_div(eps.den * eps.den, eps.num * eps.num);

    CutReport rep;
    long long budget = static_cast<long long>(n) * logn * inv_eps2;
    if (g.edge_count() <= budget) {
        rep.exact_fallback = true;
        rep.h = g;
    } else {
        // halve the non-tree edges until within budget; a BFS tree is always
        // kept (unscaled) so the sparsifier stays connected
        int shift = 0;
        while ((g.edge_count() >> shift) > budget) ++shift;
        std::vector<char> tree_edge_from(static_cast<std::size_t>(n), 0);
        std::vector<int> par(static_cast<std::size_t>(n), -1);
        std::vector<int> q{0};
        par[0] = 0;
        for (std::size_t head = 0; head < q.size(); ++head)
            for (int u : g.adj[static_cast<std::size_t>(q[head])])
                if (par[static_cast<std::size_t>(u)] == -1) {
                    par[static_cast<std::size_t>(u)] = q[head];
                    q.push_back(u);
                }
        Rng rng(seed ^ 0xc07eULL);
        std::vector<std::tuple<NodeId, NodeId, long long>> edges;
        for (int u = 0; u < n; ++u)
            for (std::size_t i = 0; i < g.adj[static_cast<std::size_t>(u)].size(); ++i) {
                int v = g.adj[static_cast<std::size_t>(u)][i];
                if (v < u) continue;
                long long w = g.weighted ? g.wts[static_cast<std::size_t>(u)][i] : 1;
                bool in_tree = par[static_cast<std::size_t>(u)] == v ||
                               par[static_cast<std::size_t>(v)] == u;
                if (in_tree)
                    edges.emplace_back(g.id_of(u), g.id_of(v), w);
                else if (rng.chance(1, 1ULL << shift))
                    edges.emplace_back(g.id_of(u), g.id_of(v), w << shift);
            }
        rep.h = Graph::from_edges(g.ids, edges, true, /*check=*/false);
    }
    rep.h_edges = rep.h.edge_count();
    eng.charge_oracle("sparsifier", inv_eps2 * logn * logn);

    auto bres = k_disseminate(eng, edge_placement(g, rep.h));
    if (!bres.complete) throw std::logic_error("cut_pipeline: sparsifier broadcast incomplete");

    // measured quality on random test cuts
    Rng rng(seed ^ 0x5eedULL);
    for (int c = 0; c < test_cuts; ++c) {
        std::vector<char> side(static_cast<std::size_t>(n), 0);
        int ones = 0;
        do {
            ones = 0;
            for (int v = 0; v < n; ++v) {
                side[static_cast<std::size_t>(v)] = rng.chance(1, 2) ? 1 : 0;
                ones += side[static_cast<std::size_t>(v)];
            }
        } while (ones == 0 || ones == n);
        long long cg = cut_value(g, side), ch = cut_value(rep.h, side);
        Rat dev(ch > cg ? ch - cg : cg - ch, cg);
        if (dev > rep.max_rel_dev) rep.max_rel_dev = dev;
    }
    rep.min_cut_h = stoer_wagner_min_cut(rep.h);
    capture_rounds(eng, rep.oracle_rounds, rep.simulated_rounds);
    return rep;
}

}  // namespace hybridcast
