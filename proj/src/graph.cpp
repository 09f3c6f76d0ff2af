#include "hybridcast/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hybridcast {

long long Graph::edge_count() const {
    long long deg = 0;
    for (const auto& a : adj) deg += static_cast<long long>(a.size());
    return deg / 2;
}

int Graph::index_of(NodeId id) const {
    auto it = index.find(id);
    if (it == index.end()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return it->second;
}

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj[static_cast<std::size_t>(u)];
    return std::binary_search(a.begin(), a.end(), v);
}

long long Graph::edge_weight(int u, int v) const {
    const auto& a = adj[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it == a.end() || *it != v) throw std::out_of_range("no such edge");
    return wts[static_cast<std::size_t>(u)][static_cast<std::size_t>(it - a.begin())];
}

long long Graph::max_weight() const {
    long long w = 1;
    for (const auto& row : wts)
        for (long long x : row) w = std::max(w, x);
    return w;
}

void Graph::validate() const {
    const int nn = n();
    if (nn < 1) throw std::invalid_argument("graph must have at least one node");
    std::set<NodeId> seen(ids.begin(), ids.end());
    if (static_cast<int>(seen.size()) != nn) throw std::invalid_argument("duplicate node ids");
    for (int v = 0; v < nn; ++v) {
        const auto& a = adj[static_cast<std::size_t>(v)];
        if (!std::is_sorted(a.begin(), a.end())) throw std::logic_error("adjacency not sorted");
        for (std::size_t i = 0; i < a.size(); ++i) {
            int u = a[i];
            if (u == v) throw std::invalid_argument("self loop at node " + std::to_string(id_of(v)));
            if (!has_edge(u, v)) throw std::invalid_argument("adjacency not symmetric");
            long long w = wts[static_cast<std::size_t>(v)][i];
            if (w < 1) throw std::invalid_argument("edge weight below 1");
            if (edge_weight(u, v) != w) throw std::invalid_argument("asymmetric edge weight");
        }
    }
    auto hops = bfs_hops(*this, 0);
    for (int v = 0; v < nn; ++v)
        if (hops[static_cast<std::size_t>(v)] < 0) throw std::invalid_argument("graph is disconnected");
}

Graph Graph::from_edges(const std::vector<NodeId>& node_ids,
                        const std::vector<std::tuple<NodeId, NodeId, long long>>& edges,
                        bool weighted, bool check) {
    Graph g;
    g.ids = node_ids;
    g.weighted = weighted;
    for (int i = 0; i < g.n(); ++i) g.index[g.ids[static_cast<std::size_t>(i)]] = i;
    g.adj.assign(node_ids.size(), {});
    g.wts.assign(node_ids.size(), {});
    std::vector<std::vector<std::pair<int, long long>>> tmp(node_ids.size());
    for (const auto& [a, b, w] : edges) {
        int u = g.index_of(a), v = g.index_of(b);
        tmp[static_cast<std::size_t>(u)].emplace_back(v, w);
        tmp[static_cast<std::size_t>(v)].emplace_back(u, w);
    }
    for (std::size_t v = 0; v < tmp.size(); ++v) {
        std::sort(tmp[v].begin(), tmp[v].end());
        for (auto [u, w] : tmp[v]) {
            g.adj[v].push_back(u);
            g.wts[v].push_back(w);
        }
    }
    if (check) g.validate();
    return g;
}

bool Graph::is_connected() const {
    if (n() == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(n()), 0);
    std::vector<int> q{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < q.size(); ++head)
        for (int u : adj[static_cast<std::size_t>(q[head])])
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                q.push_back(u);
            }
    return std::find(seen.begin(), seen.end(), 0) == seen.end();
}

namespace {

std::vector<NodeId> draw_ids(int n, GraphSpec::IdPalette palette, std::uint64_t seed) {
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    if (palette == GraphSpec::IdPalette::Compact) {
        for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
        return ids;
    }
    // Distinct draws from [1, n^3].
    Rng rng(seed ^ 0x1d5ced5ceULL);
    std::uint64_t space = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) *
                          static_cast<std::uint64_t>(n);
    std::set<NodeId> used;
    for (int i = 0; i < n; ++i) {
        NodeId id;
        do {
            id = static_cast<NodeId>(rng.below(space)) + 1;
        } while (!used.insert(id).second);
        ids[static_cast<std::size_t>(i)] = id;
    }
    return ids;
}

void apply_weights(std::vector<std::tuple<NodeId, NodeId, long long>>& edges, const GraphSpec& spec) {
    if (!spec.weighted) return;
    if (spec.weight_min < 1 || spec.weight_max < spec.weight_min)
        throw std::invalid_argument("invalid weight range");
    Rng rng(spec.weight_seed ^ 0xabcd0123ULL);
    for (auto& e : edges) {
        std::uint64_t span = static_cast<std::uint64_t>(spec.weight_max - spec.weight_min + 1);
        std::get<2>(e) = spec.weight_min + static_cast<long long>(rng.below(span));
    }
}

}  // namespace

Graph generate(const GraphSpec& spec) {
    using Family = GraphSpec::Family;
    std::vector<std::tuple<NodeId, NodeId, long long>> edges;
    int n = 0;
    switch (spec.family) {
        case Family::Path: {
            if (spec.n < 2) throw std::invalid_argument("path requires n >= 2");
            n = spec.n;
            auto ids = draw_ids(n, spec.palette, spec.seed);
            for (int i = 0; i + 1 < n; ++i)
                edges.emplace_back(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(i + 1)], 1);
            apply_weights(edges, spec);
            return Graph::from_edges(ids, edges, spec.weighted);
        }
        case Family::Cycle: {
            if (spec.n < 3) throw std::invalid_argument("cycle requires n >= 3");
            n = spec.n;
            auto ids = draw_ids(n, spec.palette, spec.seed);
            for (int i = 0; i < n; ++i)
                edges.emplace_back(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>((i + 1) % n)], 1);
            apply_weights(edges, spec);
            return Graph::from_edges(ids, edges, spec.weighted);
        }
        case Family::Grid: {
            if (spec.m < 2 || spec.d < 1) throw std::invalid_argument("grid requires m >= 2, d >= 1");
            long long total = 1;
            for (int i = 0; i < spec.d; ++i) {
                total *= spec.m;
                if (total > 2'000'000) throw std::invalid_argument("grid too large");
            }
            n = static_cast<int>(total);
            auto ids = draw_ids(n, spec.palette, spec.seed);
            // Mixed-radix coordinates; an edge per axis step.
            for (int v = 0; v < n; ++v) {
                int rem = v;
                long long stride = 1;
                for (int axis = 0; axis < spec.d; ++axis) {
                    int coord = rem % spec.m;
                    rem /= spec.m;
                    if (coord + 1 < spec.m)
                        edges.emplace_back(ids[static_cast<std::size_t>(v)],
                                           ids[static_cast<std::size_t>(v + stride)], 1);
                    stride *= spec.m;
                }
            }
            apply_weights(edges, spec);
            return Graph::from_edges(ids, edges, spec.weighted);
        }
        case Family::RandomConnected: {
            if (spec.n < 2) throw std::invalid_argument("random graph requires n >= 2");
            n = spec.n;
            auto ids = draw_ids(n, spec.palette, spec.seed);
            Rng rng(spec.seed ^ 0x9e37ULL);
            // Random spanning tree first, then independent extra edges. This keeps
            // the output connected without resampling.
            std::set<std::pair<int, int>> present;
            for (int v = 1; v < n; ++v) {
                int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
                present.insert({std::min(u, v), std::max(u, v)});
            }
            std::uint64_t pn = static_cast<std::uint64_t>(spec.p.num < 0 ? 0 : spec.p.num);
            std::uint64_t pd = static_cast<std::uint64_t>(spec.p.den);
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (!present.count({u, v}) && rng.chance(pn, pd)) present.insert({u, v});
            for (auto [u, v] : present)
                edges.emplace_back(ids[static_cast<std::size_t>(u)], ids[static_cast<std::size_t>(v)], 1);
            apply_weights(edges, spec);
            return Graph::from_edges(ids, edges, spec.weighted);
        }
        case Family::FromFile:
            throw std::invalid_argument("from-file specs are loaded via read_edge_list");
    }
    throw std::logic_error("unreachable");
}

GraphSpec GraphSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("empty graph spec");
    GraphSpec spec;
    const std::string& fam = parts[0];
    auto need = [&](std::size_t k) {
        if (parts.size() < k + 1) throw std::invalid_argument("graph spec " + text + ": missing parameters");
    };
    if (fam == "path") {
        need(1);
        spec.family = Family::Path;
        spec.n = std::stoi(parts[1]);
        if (parts.size() > 2) spec.seed = std::stoull(parts[2]);
    } else if (fam == "cycle") {
        need(1);
        spec.family = Family::Cycle;
        spec.n = std::stoi(parts[1]);
        if (parts.size() > 2) spec.seed = std::stoull(parts[2]);
    } else if (fam == "grid") {
        need(2);
        spec.family = Family::Grid;
        spec.d = std::stoi(parts[1]);
        spec.m = std::stoi(parts[2]);
        if (parts.size() > 3) spec.seed = std::stoull(parts[3]);
    } else if (fam == "random") {
        need(1);
        spec.family = Family::RandomConnected;
        spec.n = std::stoi(parts[1]);
        if (parts.size() > 2) spec.p = Rat::parse(parts[2]);
        if (parts.size() > 3) spec.seed = std::stoull(parts[3]);
    } else if (fam == "file") {
        need(1);
        spec.family = Family::FromFile;
        spec.path = parts[1];
    } else {
        throw std::invalid_argument("unknown graph family: " + fam);
    }
    return spec;
}

std::string GraphSpec::describe() const {
    switch (family) {
        case Family::Path: return "path:" + std::to_string(n);
        case Family::Cycle: return "cycle:" + std::to_string(n);
        case Family::Grid: return "grid:" + std::to_string(d) + ":" + std::to_string(m);
        case Family::RandomConnected:
            return "random:" + std::to_string(n) + ":" + p.str() + ":" + std::to_string(seed);
        case Family::FromFile: return "file:" + path;
    }
    return "?";
}

Graph read_edge_list(std::istream& in) {
    long long n = 0, m = 0;
    int weighted = 0;
    if (!(in >> n >> m >> weighted)) throw std::invalid_argument("edge list: bad header");
    std::set<NodeId> id_set;
    std::vector<std::tuple<NodeId, NodeId, long long>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        NodeId u, v;
        long long w = 1;
        if (!(in >> u >> v)) throw std::invalid_argument("edge list: truncated");
        if (weighted && !(in >> w)) throw std::invalid_argument("edge list: missing weight");
        id_set.insert(u);
        id_set.insert(v);
        edges.emplace_back(u, v, w);
    }
    if (static_cast<long long>(id_set.size()) != n)
        throw std::invalid_argument("edge list: node count mismatch");
    return Graph::from_edges(std::vector<NodeId>(id_set.begin(), id_set.end()), edges, weighted != 0);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << g.n() << ' ' << g.edge_count() << ' ' << (g.weighted ? 1 : 0) << '\n';
    for (int v = 0; v < g.n(); ++v) {
        const auto& a = g.adj[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < v) continue;
            out << g.id_of(v) << ' ' << g.id_of(a[i]);
            if (g.weighted) out << ' ' << g.wts[static_cast<std::size_t>(v)][i];
            out << '\n';
        }
    }
}

BallResult ball(const Graph& g, int v, int t) {
    if (v < 0 || v >= g.n()) throw std::out_of_range("ball: unknown node");
    if (t < 0) throw std::invalid_argument("ball: negative radius");
    BallResult b;
    b.center = v;
    b.radius = t;
    auto hops = bfs_hops(g, v);
    for (int u = 0; u < g.n(); ++u)
        if (hops[static_cast<std::size_t>(u)] >= 0 && hops[static_cast<std::size_t>(u)] <= t)
            b.members.push_back(u);
    return b;
}

BallResult ball_by_id(const Graph& g, NodeId v, int t) { return ball(g, g.index_of(v), t); }

std::vector<int> bfs_hops(const Graph& g, int src) {
    std::vector<int> d(static_cast<std::size_t>(g.n()), -1);
    std::queue<int> q;
    d[static_cast<std::size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : g.adj[static_cast<std::size_t>(v)]) {
            if (d[static_cast<std::size_t>(u)] < 0) {
                d[static_cast<std::size_t>(u)] = d[static_cast<std::size_t>(v)] + 1;
                q.push(u);
            }
        }
    }
    return d;
}

std::vector<long long> dijkstra(const Graph& g, int src) {
    std::vector<long long> d(static_cast<std::size_t>(g.n()), kInfDistance);
    using Entry = std::pair<long long, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    d[static_cast<std::size_t>(src)] = 0;
    pq.emplace(0, src);
    while (!pq.empty()) {
        auto [dist, v] = pq.top();
        pq.pop();
        if (dist != d[static_cast<std::size_t>(v)]) continue;
        const auto& a = g.adj[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < a.size(); ++i) {
            long long nd = dist + g.wts[static_cast<std::size_t>(v)][i];
            if (nd < d[static_cast<std::size_t>(a[i])]) {
                d[static_cast<std::size_t>(a[i])] = nd;
                pq.emplace(nd, a[i]);
            }
        }
    }
    return d;
}

std::vector<long long> hop_limited_distances(const Graph& g, int src, int h) {
    // Bellman-Ford over h rounds; d^0 is 0 at the source only.
    std::vector<long long> cur(static_cast<std::size_t>(g.n()), kInfDistance);
    cur[static_cast<std::size_t>(src)] = 0;
    for (int round = 0; round < h; ++round) {
        std::vector<long long> next = cur;
        bool changed = false;
        for (int v = 0; v < g.n(); ++v) {
            if (cur[static_cast<std::size_t>(v)] == kInfDistance) continue;
            const auto& a = g.adj[static_cast<std::size_t>(v)];
            for (std::size_t i = 0; i < a.size(); ++i) {
                long long nd = cur[static_cast<std::size_t>(v)] + g.wts[static_cast<std::size_t>(v)][i];
                if (nd < next[static_cast<std::size_t>(a[i])]) {
                    next[static_cast<std::size_t>(a[i])] = nd;
                    changed = true;
                }
            }
        }
        cur = std::move(next);
        if (!changed) break;
    }
    return cur;
}

DistanceTable exact_distances(const Graph& g, const std::vector<int>& sources) {
    if (sources.empty()) throw std::invalid_argument("exact_distances: no sources");
    DistanceTable t;
    t.sources = sources;
    for (int s : sources) {
        t.dist.push_back(dijkstra(g, s));
        t.hops.push_back(bfs_hops(g, s));
    }
    return t;
}

int eccentricity(const Graph& g, int v) {
    auto hops = bfs_hops(g, v);
    int e = 0;
    for (int h : hops) e = std::max(e, h);
    return e;
}

int diameter(const Graph& g) {
    int d = 0;
    for (int v = 0; v < g.n(); ++v) d = std::max(d, eccentricity(g, v));
    return d;
}

int weak_diameter(const Graph& g, const std::vector<int>& members) {
    if (members.empty()) throw std::invalid_argument("weak_diameter: empty set");
    int d = 0;
    for (int v : members) {
        auto hops = bfs_hops(g, v);
        for (int u : members) d = std::max(d, hops[static_cast<std::size_t>(u)]);
    }
    return d;
}

}  // namespace hybridcast
