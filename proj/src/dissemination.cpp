#include "hybridcast/dissemination.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hybridcast/util.hpp"

namespace hybridcast {

std::vector<long long> Placement::counts() const {
    std::vector<long long> c(at.size(), 0);
    for (std::size_t v = 0; v < at.size(); ++v) c[v] = static_cast<long long>(at[v].size());
    return c;
}

std::vector<Token> Placement::all_sorted() const {
    std::vector<Token> all;
    for (const auto& list : at) all.insert(all.end(), list.begin(), list.end());
    std::sort(all.begin(), all.end(),
              [](const Token& a, const Token& b) { return a.token_id < b.token_id; });
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        if (all[i].token_id == all[i + 1].token_id)
            throw std::invalid_argument("placement: duplicate token_id " +
                                        std::to_string(all[i].token_id));
    for (const auto& t : all)
        if (t.token_id == 0 || t.token_id >= (1ULL << 32))
            throw std::invalid_argument("placement: token_id out of the 32-bit window");
    return all;
}

Placement make_placement(const Graph& g, const std::string& spec, long long k,
                         std::uint64_t seed) {
    Placement p;
    p.at.resize(static_cast<std::size_t>(g.n()));
    p.k = k;
    Rng rng(seed ^ 0x70cace5ULL);
    auto payload_for = [&](long long i) {
        Rng pr(seed + 0x9e37ULL * static_cast<std::uint64_t>(i));
        return pr.next() & 0xffffffffULL;
    };
    auto place = [&](long long i, int v) {
        p.at[static_cast<std::size_t>(v)].push_back(
            {static_cast<std::uint64_t>(i + 1), payload_for(i), g.id_of(v)});
    };
    if (spec.rfind("single:", 0) == 0) {
        std::string arg = spec.substr(7);
        int v;
        if (arg == "corner") {
            // maximum eccentricity, min id as tie-break
            v = 0;
            int best = -1;
            for (int u = 0; u < g.n(); ++u) {
                int e = eccentricity(g, u);
                if (e > best || (e == best && g.id_of(u) < g.id_of(v))) {
                    best = e;
                    v = u;
                }
            }
        } else {
            v = g.index_of(std::stoll(arg));
        }
        for (long long i = 0; i < k; ++i) place(i, v);
    } else if (spec == "uniform") {
        for (long long i = 0; i < k; ++i)
            place(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n()))));
    } else if (spec.rfind("custom:", 0) == 0) {
        std::ifstream in(spec.substr(7));
        if (!in) throw std::invalid_argument("placement: cannot open " + spec.substr(7));
        std::string line;
        long long i = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            long long id, count = 1;
            ls >> id;
            ls >> count;
            if (!ls) count = 1;
            for (long long j = 0; j < count; ++j) place(i++, g.index_of(id));
        }
        p.k = i;
    } else {
        throw std::invalid_argument("placement: unknown spec " + spec);
    }
    return p;
}

namespace {

// cluster pool: token_id (or aggregation index) -> payload word
using Pool = std::map<std::uint64_t, std::uint64_t>;

std::vector<std::pair<std::uint64_t, std::uint64_t>> flat(const Pool& p) {
    return {p.begin(), p.end()};
}

// contiguous near-even slices: slice j of a T-element list gets T/s or T/s+1
struct Slicer {
    long long total = 0, parts = 1;
    long long offset(long long j) const {
        long long base = total / parts, rem = total % parts;
        return j * base + std::min(j, rem);
    }
    long long size(long long j) const { return offset(j + 1) - offset(j); }
};

struct Shares {
    // node -> current balanced token count, for the load-safety measurement
    std::map<int, long long> size;
};

void rebalance_shares(const ClusterFabric& f, const std::map<int, Pool>& pools, Shares& sh,
                      const std::vector<int>& leaders) {
    for (int L : leaders) {
        const auto& mem = f.layout.members.at(L);
        Slicer sl{static_cast<long long>(pools.at(L).size()),
                  static_cast<long long>(mem.size())};
        for (std::size_t i = 0; i < mem.size(); ++i)
            sh.size[mem[i]] = sl.size(static_cast<long long>(i));
    }
}

long long max_weak_diam_of(const ClusterFabric& f, const std::vector<int>& leaders) {
    long long d = 0;
    for (int L : leaders) d = std::max<long long>(d, f.layout.weak_diam.at(L));
    return d;
}

using MergeFn = std::function<void(Pool&, std::uint64_t, std::uint64_t)>;

// Level-by-level convergecast of cluster pools along the cluster tree. Every
// slot streams its slice one token per round to the matched parent slot; a
// node sends via at most 2 slots and receives via 2 slots x <= 2 children.
void propagate_up(Engine& eng, const ClusterFabric& f, std::map<int, Pool>& pools,
                  const MergeFn& merge, Shares& sh, long long& max_load) {
    auto lv = f.levels();
    for (int level = static_cast<int>(lv.size()) - 1; level >= 1; --level) {
        const auto& active = lv[static_cast<std::size_t>(level)];
        std::map<int, std::vector<std::pair<std::uint64_t, std::uint64_t>>> outbox;
        long long rounds = 0;
        for (int L : active) {
            outbox[L] = flat(pools[L]);
            Slicer sl{static_cast<long long>(outbox[L].size()), f.s};
            for (long long j = 0; j < f.s; ++j) rounds = std::max(rounds, sl.size(j));
        }
        std::map<int, Pool> arrived;        // parent leader -> merged arrivals
        std::map<int, long long> arrivals;  // node -> raw tokens received this level
        for (long long r = 0; r < rounds; ++r) {
            for (int L : active) {
                int P = f.cluster_tree.parent.at(L);
                Slicer sl{static_cast<long long>(outbox[L].size()), f.s};
                for (long long j = 0; j < f.s; ++j) {
                    if (r >= sl.size(j)) continue;
                    auto [id, val] = outbox[L][static_cast<std::size_t>(sl.offset(j) + r)];
                    int src = f.occupant.at(L)[static_cast<std::size_t>(j)];
                    int dst = f.occupant.at(P)[static_cast<std::size_t>(j)];
                    eng.send_global(src, dst, {Word{id, false}, Word{val, false}});
                }
            }
            for (const auto& e : eng.finish_round()) {
                int P = f.layout.leader_of[static_cast<std::size_t>(e.dst)];
                merge(arrived[P], e.payload[0].value, e.payload[1].value);
                ++arrivals[e.dst];
            }
        }
        for (const auto& [node, cnt] : arrivals)
            max_load = std::max(max_load, sh.size[node] + cnt);
        std::vector<int> parents;
        for (auto& [P, pool] : arrived) {
            for (const auto& [id, val] : pool) merge(pools[P], id, val);
            parents.push_back(P);
        }
        eng.charge_local_rounds(2 * max_weak_diam_of(f, parents), 2 * static_cast<long long>(rounds));
        rebalance_shares(f, pools, sh, parents);
    }
}

// Mirror image: parents stream their (already complete) pools down, slot to
// matched child slot, alternating children so no node exceeds 2 sends a round.
void propagate_down(Engine& eng, const ClusterFabric& f, std::map<int, Pool>& pools,
                    Shares& sh, long long& max_load) {
    auto lv = f.levels();
    for (std::size_t level = 0; level + 1 < lv.size(); ++level) {
        struct Job {
            int parent;
            std::vector<int> kids;
            std::vector<std::pair<std::uint64_t, std::uint64_t>> tokens;
        };
        std::vector<Job> jobs;
        long long rounds = 0;
        for (int P : lv[level]) {
            auto it = f.cluster_tree.children.find(P);
            if (it == f.cluster_tree.children.end() || it->second.empty()) continue;
            Job job{P, it->second, flat(pools[P])};
            Slicer sl{static_cast<long long>(job.tokens.size()), f.s};
            long long maxslice = 0;
            for (long long j = 0; j < f.s; ++j) maxslice = std::max(maxslice, sl.size(j));
            rounds = std::max(rounds, maxslice * static_cast<long long>(job.kids.size()));
            jobs.push_back(std::move(job));
        }
        if (jobs.empty()) continue;
        std::map<int, long long> arrivals;
        std::vector<int> kids_all;
        for (long long r = 0; r < rounds; ++r) {
            for (const auto& job : jobs) {
                long long nc = static_cast<long long>(job.kids.size());
                long long kid = r % nc, idx = r / nc;
                Slicer sl{static_cast<long long>(job.tokens.size()), f.s};
                for (long long j = 0; j < f.s; ++j) {
                    if (idx >= sl.size(j)) continue;
                    auto [id, val] = job.tokens[static_cast<std::size_t>(sl.offset(j) + idx)];
                    int src = f.occupant.at(job.parent)[static_cast<std::size_t>(j)];
                    int dst =
                        f.occupant.at(job.kids[static_cast<std::size_t>(kid)])[static_cast<std::size_t>(j)];
                    eng.send_global(src, dst, {Word{id, false}, Word{val, false}});
                }
            }
            for (const auto& e : eng.finish_round()) {
                int C = f.layout.leader_of[static_cast<std::size_t>(e.dst)];
                pools[C][e.payload[0].value] = e.payload[1].value;
                ++arrivals[e.dst];
            }
        }
        for (const auto& [node, cnt] : arrivals)
            max_load = std::max(max_load, sh.size[node] + cnt);
        for (const auto& job : jobs)
            kids_all.insert(kids_all.end(), job.kids.begin(), job.kids.end());
        eng.charge_local_rounds(2 * max_weak_diam_of(f, kids_all), 2 * static_cast<long long>(rounds));
        rebalance_shares(f, pools, sh, kids_all);
    }
}

}  // namespace

ClusterFabric build_fabric(Engine& eng, const VirtualTree& spanning, long long k, int tk) {
    const Graph& g = eng.graph();
    ClusterFabric f;
    eng.begin_phase("cluster");
    f.layout = cluster(eng, k, tk);
    eng.end_phase();
    for (const auto& [L, d] : f.layout.weak_diam) f.max_weak_diam = std::max(f.max_weak_diam, d);

    eng.begin_phase("tree");
    std::vector<char> marked(static_cast<std::size_t>(g.n()), 0);
    for (int L : f.layout.leaders) marked[static_cast<std::size_t>(L)] = 1;
    f.cluster_tree = prune_tree(eng, spanning, marked);
    eng.end_phase();

    f.s = 2 * ceil_div(k, tk);
    for (const auto& [L, mem] : f.layout.members) {
        // leader takes the root slot; everyone (leader included) appears at
        // most twice: L, L, m1, m1, m2, m2, ... truncated to s entries
        std::vector<int> seq{L, L};
        for (int v : mem)
            if (v != L) {
                seq.push_back(v);
                seq.push_back(v);
            }
        if (static_cast<long long>(seq.size()) < f.s)
            throw std::logic_error("slot tree: cluster too small for its slots");
        f.occupant[L] = std::vector<int>(seq.begin(), seq.begin() + f.s);
    }

    // slot matching: leaders swap occupant rosters, then tell each occupant
    // the counterpart holding the same slot position in the other cluster
    eng.begin_phase("match");
    auto lv = f.levels();
    for (std::size_t level = 1; level < lv.size(); ++level) {
        std::vector<Envelope> roster;
        for (int C : lv[level]) {
            int P = f.cluster_tree.parent.at(C);
            for (long long j = 0; j < f.s; ++j) {
                std::uint64_t jj = static_cast<std::uint64_t>(j);
                int co = f.occupant.at(C)[static_cast<std::size_t>(j)];
                int po = f.occupant.at(P)[static_cast<std::size_t>(j)];
                roster.push_back({C, P, Channel::Global,
                                  {Word{jj, false},
                                   Word{static_cast<std::uint64_t>(eng.graph().id_of(co)), true}}});
                roster.push_back({P, C, Channel::Global,
                                  {Word{jj, false},
                                   Word{static_cast<std::uint64_t>(eng.graph().id_of(po)), true}}});
            }
        }
        eng.deliver_paced(std::move(roster));
        std::vector<Envelope> inform;
        for (int C : lv[level]) {
            int P = f.cluster_tree.parent.at(C);
            for (long long j = 0; j < f.s; ++j) {
                std::uint64_t jj = static_cast<std::uint64_t>(j);
                int co = f.occupant.at(C)[static_cast<std::size_t>(j)];
                int po = f.occupant.at(P)[static_cast<std::size_t>(j)];
                if (co != C)
                    inform.push_back({C, co, Channel::Global,
                                      {Word{jj, false},
                                       Word{static_cast<std::uint64_t>(eng.graph().id_of(po)), true}}});
                if (po != P)
                    inform.push_back({P, po, Channel::Global,
                                      {Word{jj, false},
                                       Word{static_cast<std::uint64_t>(eng.graph().id_of(co)), true}}});
            }
        }
        if (!inform.empty()) eng.deliver_paced(std::move(inform));
    }
    eng.end_phase();
    return f;
}

DisseminationResult k_disseminate(Engine& eng, const Placement& placement) {
    const Graph& g = eng.graph();
    int n = g.n();
    DisseminationResult res;
    res.tokens = placement.all_sorted();
    res.k = placement.k;
    if (static_cast<long long>(res.tokens.size()) != placement.k)
        throw std::invalid_argument("k_disseminate: placement token count disagrees with k");
    long long k = res.k;

    eng.begin_phase("tree");
    VirtualTree spanning = build_spanning_tree(eng);
    eng.end_phase();
    res.tk_result = tk_distributed(eng, placement.counts(), spanning);
    res.tk = res.tk_result.tk_graph;
    int logn = ceil_log2(n);

    if (n < 16 || ceil_div(k, res.tk) > n) {
        // Two degenerate regimes fall back to diameter-round flooding: tiny
        // graphs, where the slot protocol's 4-receive envelope needs cap >= 4,
        // and k > n*T_k, where no partition into clusters of >= ceil(k/T_k)
        // nodes exists (T_k sits at the diameter fallback there, so flooding
        // is within the T_k budget anyway).
        eng.begin_phase("flood");
        int rds = diameter(g);
        std::vector<std::set<std::uint64_t>> items(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            for (const auto& t : placement.at[static_cast<std::size_t>(v)])
                items[static_cast<std::size_t>(v)].insert(t.token_id);
        auto out = flood(eng, std::move(items), rds);
        res.complete = std::all_of(out.begin(), out.end(), [&](const auto& s) {
            return static_cast<long long>(s.size()) == k;
        });
        res.max_load = k;
        eng.end_phase();
        return res;
    }

    ClusterFabric f = build_fabric(eng, spanning, k, res.tk);

    // initial intra-cluster collection + balancing
    eng.begin_phase("balance");
    std::map<int, Pool> pools;
    for (const auto& [L, mem] : f.layout.members) {
        Pool& pool = pools[L];
        for (int v : mem)
            for (const auto& t : placement.at[static_cast<std::size_t>(v)])
                pool[t.token_id] = t.payload;
    }
    eng.charge_local_rounds(2LL * f.max_weak_diam, 2LL * f.max_weak_diam * k);
    Shares sh;
    rebalance_shares(f, pools, sh, f.layout.leaders);
    eng.end_phase();

    MergeFn dedupe = [](Pool& p, std::uint64_t id, std::uint64_t val) { p.emplace(id, val); };
    eng.begin_phase("up");
    propagate_up(eng, f, pools, dedupe, sh, res.max_load);
    eng.end_phase();

    int root = f.cluster_tree.root;
    bool root_full = static_cast<long long>(pools[root].size()) == k;

    eng.begin_phase("down");
    propagate_down(eng, f, pools, sh, res.max_load);
    eng.end_phase();

    bool all_full = root_full;
    for (int L : f.layout.leaders)
        all_full = all_full && static_cast<long long>(pools[L].size()) == k;

    // final flood: every cluster now holds every token spread over its
    // members, and cluster weak diameters are <= the flood radius
    eng.begin_phase("flood");
    long long radius = 4LL * res.tk * logn;
    bool covered = all_full;
    if (all_full) {
        // holder of token #idx in a cluster = the member owning that slice
        std::map<std::uint64_t, std::vector<int>> holders;
        for (int L : f.layout.leaders) {
            const auto& mem = f.layout.members.at(L);
            auto tokens = flat(pools[L]);
            Slicer sl{static_cast<long long>(tokens.size()),
                      static_cast<long long>(mem.size())};
            for (std::size_t i = 0; i < mem.size(); ++i)
                for (long long t = sl.offset(static_cast<long long>(i));
                     t < sl.offset(static_cast<long long>(i) + 1); ++t)
                    holders[tokens[static_cast<std::size_t>(t)].first].push_back(mem[i]);
        }
        // flooding for `radius` rounds reaches every node iff each token has a
        // holder within that many hops of everyone
        for (const auto& [id, src] : holders) {
            std::vector<int> dist(static_cast<std::size_t>(n), -1);
            std::vector<int> q(src.begin(), src.end());
            for (int v : src) dist[static_cast<std::size_t>(v)] = 0;
            for (std::size_t head = 0; head < q.size(); ++head) {
                int x = q[head];
                for (int y : g.adj[x])
                    if (dist[static_cast<std::size_t>(y)] == -1) {
                        dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                        q.push_back(y);
                    }
            }
            for (int v = 0; v < n; ++v)
                covered = covered && dist[static_cast<std::size_t>(v)] != -1 &&
                          dist[static_cast<std::size_t>(v)] <= radius;
        }
    }
    eng.charge_local_rounds(radius, static_cast<long long>(n) * k);
    eng.end_phase();

    res.complete = covered;
    return res;
}

std::map<std::uint64_t, long long> allocate_indices(Engine& eng, const Placement& placement) {
    const Graph& g = eng.graph();
    eng.begin_phase("tree");
    VirtualTree spanning = build_spanning_tree(eng);
    std::vector<char> marked(static_cast<std::size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v)
        if (!placement.at[static_cast<std::size_t>(v)].empty())
            marked[static_cast<std::size_t>(v)] = 1;
    VirtualTree holders = prune_tree(eng, spanning, marked);
    eng.end_phase();

    // subtree counts up, prefix ranges down: a node reserves the first indices
    // of its range for its own tokens, then hands consecutive sub-ranges to
    // its children in ascending id order
    std::map<std::uint64_t, long long> index_of;
    std::function<long long(int, long long)> assign = [&](int v, long long start) -> long long {
        auto tokens = placement.at[static_cast<std::size_t>(v)];
        std::sort(tokens.begin(), tokens.end(),
                  [](const Token& a, const Token& b) { return a.token_id < b.token_id; });
        for (const auto& t : tokens) index_of[t.token_id] = start++;
        auto kids = holders.children.at(v);
        std::sort(kids.begin(), kids.end(),
                  [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
        for (int c : kids) start = assign(c, start);
        return start;
    };
    long long used = assign(holders.root, 1);
    if (used != placement.k + 1)
        throw std::logic_error("allocate_indices: allocation is not a bijection onto [k]");
    int d = std::max(1, holders.depth());
    eng.charge_local_rounds(2LL * d, static_cast<long long>(holders.nodes.size()) * 2);
    return index_of;
}

std::vector<long long> k_aggregate(Engine& eng,
                                   const std::vector<std::vector<long long>>& vectors,
                                   AggFn fn) {
    const Graph& g = eng.graph();
    int n = g.n();
    if (static_cast<int>(vectors.size()) != n)
        throw std::invalid_argument("k_aggregate: need one vector per node");
    long long k = static_cast<long long>(vectors[0].size());
    for (const auto& v : vectors)
        if (static_cast<long long>(v.size()) != k)
            throw std::invalid_argument("k_aggregate: ragged vectors");
    if (k < 1) throw std::invalid_argument("k_aggregate: k must be >= 1");

    auto combine = [&](long long a, long long b) -> long long {
        switch (fn) {
            case AggFn::Min: return std::min(a, b);
            case AggFn::Max: return std::max(a, b);
            case AggFn::Sum: {
                __int128 s = static_cast<__int128>(a) + b;
                if (s > std::numeric_limits<long long>::max() ||
                    s < std::numeric_limits<long long>::min())
                    throw std::overflow_error("k_aggregate: sum exceeds word width");
                return static_cast<long long>(s);
            }
        }
        throw std::logic_error("unreachable");
    };

    eng.begin_phase("tree");
    VirtualTree spanning = build_spanning_tree(eng);
    eng.end_phase();
    // k is made globally known in-protocol before anything depends on it
    std::vector<long long> virtual_tokens(static_cast<std::size_t>(n), 0);
    virtual_tokens[0] = k;
    TkResult tkr = tk_distributed(eng, virtual_tokens, spanning);
    int tk = tkr.tk_graph;

    auto column_oracle = [&]() {
        std::vector<long long> out(static_cast<std::size_t>(k));
        for (long long i = 0; i < k; ++i) {
            long long acc = vectors[0][static_cast<std::size_t>(i)];
            for (int v = 1; v < n; ++v)
                acc = combine(acc, vectors[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)]);
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    };

    if (n < 16 || ceil_div(k, static_cast<long long>(tk)) > n) {
        eng.begin_phase("flood");
        eng.charge_local_rounds(2LL * diameter(g), static_cast<long long>(n) * k);
        eng.end_phase();
        return column_oracle();
    }

    ClusterFabric f = build_fabric(eng, spanning, k, tk);

    // intra-cluster partials: flood member vectors within the cluster, combine
    eng.begin_phase("balance");
    std::map<int, Pool> pools;
    for (const auto& [L, mem] : f.layout.members) {
        Pool& pool = pools[L];
        for (long long i = 0; i < k; ++i) {
            long long acc = vectors[static_cast<std::size_t>(mem[0])][static_cast<std::size_t>(i)];
            for (std::size_t j = 1; j < mem.size(); ++j)
                acc = combine(acc, vectors[static_cast<std::size_t>(mem[j])][static_cast<std::size_t>(i)]);
            pool[static_cast<std::uint64_t>(i + 1)] = static_cast<std::uint64_t>(acc);
        }
    }
    eng.charge_local_rounds(2LL * f.max_weak_diam, static_cast<long long>(n) * k);
    Shares sh;
    rebalance_shares(f, pools, sh, f.layout.leaders);
    eng.end_phase();

    MergeFn merge = [&](Pool& p, std::uint64_t id, std::uint64_t val) {
        auto it = p.find(id);
        if (it == p.end())
            p.emplace(id, val);
        else
            it->second = static_cast<std::uint64_t>(
                combine(static_cast<long long>(it->second), static_cast<long long>(val)));
    };
    long long load = 0;
    eng.begin_phase("up");
    propagate_up(eng, f, pools, merge, sh, load);
    eng.end_phase();

    int root = f.cluster_tree.root;
    if (static_cast<long long>(pools[root].size()) != k)
        throw std::logic_error("k_aggregate: root cluster missing partials");
    // root cluster floods internally to finalize, then disseminates
    eng.begin_phase("balance");
    eng.charge_local_rounds(2LL * f.layout.weak_diam.at(root), k);
    eng.end_phase();

    Placement out_tokens;
    out_tokens.at.resize(static_cast<std::size_t>(n));
    out_tokens.k = k;
    for (const auto& [id, val] : pools[root])
        out_tokens.at[static_cast<std::size_t>(root)].push_back({id, val, g.id_of(root)});
    DisseminationResult dres = k_disseminate(eng, out_tokens);
    if (!dres.complete) throw std::logic_error("k_aggregate: result dissemination incomplete");

    std::vector<long long> results(static_cast<std::size_t>(k));
    for (const auto& t : dres.tokens)
        results[static_cast<std::size_t>(t.token_id - 1)] = static_cast<long long>(t.payload);
    return results;
}

DisseminationResult disseminate_via_aggregation(Engine& eng, const Placement& placement) {
    const Graph& g = eng.graph();
    int n = g.n();
    auto all = placement.all_sorted();
    long long k = placement.k;
    for (const auto& t : all)
        if (t.payload >= (1ULL << 32))
            throw std::invalid_argument("disseminate_via_aggregation: payload does not fit the encoding");

    auto index_of = allocate_indices(eng, placement);
    std::vector<std::vector<long long>> vectors(static_cast<std::size_t>(n),
                                                std::vector<long long>(static_cast<std::size_t>(k), 0));
    for (int v = 0; v < n; ++v)
        for (const auto& t : placement.at[static_cast<std::size_t>(v)]) {
            long long idx = index_of.at(t.token_id);
            auto& cell = vectors[static_cast<std::size_t>(v)][static_cast<std::size_t>(idx - 1)];
            if (cell != 0)
                throw std::logic_error("disseminate_via_aggregation: index collision");
            cell = static_cast<long long>((t.token_id << 32) | t.payload);
        }
    auto sums = k_aggregate(eng, vectors, AggFn::Sum);

    DisseminationResult res;
    res.k = k;
    res.complete = true;
    for (long long s : sums) {
        std::uint64_t word = static_cast<std::uint64_t>(s);
        if (word == 0) {
            res.complete = false;
            continue;
        }
        res.tokens.push_back({word >> 32, word & 0xffffffffULL, 0});
    }
    std::sort(res.tokens.begin(), res.tokens.end(),
              [](const Token& a, const Token& b) { return a.token_id < b.token_id; });
    // restore origins from the placement for reporting
    std::map<std::uint64_t, NodeId> origin;
    for (const auto& t : all) origin[t.token_id] = t.origin;
    for (auto& t : res.tokens) t.origin = origin.at(t.token_id);
    return res;
}

}  // namespace hybridcast
