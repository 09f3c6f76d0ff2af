#include "hybridcast/primitives.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "hybridcast/util.hpp"

namespace hybridcast {

int VirtualTree::depth() const {
    int d = 0;
    for (int v : nodes) d = std::max(d, depth_of(v));
    return d;
}

int VirtualTree::depth_of(int v) const {
    int d = 0;
    while (parent.at(v) != -1) {
        v = parent.at(v);
        ++d;
    }
    return d;
}

int VirtualTree::max_degree() const {
    int deg = 0;
    for (int v : nodes) {
        auto it = children.find(v);
        int c = it == children.end() ? 0 : static_cast<int>(it->second.size());
        deg = std::max(deg, c + (parent.at(v) != -1 ? 1 : 0));
    }
    return deg;
}

std::vector<std::vector<int>> VirtualTree::levels() const {
    std::vector<std::vector<int>> lv;
    if (empty()) return lv;
    lv.push_back({root});
    while (true) {
        std::vector<int> next;
        for (int v : lv.back()) {
            auto it = children.find(v);
            if (it != children.end()) next.insert(next.end(), it->second.begin(), it->second.end());
        }
        if (next.empty()) break;
        lv.push_back(std::move(next));
    }
    return lv;
}

void VirtualTree::validate() const {
    if (empty()) {
        if (root != -1 || !parent.empty()) throw std::logic_error("empty tree with residue");
        return;
    }
    if (parent.at(root) != -1) throw std::logic_error("root has a parent");
    std::size_t seen = 0;
    for (const auto& level : levels()) seen += level.size();
    if (seen != nodes.size()) throw std::logic_error("tree is not connected from the root");
    for (int v : nodes) {
        int p = parent.at(v);
        if (p == -1) {
            if (v != root) throw std::logic_error("second root");
            continue;
        }
        const auto& sib = children.at(p);
        if (std::find(sib.begin(), sib.end(), v) == sib.end())
            throw std::logic_error("parent/children links disagree");
    }
}

VirtualTree VirtualTree::from_parent_map(const std::map<int, int>& parent_of) {
    VirtualTree t;
    t.parent = parent_of;
    for (const auto& [v, p] : parent_of) {
        t.nodes.push_back(v);
        t.children[v];  // ensure entry
        if (p == -1) {
            if (t.root != -1) throw std::logic_error("multiple roots in parent map");
            t.root = v;
        } else {
            t.children[p].push_back(v);
        }
    }
    std::sort(t.nodes.begin(), t.nodes.end());
    // map iteration already yields children in ascending node-index order
    return t;
}

std::vector<int> pointer_forest(const Graph& g) {
    int n = g.n();
    std::vector<int> ptr(n, -1);
    if (n == 1) return ptr;
    for (int v = 0; v < n; ++v) {
        int best = -1;
        for (int u : g.adj[v])
            if (best == -1 || g.id_of(u) > g.id_of(best)) best = u;
        ptr[v] = best;
    }
    // in-degree reduction: the in-neighbors of u, in ascending id order, chain
    // onto each other; only the last one keeps its pointer to u
    std::vector<std::vector<int>> inn(n);
    for (int v = 0; v < n; ++v) inn[ptr[v]].push_back(v);
    std::vector<int> chained = ptr;
    for (int u = 0; u < n; ++u) {
        auto& vs = inn[u];
        std::sort(vs.begin(), vs.end(),
                  [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) chained[vs[i]] = vs[i + 1];
    }
    // break the mutual-max 2-cycle (and any other residue cycle) at its
    // max-id node, which becomes a fragment root
    std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
    for (int s = 0; s < n; ++s) {
        if (state[s] != 0) continue;
        std::vector<int> stack;
        int v = s;
        while (v != -1 && state[v] == 0) {
            state[v] = 1;
            stack.push_back(v);
            v = chained[v];
        }
        if (v != -1 && state[v] == 1) {
            // cycle: nodes from v back to the stack top
            int top = -1;
            for (int i = static_cast<int>(stack.size()) - 1;; --i) {
                if (top == -1 || g.id_of(stack[i]) > g.id_of(top)) top = stack[i];
                if (stack[i] == v) break;
            }
            chained[top] = -1;
        }
        for (int w : stack) state[w] = 2;
    }
    return chained;
}

VirtualTree balanced_tree(const Graph& g, const std::vector<int>& members) {
    std::vector<int> by_id = members;
    std::sort(by_id.begin(), by_id.end(),
              [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
    std::map<int, int> parent_of;
    int root = by_id.back();
    parent_of[root] = -1;
    // balanced binary tree over the remaining ids, hung under the max-id root
    std::function<int(int, int)> build = [&](int lo, int hi) -> int {
        if (lo > hi) return -1;
        int mid = lo + (hi - lo) / 2;
        int v = by_id[static_cast<std::size_t>(mid)];
        int l = build(lo, mid - 1), r = build(mid + 1, hi);
        if (l != -1) parent_of[l] = v;
        if (r != -1) parent_of[r] = v;
        return v;
    };
    int sub = build(0, static_cast<int>(by_id.size()) - 2);
    if (sub != -1) parent_of[sub] = root;
    return VirtualTree::from_parent_map(parent_of);
}

long long overlay_tree_cost(long long n) {
    long long l = ceil_log2(n);
    return l * l;
}

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) {
        for (int i = 0; i < n; ++i) p[i] = i;
    }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

void grant_tree_knowledge(Engine& eng, const VirtualTree& t) {
    for (const auto& [v, p] : t.parent)
        if (p != -1) eng.grant_mutual_knowledge(v, p);
}

}  // namespace

VirtualTree build_spanning_tree(Engine& eng) {
    const Graph& g = eng.graph();
    int n = g.n();
    if (n == 1) {
        VirtualTree t = VirtualTree::from_parent_map({{0, -1}});
        return t;
    }
    auto ptr = pointer_forest(g);
    eng.charge_local_rounds(2, 2 * g.edge_count());  // pointer + chaining messages

    Dsu dsu(n);
    for (int v = 0; v < n; ++v)
        if (ptr[v] != -1) dsu.unite(v, ptr[v]);
    // each fragment builds its overlay once up front
    eng.charge_oracle("overlay-tree", overlay_tree_cost(n));

    // fragments merge toward the neighboring fragment whose max id is largest;
    // the fragment count at least halves per iteration
    auto frag_id = [&](int v) {
        // representative's max node id, maintained lazily below
        return dsu.find(v);
    };
    std::vector<NodeId> frag_max(n, 0);
    auto refresh_max = [&]() {
        std::fill(frag_max.begin(), frag_max.end(), 0);
        for (int v = 0; v < n; ++v) {
            int r = dsu.find(v);
            frag_max[r] = std::max(frag_max[r], g.id_of(v));
        }
    };
    int guard = 0;
    while (true) {
        refresh_max();
        std::map<int, std::pair<NodeId, int>> best;  // fragment -> (max neighbor frag id, node)
        bool multi = false;
        for (int v = 0; v < n; ++v)
            for (int u : g.adj[v]) {
                int fv = frag_id(v), fu = frag_id(u);
                if (fv == fu) continue;
                multi = true;
                auto it = best.find(fv);
                if (it == best.end() || frag_max[fu] > it->second.first)
                    best[fv] = {frag_max[fu], u};
            }
        if (!multi) break;
        for (const auto& [fv, pick] : best) dsu.unite(fv, pick.second);
        eng.charge_oracle("overlay-tree", overlay_tree_cost(n));
        eng.charge_local_rounds(2, 2 * g.edge_count());
        if (++guard > ceil_log2(n) + 1)
            throw std::logic_error("fragment merging did not converge");
    }

    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    VirtualTree t = balanced_tree(g, all);
    t.validate();
    grant_tree_knowledge(eng, t);
    return t;
}

VirtualTree prune_tree(Engine& eng, const VirtualTree& t, const std::vector<char>& marked) {
    int d = t.depth();
    long long marked_total = 0;
    for (int v : t.nodes) marked_total += marked[static_cast<std::size_t>(v)] ? 1 : 0;
    // subtree counting pass costs one round per level
    eng.charge_local_rounds(std::max(1, d), static_cast<long long>(t.nodes.size()));
    if (marked_total == 0) return VirtualTree{};

    std::vector<char> left(marked.begin(), marked.end());  // marks not yet consumed
    std::function<long long(int)> remaining = [&](int v) -> long long {
        long long c = left[static_cast<std::size_t>(v)] ? 1 : 0;
        auto it = t.children.find(v);
        if (it != t.children.end())
            for (int u : it->second) c += remaining(u);
        return c;
    };
    std::map<int, int> parent_of;
    // returns the marked node that takes r's position, or -1 if the subtree
    // holds no remaining marks
    std::function<int(int)> build = [&](int r) -> int {
        if (remaining(r) == 0) return -1;
        int v = r;
        while (!left[static_cast<std::size_t>(v)]) {
            int pick = -1;
            for (int u : t.children.at(v)) {
                if (remaining(u) == 0) continue;
                if (pick == -1 || eng.graph().id_of(u) < eng.graph().id_of(pick)) pick = u;
            }
            v = pick;  // guaranteed: remaining(v) > 0 and v itself unmarked
        }
        left[static_cast<std::size_t>(v)] = 0;
        parent_of[v] = -1;  // wired by the caller
        auto it = t.children.find(r);
        if (it != t.children.end())
            for (int u : it->second) {
                int o = build(u);
                if (o != -1) parent_of[o] = v;
            }
        return v;
    };
    build(t.root);
    eng.charge_local_rounds(static_cast<long long>(d) * d,
                            static_cast<long long>(t.nodes.size()) * (d + 1));
    VirtualTree out = VirtualTree::from_parent_map(parent_of);
    out.validate();
    if (static_cast<long long>(out.nodes.size()) != marked_total)
        throw std::logic_error("prune_tree: output set differs from the marked set");
    grant_tree_knowledge(eng, out);
    return out;
}

std::vector<int> ruling_set(Engine& eng, int mu) {
    const Graph& g = eng.graph();
    int n = g.n();
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
    std::vector<int> hop_to_w(n, n + 1);
    std::vector<int> w;
    for (int v : order) {
        if (hop_to_w[v] <= mu) continue;
        w.push_back(v);
        // truncated BFS keeps every later candidate at hop >= mu+1 from w
        std::deque<int> q{v};
        std::vector<int> dist(n, -1);
        dist[v] = 0;
        hop_to_w[v] = 0;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            if (dist[x] == mu) continue;
            for (int y : g.adj[x])
                if (dist[y] == -1) {
                    dist[y] = dist[x] + 1;
                    hop_to_w[y] = std::min(hop_to_w[y], dist[y]);
                    q.push_back(y);
                }
        }
    }
    // validate both ruling-set properties against the graph
    long long radius = static_cast<long long>(mu) * ceil_log2(n);
    for (int v = 0; v < n; ++v)
        if (hop_to_w[v] > radius && hop_to_w[v] > mu)
            throw std::logic_error("ruling set: domination radius exceeded");
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto hops = bfs_hops(g, w[i]);
        for (std::size_t j = 0; j < w.size(); ++j)
            if (i != j && hops[static_cast<std::size_t>(w[j])] <= mu)
                throw std::logic_error("ruling set: rulers too close");
    }
    eng.charge_oracle("ruling-set", static_cast<long long>(mu) * ceil_log2(n));
    std::sort(w.begin(), w.end(), [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
    return w;
}

void ClusterLayout::validate(const Graph& g, long long k, int tk) const {
    long long total = 0;
    int logn = ceil_log2(g.n());
    for (const auto& [leader, mem] : members) {
        if (mem.empty()) throw std::logic_error("cluster: empty cluster");
        total += static_cast<long long>(mem.size());
        if (std::find(mem.begin(), mem.end(), leader) == mem.end())
            throw std::logic_error("cluster: leader outside its own cluster");
        for (int v : mem)
            if (leader_of[static_cast<std::size_t>(v)] != leader)
                throw std::logic_error("cluster: membership map disagrees");
        // integral size window [ceil(k/tk), 2*ceil(k/tk)], nonempty for any k >= 1
        long long q = ceil_div(k, tk);
        long long sz = static_cast<long long>(mem.size());
        if (sz < q) throw std::logic_error("cluster: size below ceil(k/T_k)");
        if (sz > 2 * q) throw std::logic_error("cluster: size above 2*ceil(k/T_k)");
        if (weak_diam.at(leader) > 4LL * tk * logn)
            throw std::logic_error("cluster: weak diameter bound breached");
    }
    if (total != g.n()) throw std::logic_error("cluster: clusters do not partition V");
}

ClusterLayout cluster(Engine& eng, long long k, int tk) {
    const Graph& g = eng.graph();
    int n = g.n();
    int logn = ceil_log2(n);
    auto rulers = ruling_set(eng, 2 * tk);

    // nearest ruler, ties toward the smaller ruler id: layered multi-source BFS
    std::vector<int> dist(n, -1), lead(n, -1);
    for (int r : rulers) {
        dist[r] = 0;
        lead[r] = r;
    }
    std::vector<std::vector<int>> layers{std::vector<int>(rulers.begin(), rulers.end())};
    while (!layers.back().empty()) {
        std::vector<int> next;
        for (int v : layers.back())
            for (int u : g.adj[v])
                if (dist[u] == -1) {
                    dist[u] = dist[v] + 1;
                    next.push_back(u);
                }
        // resolve each new node against all frontier neighbors for the id tie-break
        for (int u : next) {
            int best = -1;
            for (int x : g.adj[u]) {
                if (dist[x] != dist[u] - 1 || lead[x] == -1) continue;
                if (best == -1 || g.id_of(lead[x]) < g.id_of(best)) best = lead[x];
            }
            lead[u] = best;
        }
        layers.push_back(std::move(next));
    }
    eng.charge_local_rounds(4LL * tk * logn, 2LL * g.edge_count());

    std::map<int, std::vector<int>> pre;
    for (int v = 0; v < n; ++v) pre[lead[v]].push_back(v);
    // proof-step check: the whole T_k-ball of a ruler joins its cluster
    for (int r : rulers)
        for (int v : ball(g, r, tk).members)
            if (lead[v] != r) throw std::logic_error("cluster: T_k-ball escaped its ruler");

    ClusterLayout out;
    out.leader_of.assign(n, -1);
    for (auto& [r, mem] : pre) {
        std::sort(mem.begin(), mem.end(),
                  [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
        long long sz = static_cast<long long>(mem.size());
        long long q = ceil_div(k, tk);
        int groups = 1;
        if (sz > 2 * q) {
            // smallest even split whose group sizes stay inside [q, 2q];
            // groups = floor(sz/q) always qualifies, so the scan terminates
            groups = 0;
            for (int gg = 1; gg <= static_cast<int>(sz); ++gg) {
                if (ceil_div(sz, gg) <= 2 * q && sz / gg >= q) {
                    groups = gg;
                    break;
                }
            }
            if (groups == 0) throw std::logic_error("cluster: no valid split");
        }
        long long base = sz / groups, rem = sz % groups;
        std::size_t at = 0;
        for (int i = 0; i < groups; ++i) {
            long long take = base + (i < rem ? 1 : 0);
            std::vector<int> grp(mem.begin() + static_cast<long long>(at),
                                 mem.begin() + static_cast<long long>(at) + take);
            at += static_cast<std::size_t>(take);
            int leader = grp.front();  // min id in the group
            for (int v : grp) out.leader_of[static_cast<std::size_t>(v)] = leader;
            out.members[leader] = std::move(grp);
            out.leaders.push_back(leader);
        }
    }
    std::sort(out.leaders.begin(), out.leaders.end(),
              [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
    for (const auto& [leader, mem] : out.members)
        out.weak_diam[leader] = weak_diameter(g, mem);
    // split coordination: one more aggregate pass across each cluster
    eng.charge_local_rounds(2LL * tk * logn, n);
    // the membership flood carried leader and member ids over local edges
    for (const auto& [leader, mem] : out.members)
        for (int v : mem) eng.grant_mutual_knowledge(leader, v);
    out.validate(g, k, tk);
    return out;
}

std::vector<std::vector<std::uint64_t>> load_balance(Engine& eng,
                                                     const std::vector<int>& members,
                                                     std::vector<std::vector<std::uint64_t>> items,
                                                     int weak_diam, bool charge) {
    if (items.size() != members.size())
        throw std::invalid_argument("load_balance: items not aligned with members");
    long long total = 0;
    for (const auto& it : items) total += static_cast<long long>(it.size());
    // collect in member order (members are id-sorted), then deal out contiguous
    // slices of size ceil/floor(total/|C|)
    std::vector<std::uint64_t> pool;
    pool.reserve(static_cast<std::size_t>(total));
    for (const auto& it : items) pool.insert(pool.end(), it.begin(), it.end());
    long long c = static_cast<long long>(members.size());
    long long base = total / c, rem = total % c;
    std::vector<std::vector<std::uint64_t>> out(members.size());
    std::size_t at = 0;
    for (long long i = 0; i < c; ++i) {
        long long take = base + (i < rem ? 1 : 0);
        out[static_cast<std::size_t>(i)].assign(pool.begin() + static_cast<long long>(at),
                                                pool.begin() + static_cast<long long>(at) + take);
        at += static_cast<std::size_t>(take);
    }
    if (charge) eng.charge_local_rounds(2LL * weak_diam, 2LL * weak_diam * total);
    return out;
}

long long aggregate_one(Engine& eng, const VirtualTree& tree,
                        const std::vector<long long>& values, AggFn fn) {
    auto combine = [&](long long a, long long b) -> long long {
        switch (fn) {
            case AggFn::Min: return std::min(a, b);
            case AggFn::Max: return std::max(a, b);
            case AggFn::Sum: {
                __int128 s = static_cast<__int128>(a) + b;
                if (s > std::numeric_limits<long long>::max() ||
                    s < std::numeric_limits<long long>::min())
                    throw std::overflow_error("aggregate_one: sum exceeds word width");
                return static_cast<long long>(s);
            }
        }
        throw std::logic_error("unreachable");
    };
    auto lv = tree.levels();
    std::map<int, long long> acc;
    for (int v : tree.nodes) acc[v] = values[static_cast<std::size_t>(v)];
    for (int level = static_cast<int>(lv.size()) - 1; level >= 1; --level) {
        for (int v : lv[static_cast<std::size_t>(level)])
            eng.send_global(v, tree.parent.at(v),
                            {Word{static_cast<std::uint64_t>(acc[v]), false}});
        for (const auto& e : eng.finish_round())
            acc[e.dst] = combine(acc[e.dst], static_cast<long long>(e.payload[0].value));
    }
    long long result = acc[tree.root];
    for (std::size_t level = 0; level + 1 < lv.size(); ++level) {
        for (int v : lv[level])
            for (int c : tree.children.at(v))
                eng.send_global(v, c, {Word{static_cast<std::uint64_t>(result), false}});
        eng.finish_round();
    }
    return result;
}

}  // namespace hybridcast
