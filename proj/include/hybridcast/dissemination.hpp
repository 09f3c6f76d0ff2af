#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/primitives.hpp"
#include "hybridcast/tk.hpp"

namespace hybridcast {

struct Token {
    std::uint64_t token_id = 0;  // distinct, < 2^32
    std::uint64_t payload = 0;
    NodeId origin = 0;
};

struct Placement {
    std::vector<std::vector<Token>> at;  // node index -> tokens
    long long k = 0;

    std::vector<long long> counts() const;
    std::vector<Token> all_sorted() const;  // by token_id, ids checked distinct
};

// "single:<id>" puts all k tokens on one node, "single:corner" on a maximum-
// eccentricity node (min id tie-break), "uniform" draws each token's node from
// the seeded generator, "custom:<file>" reads "node_id [count]" lines.
Placement make_placement(const Graph& g, const std::string& spec, long long k,
                         std::uint64_t seed);

// Per-cluster communication scaffolding: identically shaped slot trees
// (s = 2*ceil(k/T_k) slots, leader at the root, members fill twice in id
// order) matched slot-by-slot along the cluster tree.
struct ClusterFabric {
    ClusterLayout layout;
    VirtualTree cluster_tree;  // over cluster leaders
    long long s = 0;           // slots per cluster
    std::map<int, std::vector<int>> occupant;  // leader -> slot -> node
    int max_weak_diam = 0;

    std::vector<std::vector<int>> levels() const { return cluster_tree.levels(); }
};

// Builds clustering, cluster tree, and slot matching on the engine; the
// spanning tree must already exist (phases: cluster, tree, match).
ClusterFabric build_fabric(Engine& eng, const VirtualTree& spanning, long long k, int tk);

struct DisseminationResult {
    long long k = 0;
    int tk = 0;
    TkResult tk_result;
    std::vector<Token> tokens;  // global token table, ascending token_id
    bool complete = false;      // every node ends up with the full set
    long long max_load = 0;     // max tokens at one node between rebalances
};

DisseminationResult k_disseminate(Engine& eng, const Placement& placement);

// Bijection token_id -> 1..k via subtree-count prefix allocation on the
// spanning tree pruned to token holders.
std::map<std::uint64_t, long long> allocate_indices(Engine& eng, const Placement& placement);

// All nodes learn fn applied column-wise over every node's k-vector.
std::vector<long long> k_aggregate(Engine& eng,
                                   const std::vector<std::vector<long long>>& vectors,
                                   AggFn fn);

// k-dissemination reduced to one k-aggregation: tokens are planted at their
// allocated indices (payloads < 2^32) and summed with identity zero.
DisseminationResult disseminate_via_aggregation(Engine& eng, const Placement& placement);

}  // namespace hybridcast
