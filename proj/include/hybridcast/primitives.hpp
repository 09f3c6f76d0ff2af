#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"

namespace hybridcast {

// Rooted tree over a subset of graph nodes. Tree edges are virtual: adjacent
// pairs communicate over the global channel, so every tree-adjacent pair must
// hold each other's identifier (granted at construction time).
struct VirtualTree {
    std::vector<int> nodes;                   // sorted node indices
    std::map<int, int> parent;                // node -> parent, root -> -1
    std::map<int, std::vector<int>> children; // ascending node-index order
    int root = -1;

    bool empty() const { return nodes.empty(); }
    int depth() const;       // edges on the longest root-leaf path
    int max_degree() const;  // parent link + children
    int depth_of(int v) const;
    std::vector<std::vector<int>> levels() const;  // levels()[0] == {root}

    void validate() const;  // throws on broken tree shape

    static VirtualTree from_parent_map(const std::map<int, int>& parent_of);
};

// Pointer step of the spanning-tree construction: every node points to its
// highest-id neighbor, in-degrees are reduced to two by chaining in-neighbors
// in ascending id order, and any remaining pointer cycle is broken at its
// max-id node. Returns per-node pointer targets (-1 for roots).
std::vector<int> pointer_forest(const Graph& g);

// Overlay tree shape asserted by the charged tree-building oracle: max id at
// the root, the remaining members in a balanced binary tree below it.
VirtualTree balanced_tree(const Graph& g, const std::vector<int>& members);
long long overlay_tree_cost(long long n);  // ceil(log2 n)^2 rounds

VirtualTree build_spanning_tree(Engine& eng);

// Restricts a tree to the marked nodes: subtree counts, root swap with a
// marked descendant, parallel recursion. Output depth never exceeds the input
// depth and the node set equals the marked set exactly.
VirtualTree prune_tree(Engine& eng, const VirtualTree& t, const std::vector<char>& marked);

// (mu+1, mu*ceil(log2 n))-ruling set: deterministic greedy min-id sweep,
// validated, charged as an oracle.
std::vector<int> ruling_set(Engine& eng, int mu);

struct ClusterLayout {
    std::vector<int> leaders;                  // sorted by id
    std::vector<int> leader_of;                // node -> leader node
    std::map<int, std::vector<int>> members;   // leader -> members, id-ascending
    std::map<int, int> weak_diam;              // leader -> weak diameter in G

    void validate(const Graph& g, long long k, int tk) const;  // throws on breach
};

ClusterLayout cluster(Engine& eng, long long k, int tk);

// Evens out items across cluster members: the min-id member collects for
// weak_diam rounds, computes the split, and floods it back. Exactly
// 2*weak_diam rounds; every member ends with at most ceil(total/|C|) items.
// Set charge=false when many clusters balance in parallel: the caller then
// charges 2*max(weak_diam) once for the whole round of balancing.
std::vector<std::vector<std::uint64_t>> load_balance(Engine& eng,
                                                     const std::vector<int>& members,
                                                     std::vector<std::vector<std::uint64_t>> items,
                                                     int weak_diam, bool charge = true);

enum class AggFn { Sum, Min, Max };

// Convergecast up the spanning tree, broadcast down; result known to all.
long long aggregate_one(Engine& eng, const VirtualTree& tree,
                        const std::vector<long long>& values, AggFn fn);

}  // namespace hybridcast
