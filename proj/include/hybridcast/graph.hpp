#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hybridcast/rational.hpp"
#include "hybridcast/util.hpp"

namespace hybridcast {

using NodeId = long long;

// Undirected, connected graph. Nodes are addressed internally by dense index
// [0, n); identifiers are arbitrary distinct integers used for addressing on
// the global channel and for all tie-breaking.
struct Graph {
    std::vector<NodeId> ids;                  // index -> identifier
    std::vector<std::vector<int>> adj;        // sorted neighbor indices
    std::vector<std::vector<long long>> wts;  // parallel to adj, all >= 1
    bool weighted = false;
    std::map<NodeId, int> index;              // identifier -> index

    int n() const { return static_cast<int>(ids.size()); }
    long long edge_count() const;

    int index_of(NodeId id) const;            // throws on unknown node
    NodeId id_of(int v) const { return ids.at(static_cast<std::size_t>(v)); }
    bool has_edge(int u, int v) const;
    long long edge_weight(int u, int v) const;
    long long max_weight() const;

    // Throws if any structural invariant is broken (connectivity, symmetry,
    // self loops, weight range).
    void validate() const;

    // check=false skips validation for graphs that may legitimately be
    // disconnected (sampled skeletons and sparsifiers).
    static Graph from_edges(const std::vector<NodeId>& node_ids,
                            const std::vector<std::tuple<NodeId, NodeId, long long>>& edges,
                            bool weighted, bool check = true);

    bool is_connected() const;
};

struct GraphSpec {
    enum class Family { Path, Cycle, Grid, RandomConnected, FromFile };
    enum class IdPalette { Scattered, Compact };  // [n^3] draws vs [1..n]

    Family family = Family::Path;
    int n = 0;          // path / cycle / random
    int d = 0, m = 0;   // grid
    Rat p{1, 20};       // random edge probability
    std::uint64_t seed = 0;
    std::string path;   // from-file
    IdPalette palette = IdPalette::Scattered;

    bool weighted = false;
    long long weight_min = 1, weight_max = 100;
    std::uint64_t weight_seed = 0;

    // "path:100", "cycle:101", "grid:2:10", "random:200:1/20:7", "file:/x.el"
    static GraphSpec parse(const std::string& text);
    std::string describe() const;
};

Graph generate(const GraphSpec& spec);

// Edge-list format: first line "n m weighted", then m lines "u v [w]".
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

struct BallResult {
    int center = -1;
    int radius = 0;
    std::vector<int> members;  // sorted indices
};

BallResult ball(const Graph& g, int v, int t);
BallResult ball_by_id(const Graph& g, NodeId v, int t);

std::vector<int> bfs_hops(const Graph& g, int src);
std::vector<long long> dijkstra(const Graph& g, int src);
// d^h: weight of the lightest path using at most h edges; kInfDistance when none.
std::vector<long long> hop_limited_distances(const Graph& g, int src, int h);

struct DistanceTable {
    std::vector<int> sources;
    std::vector<std::vector<long long>> dist;  // weighted
    std::vector<std::vector<int>> hops;        // unweighted hop counts
};

DistanceTable exact_distances(const Graph& g, const std::vector<int>& sources);

int eccentricity(const Graph& g, int v);
int diameter(const Graph& g);
int weak_diameter(const Graph& g, const std::vector<int>& members);

}  // namespace hybridcast
