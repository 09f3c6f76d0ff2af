#pragma once

#include <string>
#include <vector>

#include "hybridcast/dissemination.hpp"
#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/rational.hpp"

#include "json.hpp"

namespace hybridcast {

struct ApspReport {
    std::string method;
    std::vector<NodeId> ids;                    // row/column order
    std::vector<std::vector<long long>> delta;  // estimates, delta[i][i] = 0
    Rat max_ratio{1, 1};
    Rat min_ratio{1, 1};
    long long underestimates = 0;
    int seeds_failed = 0;
    long long oracle_rounds = 0;
    long long simulated_rounds = 0;

    nlohmann::json audit_json() const;
};

struct OracleConfig {
    bool adversarial_sssp = false;  // stretch SSSP answers to the (1+eps/4) limit
    std::uint64_t seed = 0;
};

// (1+eps)-approximate unweighted APSP: id broadcast, clustering with k=n,
// one charged SSSP per cluster center, x-hop local learning, center rule.
ApspReport apsp_unweighted(Engine& eng, Rat eps, const OracleConfig& oc = {});

// Greedy (2k_sp-1)-stretch spanner, broadcast, local Dijkstra.
ApspReport apsp_spanner(Engine& eng, Rat eps);

struct SkeletonGraph {
    std::vector<int> sampled;  // node indices in g
    Graph skeleton;            // ids shared with g, weights d^h
    long long t = 0;           // sampling denominator
    long long h = 0;           // hop budget
    bool connected = false;
    bool distance_exact = false;  // d_S == d_G on sampled pairs (whp property)
    int resamples = 0;
};

SkeletonGraph build_skeleton(Engine& eng, long long t, Rat xi, std::uint64_t seed);

// (4*alpha-1)-approximate weighted APSP over a sampled skeleton (whp).
ApspReport apsp_skeleton(Engine& eng, int alpha, std::uint64_t seed);

// Exact APSP for sparse graphs (m <= c*n*ceil(log2 n)): broadcast all edges,
// run Dijkstra locally everywhere.
ApspReport apsp_sparse_exact(Engine& eng, long long density_c = 1);

struct CutReport {
    bool exact_fallback = false;  // H == G
    long long h_edges = 0;
    Rat max_rel_dev{0, 1};  // over sampled test cuts, |cut_H - cut_G| / cut_G
    long long min_cut_h = 0;
    long long oracle_rounds = 0;
    long long simulated_rounds = 0;

    // the learned sparsifier, available at every node after broadcast
    Graph h;
    nlohmann::json to_json() const;
};

CutReport cut_pipeline(Engine& eng, Rat eps, std::uint64_t seed, int test_cuts = 50);

// Local evaluators over a learned (sub)graph.
long long cut_value(const Graph& g, const std::vector<char>& in_s);
long long stoer_wagner_min_cut(const Graph& g);
long long max_flow_min_cut(const Graph& g, int s, int t);

// Centralized greedy spanner: scan edges by ascending weight, keep an edge iff
// the current spanner's u-v distance exceeds stretch*w. Stretch <= `stretch`
// holds by construction.
Graph greedy_spanner(const Graph& g, long long stretch);

// Exact-oracle audit helper shared by the pipelines and the test suites.
void audit_ratios(ApspReport& rep, const Graph& g);

}  // namespace hybridcast
