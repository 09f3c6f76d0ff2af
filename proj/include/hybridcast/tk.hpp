#pragma once

#include <map>
#include <string>
#include <vector>

#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/primitives.hpp"
#include "hybridcast/rational.hpp"

#include "json.hpp"

namespace hybridcast {

// Broadcast quality: T_k(v) is the smallest t >= 1 with t*|B_t(v)| >= k,
// capped at the diameter D; T_k(G) is the max over nodes.
struct TkResult {
    long long k = 0;
    std::map<NodeId, int> per_node;
    int tk_graph = 0;
    std::map<int, long long> histogram;  // t -> #{v : T_k(v) = t}
};

TkResult tk_oracle(const Graph& g, long long k);

// Engine-contracted variant: sums placed tokens to learn k, then grows every
// node's ball one hop per iteration and tallies satisfied nodes globally.
TkResult tk_distributed(Engine& eng, const std::vector<long long>& tokens_per_node,
                        const VirtualTree& tree);

struct ClosedForm {
    std::string family;     // path | cycle | grid
    std::string regime;     // e.g. "Theta(k^{1/3})" or "D"
    long long corner_exact = 0;  // exact integer solution of the corner inequality
};

// Corner-node T_k for paths, cycles, and d-dimensional m-grids (n = m^d),
// plus the paper's asymptotic regime for the given k.
ClosedForm tk_closed_form(const std::string& family, long long n, int d, long long k);

// Exact corner ball size on the d-dimensional grid with side m,
// |B_r| = sum_j (-1)^j C(d,j) C(r - j*m + d, d), valid for all r.
long long grid_corner_ball(int d, long long m, long long r);

struct BoundsReport {
    struct Entry {
        std::string check;
        std::string detail;
        bool pass = true;
    };
    std::vector<Entry> entries;
    bool all_pass() const;
    nlohmann::json to_json() const;
};

// Evaluates sqrt(Dk/3n) <= T_k <= min{D, sqrt(k)} (only when T_k != D) and
// T_{alpha*k} <= 6*sqrt(alpha)*T_k over a grid of alpha values, exactly.
BoundsReport check_bounds(const Graph& g, long long k, const std::vector<long long>& alphas);

}  // namespace hybridcast
