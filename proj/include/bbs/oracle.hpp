#pragma once
#include <optional>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/rcsp.hpp"

namespace bbs::oracle {

struct PathInfo {
    std::vector<int> edges;
    Rat length, sigma, delta;
};

struct OracleCaps {
    int max_n = 10;
    std::size_t max_paths = 50000;       // per (from,to) enumeration
    std::size_t max_combos = 200000;     // per (root,pair) junction route combos
};

// all simple from->to paths (DFS with on-path vertex marking)
std::vector<PathInfo> enumerate_simple_paths(const Instance& inst, int from, int to,
                                             const OracleCaps& caps = {});

// all simple source->sink paths with length <= (1+theta*sign(Dis))*Dis
std::vector<PathInfo> enumerate_feasible_paths(const Instance& inst, int pair, const Rat& theta,
                                               const OracleCaps& caps = {});

struct OptimumResult {
    bool feasible = false;
    Rat cost;
    RouteSolution solution;
};

// exhaustive product search over one feasible path per pair, minimizing the
// two-metric objective, with branch-and-bound on the shared-sigma union
OptimumResult brute_force_optimum(const Instance& inst, const Rat& theta,
                                  const OracleCaps& caps = {});

struct RcspOracleResult {
    bool feasible = false;
    Rat cost;
    std::vector<int> path;
};

// min cost over all simple paths meeting every budget strictly
RcspOracleResult brute_force_rcsp(const rcsp::RcspQuery& q, const OracleCaps& caps = {});

struct JunctionOracleResult {
    bool found = false;
    int root = -1;
    Rat density;
    std::vector<int> pairs;  // the subset attaining the minimum
    RouteSolution solution;  // cycle-removed s~>r~>t routes
};

// min over (root, nonempty pair subset, per-pair s~>r / r~>t path choices) of
// union cost / subset size
JunctionOracleResult brute_force_min_density_junction_tree(const Instance& inst, const Rat& theta,
                                                           const OracleCaps& caps = {});

}  // namespace bbs::oracle
