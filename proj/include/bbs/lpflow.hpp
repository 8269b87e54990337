#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "bbs/instance.hpp"

namespace bbs::lpflow {

// a priced-in path for one pair: sigma within the investment threshold,
// length within the pair's distance budget
struct PathColumn {
    int pair = -1;  // demand index
    std::vector<int> edges;
    Rat sigma_cost, delta_cost, length;
};

struct LpSolution {
    std::vector<int> pairs;   // demand indices this LP covers
    std::vector<Rat> x;       // per instance edge
    std::vector<Rat> y;       // parallel to pairs
    std::vector<PathColumn> columns;
    std::vector<Rat> f;       // parallel to columns
    Rat objective;            // sum_e sigma(e) * x_e
    Rat l1, l2;               // sigma threshold tau/n^{4/5}, delta threshold n^{4/5} tau/k
};

struct LpInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// restricted-master column generation for the thin-pair flow LP:
//   min sum sigma(e) x_e
//   s.t. sum_p y_p >= kb/4; per-(pair,edge) flow <= x_e; y_p <= sum of pair flow;
//        delta-weighted pair flow <= (l2/2) y_p; everything in [0,1]
// pricing is a 2-resource shortest path (length exact, sigma within the
// threshold); stops when no column beats the reduced-cost tolerance
// zeta * objective / (kb + |E|)
LpSolution solve_thin_lp(const Instance& inst, const std::vector<int>& bad_pairs, const Rat& tau,
                         const Rat& zeta);

// (2x, y, 2f), drop columns with delta > l2, shed the most expensive delta flow
// first until each pair's flow equals y again, retighten x to the flow maxima.
// throws LpInfeasible if a pair with y > 0 lost all its flow.
LpSolution prune(const Instance& inst, const LpSolution& sol);

struct RoundResult {
    std::vector<char> kept;                 // per instance edge
    std::map<int, std::vector<int>> paths;  // demand index -> route
};

// keep each edge w.p. min(n^{4/5} ln n * x_e, 1); per pair, cheapest-delta
// strictly feasible path in the sample, kept iff delta <= l2
RoundResult round(const Instance& inst, const LpSolution& pruned, std::uint64_t seed);

// analytic expectation of the sampled subgraph's sigma cost
Rat expected_sampled_sigma(const Instance& inst, const LpSolution& pruned);

// rational stand-ins for the irrational thresholds
Rat approx_pow45(int n);
Rat approx_ln(int n);

}  // namespace bbs::lpflow
