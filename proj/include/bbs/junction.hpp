#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbs/instance.hpp"

namespace bbs::junction {

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// no terminal pair can be routed through the root under its budget
struct NoCover : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    int h = 2;                          // levels in the reduced trees
    int trials = 24;                    // rounding attempts on the cover LP
    long long max_layer_span = 4096;    // layer index range guard
    std::size_t max_side_nodes = 50000;
    std::size_t max_labels = 500000;    // work budget for the path summaries
    std::size_t max_tree_nodes = 20000; // per reduced tree
    std::size_t max_lp_vars = 4000;     // beyond this the cover LP is skipped
    int root_override = -1;             // >= 0: try only this root
};

// grid step and per-edge integer multipliers; scaled length = mult[e] * delta.
// tmin/tmax bound every layer index a feasible subpath can reach.
struct ScaledGraph {
    Rat theta;
    Rat delta;
    std::vector<long long> mult;
    long long tmin = 0, tmax = 0;
};

// delta = theta * (min |Dis|) / (n-1); multipliers round lengths up
ScaledGraph scale_graph(const Instance& inst, const Rat& theta);

// one direction of the distance-indexed expansion, arcs oriented toward the
// root copy. A node's layer is the grid distance still separating it from the
// root, so every arc drops the layer by its edge multiplier and layer labels
// telescope along any path.
struct SideGraph {
    struct Node {
        int v = -1;           // instance vertex, or the terminal's endpoint
        long long layer = 0;
        int slot = -1;        // >= 0: terminal copy for that pair slot
    };
    struct Arc {
        int tail, head;
        int orig;  // instance edge id; -1 for zero-cost terminal attachments
    };
    std::vector<Node> nodes;
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out;  // arc ids grouped by tail
    int root = -1;
    bool rev = false;  // true: arcs run against the instance edge direction
    std::map<std::pair<int, long long>, int> base;      // (vertex, layer) -> node
    std::map<std::pair<int, long long>, int> terminal;  // (slot, layer) -> node
};

struct LayeredGraph {
    const Instance* inst = nullptr;
    int root = -1;
    std::vector<int> pairs;      // demand indices, indexed by slot
    std::vector<long long> cap;  // per slot: layers (I, J) related iff I + J <= cap
    SideGraph left;   // source side, s ~> r
    SideGraph right;  // sink side, r ~> t, stored reversed (t's copies point at r)
};

LayeredGraph build_layered(const Instance& inst, const ScaledGraph& sg,
                           const std::vector<int>& pairs, int root, const Options& opt = {});

// height-reduction summary: h+1 levels, each a copy of the side graph's
// nodes; one edge template per (from, to, power-of-two budget) stands between
// every pair of consecutive levels and carries the cheapest-delta from ~> to
// side path among those of sigma at most the budget, plus its witness arcs
struct Leveled {
    int h = 1;
    struct EdgeTpl {
        int from, to;
        Rat budget;             // upfront charge: 0 or a power of two >= witness sigma
        Rat dmin;               // delta of the witness path
        std::vector<int> arcs;  // witness side arcs, ordered from -> to
    };
    std::vector<EdgeTpl> edges;
    std::map<int, std::vector<int>> by_to;  // template ids grouped by target node
    int root = -1;
};

Leveled height_reduce(const Instance& inst, const SideGraph& g, int h, const Options& opt = {});

// unique-parent expansion of a leveled side: a node is a chain of edge
// templates ending at the root, so every leaf has exactly one root path.
// Terminal edges fold the chain's delta into an upfront cost eta * demand.
struct ReducedTree {
    struct TNode {
        int parent = -1;  // the node's single arc points at this
        int last = -1;    // side node the chain currently stands on
        int depth = 0;
        Rat sigma;              // arc upfront cost (the template budget)
        Rat delta;              // arc pay-per-use cost (folded into eta below)
        std::vector<int> arcs;  // witness side arcs for this step
    };
    std::vector<TNode> nodes;  // index 0 is the root
    struct TermEdge {
        int slot;
        long long layer;
        int leaf;  // depth-h node whose chain ends on this terminal
        Rat eta;   // delta sum along the leaf's root path
        Rat cost;  // eta * demand
    };
    std::vector<TermEdge> terms;
};

struct ReducedPair {
    ReducedTree up;    // from the left side
    ReducedTree down;  // from the (reversed) right side
};

ReducedPair build_tuple_trees(const Instance& inst, const LayeredGraph& lg, const Leveled& up,
                              const Leveled& down, const Options& opt = {});

// density cover view: per pair slot, the tree terminals on each side; a pair
// is resolved by buying one full root chain + terminal edge per side whose
// layer labels satisfy the relation
struct LabelCover {
    const ReducedPair* trees = nullptr;
    const LayeredGraph* lg = nullptr;
    std::vector<std::vector<int>> sources;  // per slot, indices into trees->up.terms
    std::vector<std::vector<int>> sinks;    // per slot, indices into trees->down.terms
};

LabelCover to_label_cover(const LayeredGraph& lg, const ReducedPair& trees);

// the relation itself: (I + J) within the theta-relaxed budget
bool related(const LayeredGraph& lg, int slot, long long i, long long j);

struct CoverResult {
    // per resolved slot: (index into up.terms, index into down.terms)
    std::map<int, std::pair<int, int>> choice;
    Rat tree_cost;  // bought arc weights, shared arcs counted once
    Rat density;    // tree_cost / resolved count
};

// LP relaxation + randomized tree rounding, with a deterministic greedy
// baseline; returns the best density seen. Throws NoCover when no slot has a
// related terminal combination.
CoverResult solve_label_cover(const LabelCover& lc, std::uint64_t seed, const Options& opt = {});

// back out through the reductions: chains -> witness side arcs -> instance
// edges; cycle-removed s ~> r ~> t routes, never costlier than the tree
// solution that produced them
std::map<int, std::vector<int>> extract_paths(const LayeredGraph& lg, const ReducedPair& trees,
                                              const CoverResult& cover);

struct JunctionResult {
    int root = -1;
    std::map<int, std::vector<int>> routes;  // demand index -> route
    Rat cost;     // sigma over the route union + demand-weighted delta
    Rat density;  // cost / number of routes
};

// full pipeline per candidate root, minimum true-cost density across roots;
// roots whose construction overruns a cap are skipped
JunctionResult min_density_junction_tree(const Instance& inst, const std::vector<int>& pairs,
                                         const Rat& theta, std::uint64_t seed,
                                         const Options& opt = {});

}  // namespace bbs::junction
