#pragma once
#include <optional>
#include <string>
#include <vector>

#include "bbs/instance.hpp"

namespace bbs {

enum class ViolationKind {
    SelfLoop,
    DuplicateEdge,
    BadEdgeCost,
    BadVertexId,
    ZeroBudget,
    BadDemand,
    NegativeCycle,
    InfeasiblePair,
};

struct Violation {
    ViolationKind kind;
    int index = -1;  // edge or pair index when applicable
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const Instance& inst);

// sigma over the union of route edges once, plus demand-weighted delta per route
Rat solution_cost(const Instance& inst, const RouteSolution& sol);

// total length of a route given as edge ids (must form a walk; checked)
Rat path_length(const Instance& inst, const std::vector<int>& edge_ids);
Rat path_sigma(const Instance& inst, const std::vector<int>& edge_ids);
Rat path_delta(const Instance& inst, const std::vector<int>& edge_ids);

bool is_walk(const Instance& inst, int from, int to, const std::vector<int>& edge_ids);

// length <= (1 + theta*sign(Dis)) * Dis
bool is_theta_feasible(const Instance& inst, int pair_index, const std::vector<int>& edge_ids,
                       const Rat& theta);

Rat relaxed_budget(const Rat& dist_budget, const Rat& theta);

ConditionNumbers condition_numbers(const Instance& inst);

// drops repeated-vertex loops; with no negative-length cycles this never
// increases length, sigma or delta
std::vector<int> remove_cycles(const Instance& inst, const std::vector<int>& edge_ids);

// hop-bounded shortest path lengths from src (n-1 relaxation rounds); nullopt = unreachable
std::vector<std::optional<Rat>> shortest_lengths_from(const Instance& inst, int src);

struct SubInstance {
    long long weight = 1;  // power of two
    Instance instance;     // unit demands
    std::vector<int> original_pairs;  // per sub-demand, index into inst.demands
};

struct SplitResult {
    std::vector<SubInstance> parts;
    // merges per-part solutions back into one RouteSolution over the original pairs;
    // when a pair got different routes in different parts, the route from the
    // highest-weight part wins (artifact convention)
    RouteSolution merge(const std::vector<RouteSolution>& part_solutions) const;
};

SplitResult split_demands(const Instance& inst);

}  // namespace bbs
