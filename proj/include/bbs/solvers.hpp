#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bbs/instance.hpp"
#include "bbs/junction.hpp"

namespace bbs::solvers {

struct SolverConfig {
    Rat theta = Rat(1, 2);        // relaxation used by the density solvers
    Rat epsilon = Rat(1, 2);      // reduced-tree height = max(2, ceil(1/epsilon))
    Rat zeta = Rat(1);            // pay-per-use slack in the sampling stage and LP tolerance
    std::uint64_t seed = 1;
    std::optional<Rat> tau;       // fixed budget guess; unset = doubling search
    long long kb_threshold = -1;  // remaining-pair cutoff for the fallback; -1 = 4 n^{6/5}
    int max_tau_doublings = 24;
    int max_loop_iters = 64;
    junction::Options jopt;       // size caps for the per-root pipelines
};

struct StageRecord {
    std::string stage;  // thick | junction | lp-round | fallback-k
    int resolved = 0;
    Rat cost;     // objective increment committed by this stage
    Rat density;  // cost / resolved
};

struct StageReport {
    Rat tau;  // accepted guess (0 when no guess was involved)
    std::vector<StageRecord> stages;
};

struct SolveOutput {
    RouteSolution solution;
    StageReport report;
};

// max over pairs of the cheapest strictly feasible single-pair cost; a lower
// bound on the optimum, used to start the doubling search. Integral lengths.
Rat tau_lower_bound(const Instance& inst);

// doubling search: tau = tau0 * 2^i until the attempt reports success
std::pair<Rat, SolveOutput> guess_tau(
    const Rat& tau0, const std::function<std::optional<SolveOutput>(const Rat&)>& attempt,
    int max_doublings = 24);

// sampling stage: draw ceil(3 n^{3/5} ln n) vertices with replacement; for
// every (terminal, sample) find the shortest path with upfront cost within
// tau/n^{4/5} and pay-per-use within (1+zeta) n^{4/5} tau/k, then join halves
// whose lengths fit the pair budget. Unresolved pairs are left for the caller.
std::map<int, std::vector<int>> resolve_thick(const Instance& inst, const Rat& tau,
                                              const SolverConfig& cfg);

// greedy density loop: repeatedly commit the minimum-density junction tree
// over the remaining pairs until all are resolved
SolveOutput solve_k(const Instance& inst, const SolverConfig& cfg);

// greedy loop with the root pinned to the shared source
SolveOutput solve_single_source(const Instance& inst, const SolverConfig& cfg);

// unit-demand driver: sampling stage, then per iteration either the fallback
// greedy (few pairs left) or the better-density of the junction route and the
// LP rounding route. Non-unit demands are split by powers of two and merged.
// Every returned route is strictly feasible; integral lengths required.
SolveOutput solve_n45(const Instance& inst, const SolverConfig& cfg);

}  // namespace bbs::solvers
