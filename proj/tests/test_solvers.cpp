#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"
#include "bbs/lpflow.hpp"
#include "bbs/oracle.hpp"
#include "bbs/solvers.hpp"

using namespace bbs;
using namespace bbs::solvers;

namespace {

// two source terminals, two sink terminals, a thick band of middle vertices:
// every pair has a 2-hop route through each of the 8 hubs
Instance hub_band() {
    Instance inst;
    inst.n = 12;
    for (int h = 4; h < 12; ++h) {
        inst.edges.push_back({0, h, 1, 1, 1});
        inst.edges.push_back({1, h, 1, 1, 1});
        inst.edges.push_back({h, 2, 1, 1, 1});
        inst.edges.push_back({h, 3, 1, 1, 1});
    }
    inst.demands = {{0, 2, 1, 2}, {0, 3, 1, 2}, {1, 2, 1, 2}, {1, 3, 1, 2}};
    return inst;
}

// two vertex-disjoint shared-sink stars; any single root can serve only one
// cluster, so the greedy needs exactly two rounds
Instance two_clusters() {
    Instance inst;
    inst.n = 8;
    inst.edges = {{0, 2, 1, 1, 0}, {1, 2, 1, 1, 0}, {2, 3, 1, 1, 0},
                  {4, 6, 1, 1, 0}, {5, 6, 1, 1, 0}, {6, 7, 1, 1, 0}};
    inst.demands = {{0, 3, 1, 2}, {1, 3, 1, 2}, {4, 7, 1, 2}, {5, 7, 1, 2}};
    return inst;
}

void check_report(const Instance& inst, const SolveOutput& out) {
    CHECK(out.solution.routes.size() == inst.demands.size());
    Rat sum = 0;
    int resolved = 0;
    for (const auto& st : out.report.stages) {
        CHECK(st.resolved > 0);
        CHECK(st.density == Rat(st.cost / (long long)st.resolved));
        sum += st.cost;
        resolved += st.resolved;
    }
    CHECK(resolved == (int)inst.demands.size());
    CHECK(sum == solution_cost(inst, out.solution));
    for (const auto& [p, r] : out.solution.routes)
        CHECK(is_theta_feasible(inst, p, r, out.solution.theta));
}

}  // namespace

TEST_CASE("starting guess equals the worst single-pair optimum") {
    Instance inst;
    inst.n = 4;
    // pair 0: only route 0->1->2, cost 2+1 sigma... sigma 2, delta 1 -> 3
    inst.edges = {{0, 1, 1, 2, 1}, {1, 2, 1, 0, 0}, {0, 3, 1, 5, 2}};
    inst.demands = {{0, 2, 1, 2}, {0, 3, 1, 1}};
    CHECK(tau_lower_bound(inst) == 7);  // pair 1 dominates: 5 + 2
    inst.demands[1].demand = 3;
    CHECK(tau_lower_bound(inst) == 11);  // 5 + 3*2
    inst.demands[1].dist_budget = Rat(1, 2);
    CHECK_THROWS_AS(tau_lower_bound(inst), std::invalid_argument);
    inst.demands[1].dist_budget = 1;
    inst.edges[0].length = Rat(1, 2);
    CHECK_THROWS_AS(tau_lower_bound(inst), std::invalid_argument);
}

TEST_CASE("doubling search stops at the first workable guess") {
    int calls = 0;
    auto attempt = [&](const Rat& tau) -> std::optional<SolveOutput> {
        ++calls;
        if (tau < 10) return std::nullopt;
        SolveOutput out;
        out.report.tau = tau;
        return out;
    };
    auto [tau, out] = guess_tau(Rat(1), attempt, 24);
    CHECK(tau == 16);
    CHECK(calls == 5);  // 1, 2, 4, 8, 16
    CHECK(out.report.tau == 16);
    CHECK_THROWS_AS(guess_tau(Rat(1), attempt, 2), std::runtime_error);
    CHECK_THROWS_AS(guess_tau(Rat(0), attempt, 2), std::invalid_argument);
}

TEST_CASE("sampling stage resolves every pair of a thick band") {
    Instance inst = hub_band();
    int n = inst.n;
    Rat tau = 8;
    Rat p45 = lpflow::approx_pow45(n);
    Rat l1 = tau / p45;
    Rat l2 = p45 * tau / (long long)inst.demands.size();
    REQUIRE(l1 >= 1);  // a single hop fits under the upfront threshold

    int full = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SolverConfig cfg;
        cfg.seed = seed;
        auto routes = resolve_thick(inst, tau, cfg);
        if (routes.size() == inst.demands.size()) ++full;
        for (const auto& [p, r] : routes) {
            CHECK(is_theta_feasible(inst, p, r, Rat(0)));
            CHECK(path_sigma(inst, r) <= 2 * l1);
            CHECK(path_delta(inst, r) <= 2 * (1 + cfg.zeta) * l2);
            // both halves meet at a middle vertex
            REQUIRE(r.size() == 2);
            int mid = inst.edges[r[0]].head;
            CHECK(mid >= 4);
            CHECK(inst.edges[r[1]].tail == mid);
        }
    }
    CHECK(full >= 95);
}

TEST_CASE("sampling stage leaves unservable pairs alone") {
    Instance inst = hub_band();
    inst.demands.push_back({0, 3, 1, 1});  // every 2-hop route is too long
    SolverConfig cfg;
    auto routes = resolve_thick(inst, 8, cfg);
    CHECK(routes.count(4) == 0);
    CHECK(routes.size() >= 4);

    // a tiny guess prices every half out
    CHECK(resolve_thick(inst, Rat(1, 100), cfg).empty());
}

TEST_CASE("greedy density loop settles disjoint clusters one tree at a time") {
    Instance inst = two_clusters();
    SolverConfig cfg;
    auto out = solve_k(inst, cfg);
    check_report(inst, out);
    REQUIRE(out.report.stages.size() == 2);
    CHECK(out.report.stages[0].resolved == 2);
    CHECK(out.report.stages[1].resolved == 2);
    CHECK(out.report.stages[0].cost == 3);
    CHECK(out.report.stages[1].cost == 3);
    CHECK(solution_cost(inst, out.solution) == 6);
}

TEST_CASE("greedy density loop against the exhaustive optimum") {
    gen::GenParams gp;
    gp.n = 7;
    gp.k = 3;
    gp.len_hi = 2;
    gp.cost_hi = 3;
    gp.budget_slack = 1;
    int compared = 0;
    for (std::uint64_t seed : {1, 2, 3, 4, 5, 6, 7, 8}) {
        Instance inst = gen::generate("random", gp, seed).inst;
        if (!validate_instance(inst).ok()) continue;
        auto opt = oracle::brute_force_optimum(inst, Rat(1, 2));
        if (!opt.feasible) continue;
        SolverConfig cfg;
        cfg.seed = seed;
        auto out = solve_k(inst, cfg);
        check_report(inst, out);
        Rat cost = solution_cost(inst, out.solution);
        CHECK(cost >= opt.cost);
        CHECK(cost <= 8 * opt.cost + 8);
        ++compared;
    }
    CHECK(compared >= 5);
}

TEST_CASE("pinned-root solver recovers a planted out-tree") {
    Instance inst;
    inst.n = 5;
    inst.edges = {{0, 1, 1, 1, 0}, {0, 2, 1, 1, 0}, {1, 3, 1, 1, 0}, {1, 4, 1, 1, 0}};
    inst.demands = {{0, 3, 1, 2}, {0, 4, 1, 2}, {0, 2, 1, 1}};
    auto out = solve_single_source(inst, SolverConfig{});
    check_report(inst, out);
    // the lone short pair is a density-1 tree on its own, the star follows
    REQUIRE(out.report.stages.size() == 2);
    CHECK(out.report.stages[0].resolved == 1);
    CHECK(out.report.stages[0].cost == 1);
    CHECK(out.report.stages[1].resolved == 2);
    CHECK(solution_cost(inst, out.solution) == 4);
    auto opt = oracle::brute_force_optimum(inst, Rat(1, 2));
    CHECK(solution_cost(inst, out.solution) == opt.cost);
    // the free-root greedy finds the same tree here
    auto free_root = solve_k(inst, SolverConfig{});
    CHECK(solution_cost(inst, free_root.solution) == 4);

    inst.demands[0].source = 1;
    CHECK_THROWS_AS(solve_single_source(inst, SolverConfig{}), std::invalid_argument);
}

TEST_CASE("pinned-root solver picks the cheapest feasible route for one pair") {
    Instance inst;
    inst.n = 4;
    inst.edges = {{0, 1, 1, 1, 0}, {1, 3, 1, 1, 0}, {0, 2, 1, 4, 0}, {2, 3, 1, 4, 0}};
    inst.demands = {{0, 3, 1, 2}};
    auto out = solve_single_source(inst, SolverConfig{});
    check_report(inst, out);
    CHECK(solution_cost(inst, out.solution) == 2);
    CHECK(out.solution.routes.at(0) == std::vector<int>{0, 1});
}

TEST_CASE("full driver on the thick band") {
    Instance inst = hub_band();
    SolverConfig cfg;
    auto out = solve_n45(inst, cfg);
    check_report(inst, out);
    CHECK(out.solution.theta == 0);
    CHECK(out.report.tau == tau_lower_bound(inst));  // the first guess already works

    // a roomier fixed guess lets the sampling stage clear the whole band
    cfg.tau = Rat(16);
    out = solve_n45(inst, cfg);
    check_report(inst, out);
    CHECK(out.report.tau == 16);
    REQUIRE(out.report.stages.size() == 1);
    CHECK(out.report.stages[0].stage == "thick");
    CHECK(out.report.stages[0].resolved == 4);
}

TEST_CASE("full driver exercises the density-vs-rounding race when forced") {
    Instance inst = two_clusters();
    SolverConfig cfg;
    cfg.kb_threshold = 0;  // never take the few-pairs shortcut
    cfg.tau = Rat(32);
    auto out = solve_n45(inst, cfg);
    check_report(inst, out);
    CHECK(out.solution.theta == 0);
    CHECK(out.report.tau == 32);
    for (const auto& st : out.report.stages) {
        CHECK((st.stage == "thick" || st.stage == "junction" || st.stage == "lp-round"));
        CHECK(st.stage != "fallback-k");
    }
}

TEST_CASE("full driver splits and merges non-unit demands") {
    Instance inst = two_clusters();
    inst.demands[0].demand = 2;
    inst.demands[2].demand = 3;
    // give the weighted pairs some pay-per-use so demand actually matters
    inst.edges[2].delta = 1;
    inst.edges[5].delta = 1;
    SolverConfig cfg;
    auto out = solve_n45(inst, cfg);
    CHECK(out.solution.theta == 0);
    CHECK(out.solution.routes.size() == inst.demands.size());
    for (const auto& [p, r] : out.solution.routes) CHECK(is_theta_feasible(inst, p, r, Rat(0)));
    auto opt = oracle::brute_force_optimum(inst, Rat(0));
    REQUIRE(opt.feasible);
    Rat cost = solution_cost(inst, out.solution);
    CHECK(cost >= opt.cost);
    CHECK(cost <= 8 * opt.cost + 8);
}

TEST_CASE("full driver fuzz: strict routes, bounded cost, consistent report") {
    gen::GenParams gp;
    gp.n = 7;
    gp.k = 3;
    gp.len_hi = 1;
    gp.cost_hi = 3;
    gp.budget_slack = 1;
    int compared = 0;
    for (std::uint64_t seed : {1, 2, 3, 5, 8}) {
        Instance inst = gen::generate("random", gp, seed).inst;
        if (!validate_instance(inst).ok()) continue;
        auto opt = oracle::brute_force_optimum(inst, Rat(0));
        if (!opt.feasible) continue;
        SolverConfig cfg;
        cfg.seed = seed;
        cfg.jopt.max_layer_span = 50000;
        cfg.jopt.max_labels = 2000000;
        auto out = solve_n45(inst, cfg);
        check_report(inst, out);
        CHECK(out.solution.theta == 0);
        Rat cost = solution_cost(inst, out.solution);
        CHECK(cost >= opt.cost);
        CHECK(cost <= 8 * opt.cost + 8);
        ++compared;
    }
    CHECK(compared >= 3);
}

TEST_CASE("full driver rejects fractional lengths") {
    Instance inst = two_clusters();
    inst.edges[0].length = Rat(1, 2);
    CHECK_THROWS_AS(solve_n45(inst, SolverConfig{}), std::invalid_argument);
}
