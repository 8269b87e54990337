#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"

using namespace bbs;

namespace {

Instance diamond() {
    // 0 -> 1 -> 3, 0 -> 2 -> 3, 0 -> 3
    Instance inst;
    inst.n = 4;
    inst.edges = {
        {0, 1, 1, 2, 1},  // e0
        {1, 3, 1, 2, 1},  // e1
        {0, 2, 1, 5, 0},  // e2
        {2, 3, 1, 5, 0},  // e3
        {0, 3, 3, 1, 4},  // e4
    };
    inst.demands = {{0, 3, 1, 2}, {0, 3, 2, 3}};
    return inst;
}

bool has_kind(const ValidationReport& r, ViolationKind k) {
    for (const auto& v : r.violations)
        if (v.kind == k) return true;
    return false;
}

}  // namespace

TEST_CASE("validate accepts a clean instance") {
    CHECK(validate_instance(diamond()).ok());
}

TEST_CASE("validate flags each structural violation") {
    Instance inst = diamond();
    inst.edges.push_back({1, 1, 0, 0, 0});
    CHECK(has_kind(validate_instance(inst), ViolationKind::SelfLoop));

    inst = diamond();
    inst.edges.push_back({0, 1, 7, 0, 0});
    CHECK(has_kind(validate_instance(inst), ViolationKind::DuplicateEdge));

    inst = diamond();
    inst.edges[0].sigma = -1;
    CHECK(has_kind(validate_instance(inst), ViolationKind::BadEdgeCost));
    inst = diamond();
    inst.edges[0].delta = Rat(-1, 2);
    CHECK(has_kind(validate_instance(inst), ViolationKind::BadEdgeCost));

    inst = diamond();
    inst.edges[0].head = 9;
    CHECK(has_kind(validate_instance(inst), ViolationKind::BadVertexId));
    inst = diamond();
    inst.demands[0].sink = -1;
    CHECK(has_kind(validate_instance(inst), ViolationKind::BadVertexId));

    inst = diamond();
    inst.demands[0].dist_budget = 0;
    CHECK(has_kind(validate_instance(inst), ViolationKind::ZeroBudget));

    inst = diamond();
    inst.demands[0].demand = 0;
    CHECK(has_kind(validate_instance(inst), ViolationKind::BadDemand));
    inst = diamond();
    inst.demands[0].source = inst.demands[0].sink;
    CHECK(has_kind(validate_instance(inst), ViolationKind::BadDemand));

    inst = diamond();
    inst.edges.push_back({3, 0, -4, 0, 0});  // closes a cycle of length -1
    CHECK(has_kind(validate_instance(inst), ViolationKind::NegativeCycle));

    inst = diamond();
    inst.demands.push_back({3, 0, 1, 5});  // 3 has no outgoing edge
    CHECK(has_kind(validate_instance(inst), ViolationKind::InfeasiblePair));
    inst = diamond();
    inst.demands[0].dist_budget = 1;  // shortest 0->3 is 2
    CHECK(has_kind(validate_instance(inst), ViolationKind::InfeasiblePair));
}

TEST_CASE("solution cost counts sigma once over the union") {
    Instance inst = diamond();
    RouteSolution sol;
    sol.theta = 1;
    sol.routes[0] = {0, 1};  // pair 0 via vertex 1, delta 2, demand 1
    sol.routes[1] = {0, 1};  // pair 1 same route, delta 2, demand 2
    // sigma union {e0,e1} = 4; delta part 2*1 + 2*2 = 6
    CHECK(solution_cost(inst, sol) == Rat(10));
    sol.routes[1] = {4};  // direct edge, sigma 1, delta 4 * demand 2
    CHECK(solution_cost(inst, sol) == Rat(4 + 2 + 1 + 8));
}

TEST_CASE("path accessors and walk check") {
    Instance inst = diamond();
    CHECK(path_length(inst, {0, 1}) == Rat(2));
    CHECK(path_sigma(inst, {2, 3}) == Rat(10));
    CHECK(path_delta(inst, {0, 1}) == Rat(2));
    CHECK(is_walk(inst, 0, 3, {0, 1}));
    CHECK_FALSE(is_walk(inst, 0, 3, {0, 3}));  // e3 starts at 2, not 1
    CHECK_FALSE(is_walk(inst, 1, 3, {0, 1}));
    CHECK(is_walk(inst, 2, 2, {}));
    CHECK_THROWS_AS(path_length(inst, std::vector<int>{0, 3}), std::invalid_argument);
}

TEST_CASE("relaxed budget flips the slack with the budget sign") {
    Rat theta(1, 4);
    CHECK(relaxed_budget(Rat(8), theta) == Rat(10));
    CHECK(relaxed_budget(Rat(-8), theta) == Rat(-6));  // (1 - 1/4) * -8
}

TEST_CASE("theta feasibility checks the route against the relaxed budget") {
    Instance inst = diamond();
    CHECK(is_theta_feasible(inst, 0, {0, 1}, Rat(0)));          // length 2 <= 2
    CHECK_FALSE(is_theta_feasible(inst, 0, {4}, Rat(0)));       // 3 > 2
    CHECK(is_theta_feasible(inst, 0, {4}, Rat(1, 2)));          // 3 <= 3
    CHECK_THROWS_AS(is_theta_feasible(inst, 0, {1, 0}, Rat(0)), std::invalid_argument);
}

TEST_CASE("negative budgets stay satisfiable only with negative-length routes") {
    Instance inst;
    inst.n = 3;
    inst.edges = {{0, 1, -5, 1, 1}, {1, 2, 2, 1, 1}};
    inst.demands = {{0, 2, 1, -3}};
    CHECK(validate_instance(inst).ok());
    CHECK(is_theta_feasible(inst, 0, {0, 1}, Rat(0)));  // -3 <= -3
    // relaxation loosens toward zero: (1 - 1/3) * -3 = -2
    CHECK(is_theta_feasible(inst, 0, {0, 1}, Rat(1, 3)));
}

TEST_CASE("condition numbers") {
    Instance inst;
    inst.n = 3;
    inst.edges = {{0, 1, -5, 1, 1}, {1, 2, 2, 1, 1}, {0, 2, 1, 1, 1}};
    inst.demands = {{0, 2, 1, -3}, {0, 2, 1, 12}};
    auto cn = condition_numbers(inst);
    CHECK(cn.eta == Rat(5, 3));  // |-5| / min(|-3|, |12|)
    CHECK(cn.xi == Rat(4));      // 12 / 3
    inst.edges[0].length = 5;
    CHECK(condition_numbers(inst).eta == Rat(0));
}

TEST_CASE("remove_cycles excises loops and never raises any metric") {
    Instance inst;
    inst.n = 4;
    inst.edges = {{0, 1, 1, 1, 1}, {1, 2, 1, 1, 1}, {2, 1, 1, 1, 1}, {1, 3, 1, 1, 1}};
    std::vector<int> walk = {0, 1, 2, 3};  // 0-1-2-1-3
    auto simple = remove_cycles(inst, walk);
    CHECK(simple == std::vector<int>{0, 3});
    CHECK(is_walk(inst, 0, 3, simple));
}

TEST_CASE("shortest lengths handle negative edges") {
    Instance inst;
    inst.n = 4;
    inst.edges = {{0, 1, 4, 0, 0}, {0, 2, 1, 0, 0}, {2, 1, -3, 0, 0}, {1, 3, 1, 0, 0}};
    auto d = shortest_lengths_from(inst, 0);
    REQUIRE(d[1]);
    CHECK(*d[1] == Rat(-2));
    CHECK(*d[3] == Rat(-1));
    CHECK(*d[0] == Rat(0));
    Instance iso;
    iso.n = 2;
    CHECK_FALSE(shortest_lengths_from(iso, 0)[1]);
}

TEST_CASE("demand splitting produces unit power-of-two parts that recompose") {
    Instance inst = diamond();
    inst.demands[0].demand = 5;  // 1 + 4
    inst.demands[1].demand = 2;
    auto split = split_demands(inst);
    long long total0 = 0, total1 = 0;
    for (const auto& part : split.parts) {
        CHECK((part.weight & (part.weight - 1)) == 0);
        for (std::size_t j = 0; j < part.instance.demands.size(); ++j) {
            const Demand& d = part.instance.demands[j];
            CHECK(d.demand == 1);
            int orig = part.original_pairs[j];
            CHECK(d.source == inst.demands[orig].source);
            CHECK(d.sink == inst.demands[orig].sink);
            CHECK(d.dist_budget == inst.demands[orig].dist_budget);
            if (orig == 0) total0 += part.weight;
            else total1 += part.weight;
        }
    }
    CHECK(total0 == 5);
    CHECK(total1 == 2);

    // merge keeps the highest-weight part's route on conflict
    std::vector<RouteSolution> sols(split.parts.size());
    for (std::size_t p = 0; p < split.parts.size(); ++p) {
        sols[p].theta = 0;
        for (std::size_t j = 0; j < split.parts[p].instance.demands.size(); ++j) {
            int orig = split.parts[p].original_pairs[j];
            sols[p].routes[(int)j] = (split.parts[p].weight >= 4 && orig == 0)
                                         ? std::vector<int>{4}
                                         : std::vector<int>{0, 1};
        }
    }
    RouteSolution merged = split.merge(sols);
    CHECK(merged.routes.at(0) == std::vector<int>{4});
    CHECK(merged.routes.at(1) == std::vector<int>{0, 1});
}

TEST_CASE("generators emit valid instances deterministically") {
    for (const char* kind : {"random", "negative", "single_source"}) {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto a = gen::generate(kind, {}, seed);
            auto b = gen::generate(kind, {}, seed);
            CHECK(validate_instance(a.inst).ok());
            CHECK(a.inst.edges.size() == b.inst.edges.size());
            for (std::size_t i = 0; i < a.inst.edges.size(); ++i) {
                CHECK(a.inst.edges[i].tail == b.inst.edges[i].tail);
                CHECK(a.inst.edges[i].length == b.inst.edges[i].length);
            }
            CHECK(a.inst.demands.size() == b.inst.demands.size());
        }
    }
    gen::GenParams hp;
    hp.n = 12;
    hp.k = 4;
    auto h = gen::generate("hub", hp, 7);
    CHECK(validate_instance(h.inst).ok());
    gen::GenParams bp;
    bp.n = 12;
    bp.k = 3;
    auto bb = gen::generate("backbone", bp, 7);
    CHECK(validate_instance(bb.inst).ok());
    auto neg = gen::generate("negative", {}, 5);
    bool any_neg = false;
    for (const Edge& e : neg.inst.edges) any_neg |= e.length < 0;
    CHECK(any_neg);
    auto ss = gen::generate("single_source", {}, 5);
    for (const Demand& d : ss.inst.demands) CHECK(d.source == 0);
}

TEST_CASE("random walks only shrink under cycle removal") {
    auto g = gen::generate("random", {}, 3);
    const Instance& inst = g.inst;
    auto rng = gen::substream(3, "walks");
    std::vector<std::vector<int>> adj(inst.n);
    for (int i = 0; i < (int)inst.edges.size(); ++i) adj[inst.edges[i].tail].push_back(i);
    for (int trial = 0; trial < 200; ++trial) {
        int v = (int)(rng() % inst.n);
        std::vector<int> walk;
        for (int step = 0; step < 12 && !adj[v].empty(); ++step) {
            int id = adj[v][rng() % adj[v].size()];
            walk.push_back(id);
            v = inst.edges[id].head;
        }
        if (walk.empty()) continue;
        int from = inst.edges[walk.front()].tail;
        auto simple = remove_cycles(inst, walk);
        CHECK(is_walk(inst, from, v, simple));
        std::set<int> seen;
        int at = from;
        seen.insert(at);
        for (int id : simple) {
            at = inst.edges[id].head;
            CHECK(seen.insert(at).second);  // simple: no vertex repeats
        }
        CHECK(path_length(inst, simple) <= path_length(inst, walk));
        CHECK(path_sigma(inst, simple) <= path_sigma(inst, walk));
        CHECK(path_delta(inst, simple) <= path_delta(inst, walk));
    }
}
