#include "bbs/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bbs::oracle {

namespace {

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::vector<int>> out_edges(const Instance& inst) {
    std::vector<std::vector<int>> adj(inst.n);
    for (int i = 0; i < (int)inst.edges.size(); ++i) adj[inst.edges[i].tail].push_back(i);
    return adj;
}

}  // namespace

std::vector<PathInfo> enumerate_simple_paths(const Instance& inst, int from, int to,
                                             const OracleCaps& caps) {
    if (inst.n > caps.max_n) throw CapExceeded("oracle: n over cap");
    auto adj = out_edges(inst);
    std::vector<PathInfo> out;
    std::vector<bool> on_path(inst.n, false);
    std::vector<int> stack;
    PathInfo cur{{}, 0, 0, 0};

    auto dfs = [&](auto&& self, int v) -> void {
        if (v == to) {
            if (out.size() >= caps.max_paths) throw CapExceeded("oracle: path count over cap");
            out.push_back(cur);
            if (from != to) return;  // only the trivial path ends at the start
        }
        on_path[v] = true;
        for (int id : adj[v]) {
            const Edge& e = inst.edges[id];
            if (on_path[e.head]) continue;
            cur.edges.push_back(id);
            cur.length += e.length;
            cur.sigma += e.sigma;
            cur.delta += e.delta;
            self(self, e.head);
            cur.edges.pop_back();
            cur.length -= e.length;
            cur.sigma -= e.sigma;
            cur.delta -= e.delta;
        }
        on_path[v] = false;
    };
    dfs(dfs, from);
    return out;
}

std::vector<PathInfo> enumerate_feasible_paths(const Instance& inst, int pair, const Rat& theta,
                                               const OracleCaps& caps) {
    const Demand& d = inst.demands.at(pair);
    Rat bound = relaxed_budget(d.dist_budget, theta);
    auto all = enumerate_simple_paths(inst, d.source, d.sink, caps);
    std::vector<PathInfo> out;
    for (auto& p : all)
        if (p.length <= bound) out.push_back(std::move(p));
    return out;
}

OptimumResult brute_force_optimum(const Instance& inst, const Rat& theta, const OracleCaps& caps) {
    OptimumResult res;
    int k = (int)inst.demands.size();
    if (k == 0) {
        res.feasible = true;
        res.cost = 0;
        res.solution.theta = theta;
        return res;
    }
    std::vector<std::vector<PathInfo>> choices(k);
    std::vector<Rat> min_marginal(k, Rat(0));  // per-pair unavoidable delta part
    for (int i = 0; i < k; ++i) {
        choices[i] = enumerate_feasible_paths(inst, i, theta, caps);
        if (choices[i].empty()) return res;  // infeasible
        Rat best;
        bool first = true;
        for (const auto& p : choices[i]) {
            Rat v = p.delta * inst.demands[i].demand;
            if (first || v < best) { best = v; first = false; }
        }
        min_marginal[i] = best;
    }
    std::vector<Rat> tail_lb(k + 1, Rat(0));
    for (int i = k - 1; i >= 0; --i) tail_lb[i] = tail_lb[i + 1] + min_marginal[i];

    std::optional<Rat> best_cost;
    std::vector<int> pick(k, -1), best_pick;
    std::set<int> used;

    auto dfs = [&](auto&& self, int i, Rat cost) -> void {
        if (best_cost && cost + tail_lb[i] >= *best_cost) return;
        if (i == k) {
            best_cost = cost;
            best_pick = pick;
            return;
        }
        for (int c = 0; c < (int)choices[i].size(); ++c) {
            const PathInfo& p = choices[i][c];
            Rat add = p.delta * inst.demands[i].demand;
            std::vector<int> newly;
            for (int id : p.edges)
                if (used.insert(id).second) {
                    newly.push_back(id);
                    add += inst.edges[id].sigma;
                }
            pick[i] = c;
            self(self, i + 1, cost + add);
            for (int id : newly) used.erase(id);
        }
        pick[i] = -1;
    };
    dfs(dfs, 0, Rat(0));

    res.feasible = true;
    res.cost = *best_cost;
    res.solution.theta = theta;
    for (int i = 0; i < k; ++i) res.solution.routes[i] = choices[i][best_pick[i]].edges;
    return res;
}

RcspOracleResult brute_force_rcsp(const rcsp::RcspQuery& q, const OracleCaps& caps) {
    if (q.n > caps.max_n) throw CapExceeded("oracle: n over cap");
    int m = (int)q.budgets.size();
    std::vector<std::vector<int>> adj(q.n);
    for (int i = 0; i < (int)q.edges.size(); ++i) adj[q.edges[i].tail].push_back(i);

    RcspOracleResult res;
    std::vector<bool> on_path(q.n, false);
    std::vector<int> cur;
    std::vector<Rat> w(m, Rat(0));
    Rat cost = 0;
    std::size_t count = 0;

    auto dfs = [&](auto&& self, int v) -> void {
        if (v == q.sink) {
            if (++count > caps.max_paths) throw CapExceeded("oracle: path count over cap");
            bool ok = true;
            for (int i = 0; i < m; ++i)
                if (w[i] > q.budgets[i]) { ok = false; break; }
            if (ok && (!res.feasible || cost < res.cost)) {
                res.feasible = true;
                res.cost = cost;
                res.path = cur;
            }
            if (q.source != q.sink) return;
        }
        on_path[v] = true;
        for (int id : adj[v]) {
            const rcsp::REdge& e = q.edges[id];
            if (on_path[e.head]) continue;
            cur.push_back(id);
            cost += e.cost;
            for (int i = 0; i < m; ++i) w[i] += e.w[i];
            self(self, e.head);
            cur.pop_back();
            cost -= e.cost;
            for (int i = 0; i < m; ++i) w[i] -= e.w[i];
        }
        on_path[v] = false;
    };
    dfs(dfs, q.source);
    return res;
}

JunctionOracleResult brute_force_min_density_junction_tree(const Instance& inst, const Rat& theta,
                                                           const OracleCaps& caps) {
    JunctionOracleResult best;
    int k = (int)inst.demands.size();
    if (k == 0) return best;

    struct Combo {
        std::vector<int> route;  // cycle-removed s~>r~>t
        Rat delta_part;          // delta * demand
    };

    for (int r = 0; r < inst.n; ++r) {
        std::vector<std::vector<Combo>> combos(k);
        for (int i = 0; i < k; ++i) {
            const Demand& d = inst.demands[i];
            Rat bound = relaxed_budget(d.dist_budget, theta);
            auto ins = enumerate_simple_paths(inst, d.source, r, caps);
            auto outs = enumerate_simple_paths(inst, r, d.sink, caps);
            std::set<std::vector<int>> seen;
            for (const auto& a : ins)
                for (const auto& b : outs) {
                    if ((ins.size() * outs.size()) > caps.max_combos)
                        throw CapExceeded("oracle: junction combos over cap");
                    std::vector<int> walk = a.edges;
                    walk.insert(walk.end(), b.edges.begin(), b.edges.end());
                    walk = remove_cycles(inst, walk);
                    if (path_length(inst, walk) > bound) continue;
                    if (!seen.insert(walk).second) continue;
                    combos[i].push_back({walk, path_delta(inst, walk) * d.demand});
                }
        }

        // DFS over pairs: skip or pick a combo; density = union cost / picked count
        std::set<int> used;
        std::vector<std::pair<int, int>> picked, best_picked;
        std::optional<Rat> best_density;

        auto dfs = [&](auto&& self, int i, Rat cost, int cnt) -> void {
            int remaining = k - i;
            if (cnt + remaining > 0 && best_density &&
                cost / (cnt + remaining) >= *best_density)
                return;  // even free completion of all remaining pairs cannot win
            if (i == k) {
                if (cnt == 0) return;
                Rat den = cost / cnt;
                if (!best_density || den < *best_density) {
                    best_density = den;
                    best_picked = picked;
                }
                return;
            }
            self(self, i + 1, cost, cnt);  // skip pair i
            for (int c = 0; c < (int)combos[i].size(); ++c) {
                const Combo& cb = combos[i][c];
                Rat add = cb.delta_part;
                std::vector<int> newly;
                for (int id : cb.route)
                    if (used.insert(id).second) {
                        newly.push_back(id);
                        add += inst.edges[id].sigma;
                    }
                picked.push_back({i, c});
                self(self, i + 1, cost + add, cnt + 1);
                picked.pop_back();
                for (int id : newly) used.erase(id);
            }
        };
        dfs(dfs, 0, Rat(0), 0);

        if (best_density && (!best.found || *best_density < best.density)) {
            best.found = true;
            best.root = r;
            best.density = *best_density;
            best.pairs.clear();
            best.solution = RouteSolution{};
            best.solution.theta = theta;
            for (auto [i, c] : best_picked) {
                best.pairs.push_back(i);
                best.solution.routes[i] = combos[i][c].route;
            }
        }
    }
    return best;
}

}  // namespace bbs::oracle
