// acceptance gate: one line per criterion, nonzero exit if any fails.
// tolerances are engineering budgets pinned here, not tuned per run.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"
#include "bbs/junction.hpp"
#include "bbs/lpflow.hpp"
#include "bbs/oracle.hpp"
#include "bbs/rcsp.hpp"
#include "bbs/solvers.hpp"

using namespace bbs;
using Rng = std::mt19937_64;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << idx << ": " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

int rnd(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// ceil(log2(k+1)) + 1, the per-k slack unit shared by the ratio budgets
int logk_budget(int k) {
    int b = 0;
    while ((1 << b) < k + 1) ++b;
    return b + 1;
}

// vertex potentials keep every cycle nonnegative per dimension while letting
// individual weights (and path totals) go negative
rcsp::RcspQuery rand_query(Rng& rng, int n, int m, bool rational) {
    rcsp::RcspQuery q;
    q.n = n;
    q.source = 0;
    q.sink = n - 1;
    std::vector<std::vector<int>> pot(m, std::vector<int>(n));
    std::vector<int> den(m);  // one denominator per dim keeps cycle sums nonnegative
    for (int i = 0; i < m; ++i) {
        den[i] = rnd(rng, 1, 3);
        for (int v = 0; v < n; ++v) pot[i][v] = rnd(rng, 0, 2);
    }
    int target_edges = 2 * n + rnd(rng, 0, n);
    std::set<std::pair<int, int>> seen;
    for (int tries = 0; (int)q.edges.size() < target_edges && tries < 20 * target_edges; ++tries) {
        int u = rnd(rng, 0, n - 1), v = rnd(rng, 0, n - 1);
        if (u == v || !seen.insert({u, v}).second) continue;
        rcsp::REdge e;
        e.tail = u;
        e.head = v;
        e.cost = rnd(rng, 0, 6);
        for (int i = 0; i < m; ++i) {
            int w = rnd(rng, 0, 3) + pot[i][u] - pot[i][v];  // in [-2, 5]
            e.w.push_back(rational ? Rat(w, den[i]) : Rat(w));
        }
        q.edges.push_back(e);
    }
    for (int i = 0; i < m; ++i) {
        if (rational) {
            q.budgets.push_back(rnd(rng, 1, 2 * n));
            q.tolerances.push_back(Rat(1, 10));
        } else {
            int b = rnd(rng, -3, 3 * n);
            q.budgets.push_back(b == 0 ? 1 : b);
        }
    }
    return q;
}

bool oracle_capped(const std::exception& e) {
    return std::string(e.what()).find("cap") != std::string::npos;
}

Instance hub_band() {
    Instance inst;
    inst.n = 10;
    for (int h = 4; h < 10; ++h) {
        inst.edges.push_back({0, h, 1, 1, 1});
        inst.edges.push_back({1, h, 1, 1, 1});
        inst.edges.push_back({h, 2, 1, 1, 1});
        inst.edges.push_back({h, 3, 1, 1, 1});
    }
    inst.demands = {{0, 2, 1, 2}, {0, 3, 1, 2}, {1, 2, 1, 2}, {1, 3, 1, 2}};
    return inst;
}

Instance two_clusters() {
    Instance inst;
    inst.n = 8;
    inst.edges = {{0, 2, 1, 1, 0}, {1, 2, 1, 1, 0}, {2, 3, 1, 1, 0},
                  {4, 6, 1, 1, 0}, {5, 6, 1, 1, 0}, {6, 7, 1, 1, 0}};
    inst.demands = {{0, 3, 1, 2}, {1, 3, 1, 2}, {4, 7, 1, 2}, {5, 7, 1, 2}};
    return inst;
}

// --- criterion 1: exact-integer engine vs exhaustive search -----------------

void c1() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    int checked = 0, agree = 0;
    while (checked < 500) {
        auto q = rand_query(rng, rnd(rng, 4, 8), 1 + rnd(rng, 0, 1), false);
        if (q.edges.empty()) continue;
        ++checked;
        auto got = rcsp::solve_exact_integer(q);
        auto want = oracle::brute_force_rcsp(q);
        bool ok = want.feasible ? (got.status == rcsp::RcspStatus::Ok && got.cost == want.cost)
                                : got.status == rcsp::RcspStatus::Infeasible;
        if (ok) ++agree;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << agree << "/" << checked << " agree, " << secs << "s";
    report(1, "exact-integer engine matches exhaustive search", agree == checked && secs < 120,
           d.str());
}

// --- criterion 2: approximate engine stays under the strict optimum ---------

void c2() {
    Rng rng(202);
    int checked = 0, good = 0;
    long long sandwiched = 0, sandwich_bad = 0;
    while (checked < 500) {
        auto q = rand_query(rng, rnd(rng, 4, 7), 1 + rnd(rng, 0, 1), true);
        if (q.edges.empty()) continue;
        ++checked;
        int m = (int)q.budgets.size();
        auto got = rcsp::solve(q);
        auto want = oracle::brute_force_rcsp(q);
        bool ok = true;
        if (want.feasible) {
            ok = got.status == rcsp::RcspStatus::Ok && got.cost <= want.cost;
        }
        if (got.status == rcsp::RcspStatus::Ok)
            for (int i = 0; i < m; ++i)
                ok = ok && got.consumption[i] <= (Rat(1) + q.tolerances[i]) * q.budgets[i];
        if (ok) ++good;

        // scaled walk totals sit within [truth, truth + eps*L] per dimension
        auto sq = rcsp::scale_weights(q);
        std::vector<std::vector<int>> adj(q.n);
        for (int e = 0; e < (int)q.edges.size(); ++e) adj[q.edges[e].tail].push_back(e);
        for (int rep = 0; rep < 1000; ++rep) {
            int v = rnd(rng, 0, q.n - 1);
            std::vector<Rat> truth(m, Rat(0)), scaled(m, Rat(0));
            for (int step = 0; step < q.n - 1 && !adj[v].empty(); ++step) {
                int id = adj[v][rnd(rng, 0, (int)adj[v].size() - 1)];
                for (int i = 0; i < m; ++i) {
                    truth[i] += q.edges[id].w[i];
                    scaled[i] += sq.scaled_weight(id, i);
                }
                v = q.edges[id].head;
            }
            ++sandwiched;
            for (int i = 0; i < m; ++i)
                if (scaled[i] < truth[i] || scaled[i] > truth[i] + q.tolerances[i] * q.budgets[i])
                    ++sandwich_bad;
        }
    }
    std::ostringstream d;
    d << good << "/" << checked << " within contract, " << sandwich_bad << "/" << sandwiched
      << " sandwich violations";
    report(2, "tolerance contract and scaling sandwich", good == checked && sandwich_bad == 0,
           d.str());
}

// --- criterion 3: state-space and work bounds --------------------------------

void c3() {
    Rng rng(303);
    int checked = 0, good = 0;
    while (checked < 200) {
        bool rational = checked % 2 == 0;
        auto q = rand_query(rng, rnd(rng, 4, 7), 1 + rnd(rng, 0, 1), rational);
        if (q.edges.empty()) continue;
        if (!rational) {
            q.tolerances.clear();
            for (Rat& b : q.budgets) {
                if (b < 0) b = -b + 1;  // positive budgets keep eps*L > 0
                q.tolerances.push_back(Rat(1, 4));
            }
        }
        ++checked;
        auto sq = rcsp::scale_weights(q);
        int m = (int)q.budgets.size();
        Rat bound = 1;
        for (int i = 0; i < m; ++i) bound *= 4;
        for (int i = 0; i < m; ++i) {
            Rat ni = 0;  // most negative weight magnitude in dimension i
            for (const auto& e : q.edges)
                if (e.w[i] < 0 && -e.w[i] > ni) ni = -e.w[i];
            Rat term = Rat(q.n) + Rat(q.n) / rat_abs(q.tolerances[i]) +
                       Rat((long long)q.n * q.n) * ni / rat_abs(q.tolerances[i] * q.budgets[i]) +
                       1;
            bound *= term;
        }
        std::size_t pats = rcsp::pattern_count(sq);
        rcsp::PatternTable table(sq, q.source);
        bool ok = Rat((long long)pats) <= bound &&
                  table.relaxations() <= q.edges.size() * (std::size_t)q.n * pats;
        if (ok) ++good;
    }
    report(3, "pattern count and relaxation work bounds",
           good == checked, std::to_string(good) + "/" + std::to_string(checked));
}

// --- criterion 4: grid rounding preserves feasibility both ways --------------

void c4() {
    int checked = 0, good = 0, inst_count = 0;
    for (std::uint64_t seed = 1; inst_count < 200; ++seed) {
        gen::GenParams gp;
        gp.n = 6 + (int)(seed % 2);
        gp.k = 2;
        gp.len_hi = 3;
        Instance inst;
        try {
            inst = gen::generate(inst_count % 4 == 3 ? "negative" : "random", gp, seed).inst;
        } catch (const std::exception&) {
            continue;
        }
        ++inst_count;
        for (const Rat& theta : {Rat(1, 10), Rat(1, 2)}) {
            auto sg = junction::scale_graph(inst, theta);
            for (int p = 0; p < (int)inst.demands.size(); ++p) {
                const Demand& dm = inst.demands[p];
                Rat rb = relaxed_budget(dm.dist_budget, theta);
                for (const auto& pi :
                     oracle::enumerate_simple_paths(inst, dm.source, dm.sink)) {
                    Rat scaled = 0;
                    for (int e : pi.edges) scaled += Rat(sg.mult[e]) * sg.delta;
                    ++checked;
                    bool ok = true;
                    if (pi.length <= dm.dist_budget && scaled > rb) ok = false;  // strict -> scaled
                    if (scaled <= rb && pi.length > rb) ok = false;              // scaled -> relaxed
                    if (ok) ++good;
                }
            }
        }
    }
    report(4, "grid scaling transfers feasibility both ways", good == checked,
           std::to_string(good) + "/" + std::to_string(checked) + " paths");
}

// --- criterion 5: layer-indexed expansion counts paths faithfully ------------

long long count_side_paths(const junction::SideGraph& g, int from, int to) {
    std::map<int, long long> memo;
    std::function<long long(int)> go = [&](int u) -> long long {
        if (u == to) return 1;
        auto it = memo.find(u);
        if (it != memo.end()) return it->second;
        long long c = 0;
        for (int a : g.out[u]) c += go(g.arcs[a].head);
        memo[u] = c;
        return c;
    };
    return go(from);
}

long long count_scaled_paths(const Instance& inst, const junction::ScaledGraph& sg, int from,
                             int to, long long target) {
    std::vector<std::vector<std::pair<int, int>>> out(inst.n);
    for (int e = 0; e < (int)inst.edges.size(); ++e)
        out[inst.edges[e].tail].push_back({inst.edges[e].head, e});
    long long count = 0;
    std::function<void(int, long long)> go = [&](int u, long long acc) {
        if (u == to && acc == target) ++count;
        if (u == to) return;
        for (auto [v, e] : out[u]) go(v, acc + sg.mult[e]);
    };
    go(from, 0);
    return count;
}

void c5() {
    Rng rng(505);
    int checked = 0, good = 0;
    while (checked < 100) {
        Instance inst;
        inst.n = rnd(rng, 4, 6);
        for (int i = 0; i < inst.n; ++i)  // forward edges only: walks are simple
            for (int j = i + 1; j < inst.n; ++j)
                if (rnd(rng, 0, 2)) inst.edges.push_back({i, j, rnd(rng, 1, 3), 1, 1});
        if (inst.edges.empty()) continue;
        inst.demands = {{0, inst.n - 1, 1, 3 + rnd(rng, 0, 4)}};
        auto sg = junction::scale_graph(inst, Rat(1));
        int root = rnd(rng, 1, inst.n - 2);
        junction::LayeredGraph lg;
        try {
            lg = junction::build_layered(inst, sg, {0}, root);
        } catch (const junction::CapExceeded&) {
            continue;
        }
        ++checked;
        bool ok = true;
        for (long long I = sg.tmin; I <= sg.tmax; ++I) {
            auto lt = lg.left.terminal.find({0, I});
            long long in_layered =
                lt == lg.left.terminal.end() ? 0 : count_side_paths(lg.left, lt->second, lg.left.root);
            ok = ok && in_layered == count_scaled_paths(inst, sg, 0, root, I);
            auto rt = lg.right.terminal.find({0, I});
            long long out_layered = rt == lg.right.terminal.end()
                                        ? 0
                                        : count_side_paths(lg.right, rt->second, lg.right.root);
            ok = ok && out_layered == count_scaled_paths(inst, sg, root, inst.n - 1, I);
        }
        if (ok) ++good;
    }
    report(5, "layered expansion is path-count faithful", good == checked,
           std::to_string(good) + "/" + std::to_string(checked));
}

// --- criterion 6: junction trees are valid and density-competitive -----------

bool route_through_root(const Instance& inst, const std::vector<int>& route, int s, int root) {
    int at = s;
    if (at == root) return true;
    for (int e : route) {
        at = inst.edges[e].head;
        if (at == root) return true;
    }
    return false;
}

// cycle removal may excise the root visit from an emitted route; the checkable
// tree condition is then that the pair fits through the root within its
// relaxed budget
bool root_coverable(const Instance& inst, int pair, int root, const Rat& theta) {
    const Demand& d = inst.demands[pair];
    auto fwd = shortest_lengths_from(inst, d.source);
    if (!fwd[root]) return false;
    auto mid = shortest_lengths_from(inst, root);
    if (!mid[d.sink]) return false;
    return Rat(*fwd[root] + *mid[d.sink]) <= relaxed_budget(d.dist_budget, theta);
}

void c6() {
    Rat theta(1, 2);
    int made = 0, valid = 0, compared = 0, within = 0;
    for (std::uint64_t seed = 1; made < 200; ++seed) {
        gen::GenParams gp;
        gp.n = 5 + (int)(seed % 4);
        gp.k = 2 + (int)(seed % 3);
        gp.len_hi = 2;
        gp.budget_slack = 1;
        Instance inst;
        try {
            inst = gen::generate("random", gp, seed).inst;
        } catch (const std::exception&) {
            continue;
        }
        std::vector<int> pairs(inst.demands.size());
        std::iota(pairs.begin(), pairs.end(), 0);
        junction::JunctionResult jr;
        try {
            jr = junction::min_density_junction_tree(inst, pairs, theta, seed);
        } catch (const std::exception&) {
            continue;  // capped or uncoverable instance, draw another
        }
        ++made;
        bool ok = !jr.routes.empty();
        Rat cost = 0;
        std::set<int> used;
        for (const auto& [p, r] : jr.routes) {
            ok = ok && is_theta_feasible(inst, p, r, theta);
            ok = ok && (route_through_root(inst, r, inst.demands[p].source, jr.root) ||
                        root_coverable(inst, p, jr.root, theta));
            cost += path_delta(inst, r) * Rat(inst.demands[p].demand);
            used.insert(r.begin(), r.end());
        }
        for (int e : used) cost += inst.edges[e].sigma;
        ok = ok && cost == jr.cost && jr.density == Rat(jr.cost / (long long)jr.routes.size());
        if (ok) ++valid;

        try {
            auto want = oracle::brute_force_min_density_junction_tree(inst, theta);
            if (!want.found) continue;
            ++compared;
            Rat budget = Rat(16 * logk_budget((int)inst.demands.size()));
            if (jr.density <= budget * want.density) ++within;
        } catch (const std::exception& e) {
            if (!oracle_capped(e)) throw;
        }
    }
    std::ostringstream d;
    d << valid << "/" << made << " valid, " << within << "/" << compared << " within budget";
    report(6, "junction trees valid and density-competitive",
           valid == made && compared > 0 && within * 100 >= compared * 95, d.str());
}

// --- criterion 7: greedy full solver against the exhaustive optimum ----------

void c7() {
    Rat theta(1, 2);
    int made = 0, feasible_all = 0, compared = 0, within = 0, telescoped = 0;
    for (std::uint64_t seed = 1; made < 200; ++seed) {
        gen::GenParams gp;
        gp.n = 6 + (int)(seed % 3);
        gp.k = 2 + (int)(seed % 4);
        gp.len_hi = 2;
        gp.budget_slack = 1;
        gp.extra_edges = 6;
        Instance inst;
        try {
            inst = gen::generate("random", gp, seed).inst;
        } catch (const std::exception&) {
            continue;
        }
        ++made;
        solvers::SolverConfig cfg;
        cfg.seed = seed;
        auto out = solvers::solve_k(inst, cfg);
        bool feas = out.solution.routes.size() == inst.demands.size();
        for (const auto& [p, r] : out.solution.routes)
            feas = feas && is_theta_feasible(inst, p, r, theta);
        if (feas) ++feasible_all;

        try {
            auto opt = oracle::brute_force_optimum(inst, theta);
            if (!opt.feasible) continue;
            ++compared;
            int k = (int)inst.demands.size();
            Rat budget = rat_from_double(8.0 * std::sqrt((double)k)) * logk_budget(k);
            if (solution_cost(inst, out.solution) <= budget * opt.cost) ++within;
            // each committed tree's density against the optimum spread over the
            // pairs still open when it was committed
            bool tel = true;
            long long open = k;
            Rat per_iter = Rat(32 * logk_budget(k));
            Rat cap = Rat(per_iter * opt.cost);
            for (const auto& st : out.report.stages) {
                if (opt.cost > 0) tel = tel && Rat(st.density * open) <= cap;
                open -= st.resolved;
            }
            tel = tel && open == 0;
            if (tel) ++telescoped;
        } catch (const std::exception& e) {
            if (!oracle_capped(e)) throw;
        }
    }
    std::ostringstream d;
    d << feasible_all << "/" << made << " feasible, " << within << "/" << compared
      << " within budget, " << telescoped << "/" << compared << " telescoping";
    report(7, "greedy solver cost and telescoping densities",
           feasible_all == made && compared > 0 && within * 100 >= compared * 95 &&
               telescoped * 100 >= compared * 95,
           d.str());
}

// --- criterion 8: shared-source restriction ----------------------------------

void c8() {
    Rat theta(1, 2);
    int made = 0, feasible_all = 0, compared = 0, within = 0;
    for (std::uint64_t seed = 1; made < 200; ++seed) {
        gen::GenParams gp;
        gp.n = 6 + (int)(seed % 3);
        gp.k = 2 + (int)(seed % 4);
        gp.len_hi = 2;
        gp.budget_slack = 1;
        Instance inst;
        try {
            inst = gen::generate("single_source", gp, seed).inst;
        } catch (const std::exception&) {
            continue;
        }
        ++made;
        solvers::SolverConfig cfg;
        cfg.seed = seed;
        auto out = solvers::solve_single_source(inst, cfg);
        bool feas = out.solution.routes.size() == inst.demands.size();
        for (const auto& [p, r] : out.solution.routes)
            feas = feas && is_theta_feasible(inst, p, r, theta);
        if (feas) ++feasible_all;
        try {
            auto opt = oracle::brute_force_optimum(inst, theta);
            if (!opt.feasible) continue;
            ++compared;
            Rat budget = Rat(8 * logk_budget((int)inst.demands.size()));
            if (solution_cost(inst, out.solution) <= budget * opt.cost) ++within;
        } catch (const std::exception& e) {
            if (!oracle_capped(e)) throw;
        }
    }
    std::ostringstream d;
    d << feasible_all << "/" << made << " feasible, " << within << "/" << compared
      << " within budget";
    report(8, "shared-source solver cost", feasible_all == made && compared > 0 &&
                                               within * 100 >= compared * 95,
           d.str());
}

// --- criterion 9: sampling stage on thick planted instances ------------------

void c9() {
    gen::GenParams gp;
    gp.n = 30;
    gp.k = 2;
    gp.len_hi = 2;
    Rat tau = 32;
    Rat p45 = lpflow::approx_pow45(gp.n);
    Rat l1 = tau / p45;
    int full = 0, route_bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto g = gen::generate("hub", gp, seed);
        Rat l2 = Rat(p45 * tau) / (long long)g.inst.demands.size();
        solvers::SolverConfig cfg;
        cfg.seed = seed;
        auto routes = solvers::resolve_thick(g.inst, tau, cfg);
        if (routes.size() == g.inst.demands.size()) ++full;
        for (const auto& [p, r] : routes) {
            if (!is_theta_feasible(g.inst, p, r, Rat(0))) ++route_bad;
            if (path_sigma(g.inst, r) > 2 * l1) ++route_bad;
            if (path_delta(g.inst, r) > 4 * l2) ++route_bad;
        }
    }
    std::ostringstream d;
    d << full << "/100 fully resolved, " << route_bad << " route violations";
    report(9, "sampling stage clears planted thick instances", full >= 95 && route_bad == 0,
           d.str());
}

// --- criterion 10: flow LP, pruning, and rounding ----------------------------

// cheapest integral pick over the LP's own path universe: >= kb/4 pairs, one
// sigma<=l1, delta<=l2/2 feasible path each, cost = sigma of the union
std::optional<Rat> integral_pi_optimum(const Instance& inst, const std::vector<int>& pairs,
                                       const Rat& l1, const Rat& l2) {
    int kb = (int)pairs.size();
    std::vector<std::vector<oracle::PathInfo>> cand(kb);
    for (int p = 0; p < kb; ++p)
        for (auto& pi : oracle::enumerate_feasible_paths(inst, pairs[p], Rat(0)))
            if (pi.sigma <= l1 && 2 * pi.delta <= l2) cand[p].push_back(pi);
    std::optional<Rat> best;
    std::vector<int> pick(kb, -1);
    auto dfs = [&](auto&& self, int p, int cnt) -> void {
        if (p == kb) {
            if (4 * cnt < kb) return;
            std::set<int> used;
            for (int i = 0; i < kb; ++i)
                if (pick[i] >= 0)
                    for (int e : cand[i][pick[i]].edges) used.insert(e);
            Rat cost = 0;
            for (int e : used) cost += inst.edges[e].sigma;
            if (!best || cost < *best) best = cost;
            return;
        }
        pick[p] = -1;
        self(self, p + 1, cnt);
        for (int c = 0; c < (int)cand[p].size(); ++c) {
            pick[p] = c;
            self(self, p + 1, cnt + 1);
        }
        pick[p] = -1;
    };
    dfs(dfs, 0, 0);
    return best;
}

bool lp_constraints_hold(const Instance& inst, const lpflow::LpSolution& s, bool pruned) {
    int kb = (int)s.pairs.size();
    Rat ytot = 0;
    for (const Rat& v : s.y) {
        if (v < 0 || v > 1) return false;
        ytot += v;
    }
    if (4 * ytot < kb) return false;
    for (const Rat& v : s.x)
        if (v < 0 || v > 1) return false;
    std::map<int, int> slot;
    for (int p = 0; p < kb; ++p) slot[s.pairs[p]] = p;
    std::vector<Rat> flow_sum(kb, Rat(0)), delta_flow(kb, Rat(0));
    std::vector<std::map<int, Rat>> through(kb);
    for (std::size_t c = 0; c < s.columns.size(); ++c) {
        const auto& col = s.columns[c];
        int p = slot.at(col.pair);
        const Demand& dm = inst.demands[col.pair];
        if (!is_walk(inst, dm.source, dm.sink, col.edges)) return false;
        if (col.length > dm.dist_budget || col.sigma_cost > s.l1) return false;
        if (pruned && s.f[c] > 0 && col.delta_cost > s.l2) return false;
        flow_sum[p] += s.f[c];
        delta_flow[p] += col.delta_cost * s.f[c];
        for (int e : col.edges) through[p][e] += s.f[c];
    }
    for (int p = 0; p < kb; ++p) {
        if (pruned ? flow_sum[p] != s.y[p] : flow_sum[p] < s.y[p]) return false;
        if (2 * delta_flow[p] > s.l2 * s.y[p]) return false;
        for (auto& [e, fl] : through[p])
            if (fl > s.x[e]) return false;
    }
    Rat obj = 0;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) obj += inst.edges[e].sigma * s.x[e];
    return obj == s.objective;
}

void c10() {
    Rat zeta(1, 10);
    bool ok = true;
    std::ostringstream d;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        gen::GenParams gp;
        gp.n = 9 + (int)(seed % 2);
        gp.k = 2;
        auto g = gen::generate("backbone", gp, seed);
        std::vector<int> pairs(g.inst.demands.size());
        std::iota(pairs.begin(), pairs.end(), 0);
        Rat tau = 1;
        std::optional<lpflow::LpSolution> sol;
        for (int i = 0; i < 24 && !sol; ++i, tau *= 2) {
            try {
                sol = lpflow::solve_thin_lp(g.inst, pairs, tau, zeta);
            } catch (const lpflow::LpInfeasible&) {
            }
        }
        if (!sol) {
            ok = false;
            d << "seed " << seed << ": LP never solved; ";
            continue;
        }
        auto integral = integral_pi_optimum(g.inst, pairs, sol->l1, sol->l2);
        if (integral && sol->objective > (1 + zeta) * *integral) {
            ok = false;
            d << "seed " << seed << ": objective above integral cap; ";
        }
        auto pr = lpflow::prune(g.inst, *sol);
        if (!lp_constraints_hold(g.inst, pr, true)) {
            ok = false;
            d << "seed " << seed << ": pruned constraints broke; ";
        }
        if (lpflow::expected_sampled_sigma(g.inst, pr) >
            lpflow::approx_pow45(g.inst.n) * lpflow::approx_ln(g.inst.n) * pr.objective) {
            ok = false;
            d << "seed " << seed << ": expected sample cost over cap; ";
        }
        int trials = 200;
        std::vector<int> hits(pairs.size(), 0);
        for (int s = 0; s < trials; ++s) {
            auto rr = lpflow::round(g.inst, pr, 7000 + (std::uint64_t)s);
            for (std::size_t p = 0; p < pairs.size(); ++p)
                if (rr.paths.count(pairs[p])) ++hits[p];
        }
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (pr.y[p] >= Rat(1, 10) && hits[p] * 100 < trials * 90) {
                ok = false;
                d << "seed " << seed << ": pair " << p << " resolved " << hits[p] << "/200; ";
            }
    }
    report(10, "flow LP, pruning and rounding pipeline", ok, d.str());
}

// --- criterion 11: full driver across its branches ----------------------------

void c11() {
    bool ok = true;
    std::ostringstream d;
    oracle::OracleCaps caps;
    caps.max_n = 30;  // the plants stay tiny in edges even when n is padded

    auto check_branch = [&](const std::string& name, const Instance& inst,
                            const solvers::SolverConfig& cfg, const char* expect_stage) {
        try {
            auto out = solvers::solve_n45(inst, cfg);
            bool full = out.solution.routes.size() == inst.demands.size();
            for (const auto& [p, r] : out.solution.routes)
                full = full && is_theta_feasible(inst, p, r, Rat(0));
            bool saw = false;
            for (const auto& st : out.report.stages) saw = saw || st.stage == expect_stage;
            auto opt = oracle::brute_force_optimum(inst, Rat(0), caps);
            Rat cost = solution_cost(inst, out.solution);
            bool ratio = opt.feasible && cost <= 10 * opt.cost;
            if (!(full && saw && ratio)) {
                ok = false;
                d << name << ": full=" << full << " stage=" << saw << " ratio=" << ratio << "; ";
            } else {
                d << name << " ratio " << rat_to_string(cost) << "/" << rat_to_string(opt.cost)
                  << "; ";
            }
        } catch (const std::exception& e) {
            ok = false;
            d << name << " threw: " << e.what() << "; ";
        }
    };

    {
        solvers::SolverConfig cfg;
        cfg.tau = Rat(16);  // roomy thresholds so the sampling stage fires
        check_branch("sampling", hub_band(), cfg, "thick");
    }
    {
        // expensive mandatory edges sit above the upfront threshold tau/n^{4/5},
        // so neither the sampling stage nor the LP can price any route and the
        // junction branch has to carry every pair
        Instance inst = two_clusters();
        inst.edges[2].sigma = 40;
        inst.edges[5].sigma = 40;
        solvers::SolverConfig cfg;
        cfg.kb_threshold = 0;
        cfg.tau = Rat(32);
        check_branch("tree-race", inst, cfg, "junction");
    }
    {
        // maximally thin pair: its only join vertices are its two endpoints,
        // and the seed is pinned so the sampler misses both, which is exactly
        // the case the sampling stage is not meant to cover. The tree pipeline
        // is capped out, so the LP rounding branch has to carry the pair.
        Instance inst;
        inst.n = 30;
        inst.edges.push_back({28, 29, 1, 1, 1});
        inst.demands.push_back({28, 29, 1, 1});
        solvers::SolverConfig cfg;
        cfg.seed = 228;
        cfg.kb_threshold = 0;
        cfg.tau = Rat(32);
        cfg.jopt.max_labels = 1;
        check_branch("lp-round", inst, cfg, "lp-round");
    }
    {
        solvers::SolverConfig cfg;  // tiny k: the few-pairs fallback dispatches
        check_branch("fallback", two_clusters(), cfg, "fallback-k");
    }
    report(11, "full driver resolves every branch", ok, d.str());
}

}  // namespace

int main() {
    c1();
    c2();
    c3();
    c4();
    c5();
    c6();
    c7();
    c8();
    c9();
    c10();
    c11();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
