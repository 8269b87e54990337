#include "bbs/lpflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"
#include "bbs/rcsp.hpp"
#include "bbs/simplex.hpp"

namespace bbs::lpflow {

Rat approx_pow45(int n) { return rat_from_double(std::pow((double)n, 0.8)); }
Rat approx_ln(int n) { return rat_from_double(std::log(std::max(2.0, (double)n))); }

namespace {

struct Master {
    lp::LpResult<Rat> res;
    std::vector<std::map<int, int>> edge_row;  // per pair slot: edge id -> capacity row
    std::vector<int> flow_row, delta_row;      // per pair slot
    std::map<int, int> xid;                    // instance edge -> compact x index
    int nx = 0;
};

// variables are laid out [x (edges used by some column) | y (per pair) | f (per
// column)]; edges outside every column sit at x = 0 in any optimum, so they
// carry no variable at all. slot(c) maps a column to its position in `pairs`.
Master solve_master(const Instance& inst, const std::vector<int>& pairs,
                    const std::vector<PathColumn>& cols, const std::vector<int>& slot,
                    const Rat& l2, bool min_cost, int kb) {
    int np = (int)pairs.size(), nc = (int)cols.size();
    std::map<int, int> xid;  // instance edge -> compact x index
    for (const PathColumn& c : cols)
        for (int e : c.edges) xid.emplace(e, 0);
    int nx = 0;
    for (auto& [e, id] : xid) id = nx++;

    int nv = nx + np + nc;
    lp::LpRat lp(nv);
    auto yv = [&](int p) { return nx + p; };
    auto fv = [&](int c) { return nx + np + c; };

    std::vector<Rat> obj(nv, Rat(0));
    if (min_cost)
        for (auto& [e, id] : xid) obj[id] = -inst.edges[e].sigma;
    else
        for (int p = 0; p < np; ++p) obj[yv(p)] = 1;
    lp.set_objective(obj);

    Master m;
    m.xid = xid;
    m.nx = nx;
    m.edge_row.resize(np);
    if (min_cost) {
        std::vector<Rat> row(nv, Rat(0));
        for (int p = 0; p < np; ++p) row[yv(p)] = 1;
        lp.add_ge(row, Rat(kb, 4));
    }
    std::vector<std::vector<int>> by_pair(np);
    for (int c = 0; c < nc; ++c) by_pair[slot[c]].push_back(c);

    for (int p = 0; p < np; ++p) {
        std::set<int> used;
        for (int c : by_pair[p])
            for (int e : cols[c].edges) used.insert(e);
        for (int e : used) {
            std::vector<Rat> row(nv, Rat(0));
            for (int c : by_pair[p])
                if (std::count(cols[c].edges.begin(), cols[c].edges.end(), e))
                    row[fv(c)] = 1;
            row[xid.at(e)] = -1;
            m.edge_row[p][e] = lp.rows();
            lp.add_le(row, Rat(0));
        }
        {
            std::vector<Rat> row(nv, Rat(0));
            for (int c : by_pair[p]) row[fv(c)] = 1;
            row[yv(p)] = -1;
            m.flow_row.push_back(lp.rows());
            lp.add_ge(row, Rat(0));
        }
        {
            std::vector<Rat> row(nv, Rat(0));
            for (int c : by_pair[p]) row[fv(c)] = cols[c].delta_cost;
            row[yv(p)] = -l2 / 2;
            m.delta_row.push_back(lp.rows());
            lp.add_le(row, Rat(0));
        }
    }
    for (int v = 0; v < nv; ++v) {
        std::vector<Rat> row(nv, Rat(0));
        row[v] = 1;
        lp.add_le(row, Rat(1));
    }
    m.res = lp.solve();
    if (m.res.status != lp::LpStatus::Optimal)
        throw LpInfeasible("lpflow: master did not reach an optimum");
    return m;
}

bool all_sigma_integral(const Instance& inst) {
    for (const Edge& e : inst.edges)
        if (!is_integer(e.sigma)) return false;
    return true;
}

// cheapest path with length <= Dis (exact) and sigma <= l1 under the given
// per-edge costs; exact Pi membership when sigma is integral
std::optional<PathColumn> price_path(const Instance& inst, const Demand& d, int pair,
                                     const std::vector<Rat>& edge_cost, const Rat& l1,
                                     const Rat& zeta, bool sigma_integral) {
    rcsp::RcspQuery q;
    q.n = inst.n;
    q.source = d.source;
    q.sink = d.sink;
    for (int e = 0; e < (int)inst.edges.size(); ++e)
        q.edges.push_back({inst.edges[e].tail, inst.edges[e].head, edge_cost[e],
                           {inst.edges[e].length, inst.edges[e].sigma}});
    q.budgets = {d.dist_budget, l1};
    rcsp::RcspResult r;
    if (sigma_integral) {
        r = rcsp::solve_exact_integer(q);
    } else {
        Rat zp = std::min(zeta, Rat((Rat(rat_floor(l1)) + 1 - l1) / (2 * l1)));
        r = rcsp::solve_one_rational(q, zp);
    }
    if (r.status != rcsp::RcspStatus::Ok) return std::nullopt;
    PathColumn col;
    col.pair = pair;
    col.edges = r.path;
    col.length = r.consumption[0];
    col.sigma_cost = r.consumption[1];
    col.delta_cost = path_delta(inst, r.path);
    if (col.sigma_cost > l1 || col.length > d.dist_budget) return std::nullopt;
    return col;
}

}  // namespace

LpSolution solve_thin_lp(const Instance& inst, const std::vector<int>& bad_pairs, const Rat& tau,
                         const Rat& zeta) {
    if (tau <= 0 || zeta <= 0) throw std::invalid_argument("lpflow: need tau, zeta > 0");
    for (int p : bad_pairs) {
        if (inst.demands.at(p).demand != 1)
            throw std::invalid_argument("lpflow: unit demands required");
    }
    for (const Edge& e : inst.edges)
        if (!is_integer(e.length)) throw std::invalid_argument("lpflow: integral lengths required");

    int n = inst.n, ne = (int)inst.edges.size();
    int kb = (int)bad_pairs.size();
    int k = std::max(1, (int)inst.demands.size());
    Rat p45 = approx_pow45(n);
    Rat l1 = tau / p45, l2 = p45 * tau / k;
    bool sig_int = all_sigma_integral(inst);

    std::vector<PathColumn> cols;
    std::vector<int> slot;
    std::set<std::pair<int, std::vector<int>>> have;

    // two passes of column generation: first grow max-coverage columns, then
    // add the coverage floor and minimize cost
    for (int phase = 0; phase < 2; ++phase) {
        bool min_cost = phase == 1;
        for (int iter = 0;; ++iter) {
            if (iter > 500) throw LpInfeasible("lpflow: column generation stalled");
            Master m = solve_master(inst, bad_pairs, cols, slot, l2, min_cost, kb);
            Rat tol = 0;
            if (min_cost) tol = zeta * (-m.res.objective) / (kb + ne);
            bool added = false;
            for (int p = 0; p < kb; ++p) {
                const Demand& d = inst.demands[bad_pairs[p]];
                Rat gamma = m.res.dual[m.delta_row[p]];
                std::vector<Rat> cost(ne, Rat(0));
                for (int e = 0; e < ne; ++e) {
                    cost[e] = gamma * inst.edges[e].delta;
                    auto it = m.edge_row[p].find(e);
                    if (it != m.edge_row[p].end()) cost[e] += m.res.dual[it->second];
                }
                Rat lam = m.res.dual[m.flow_row[p]];  // <= 0 by the >= row convention
                auto col = price_path(inst, d, bad_pairs[p], cost, l1, zeta, sig_int);
                if (!col) continue;
                Rat reduced = lam;  // cost[] already folds gamma * delta per edge
                for (int e : col->edges) reduced += cost[e];
                if (reduced < -tol && have.insert({p, col->edges}).second) {
                    cols.push_back(*col);
                    slot.push_back(p);
                    added = true;
                }
            }
            if (!added) {
                if (!min_cost) {
                    Rat total = 0;
                    for (int p = 0; p < kb; ++p) total += m.res.x[m.nx + p];
                    if (4 * total < kb)
                        throw LpInfeasible("lpflow: coverage floor unreachable");
                } else {
                    LpSolution sol;
                    sol.pairs = bad_pairs;
                    sol.l1 = l1;
                    sol.l2 = l2;
                    sol.x.assign(ne, Rat(0));
                    for (auto& [e, id] : m.xid) sol.x[e] = m.res.x[id];
                    sol.y.assign(m.res.x.begin() + m.nx, m.res.x.begin() + m.nx + kb);
                    sol.columns = cols;
                    sol.f.assign(m.res.x.begin() + m.nx + kb, m.res.x.end());
                    sol.objective = -m.res.objective;
                    return sol;
                }
                break;
            }
        }
    }
    throw std::logic_error("lpflow: unreachable");
}

LpSolution prune(const Instance& inst, const LpSolution& sol) {
    LpSolution out = sol;
    int kb = (int)sol.pairs.size();
    for (Rat& v : out.f) v *= 2;
    for (std::size_t c = 0; c < out.columns.size(); ++c)
        if (out.columns[c].delta_cost > out.l2) out.f[c] = 0;

    std::map<int, int> slot_of;
    for (int p = 0; p < kb; ++p) slot_of[sol.pairs[p]] = p;
    std::vector<std::vector<int>> by_pair(kb);
    for (std::size_t c = 0; c < out.columns.size(); ++c)
        by_pair[slot_of.at(out.columns[c].pair)].push_back((int)c);

    for (int p = 0; p < kb; ++p) {
        // keep the cheapest-delta flow up to mass y; this preserves the
        // delta-budget row exactly, not just within the doubling slack
        auto order = by_pair[p];
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return out.columns[a].delta_cost < out.columns[b].delta_cost;
        });
        Rat need = out.y[p];
        for (int c : order) {
            Rat take = std::min(out.f[c], need);
            out.f[c] = take;
            need -= take;
        }
        if (need > 0) throw LpInfeasible("lpflow: pair lost all flow in pruning");
    }

    out.x.assign(inst.edges.size(), Rat(0));
    for (int p = 0; p < kb; ++p) {
        std::map<int, Rat> through;
        for (int c : by_pair[p])
            for (int e : out.columns[c].edges) through[e] += out.f[c];
        for (auto& [e, fl] : through) out.x[e] = std::max(out.x[e], fl);
    }
    out.objective = 0;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        out.objective += inst.edges[e].sigma * out.x[e];
    return out;
}

RoundResult round(const Instance& inst, const LpSolution& pruned, std::uint64_t seed) {
    RoundResult rr;
    rr.kept.assign(inst.edges.size(), 0);
    Rat scale = approx_pow45(inst.n) * approx_ln(inst.n);
    auto rng = gen::substream(seed, "lp-round");
    BigInt two64 = BigInt(1) << 64;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        Rat p = std::min(Rat(1), Rat(scale * pruned.x[e]));
        BigInt u = rng();
        // keep iff u / 2^64 < p, evaluated exactly
        if (u * BigInt(denominator(p)) < BigInt(numerator(p)) * two64) rr.kept[e] = 1;
    }

    // cheapest-delta strictly feasible path inside the sample, per pair
    std::vector<int> back;  // sampled edge -> instance edge
    rcsp::RcspQuery base;
    base.n = inst.n;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        if (rr.kept[e]) {
            back.push_back((int)e);
            base.edges.push_back({inst.edges[e].tail, inst.edges[e].head, inst.edges[e].delta,
                                  {inst.edges[e].length}});
        }
    for (int pair : pruned.pairs) {
        const Demand& d = inst.demands[pair];
        rcsp::RcspQuery q = base;
        q.source = d.source;
        q.sink = d.sink;
        q.budgets = {d.dist_budget};
        auto r = rcsp::solve_exact_integer(q);
        if (r.status != rcsp::RcspStatus::Ok || r.cost > pruned.l2) continue;
        std::vector<int> route;
        for (int id : r.path) route.push_back(back[id]);
        rr.paths[pair] = route;
    }
    return rr;
}

Rat expected_sampled_sigma(const Instance& inst, const LpSolution& pruned) {
    Rat scale = approx_pow45(inst.n) * approx_ln(inst.n);
    Rat total = 0;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        total += inst.edges[e].sigma * std::min(Rat(1), Rat(scale * pruned.x[e]));
    return total;
}

}  // namespace bbs::lpflow
