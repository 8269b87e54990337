#include "bbs/junction.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <set>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"
#include "bbs/simplex.hpp"

namespace bbs::junction {

namespace {

// smallest power of two (possibly fractional) that covers s; 0 stays 0
Rat pow2_at_least(const Rat& s) {
    if (s <= 0) return Rat(0);
    Rat b(1);
    while (b < s) b *= 2;
    while (Rat(b / 2) >= s) b /= 2;
    return b;
}

}  // namespace

ScaledGraph scale_graph(const Instance& inst, const Rat& theta) {
    if (theta <= 0) throw std::invalid_argument("junction: theta must be positive");
    if (inst.demands.empty()) throw std::invalid_argument("junction: no demands");
    if (inst.n < 2) throw std::invalid_argument("junction: need at least two vertices");
    Rat lmin, lmax;
    bool first = true;
    for (const Demand& d : inst.demands) {
        Rat a = rat_abs(d.dist_budget);
        if (first || a < lmin) lmin = a;
        if (first || a > lmax) lmax = a;
        first = false;
    }
    if (lmin == 0) throw std::invalid_argument("junction: zero distance budget");

    ScaledGraph sg;
    sg.theta = theta;
    sg.delta = Rat(theta * lmin / (inst.n - 1));
    sg.mult.reserve(inst.edges.size());
    Rat min_len;
    bool fe = true;
    for (const Edge& e : inst.edges) {
        sg.mult.push_back(to_ll(rat_ceil(Rat(e.length / sg.delta))));
        if (fe || e.length < min_len) min_len = e.length;
        fe = false;
    }
    Rat low = fe ? Rat(0) : Rat(min_len * (inst.n - 1) / sg.delta);
    if (low > 0) low = 0;
    sg.tmin = to_ll(rat_floor(low));
    sg.tmax = to_ll(rat_ceil(Rat(lmax * (1 + theta) / sg.delta))) +
              (sg.tmin < 0 ? -sg.tmin : sg.tmin);
    return sg;
}

LayeredGraph build_layered(const Instance& inst, const ScaledGraph& sg,
                           const std::vector<int>& pairs, int root, const Options& opt) {
    if (root < 0 || root >= inst.n) throw std::invalid_argument("junction: bad root");
    if (pairs.empty()) throw std::invalid_argument("junction: no pairs");
    long long span = sg.tmax - sg.tmin + 1;
    if (span <= 0 || span > opt.max_layer_span)
        throw CapExceeded("junction: layer span over cap");

    LayeredGraph lg;
    lg.inst = &inst;
    lg.root = root;
    lg.pairs = pairs;
    for (int p : pairs) {
        const Demand& d = inst.demands[p];
        Rat bound = relaxed_budget(d.dist_budget, sg.theta);
        lg.cap.push_back(to_ll(rat_floor(Rat(bound / sg.delta))));
    }

    std::size_t projected = (std::size_t)(inst.n) * (std::size_t)span * 2 +
                            pairs.size() * (std::size_t)span * 2;
    if (projected > opt.max_side_nodes) throw CapExceeded("junction: side graph over cap");

    auto build_side = [&](bool rev) {
        SideGraph g;
        g.rev = rev;
        for (int v = 0; v < inst.n; ++v)
            for (long long I = sg.tmin; I <= sg.tmax; ++I) {
                if (v == root && I != 0) continue;
                g.base[{v, I}] = (int)g.nodes.size();
                g.nodes.push_back({v, I, -1});
            }
        g.root = g.base.at({root, 0});
        for (int e = 0; e < (int)inst.edges.size(); ++e) {
            int from = rev ? inst.edges[e].head : inst.edges[e].tail;
            int to = rev ? inst.edges[e].tail : inst.edges[e].head;
            long long d = sg.mult[e];
            for (long long I = sg.tmin; I <= sg.tmax; ++I) {
                auto ti = g.base.find({from, I});
                if (ti == g.base.end()) continue;
                auto hi = g.base.find({to, I - d});
                if (hi == g.base.end()) continue;
                g.arcs.push_back({ti->second, hi->second, e});
            }
        }
        for (int slot = 0; slot < (int)pairs.size(); ++slot) {
            const Demand& d = inst.demands[pairs[slot]];
            int endpoint = rev ? d.sink : d.source;
            for (long long I = sg.tmin; I <= sg.tmax; ++I) {
                auto bi = g.base.find({endpoint, I});
                if (bi == g.base.end()) continue;
                int id = (int)g.nodes.size();
                g.terminal[{slot, I}] = id;
                g.nodes.push_back({endpoint, I, slot});
                g.arcs.push_back({id, bi->second, -1});
            }
        }
        g.out.assign(g.nodes.size(), {});
        for (int a = 0; a < (int)g.arcs.size(); ++a) g.out[g.arcs[a].tail].push_back(a);
        return g;
    };
    lg.left = build_side(false);
    lg.right = build_side(true);
    return lg;
}

namespace {

// nodes that lie on some terminal ~> root walk
std::vector<char> co_reachable(const SideGraph& g) {
    int nv = (int)g.nodes.size();
    std::vector<char> from_term(nv, 0), to_root(nv, 0);
    std::deque<int> q;
    for (auto& [key, id] : g.terminal) {
        from_term[id] = 1;
        q.push_back(id);
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int a : g.out[u])
            if (!from_term[g.arcs[a].head]) {
                from_term[g.arcs[a].head] = 1;
                q.push_back(g.arcs[a].head);
            }
    }
    std::vector<std::vector<int>> in(nv);
    for (int a = 0; a < (int)g.arcs.size(); ++a) in[g.arcs[a].head].push_back(a);
    to_root[g.root] = 1;
    q.push_back(g.root);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int a : in[u])
            if (!to_root[g.arcs[a].tail]) {
                to_root[g.arcs[a].tail] = 1;
                q.push_back(g.arcs[a].tail);
            }
    }
    std::vector<char> useful(nv, 0);
    for (int v = 0; v < nv; ++v) useful[v] = from_term[v] && to_root[v];
    return useful;
}

struct Label {
    Rat sigma, delta;
    int parent = -1;  // label arena index
    int via = -1;     // side arc
};

}  // namespace

Leveled height_reduce(const Instance& inst, const SideGraph& g, int h, const Options& opt) {
    if (h < 1) throw std::invalid_argument("junction: h must be >= 1");
    Leveled lv;
    lv.h = h;
    lv.root = g.root;
    std::vector<char> useful = co_reachable(g);
    useful[g.root] = 1;

    std::size_t work = 0;
    for (int src = 0; src < (int)g.nodes.size(); ++src) {
        if (!useful[src]) continue;
        // non-dominated (sigma, delta) walks from src to every useful node
        std::vector<Label> arena;
        std::vector<std::vector<int>> front(g.nodes.size());
        arena.push_back({Rat(0), Rat(0), -1, -1});
        front[src].push_back(0);
        std::deque<std::pair<int, int>> q;  // (node, arena index)
        q.push_back({src, 0});
        while (!q.empty()) {
            auto [u, li] = q.front();
            q.pop_front();
            // the label may have been dominated after being queued
            bool alive = false;
            for (int other : front[u])
                if (other == li) alive = true;
            if (!alive) continue;
            Rat us = arena[li].sigma, ud = arena[li].delta;
            for (int a : g.out[u]) {
                int v = g.arcs[a].head;
                if (!useful[v]) continue;
                Rat ns = us, nd = ud;
                if (g.arcs[a].orig >= 0) {
                    ns += inst.edges[g.arcs[a].orig].sigma;
                    nd += inst.edges[g.arcs[a].orig].delta;
                }
                bool dominated = false;
                for (int other : front[v]) {
                    if (arena[other].sigma <= ns && arena[other].delta <= nd) {
                        dominated = true;
                        break;
                    }
                }
                if (dominated) continue;
                auto& fv = front[v];
                fv.erase(std::remove_if(fv.begin(), fv.end(),
                                        [&](int other) {
                                            return arena[other].sigma >= ns &&
                                                   arena[other].delta >= nd;
                                        }),
                         fv.end());
                int ni = (int)arena.size();
                arena.push_back({ns, nd, li, a});
                fv.push_back(ni);
                q.push_back({v, ni});
                if (++work > opt.max_labels)
                    throw CapExceeded("junction: path summary work over cap");
            }
        }
        for (int dst = 0; dst < (int)g.nodes.size(); ++dst) {
            if (front[dst].empty() || (!useful[dst] && dst != g.root)) continue;
            // frontier sorted by sigma ascending has delta descending
            std::vector<int> fr = front[dst];
            std::sort(fr.begin(), fr.end(), [&](int a, int b) {
                return arena[a].sigma < arena[b].sigma;
            });
            std::set<Rat> budgets;
            for (int li : fr) budgets.insert(pow2_at_least(arena[li].sigma));
            for (const Rat& b : budgets) {
                // cheapest delta within budget = last frontier point with sigma <= b
                int pick = -1;
                for (int li : fr)
                    if (arena[li].sigma <= b) pick = li;
                if (pick < 0) continue;
                Leveled::EdgeTpl t;
                t.from = src;
                t.to = dst;
                t.budget = b;
                t.dmin = arena[pick].delta;
                for (int li = pick; arena[li].via >= 0; li = arena[li].parent)
                    t.arcs.push_back(arena[li].via);
                std::reverse(t.arcs.begin(), t.arcs.end());
                lv.by_to[dst].push_back((int)lv.edges.size());
                lv.edges.push_back(std::move(t));
            }
        }
    }
    return lv;
}

namespace {

// min template-steps between nodes, forward from a seed set or toward it
std::vector<int> template_hops(const Leveled& lv, int nv, const std::vector<int>& seeds,
                               bool toward_seeds) {
    std::vector<int> dist(nv, std::numeric_limits<int>::max());
    std::deque<int> q;
    for (int s : seeds) {
        dist[s] = 0;
        q.push_back(s);
    }
    std::vector<std::vector<int>> adj(nv);
    for (const auto& t : lv.edges) {
        if (t.from == t.to) continue;
        if (toward_seeds) adj[t.to].push_back(t.from);   // walk backwards
        else adj[t.from].push_back(t.to);
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[u])
            if (dist[v] > dist[u] + 1) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

ReducedTree expand_side(const Instance& inst, const LayeredGraph& lg, const SideGraph& g,
                        const Leveled& lv, const std::vector<long long>& partner_min,
                        const Options& opt) {
    // a terminal is admissible when it can reach the root within h steps and
    // some partner layer on the other side keeps the relation satisfiable
    std::vector<int> to_root = template_hops(lv, (int)g.nodes.size(), {g.root}, true);
    std::vector<int> admissible;
    for (auto& [key, id] : g.terminal) {
        auto [slot, layer] = key;
        if (to_root[id] > lv.h) continue;
        if (partner_min[slot] == std::numeric_limits<long long>::max()) continue;
        if (layer + partner_min[slot] > lg.cap[slot]) continue;
        admissible.push_back(id);
    }
    std::vector<int> from_term =
        template_hops(lv, (int)g.nodes.size(), admissible, false);

    ReducedTree tr;
    tr.nodes.push_back({-1, g.root, 0, Rat(0), Rat(0), {}});
    for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
        if (tr.nodes[i].depth == lv.h) continue;
        int child_depth = tr.nodes[i].depth + 1;
        auto it = lv.by_to.find(tr.nodes[i].last);
        if (it == lv.by_to.end()) continue;
        for (int tid : it->second) {
            const auto& tpl = lv.edges[tid];
            if (from_term[tpl.from] > lv.h - child_depth) continue;
            tr.nodes.push_back({(int)i, tpl.from, child_depth, tpl.budget, tpl.dmin, tpl.arcs});
            if (tr.nodes.size() > opt.max_tree_nodes)
                throw CapExceeded("junction: reduced tree over cap");
        }
    }
    for (int i = 0; i < (int)tr.nodes.size(); ++i) {
        const auto& nd = tr.nodes[i];
        if (nd.depth != lv.h) continue;
        const auto& side_node = g.nodes[nd.last];
        if (side_node.slot < 0) continue;
        if (std::find(admissible.begin(), admissible.end(), nd.last) == admissible.end())
            continue;
        Rat eta = 0;
        for (int j = i; j > 0; j = tr.nodes[j].parent) eta += tr.nodes[j].delta;
        Rat dem = Rat(inst.demands[lg.pairs[side_node.slot]].demand);
        tr.terms.push_back({side_node.slot, side_node.layer, i, eta, Rat(eta * dem)});
    }
    return tr;
}

// min layer among a side's terminals that can reach the root within h steps
std::vector<long long> reachable_min_layer(const LayeredGraph& lg, const SideGraph& g,
                                           const Leveled& lv) {
    std::vector<int> to_root = template_hops(lv, (int)g.nodes.size(), {g.root}, true);
    std::vector<long long> best(lg.pairs.size(), std::numeric_limits<long long>::max());
    for (auto& [key, id] : g.terminal) {
        auto [slot, layer] = key;
        if (to_root[id] > lv.h) continue;
        best[slot] = std::min(best[slot], layer);
    }
    return best;
}

}  // namespace

ReducedPair build_tuple_trees(const Instance& inst, const LayeredGraph& lg, const Leveled& up,
                              const Leveled& down, const Options& opt) {
    std::vector<long long> min_i = reachable_min_layer(lg, lg.left, up);
    std::vector<long long> min_j = reachable_min_layer(lg, lg.right, down);
    ReducedPair rp;
    rp.up = expand_side(inst, lg, lg.left, up, min_j, opt);
    rp.down = expand_side(inst, lg, lg.right, down, min_i, opt);
    return rp;
}

bool related(const LayeredGraph& lg, int slot, long long i, long long j) {
    return i + j <= lg.cap[slot];
}

LabelCover to_label_cover(const LayeredGraph& lg, const ReducedPair& trees) {
    LabelCover lc;
    lc.trees = &trees;
    lc.lg = &lg;
    lc.sources.assign(lg.pairs.size(), {});
    lc.sinks.assign(lg.pairs.size(), {});
    for (int t = 0; t < (int)trees.up.terms.size(); ++t)
        lc.sources[trees.up.terms[t].slot].push_back(t);
    for (int t = 0; t < (int)trees.down.terms.size(); ++t)
        lc.sinks[trees.down.terms[t].slot].push_back(t);
    return lc;
}

namespace {

// arc ids across both trees: node arcs first, then terminal edges
struct ArcSpace {
    const ReducedPair* rp;
    int up_n, down_n, up_t;
    int total;
    explicit ArcSpace(const ReducedPair& trees) : rp(&trees) {
        up_n = (int)trees.up.nodes.size();
        down_n = (int)trees.down.nodes.size();
        up_t = (int)trees.up.terms.size();
        total = up_n + down_n + up_t + (int)trees.down.terms.size();
    }
    Rat weight(int a) const {
        if (a < up_n) return rp->up.nodes[a].sigma;
        a -= up_n;
        if (a < down_n) return rp->down.nodes[a].sigma;
        a -= down_n;
        if (a < up_t) return rp->up.terms[a].cost;
        return rp->down.terms[a - up_t].cost;
    }
    // full arc set a pair element needs: both root chains + both terminal edges
    std::vector<int> element_arcs(int uterm, int dterm) const {
        std::vector<int> out;
        for (int i = rp->up.terms[uterm].leaf; i > 0; i = rp->up.nodes[i].parent)
            out.push_back(i);
        for (int i = rp->down.terms[dterm].leaf; i > 0; i = rp->down.nodes[i].parent)
            out.push_back(up_n + i);
        out.push_back(up_n + down_n + uterm);
        out.push_back(up_n + down_n + up_t + dterm);
        return out;
    }
};

Rat union_weight(const ArcSpace& sp, const std::set<int>& arcs) {
    Rat w = 0;
    for (int a : arcs) w += sp.weight(a);
    return w;
}

}  // namespace

CoverResult solve_label_cover(const LabelCover& lc, std::uint64_t seed, const Options& opt) {
    const ReducedPair& rp = *lc.trees;
    const LayeredGraph& lg = *lc.lg;
    ArcSpace sp(rp);
    int ns = (int)lg.pairs.size();

    // relation elements per slot
    std::vector<std::vector<std::pair<int, int>>> els(ns);
    bool any = false;
    for (int s = 0; s < ns; ++s) {
        for (int u : lc.sources[s])
            for (int d : lc.sinks[s])
                if (related(lg, s, rp.up.terms[u].layer, rp.down.terms[d].layer)) {
                    els[s].push_back({u, d});
                    any = true;
                }
    }
    if (!any) throw NoCover("junction: no related terminal combination at this root");

    std::optional<CoverResult> best;
    auto consider = [&](const std::map<int, std::pair<int, int>>& choice) {
        if (choice.empty()) return;
        std::set<int> arcs;
        for (auto& [s, el] : choice)
            for (int a : sp.element_arcs(el.first, el.second)) arcs.insert(a);
        CoverResult r;
        r.choice = choice;
        r.tree_cost = union_weight(sp, arcs);
        r.density = Rat(r.tree_cost / (long long)choice.size());
        if (!best || r.density < best->density) best = r;
    };

    // deterministic greedy: repeatedly add the slot whose cheapest element has
    // the smallest marginal weight on top of the current union
    {
        std::set<int> arcs;
        std::map<int, std::pair<int, int>> choice;
        std::vector<char> done(ns, 0);
        for (;;) {
            int pick_s = -1;
            std::pair<int, int> pick_el;
            Rat pick_marg;
            for (int s = 0; s < ns; ++s) {
                if (done[s]) continue;
                for (auto& el : els[s]) {
                    Rat marg = 0;
                    for (int a : sp.element_arcs(el.first, el.second))
                        if (!arcs.count(a)) marg += sp.weight(a);
                    if (pick_s < 0 || marg < pick_marg) {
                        pick_s = s;
                        pick_el = el;
                        pick_marg = marg;
                    }
                }
            }
            if (pick_s < 0) break;
            done[pick_s] = 1;
            choice[pick_s] = pick_el;
            for (int a : sp.element_arcs(pick_el.first, pick_el.second)) arcs.insert(a);
            consider(choice);
        }
    }

    // LP relaxation: min total arc weight, one unit of coverage spread over the
    // pairs, flow to the root on each side through arc capacities x
    std::vector<int> used_arcs;
    {
        std::set<int> ua;
        for (int s = 0; s < ns; ++s)
            for (auto& el : els[s])
                for (int a : sp.element_arcs(el.first, el.second)) ua.insert(a);
        used_arcs.assign(ua.begin(), ua.end());
    }
    std::map<int, int> arc_var;
    for (int i = 0; i < (int)used_arcs.size(); ++i) arc_var[used_arcs[i]] = i;

    // staircase blocks per slot: one per distinct achievable source layer
    struct Block {
        int slot;
        std::vector<int> ups, downs;  // term indices
    };
    std::vector<Block> blocks;
    for (int s = 0; s < ns; ++s) {
        if (els[s].empty()) continue;
        std::set<long long> is;
        for (auto& el : els[s]) is.insert(rp.up.terms[el.first].layer);
        for (long long a : is) {
            Block b;
            b.slot = s;
            for (int u : lc.sources[s])
                if (rp.up.terms[u].layer <= a) b.ups.push_back(u);
            for (int d : lc.sinks[s])
                if (rp.down.terms[d].layer <= lg.cap[s] - a) b.downs.push_back(d);
            if (!b.ups.empty() && !b.downs.empty()) blocks.push_back(std::move(b));
        }
    }

    int nx = (int)used_arcs.size();
    int nz = (int)blocks.size();
    std::size_t nf = 0;
    for (auto& b : blocks) nf += b.ups.size() + b.downs.size();
    std::size_t nvars = (std::size_t)nx + nz + nf;

    bool have_lp = false;
    std::vector<double> lpx;
    if (nz > 0 && nvars <= opt.max_lp_vars) {
        lp::LpProblem<double> prob((int)nvars);
        std::vector<double> objv(nvars, 0.0);
        for (int i = 0; i < nx; ++i) objv[i] = -to_double(sp.weight(used_arcs[i]));
        prob.set_objective(objv);
        auto zvar = [&](int b) { return nx + b; };
        std::vector<int> f_off(blocks.size() + 1, 0);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            f_off[b + 1] = f_off[b] + (int)(blocks[b].ups.size() + blocks[b].downs.size());
        auto fvar = [&](int b, bool down_side, int idx) {
            return nx + nz + f_off[b] + (down_side ? (int)blocks[b].ups.size() : 0) + idx;
        };

        {
            std::vector<double> row(nvars, 0.0);
            for (int b = 0; b < nz; ++b) row[zvar(b)] = 1.0;
            prob.add_eq(row, 1.0);
        }
        for (int s = 0; s < ns; ++s) {
            std::vector<double> row(nvars, 0.0);
            bool anyb = false;
            for (int b = 0; b < nz; ++b)
                if (blocks[b].slot == s) {
                    row[zvar(b)] = 1.0;
                    anyb = true;
                }
            if (anyb) prob.add_le(row, 1.0);
        }
        for (int b = 0; b < nz; ++b) {
            for (int side = 0; side < 2; ++side) {
                std::vector<double> row(nvars, 0.0);
                row[zvar(b)] = 1.0;
                int cnt = side ? (int)blocks[b].downs.size() : (int)blocks[b].ups.size();
                for (int i = 0; i < cnt; ++i) row[fvar(b, side, i)] = -1.0;
                prob.add_le(row, 0.0);
            }
        }
        // per (slot, arc) capacity: the pair's total flow through an arc fits in x
        std::map<std::pair<int, int>, std::vector<int>> cap_rows;  // (slot, arcvar) -> fvars
        for (int b = 0; b < nz; ++b) {
            int s = blocks[b].slot;
            for (int i = 0; i < (int)blocks[b].ups.size(); ++i) {
                int te = blocks[b].ups[i];
                for (int j = rp.up.terms[te].leaf; j > 0; j = rp.up.nodes[j].parent)
                    cap_rows[{s, arc_var.at(j)}].push_back(fvar(b, 0, i));
                cap_rows[{s, arc_var.at(sp.up_n + sp.down_n + te)}].push_back(fvar(b, 0, i));
            }
            for (int i = 0; i < (int)blocks[b].downs.size(); ++i) {
                int te = blocks[b].downs[i];
                for (int j = rp.down.terms[te].leaf; j > 0; j = rp.down.nodes[j].parent)
                    cap_rows[{s, arc_var.at(sp.up_n + j)}].push_back(fvar(b, 1, i));
                cap_rows[{s, arc_var.at(sp.up_n + sp.down_n + sp.up_t + te)}].push_back(
                    fvar(b, 1, i));
            }
        }
        for (auto& [key, fv] : cap_rows) {
            std::vector<double> row(nvars, 0.0);
            for (int v : fv) row[v] += 1.0;
            row[key.second] -= 1.0;
            prob.add_le(row, 0.0);
        }
        auto res = prob.solve();
        if (res.status == lp::LpStatus::Optimal) {
            have_lp = true;
            lpx = res.x;
        }
    }

    // randomized tree rounding on the LP marks, best density over trials
    if (have_lp) {
        std::mt19937_64 rng = gen::substream(seed, "label-cover-round");
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto xval = [&](int arc) {
            auto it = arc_var.find(arc);
            return it == arc_var.end() ? 0.0 : lpx[it->second];
        };
        for (int trial = 0; trial < opt.trials; ++trial) {
            double scale = double(1 << (trial % 4));
            auto eff = [&](int arc) { return std::min(1.0, scale * xval(arc)); };
            // conditional top-down marking per tree; node order has parents first
            auto mark_tree = [&](const ReducedTree& tr, int offset) {
                std::vector<char> kept(tr.nodes.size(), 0);
                kept[0] = 1;
                for (int i = 1; i < (int)tr.nodes.size(); ++i) {
                    if (!kept[tr.nodes[i].parent]) continue;
                    double pp = tr.nodes[i].parent == 0 ? 1.0 : eff(offset + tr.nodes[i].parent);
                    double pe = eff(offset + i);
                    if (pp > 0 && unif(rng) < std::min(1.0, pe / pp)) kept[i] = 1;
                }
                return kept;
            };
            std::vector<char> kup = mark_tree(rp.up, 0);
            std::vector<char> kdown = mark_tree(rp.down, sp.up_n);
            // one coin per terminal edge per trial, conditioned on its leaf
            auto mark_terms = [&](const ReducedTree& tr, const std::vector<char>& kn,
                                  int node_off, int term_off) {
                std::vector<char> kept(tr.terms.size(), 0);
                for (int t = 0; t < (int)tr.terms.size(); ++t) {
                    int leaf = tr.terms[t].leaf;
                    if (!kn[leaf]) continue;
                    double pp = leaf == 0 ? 1.0 : eff(node_off + leaf);
                    double pe = eff(term_off + t);
                    if (pp > 0 && unif(rng) < std::min(1.0, pe / pp)) kept[t] = 1;
                }
                return kept;
            };
            std::vector<char> tup = mark_terms(rp.up, kup, 0, sp.up_n + sp.down_n);
            std::vector<char> tdown =
                mark_terms(rp.down, kdown, sp.up_n, sp.up_n + sp.down_n + sp.up_t);
            std::map<int, std::pair<int, int>> choice;
            for (int s = 0; s < ns; ++s) {
                std::optional<Rat> bc;
                for (auto& el : els[s]) {
                    if (!tup[el.first] || !tdown[el.second]) continue;
                    Rat c = 0;
                    for (int a : sp.element_arcs(el.first, el.second)) c += sp.weight(a);
                    if (!bc || c < *bc) {
                        bc = c;
                        choice[s] = el;
                    }
                }
            }
            consider(choice);
        }
    }

    return *best;
}

std::map<int, std::vector<int>> extract_paths(const LayeredGraph& lg, const ReducedPair& trees,
                                              const CoverResult& cover) {
    std::map<int, std::vector<int>> routes;
    for (auto& [slot, el] : cover.choice) {
        auto side_edges = [&](const ReducedTree& tr, const SideGraph& g, int term) {
            std::vector<int> arcs;
            for (int i = tr.terms[term].leaf; i > 0; i = tr.nodes[i].parent)
                arcs.insert(arcs.end(), tr.nodes[i].arcs.begin(), tr.nodes[i].arcs.end());
            std::vector<int> edges;
            for (int a : arcs)
                if (g.arcs[a].orig >= 0) edges.push_back(g.arcs[a].orig);
            if (g.rev) std::reverse(edges.begin(), edges.end());
            return edges;
        };
        std::vector<int> route = side_edges(trees.up, lg.left, el.first);
        std::vector<int> tail = side_edges(trees.down, lg.right, el.second);
        route.insert(route.end(), tail.begin(), tail.end());
        routes[lg.pairs[slot]] = remove_cycles(*lg.inst, route);
    }
    return routes;
}

JunctionResult min_density_junction_tree(const Instance& inst, const std::vector<int>& pairs,
                                         const Rat& theta, std::uint64_t seed,
                                         const Options& opt) {
    ScaledGraph sg = scale_graph(inst, theta);
    std::optional<JunctionResult> best;
    int r0 = opt.root_override >= 0 ? opt.root_override : 0;
    int r1 = opt.root_override >= 0 ? opt.root_override + 1 : inst.n;
    for (int r = r0; r < r1; ++r) {
        try {
            LayeredGraph lg = build_layered(inst, sg, pairs, r, opt);
            Leveled up = height_reduce(inst, lg.left, opt.h, opt);
            Leveled down = height_reduce(inst, lg.right, opt.h, opt);
            ReducedPair rp = build_tuple_trees(inst, lg, up, down, opt);
            LabelCover lc = to_label_cover(lg, rp);
            CoverResult cov =
                solve_label_cover(lc, seed + (std::uint64_t)r * 0x9e3779b97f4a7c15ull, opt);
            auto routes = extract_paths(lg, rp, cov);
            if (routes.empty()) continue;
            std::set<int> bought;
            Rat cost = 0;
            for (auto& [p, route] : routes) {
                cost += path_delta(inst, route) * inst.demands[p].demand;
                for (int e : route) bought.insert(e);
            }
            for (int e : bought) cost += inst.edges[e].sigma;
            JunctionResult jr;
            jr.root = r;
            jr.routes = routes;
            jr.cost = cost;
            jr.density = Rat(cost / (long long)routes.size());
            if (!best || jr.density < best->density) best = jr;
        } catch (const CapExceeded&) {
        } catch (const NoCover&) {
        }
    }
    if (!best) throw NoCover("junction: no pair resolvable at any root");
    return *best;
}

}  // namespace bbs::junction
