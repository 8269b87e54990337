#include "bbs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"
#include "bbs/lpflow.hpp"
#include "bbs/rcsp.hpp"

namespace bbs::solvers {

namespace {

constexpr std::uint64_t kSeedMix = 0x9e3779b97f4a7c15ull;

void require_integral_lengths(const Instance& inst) {
    for (const Edge& e : inst.edges)
        if (!is_integer(e.length))
            throw std::invalid_argument("solvers: integral lengths required");
}

int tree_height(const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("solvers: epsilon must be positive");
    return (int)std::max<long long>(2, to_ll(rat_ceil(Rat(1) / eps)));
}

junction::Options jopt_for(const SolverConfig& cfg) {
    junction::Options jo = cfg.jopt;
    jo.h = tree_height(cfg.epsilon);
    return jo;
}

// largest tolerance (capped) under which every integral route length that fits
// the relaxed budget also fits the unrelaxed one
Rat strict_theta(const Instance& inst, const Rat& cap) {
    Rat best = cap;
    for (const Demand& d : inst.demands) {
        Rat gap = Rat(rat_floor(d.dist_budget)) + 1 - d.dist_budget;
        Rat th = gap / (2 * rat_abs(d.dist_budget));
        if (th < best) best = th;
    }
    if (best <= 0) throw std::logic_error("solvers: strict tolerance collapsed");
    return best;
}

// objective increment: unpaid upfront costs plus demand-weighted pay-per-use
Rat commit_routes(const Instance& inst, const std::map<int, std::vector<int>>& add,
                  std::vector<char>& bought, std::map<int, std::vector<int>>& routes) {
    Rat inc = 0;
    for (const auto& [p, r] : add) {
        routes[p] = r;
        inc += path_delta(inst, r) * Rat(inst.demands[p].demand);
        for (int e : r)
            if (!bought[e]) {
                bought[e] = 1;
                inc += inst.edges[e].sigma;
            }
    }
    return inc;
}

void greedy_density(const Instance& inst, std::vector<int> remaining, const Rat& theta,
                    const junction::Options& jo, const char* stage, std::uint64_t seed,
                    int max_iters, std::vector<char>& bought,
                    std::map<int, std::vector<int>>& routes, std::vector<StageRecord>& stages) {
    int iter = 0;
    while (!remaining.empty()) {
        if (++iter > max_iters) throw std::runtime_error("solvers: density loop stalled");
        auto jr = junction::min_density_junction_tree(inst, remaining, theta,
                                                      seed + 101 * (std::uint64_t)iter, jo);
        if (jr.routes.empty()) throw junction::NoCover("solvers: empty junction tree");
        Rat inc = commit_routes(inst, jr.routes, bought, routes);
        stages.push_back(
            {stage, (int)jr.routes.size(), inc, Rat(inc / (long long)jr.routes.size())});
        std::erase_if(remaining, [&](int p) { return jr.routes.count(p) > 0; });
    }
}

}  // namespace

Rat tau_lower_bound(const Instance& inst) {
    require_integral_lengths(inst);
    if (inst.demands.empty()) throw std::invalid_argument("solvers: no demands");
    rcsp::RcspQuery q;
    q.n = inst.n;
    for (const Edge& e : inst.edges) q.edges.push_back({e.tail, e.head, e.sigma, {e.length}});
    Rat best = 0;
    for (const Demand& d : inst.demands) {
        BigInt b = rat_floor(d.dist_budget);  // integral lengths: <= Dis iff <= floor(Dis)
        if (b == 0) throw std::invalid_argument("solvers: distance budget rounds to zero");
        for (size_t i = 0; i < inst.edges.size(); ++i)
            q.edges[i].cost = inst.edges[i].sigma + inst.edges[i].delta * Rat(d.demand);
        q.source = d.source;
        q.sink = d.sink;
        q.budgets = {Rat(b)};
        auto r = rcsp::solve_exact_integer(q);
        if (r.status != rcsp::RcspStatus::Ok)
            throw std::invalid_argument("solvers: pair has no strictly feasible route");
        if (r.cost > best) best = r.cost;
    }
    return best > 0 ? best : Rat(1);
}

std::pair<Rat, SolveOutput> guess_tau(
    const Rat& tau0, const std::function<std::optional<SolveOutput>(const Rat&)>& attempt,
    int max_doublings) {
    if (tau0 <= 0) throw std::invalid_argument("solvers: need a positive starting guess");
    Rat tau = tau0;
    for (int i = 0; i <= max_doublings; ++i, tau *= 2)
        if (auto r = attempt(tau)) return {tau, std::move(*r)};
    throw std::runtime_error("solvers: no budget guess succeeded");
}

std::map<int, std::vector<int>> resolve_thick(const Instance& inst, const Rat& tau,
                                              const SolverConfig& cfg) {
    require_integral_lengths(inst);
    int n = inst.n;
    long long k = (long long)inst.demands.size();
    if (k == 0) return {};
    for (const Demand& d : inst.demands)
        if (d.demand != 1)
            throw std::invalid_argument("solvers: sampling stage needs unit demands");
    Rat p45 = lpflow::approx_pow45(n);
    Rat l1 = tau / p45;
    Rat l2 = p45 * tau / k;
    if (l2 <= 0) return {};
    Rat maxlen = 0;
    for (const Edge& e : inst.edges) maxlen = std::max(maxlen, e.length);
    Rat lq = Rat(n) * maxlen;  // any cycle-free length fits under this cap
    if (lq <= 0) return {};

    int m = std::max(1, (int)std::ceil(3.0 * std::pow((double)n, 0.6) * std::log((double)n)));
    auto rng = gen::substream(cfg.seed, "thick-samples");
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<int> drawn;
    for (int i = 0; i < m; ++i) drawn.insert(pick(rng));
    std::vector<int> samples(drawn.begin(), drawn.end());

    rcsp::RcspQuery qf, qb;
    qf.n = qb.n = n;
    for (const Edge& e : inst.edges) {
        qf.edges.push_back({e.tail, e.head, e.sigma, {e.length, e.delta}});
        qb.edges.push_back({e.head, e.tail, e.sigma, {e.length, e.delta}});
    }
    qf.budgets = qb.budgets = {lq, l2};
    auto sqf = rcsp::scale_one_rational(qf, cfg.zeta);
    auto sqb = rcsp::scale_one_rational(qb, cfg.zeta);
    auto patsf = rcsp::enumerate_valid_patterns(sqf);
    auto patsb = rcsp::enumerate_valid_patterns(sqb);

    // one DP per distinct terminal; the reversed side answers sample ~> sink
    std::map<int, rcsp::PatternTable> tf, tb;
    for (const Demand& d : inst.demands) {
        if (!tf.count(d.source)) tf.emplace(d.source, rcsp::PatternTable(sqf, d.source));
        if (!tb.count(d.sink)) tb.emplace(d.sink, rcsp::PatternTable(sqb, d.sink));
    }

    struct Hit {
        Rat len, sig;
        std::size_t flat = 0;
        bool ok = false;
    };
    // per sample: shortest arrival whose upfront cost clears the threshold
    auto scan = [&](const rcsp::ScaledQuery& sq, const rcsp::PatternTable& tab,
                    const std::vector<std::vector<long long>>& pats) {
        std::map<int, Hit> best;
        for (const auto& pat : pats) {
            std::size_t f = tab.flat(pat);
            Rat len = Rat(pat[0]) * sq.delta[0];
            for (int u : samples) {
                if (!tab.finite(f, u)) continue;
                Rat sg = tab.cost(f, u);
                if (sg > l1) continue;
                Hit& h = best[u];
                if (!h.ok || len < h.len || (len == h.len && sg < h.sig)) h = {len, sg, f, true};
            }
        }
        return best;
    };
    std::map<int, std::map<int, Hit>> fwd, bwd;
    for (const auto& [s, tab] : tf) fwd[s] = scan(sqf, tab, patsf);
    for (const auto& [t, tab] : tb) bwd[t] = scan(sqb, tab, patsb);

    std::map<int, std::vector<int>> routes;
    Rat delta_cap = 2 * (1 + cfg.zeta) * l2;
    for (int p = 0; p < (int)k; ++p) {
        const Demand& d = inst.demands[p];
        const auto& fs = fwd[d.source];
        const auto& bs = bwd[d.sink];
        int bu = -1;
        Rat bsig;
        for (int u : samples) {
            auto i1 = fs.find(u);
            auto i2 = bs.find(u);
            if (i1 == fs.end() || i2 == bs.end()) continue;
            if (i1->second.len + i2->second.len > d.dist_budget) continue;
            Rat tot = i1->second.sig + i2->second.sig;
            if (bu < 0 || tot < bsig) {
                bu = u;
                bsig = tot;
            }
        }
        if (bu < 0) continue;
        std::vector<int> route = tf.at(d.source).backtrack(fs.at(bu).flat, bu);
        auto half = tb.at(d.sink).backtrack(bs.at(bu).flat, bu);  // sink-side ids, root first
        route.insert(route.end(), half.rbegin(), half.rend());
        route = remove_cycles(inst, route);
        if (path_length(inst, route) > d.dist_budget || path_sigma(inst, route) > 2 * l1 ||
            path_delta(inst, route) > delta_cap)
            throw std::logic_error("solvers: joined route broke its guarantees");
        routes[p] = route;
    }
    return routes;
}

SolveOutput solve_k(const Instance& inst, const SolverConfig& cfg) {
    if (inst.demands.empty()) throw std::invalid_argument("solvers: no demands");
    std::vector<int> all(inst.demands.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<char> bought(inst.edges.size(), 0);
    SolveOutput out;
    greedy_density(inst, all, cfg.theta, jopt_for(cfg), "junction", cfg.seed, cfg.max_loop_iters,
                   bought, out.solution.routes, out.report.stages);
    out.solution.theta = cfg.theta;
    return out;
}

SolveOutput solve_single_source(const Instance& inst, const SolverConfig& cfg) {
    if (inst.demands.empty()) throw std::invalid_argument("solvers: no demands");
    int src = inst.demands[0].source;
    for (const Demand& d : inst.demands)
        if (d.source != src) throw std::invalid_argument("solvers: demands must share a source");
    std::vector<int> all(inst.demands.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<char> bought(inst.edges.size(), 0);
    junction::Options jo = jopt_for(cfg);
    jo.root_override = src;
    SolveOutput out;
    greedy_density(inst, all, cfg.theta, jo, "junction", cfg.seed, cfg.max_loop_iters, bought,
                   out.solution.routes, out.report.stages);
    out.solution.theta = cfg.theta;
    return out;
}

SolveOutput solve_n45(const Instance& inst, const SolverConfig& cfg) {
    require_integral_lengths(inst);
    if (inst.demands.empty()) throw std::invalid_argument("solvers: no demands");

    bool unit = true;
    for (const Demand& d : inst.demands) unit = unit && d.demand == 1;
    if (!unit) {
        auto split = split_demands(inst);
        std::vector<RouteSolution> sols;
        SolveOutput out;
        for (size_t i = 0; i < split.parts.size(); ++i) {
            SolverConfig sub = cfg;
            sub.seed = cfg.seed + kSeedMix * (std::uint64_t)(i + 1);
            SolveOutput part = solve_n45(split.parts[i].instance, sub);
            sols.push_back(part.solution);
            for (auto& st : part.report.stages) out.report.stages.push_back(st);
            out.report.tau = std::max(out.report.tau, part.report.tau);
        }
        out.solution = split.merge(sols);
        out.solution.theta = 0;
        return out;
    }

    int n = inst.n;
    long long k = (long long)inst.demands.size();
    Rat th = strict_theta(inst, cfg.theta);
    junction::Options jo = jopt_for(cfg);
    long long thr = cfg.kb_threshold >= 0
                        ? cfg.kb_threshold
                        : (long long)std::ceil(4.0 * std::pow((double)n, 1.2));

    auto attempt = [&](const Rat& tau) -> std::optional<SolveOutput> {
        std::vector<char> bought(inst.edges.size(), 0);
        std::map<int, std::vector<int>> routes;
        std::vector<StageRecord> stages;

        auto thick = resolve_thick(inst, tau, cfg);
        if (!thick.empty()) {
            Rat inc = commit_routes(inst, thick, bought, routes);
            stages.push_back(
                {"thick", (int)thick.size(), inc, Rat(inc / (long long)thick.size())});
        }
        std::vector<int> remaining;
        for (int p = 0; p < (int)k; ++p)
            if (!routes.count(p)) remaining.push_back(p);

        int iters = 0;
        while (!remaining.empty()) {
            if (++iters > cfg.max_loop_iters) return std::nullopt;
            std::uint64_t it_seed = cfg.seed + kSeedMix * (std::uint64_t)iters;
            if ((long long)remaining.size() <= thr) {
                try {
                    greedy_density(inst, remaining, th, jo, "fallback-k", it_seed,
                                   cfg.max_loop_iters, bought, routes, stages);
                } catch (const junction::NoCover&) {
                    return std::nullopt;
                }
                remaining.clear();
                break;
            }
            std::optional<junction::JunctionResult> p2;
            try {
                p2 = junction::min_density_junction_tree(inst, remaining, th, it_seed, jo);
            } catch (const junction::NoCover&) {
            }
            std::optional<std::pair<std::map<int, std::vector<int>>, Rat>> p3;
            try {
                auto lp = lpflow::solve_thin_lp(inst, remaining, tau, cfg.zeta);
                auto pr = lpflow::prune(inst, lp);
                auto rr = lpflow::round(inst, pr, it_seed ^ kSeedMix);
                if (!rr.paths.empty()) {
                    Rat c = 0;
                    std::set<int> es;
                    for (const auto& [p, r] : rr.paths) {
                        c += path_delta(inst, r) * Rat(inst.demands[p].demand);
                        es.insert(r.begin(), r.end());
                    }
                    for (int e : es) c += inst.edges[e].sigma;
                    p3 = std::make_pair(rr.paths, Rat(c / (long long)rr.paths.size()));
                }
            } catch (const lpflow::LpInfeasible&) {
            }
            // standalone densities decide; committed cost is incremental
            const std::map<int, std::vector<int>>* chosen = nullptr;
            const char* name = nullptr;
            if (p2 && (!p3 || p2->density <= p3->second)) {
                chosen = &p2->routes;
                name = "junction";
            } else if (p3) {
                chosen = &p3->first;
                name = "lp-round";
            }
            if (!chosen || chosen->empty()) return std::nullopt;
            Rat inc = commit_routes(inst, *chosen, bought, routes);
            stages.push_back(
                {name, (int)chosen->size(), inc, Rat(inc / (long long)chosen->size())});
            std::erase_if(remaining, [&](int p) { return routes.count(p) > 0; });
        }
        for (const auto& [p, r] : routes)
            if (!is_theta_feasible(inst, p, r, Rat(0)))
                throw std::logic_error("solvers: route misses its strict budget");
        SolveOutput res;
        res.solution = {routes, Rat(0)};
        res.report = {tau, stages};
        return res;
    };

    if (cfg.tau) {
        auto r = attempt(*cfg.tau);
        if (!r) throw std::runtime_error("solvers: fixed budget guess failed");
        return *r;
    }
    auto [tau, out] = guess_tau(tau_lower_bound(inst), attempt, cfg.max_tau_doublings);
    (void)tau;
    return out;
}

}  // namespace bbs::solvers
