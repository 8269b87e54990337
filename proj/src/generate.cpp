#include "bbs/generate.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "bbs/core.hpp"

namespace bbs::gen {

std::mt19937_64 substream(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the substream name
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::seed_seq seq{seed, h};
    return std::mt19937_64(seq);
}

namespace {

using Rng = std::mt19937_64;

int rnd(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool add_edge(Instance& inst, std::set<std::pair<int, int>>& seen, int tail, int head,
              const Rat& len, const Rat& sigma, const Rat& delta) {
    if (tail == head || !seen.insert({tail, head}).second) return false;
    inst.edges.push_back({tail, head, len, sigma, delta});
    return true;
}

bool has_negative_cycle(const Instance& inst) {
    std::vector<Rat> dist(inst.n, Rat(0));
    for (int round = 0; round < inst.n; ++round) {
        bool any = false;
        for (const Edge& e : inst.edges) {
            Rat cand = dist[e.tail] + e.length;
            if (cand < dist[e.head]) {
                dist[e.head] = cand;
                any = true;
            }
        }
        if (!any) return false;
        if (round == inst.n - 1) return true;
    }
    return false;
}

// pick k distinct reachable (s,t) pairs and budget them at shortest + U[0,slack]
void add_pairs(Instance& inst, const GenParams& p, Rng& rng) {
    std::vector<std::pair<int, int>> cand;
    for (int s = 0; s < inst.n; ++s) {
        auto dist = shortest_lengths_from(inst, s);
        for (int t = 0; t < inst.n; ++t)
            if (t != s && dist[t]) cand.push_back({s, t});
    }
    std::shuffle(cand.begin(), cand.end(), rng);
    for (int i = 0; i < (int)cand.size() && (int)inst.demands.size() < p.k; ++i) {
        auto [s, t] = cand[i];
        Rat sp = *shortest_lengths_from(inst, s)[t];
        Rat budget = sp + rnd(rng, 0, p.budget_slack);
        if (budget == 0) budget += 1;
        long long dem = p.max_demand <= 1 ? 1 : rnd(rng, 1, (int)p.max_demand);
        inst.demands.push_back({s, t, dem, budget});
    }
}

Generated gen_random(const GenParams& p, Rng& rng, bool negative) {
    for (int attempt = 0; attempt < 300; ++attempt) {
        Instance inst;
        inst.n = p.n;
        std::set<std::pair<int, int>> seen;
        int target = std::min(p.n * (p.n - 1), 2 * p.n + p.extra_edges);
        int len_lo = negative ? -2 : p.len_lo;
        for (int tries = 0; (int)inst.edges.size() < target && tries < 20 * target; ++tries)
            add_edge(inst, seen, rnd(rng, 0, p.n - 1), rnd(rng, 0, p.n - 1),
                     rnd(rng, len_lo, p.len_hi), rnd(rng, 0, p.cost_hi), rnd(rng, 0, p.cost_hi));
        if (negative) {
            // per-metric cycle repair: re-roll offending lengths upward
            for (int fix = 0; fix < 50 && has_negative_cycle(inst); ++fix)
                for (Edge& e : inst.edges)
                    if (e.length < 0 && rnd(rng, 0, 1)) e.length = rnd(rng, 0, p.len_hi);
            if (has_negative_cycle(inst)) continue;
            bool any_neg = false;
            for (const Edge& e : inst.edges) any_neg |= e.length < 0;
            if (!any_neg) continue;
        }
        add_pairs(inst, p, rng);
        if ((int)inst.demands.size() < p.k) continue;
        if (!validate_instance(inst).ok()) continue;
        Generated g;
        g.inst = inst;
        g.meta["kind"] = negative ? "negative" : "random";
        return g;
    }
    throw std::runtime_error("generate: could not build a valid instance");
}

Generated gen_hub(const GenParams& p, Rng& rng) {
    // sources [0,k), sinks [k,2k), hubs [2k,n); every pair routes via every hub,
    // so each pair's cheap feasible paths span all hubs (thick by construction)
    if (p.n < 2 * p.k + 2) throw std::invalid_argument("generate: hub needs n >= 2k+2");
    Instance inst;
    inst.n = p.n;
    std::set<std::pair<int, int>> seen;
    for (int s = 0; s < p.k; ++s)
        for (int h = 2 * p.k; h < p.n; ++h)
            add_edge(inst, seen, s, h, rnd(rng, 1, 2), rnd(rng, 0, 2), rnd(rng, 0, 2));
    for (int h = 2 * p.k; h < p.n; ++h)
        for (int t = p.k; t < 2 * p.k; ++t)
            add_edge(inst, seen, h, t, rnd(rng, 1, 2), rnd(rng, 0, 2), rnd(rng, 0, 2));
    for (int tries = 0; tries < 4 * p.extra_edges; ++tries)
        add_edge(inst, seen, rnd(rng, 0, p.n - 1), rnd(rng, 0, p.n - 1), rnd(rng, 1, p.len_hi),
                 rnd(rng, 0, p.cost_hi), rnd(rng, 0, p.cost_hi));
    for (int i = 0; i < p.k; ++i) {
        Rat sp = *shortest_lengths_from(inst, i)[p.k + i];
        long long dem = p.max_demand <= 1 ? 1 : rnd(rng, 1, (int)p.max_demand);
        inst.demands.push_back({i, p.k + i, dem, Rat(4) + rnd(rng, 0, p.budget_slack)});
        (void)sp;
    }
    if (!validate_instance(inst).ok()) throw std::runtime_error("generate: hub instance invalid");
    Generated g;
    g.inst = inst;
    g.meta["kind"] = "hub";
    g.meta["hub_lo"] = std::to_string(2 * p.k);
    return g;
}

Generated gen_backbone(const GenParams& p, Rng& rng) {
    // shared cheap-sigma backbone chain; each pair enters at the head and leaves at
    // the tail through private edges; a private expensive direct edge also exists
    int k = p.k;
    int chain = std::max(2, p.n - 2 * k - 1);
    if (p.n < 2 * k + 3) throw std::invalid_argument("generate: backbone needs n >= 2k+3");
    Instance inst;
    inst.n = p.n;
    std::set<std::pair<int, int>> seen;
    int b0 = 2 * k;  // chain vertices [2k, 2k+chain)
    for (int i = 0; i + 1 < chain; ++i)
        add_edge(inst, seen, b0 + i, b0 + i + 1, 1, 1, rnd(rng, 0, 1));
    for (int i = 0; i < k; ++i) {
        add_edge(inst, seen, i, b0, 1, rnd(rng, 0, 1), rnd(rng, 0, 1));
        add_edge(inst, seen, b0 + chain - 1, k + i, 1, rnd(rng, 0, 1), rnd(rng, 0, 1));
        add_edge(inst, seen, i, k + i, chain + 1, Rat(3 * (chain + 1)), rnd(rng, 0, 1));
        inst.demands.push_back({i, k + i, 1, Rat(chain + 1 + rnd(rng, 0, p.budget_slack))});
    }
    for (int tries = 0; tries < 2 * p.extra_edges; ++tries)
        add_edge(inst, seen, rnd(rng, 0, p.n - 1), rnd(rng, 0, p.n - 1), rnd(rng, 1, p.len_hi),
                 rnd(rng, 2, p.cost_hi + 2), rnd(rng, 0, p.cost_hi));
    if (!validate_instance(inst).ok())
        throw std::runtime_error("generate: backbone instance invalid");
    Generated g;
    g.inst = inst;
    g.meta["kind"] = "backbone";
    g.meta["backbone_len"] = std::to_string(chain + 1);
    return g;
}

Generated gen_single_source(const GenParams& p, Rng& rng) {
    for (int attempt = 0; attempt < 300; ++attempt) {
        Instance inst;
        inst.n = p.n;
        std::set<std::pair<int, int>> seen;
        // spanning out-tree from 0 keeps everything reachable
        for (int v = 1; v < p.n; ++v)
            add_edge(inst, seen, rnd(rng, 0, v - 1), v, rnd(rng, p.len_lo, p.len_hi),
                     rnd(rng, 0, p.cost_hi), rnd(rng, 0, p.cost_hi));
        for (int tries = 0; tries < 4 * p.extra_edges; ++tries)
            add_edge(inst, seen, rnd(rng, 0, p.n - 1), rnd(rng, 0, p.n - 1),
                     rnd(rng, p.len_lo, p.len_hi), rnd(rng, 0, p.cost_hi), rnd(rng, 0, p.cost_hi));
        std::vector<int> sinks;
        for (int v = 1; v < p.n; ++v) sinks.push_back(v);
        std::shuffle(sinks.begin(), sinks.end(), rng);
        auto dist = shortest_lengths_from(inst, 0);
        for (int i = 0; i < p.k && i < (int)sinks.size(); ++i) {
            long long dem = p.max_demand <= 1 ? 1 : rnd(rng, 1, (int)p.max_demand);
            inst.demands.push_back(
                {0, sinks[i], dem, *dist[sinks[i]] + rnd(rng, 0, p.budget_slack)});
        }
        if ((int)inst.demands.size() < p.k) continue;
        if (!validate_instance(inst).ok()) continue;
        Generated g;
        g.inst = inst;
        g.meta["kind"] = "single_source";
        return g;
    }
    throw std::runtime_error("generate: could not build a valid single-source instance");
}

}  // namespace

Generated generate(const std::string& kind, const GenParams& p, std::uint64_t seed) {
    Rng rng = substream(seed, "gen:" + kind);
    Generated g;
    if (kind == "random") g = gen_random(p, rng, false);
    else if (kind == "negative") g = gen_random(p, rng, true);
    else if (kind == "hub") g = gen_hub(p, rng);
    else if (kind == "backbone") g = gen_backbone(p, rng);
    else if (kind == "single_source") g = gen_single_source(p, rng);
    else throw std::invalid_argument("generate: unknown kind " + kind);
    g.meta["seed"] = std::to_string(seed);
    g.meta["n"] = std::to_string(p.n);
    g.meta["k"] = std::to_string(p.k);
    return g;
}

}  // namespace bbs::gen
