#include "bbs/core.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bbs {

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport rep;
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < (int)inst.edges.size(); ++i) {
        const Edge& e = inst.edges[i];
        if (e.tail < 0 || e.tail >= inst.n || e.head < 0 || e.head >= inst.n) {
            rep.violations.push_back({ViolationKind::BadVertexId, i, "edge endpoint out of range"});
            continue;
        }
        if (e.tail == e.head)
            rep.violations.push_back({ViolationKind::SelfLoop, i, "self-loop"});
        if (!seen.insert({e.tail, e.head}).second)
            rep.violations.push_back({ViolationKind::DuplicateEdge, i, "duplicate (tail,head)"});
        if (e.sigma < 0 || e.delta < 0)
            rep.violations.push_back({ViolationKind::BadEdgeCost, i, "negative sigma or delta"});
    }
    for (int i = 0; i < (int)inst.demands.size(); ++i) {
        const Demand& d = inst.demands[i];
        if (d.source < 0 || d.source >= inst.n || d.sink < 0 || d.sink >= inst.n) {
            rep.violations.push_back({ViolationKind::BadVertexId, i, "demand endpoint out of range"});
            continue;
        }
        if (d.demand <= 0 || d.source == d.sink) {
            rep.violations.push_back({ViolationKind::BadDemand, i, "bad demand pair"});
            continue;
        }
        if (d.dist_budget == 0)
            rep.violations.push_back({ViolationKind::ZeroBudget, i, "zero distance budget"});
    }
    if (!rep.ok()) return rep;

    // negative-length-cycle sweep: n rounds of relaxation from a virtual super-source
    {
        std::vector<Rat> dist(inst.n, Rat(0));
        int relaxed_round = -1;
        for (int round = 0; round < inst.n; ++round) {
            bool any = false;
            for (const Edge& e : inst.edges) {
                Rat cand = dist[e.tail] + e.length;
                if (cand < dist[e.head]) {
                    dist[e.head] = cand;
                    any = true;
                }
            }
            if (any) relaxed_round = round;
            if (!any) break;
        }
        if (relaxed_round == inst.n - 1) {
            // a relaxation in round n certifies a negative cycle
            rep.violations.push_back({ViolationKind::NegativeCycle, -1, "negative-length cycle"});
            return rep;
        }
    }

    for (int i = 0; i < (int)inst.demands.size(); ++i) {
        const Demand& d = inst.demands[i];
        auto dist = shortest_lengths_from(inst, d.source);
        if (!dist[d.sink] || *dist[d.sink] > d.dist_budget)
            rep.violations.push_back(
                {ViolationKind::InfeasiblePair, i, "no path within distance budget"});
    }
    return rep;
}

std::vector<std::optional<Rat>> shortest_lengths_from(const Instance& inst, int src) {
    std::vector<std::optional<Rat>> dist(inst.n);
    dist[src] = Rat(0);
    for (int round = 0; round < inst.n - 1; ++round) {
        bool any = false;
        for (const Edge& e : inst.edges) {
            if (!dist[e.tail]) continue;
            Rat cand = *dist[e.tail] + e.length;
            if (!dist[e.head] || cand < *dist[e.head]) {
                dist[e.head] = cand;
                any = true;
            }
        }
        if (!any) break;
    }
    return dist;
}

static const Edge& edge_at(const Instance& inst, int id) {
    if (id < 0 || id >= (int)inst.edges.size())
        throw std::out_of_range("unknown edge id " + std::to_string(id));
    return inst.edges[id];
}

static void check_contiguous(const Instance& inst, const std::vector<int>& edge_ids) {
    for (size_t i = 0; i + 1 < edge_ids.size(); ++i)
        if (edge_at(inst, edge_ids[i]).head != edge_at(inst, edge_ids[i + 1]).tail)
            throw std::invalid_argument("edge list is not a contiguous walk");
}

Rat path_length(const Instance& inst, const std::vector<int>& edge_ids) {
    check_contiguous(inst, edge_ids);
    Rat s = 0;
    for (int id : edge_ids) s += edge_at(inst, id).length;
    return s;
}

Rat path_sigma(const Instance& inst, const std::vector<int>& edge_ids) {
    check_contiguous(inst, edge_ids);
    Rat s = 0;
    for (int id : edge_ids) s += edge_at(inst, id).sigma;
    return s;
}

Rat path_delta(const Instance& inst, const std::vector<int>& edge_ids) {
    check_contiguous(inst, edge_ids);
    Rat s = 0;
    for (int id : edge_ids) s += edge_at(inst, id).delta;
    return s;
}

bool is_walk(const Instance& inst, int from, int to, const std::vector<int>& edge_ids) {
    int at = from;
    for (int id : edge_ids) {
        const Edge& e = edge_at(inst, id);
        if (e.tail != at) return false;
        at = e.head;
    }
    return at == to;
}

Rat relaxed_budget(const Rat& dist_budget, const Rat& theta) {
    return (Rat(1) + theta * sign_of(dist_budget)) * dist_budget;
}

bool is_theta_feasible(const Instance& inst, int pair_index, const std::vector<int>& edge_ids,
                       const Rat& theta) {
    const Demand& d = inst.demands.at(pair_index);
    if (!is_walk(inst, d.source, d.sink, edge_ids))
        throw std::invalid_argument("route is not a source->sink walk");
    return path_length(inst, edge_ids) <= relaxed_budget(d.dist_budget, theta);
}

Rat solution_cost(const Instance& inst, const RouteSolution& sol) {
    std::set<int> used;
    Rat total = 0;
    for (const auto& [pair, route] : sol.routes) {
        const Demand& d = inst.demands.at(pair);
        for (int id : route) {
            const Edge& e = edge_at(inst, id);
            used.insert(id);
            total += e.delta * d.demand;
        }
    }
    for (int id : used) total += inst.edges[id].sigma;
    return total;
}

std::vector<int> remove_cycles(const Instance& inst, const std::vector<int>& edge_ids) {
    if (edge_ids.empty()) return {};
    std::vector<int> verts;
    verts.push_back(edge_at(inst, edge_ids.front()).tail);
    for (int id : edge_ids) verts.push_back(edge_at(inst, id).head);
    std::vector<int> out = edge_ids;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < verts.size() && !changed; ++i)
            for (size_t j = verts.size() - 1; j > i; --j)
                if (verts[i] == verts[j]) {
                    verts.erase(verts.begin() + i, verts.begin() + j);
                    out.erase(out.begin() + i, out.begin() + j);
                    changed = true;
                    break;
                }
    }
    return out;
}

ConditionNumbers condition_numbers(const Instance& inst) {
    if (inst.demands.empty()) throw std::invalid_argument("empty demand set");
    Rat min_len = 0;
    for (const Edge& e : inst.edges) min_len = std::min(min_len, e.length);
    Rat min_abs = rat_abs(inst.demands[0].dist_budget);
    Rat max_abs = min_abs;
    for (const Demand& d : inst.demands) {
        Rat a = rat_abs(d.dist_budget);
        min_abs = std::min(min_abs, a);
        max_abs = std::max(max_abs, a);
    }
    return {rat_abs(min_len) / min_abs, max_abs / min_abs};
}

SplitResult split_demands(const Instance& inst) {
    SplitResult res;
    long long max_dem = 1;
    for (const Demand& d : inst.demands) max_dem = std::max(max_dem, d.demand);
    for (long long w = 1; w <= max_dem; w <<= 1) {
        SubInstance part;
        part.weight = w;
        part.instance.n = inst.n;
        part.instance.edges = inst.edges;
        for (int i = 0; i < (int)inst.demands.size(); ++i)
            if (inst.demands[i].demand & w) {
                Demand d = inst.demands[i];
                d.demand = 1;
                part.instance.demands.push_back(d);
                part.original_pairs.push_back(i);
            }
        if (!part.original_pairs.empty()) res.parts.push_back(std::move(part));
    }
    return res;
}

RouteSolution SplitResult::merge(const std::vector<RouteSolution>& part_solutions) const {
    if (part_solutions.size() != parts.size())
        throw std::invalid_argument("one solution per sub-instance required");
    RouteSolution out;
    // later parts have higher weight; their route wins on conflict
    for (size_t p = 0; p < parts.size(); ++p) {
        out.theta = std::max(out.theta, part_solutions[p].theta);
        for (const auto& [sub_pair, route] : part_solutions[p].routes)
            out.routes[parts[p].original_pairs.at(sub_pair)] = route;
    }
    return out;
}

}  // namespace bbs
