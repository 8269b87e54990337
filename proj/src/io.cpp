#include "bbs/io.hpp"

#include <json.hpp>
#include <set>
#include <stdexcept>

#include "bbs/core.hpp"

namespace bbs::io {

using nlohmann::json;

namespace {

json rat_j(const Rat& x) { return rat_to_string(x); }
Rat rat_p(const json& j) { return parse_rat(j.get<std::string>()); }

json routes_j(const std::map<int, std::vector<int>>& routes) {
    json out = json::object();
    for (const auto& [p, r] : routes) out[std::to_string(p)] = r;
    return out;
}

std::map<int, std::vector<int>> routes_p(const json& j) {
    std::map<int, std::vector<int>> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[std::stoi(it.key())] = it.value().get<std::vector<int>>();
    return out;
}

}  // namespace

std::string to_json(const InstanceDocument& doc) {
    json j;
    j["version"] = doc.version;
    j["n"] = doc.inst.n;
    j["edges"] = json::array();
    for (const Edge& e : doc.inst.edges)
        j["edges"].push_back({{"tail", e.tail},
                              {"head", e.head},
                              {"length", rat_j(e.length)},
                              {"sigma", rat_j(e.sigma)},
                              {"delta", rat_j(e.delta)}});
    j["demands"] = json::array();
    for (const Demand& d : doc.inst.demands)
        j["demands"].push_back({{"source", d.source},
                                {"sink", d.sink},
                                {"demand", d.demand},
                                {"budget", rat_j(d.dist_budget)}});
    j["meta"] = doc.meta;
    return j.dump(2) + "\n";
}

InstanceDocument instance_from_json(const std::string& text) {
    json j = json::parse(text);
    InstanceDocument doc;
    doc.version = j.at("version").get<int>();
    if (doc.version != 1) throw std::invalid_argument("io: unknown instance format version");
    doc.inst.n = j.at("n").get<int>();
    for (const json& je : j.at("edges"))
        doc.inst.edges.push_back({je.at("tail").get<int>(), je.at("head").get<int>(),
                                  rat_p(je.at("length")), rat_p(je.at("sigma")),
                                  rat_p(je.at("delta"))});
    for (const json& jd : j.at("demands"))
        doc.inst.demands.push_back({jd.at("source").get<int>(), jd.at("sink").get<int>(),
                                    jd.at("demand").get<long long>(), rat_p(jd.at("budget"))});
    if (j.count("meta")) doc.meta = j["meta"].get<std::map<std::string, std::string>>();
    return doc;
}

std::string to_json(const ReportDocument& doc) {
    json j;
    j["version"] = doc.version;
    j["algo"] = doc.algo;
    j["config"] = doc.config;
    j["seed"] = doc.seed;
    j["theta"] = rat_j(doc.solution.theta);
    j["routes"] = routes_j(doc.solution.routes);
    j["sigma_part"] = rat_j(doc.sigma_part);
    j["delta_part"] = rat_j(doc.delta_part);
    j["cost"] = rat_j(doc.cost);
    j["pairs"] = json::array();
    for (const PairCheck& pc : doc.pairs)
        j["pairs"].push_back({{"pair", pc.pair},
                              {"length", rat_j(pc.length)},
                              {"margin", rat_j(pc.margin)},
                              {"feasible", pc.feasible}});
    j["tau"] = rat_j(doc.stages.tau);
    j["stages"] = json::array();
    for (const auto& st : doc.stages.stages)
        j["stages"].push_back({{"stage", st.stage},
                               {"resolved", st.resolved},
                               {"cost", rat_j(st.cost)},
                               {"density", rat_j(st.density)}});
    j["wall_seconds"] = doc.wall_seconds;
    return j.dump(2) + "\n";
}

ReportDocument report_from_json(const std::string& text) {
    json j = json::parse(text);
    ReportDocument doc;
    doc.version = j.at("version").get<int>();
    if (doc.version != 1) throw std::invalid_argument("io: unknown report format version");
    doc.algo = j.at("algo").get<std::string>();
    doc.config = j.at("config").get<std::map<std::string, std::string>>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.solution.theta = rat_p(j.at("theta"));
    doc.solution.routes = routes_p(j.at("routes"));
    doc.sigma_part = rat_p(j.at("sigma_part"));
    doc.delta_part = rat_p(j.at("delta_part"));
    doc.cost = rat_p(j.at("cost"));
    for (const json& jp : j.at("pairs"))
        doc.pairs.push_back({jp.at("pair").get<int>(), rat_p(jp.at("length")),
                             rat_p(jp.at("margin")), jp.at("feasible").get<bool>()});
    doc.stages.tau = rat_p(j.at("tau"));
    for (const json& js : j.at("stages"))
        doc.stages.stages.push_back({js.at("stage").get<std::string>(),
                                     js.at("resolved").get<int>(), rat_p(js.at("cost")),
                                     rat_p(js.at("density"))});
    doc.wall_seconds = j.at("wall_seconds").get<double>();
    return doc;
}

std::string to_json(const rcsp::RcspQuery& q) {
    json j;
    j["n"] = q.n;
    j["source"] = q.source;
    j["sink"] = q.sink;
    j["edges"] = json::array();
    for (const rcsp::REdge& e : q.edges) {
        json w = json::array();
        for (const Rat& x : e.w) w.push_back(rat_j(x));
        j["edges"].push_back(
            {{"tail", e.tail}, {"head", e.head}, {"cost", rat_j(e.cost)}, {"w", w}});
    }
    j["budgets"] = json::array();
    for (const Rat& x : q.budgets) j["budgets"].push_back(rat_j(x));
    j["tolerances"] = json::array();
    for (const Rat& x : q.tolerances) j["tolerances"].push_back(rat_j(x));
    return j.dump(2) + "\n";
}

rcsp::RcspQuery rcsp_query_from_json(const std::string& text) {
    json j = json::parse(text);
    rcsp::RcspQuery q;
    q.n = j.at("n").get<int>();
    q.source = j.at("source").get<int>();
    q.sink = j.at("sink").get<int>();
    for (const json& je : j.at("edges")) {
        rcsp::REdge e;
        e.tail = je.at("tail").get<int>();
        e.head = je.at("head").get<int>();
        e.cost = rat_p(je.at("cost"));
        for (const json& jw : je.at("w")) e.w.push_back(rat_p(jw));
        q.edges.push_back(e);
    }
    for (const json& jb : j.at("budgets")) q.budgets.push_back(rat_p(jb));
    if (j.count("tolerances"))
        for (const json& jt : j["tolerances"]) q.tolerances.push_back(rat_p(jt));
    return q;
}

ReportDocument make_report(const Instance& inst, const std::string& algo,
                           const std::map<std::string, std::string>& config, std::uint64_t seed,
                           const RouteSolution& sol, const solvers::StageReport& stages,
                           double wall_seconds) {
    ReportDocument doc;
    doc.algo = algo;
    doc.config = config;
    doc.seed = seed;
    doc.solution = sol;
    doc.stages = stages;
    doc.wall_seconds = wall_seconds;
    std::set<int> used;
    for (const auto& [p, r] : sol.routes) {
        const Demand& d = inst.demands.at(p);
        doc.delta_part += path_delta(inst, r) * Rat(d.demand);
        used.insert(r.begin(), r.end());
        PairCheck pc;
        pc.pair = p;
        pc.length = path_length(inst, r);
        pc.margin = relaxed_budget(d.dist_budget, sol.theta) - pc.length;
        pc.feasible = is_theta_feasible(inst, p, r, sol.theta);
        doc.pairs.push_back(pc);
    }
    for (int e : used) doc.sigma_part += inst.edges.at(e).sigma;
    doc.cost = doc.sigma_part + doc.delta_part;
    return doc;
}

VerifyResult verify(const Instance& inst, const ReportDocument& rep) {
    VerifyResult res;
    auto fail = [&](const std::string& msg) {
        res.ok = false;
        res.diffs.push_back(msg);
    };
    Rat sigma = 0, delta = 0;
    std::set<int> used;
    std::set<int> seen_pairs;
    for (const auto& [p, r] : rep.solution.routes) {
        if (p < 0 || p >= (int)inst.demands.size()) {
            fail("pair " + std::to_string(p) + ": unknown demand index");
            continue;
        }
        const Demand& d = inst.demands[p];
        for (int e : r)
            if (e < 0 || e >= (int)inst.edges.size()) {
                fail("pair " + std::to_string(p) + ": unknown edge id");
                return res;
            }
        if (!is_walk(inst, d.source, d.sink, r)) {
            fail("pair " + std::to_string(p) + ": route is not a source->sink walk");
            continue;
        }
        if (!is_theta_feasible(inst, p, r, rep.solution.theta))
            fail("pair " + std::to_string(p) + ": route misses the claimed tolerance");
        delta += path_delta(inst, r) * Rat(d.demand);
        used.insert(r.begin(), r.end());
    }
    for (int e : used) sigma += inst.edges[e].sigma;
    if (sigma != rep.sigma_part)
        fail("upfront part mismatch: recomputed " + rat_to_string(sigma) + ", reported " +
             rat_to_string(rep.sigma_part));
    if (delta != rep.delta_part)
        fail("pay-per-use part mismatch: recomputed " + rat_to_string(delta) + ", reported " +
             rat_to_string(rep.delta_part));
    if (sigma + delta != rep.cost)
        fail("cost mismatch: recomputed " + rat_to_string(Rat(sigma + delta)) + ", reported " +
             rat_to_string(rep.cost));
    for (const PairCheck& pc : rep.pairs) {
        seen_pairs.insert(pc.pair);
        auto it = rep.solution.routes.find(pc.pair);
        if (it == rep.solution.routes.end()) {
            fail("pair " + std::to_string(pc.pair) + ": listed but has no route");
            continue;
        }
        if (pc.pair < 0 || pc.pair >= (int)inst.demands.size()) continue;
        const Demand& d = inst.demands[pc.pair];
        if (!is_walk(inst, d.source, d.sink, it->second)) continue;  // already reported
        Rat len = path_length(inst, it->second);
        if (len != pc.length)
            fail("pair " + std::to_string(pc.pair) + ": length mismatch, recomputed " +
                 rat_to_string(len));
        Rat margin = relaxed_budget(d.dist_budget, rep.solution.theta) - len;
        if (margin != pc.margin)
            fail("pair " + std::to_string(pc.pair) + ": margin mismatch, recomputed " +
                 rat_to_string(margin));
        if (pc.feasible != (margin >= 0))
            fail("pair " + std::to_string(pc.pair) + ": feasibility flag mismatch");
    }
    for (const auto& [p, r] : rep.solution.routes)
        if (!seen_pairs.count(p)) fail("pair " + std::to_string(p) + ": route lacks a check entry");
    return res;
}

}  // namespace bbs::io
