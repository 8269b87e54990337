#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "bbs/core.hpp"
#include "bbs/generate.hpp"
#include "bbs/io.hpp"
#include "bbs/junction.hpp"
#include "bbs/lpflow.hpp"
#include "bbs/oracle.hpp"
#include "bbs/solvers.hpp"

using namespace bbs;

namespace {

// 0 success; distinct codes so scripts can tell failure classes apart
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCap = 4;

int classify(const std::exception& e) {
    if (dynamic_cast<const junction::CapExceeded*>(&e)) return kExitCap;
    if (dynamic_cast<const junction::NoCover*>(&e)) return kExitInfeasible;
    if (dynamic_cast<const lpflow::LpInfeasible*>(&e)) return kExitInfeasible;
    std::string m = e.what();
    if (m.find("cap") != std::string::npos || m.find("overflow") != std::string::npos)
        return kExitCap;
    if (m.find("feasib") != std::string::npos || m.find("guess") != std::string::npos)
        return kExitInfeasible;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitValidation;
    return 1;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text;
}

Instance load_instance(const std::string& path, bool check = true) {
    Instance inst = io::instance_from_json(slurp(path)).inst;
    if (check) {
        auto rep = validate_instance(inst);
        if (!rep.ok()) {
            for (const auto& v : rep.violations) std::cerr << "invalid: " << v.message << "\n";
            std::exit(kExitValidation);
        }
    }
    return inst;
}

struct GenFlags {
    gen::GenParams p;
    std::string kind = "random";
    std::uint64_t seed = 1;
    void attach(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "random|hub|backbone|negative|single_source");
        cmd->add_option("--n", p.n);
        cmd->add_option("--k", p.k);
        cmd->add_option("--extra-edges", p.extra_edges);
        cmd->add_option("--max-demand", p.max_demand);
        cmd->add_option("--len-lo", p.len_lo);
        cmd->add_option("--len-hi", p.len_hi);
        cmd->add_option("--cost-hi", p.cost_hi);
        cmd->add_option("--budget-slack", p.budget_slack);
        cmd->add_option("--seed", seed);
    }
};

struct SolveFlags {
    std::string algo = "k";
    std::string theta = "1/2", epsilon = "1/2", zeta = "1", tau;
    std::uint64_t seed = 1;
    long long kb_threshold = -1;
    junction::Options jopt;
    void attach(CLI::App* cmd, bool with_seed = true) {
        cmd->add_option("--algo", algo, "n45|k|single-source");
        cmd->add_option("--theta", theta, "feasibility tolerance (rational)");
        cmd->add_option("--epsilon", epsilon, "tree height knob, h = max(2, ceil(1/eps))");
        cmd->add_option("--zeta", zeta, "pay-per-use slack (rational)");
        cmd->add_option("--tau", tau, "fixed budget guess; omit for doubling search");
        if (with_seed) cmd->add_option("--seed", seed);
        cmd->add_option("--kb-threshold", kb_threshold, "fallback cutoff; -1 = 4 n^(6/5)");
        cmd->add_option("--trials", jopt.trials);
        cmd->add_option("--max-layer-span", jopt.max_layer_span);
        cmd->add_option("--max-side-nodes", jopt.max_side_nodes);
        cmd->add_option("--max-labels", jopt.max_labels);
        cmd->add_option("--max-tree-nodes", jopt.max_tree_nodes);
        cmd->add_option("--max-lp-vars", jopt.max_lp_vars);
    }
    solvers::SolverConfig config() const {
        solvers::SolverConfig cfg;
        cfg.theta = parse_rat(theta);
        cfg.epsilon = parse_rat(epsilon);
        cfg.zeta = parse_rat(zeta);
        if (!tau.empty()) cfg.tau = parse_rat(tau);
        cfg.seed = seed;
        cfg.kb_threshold = kb_threshold;
        cfg.jopt = jopt;
        return cfg;
    }
    std::map<std::string, std::string> echo() const {
        std::map<std::string, std::string> m{{"algo", algo},       {"theta", theta},
                                             {"epsilon", epsilon}, {"zeta", zeta},
                                             {"seed", std::to_string(seed)},
                                             {"kb_threshold", std::to_string(kb_threshold)}};
        if (!tau.empty()) m["tau"] = tau;
        return m;
    }
};

solvers::SolveOutput run_algo(const Instance& inst, const std::string& algo,
                              const solvers::SolverConfig& cfg) {
    if (algo == "n45") return solvers::solve_n45(inst, cfg);
    if (algo == "k") return solvers::solve_k(inst, cfg);
    if (algo == "single-source") return solvers::solve_single_source(inst, cfg);
    throw std::invalid_argument("unknown algo " + algo);
}

int cmd_generate(const GenFlags& gf, const std::string& out) {
    auto g = gen::generate(gf.kind, gf.p, gf.seed);
    spit(out, io::to_json(io::InstanceDocument{1, g.inst, g.meta}));
    return 0;
}

int cmd_solve(const std::string& in, const SolveFlags& sf, const std::string& out) {
    Instance inst = load_instance(in);
    auto t0 = std::chrono::steady_clock::now();
    auto res = run_algo(inst, sf.algo, sf.config());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto rep = io::make_report(inst, sf.algo, sf.echo(), sf.seed, res.solution, res.report, secs);
    spit(out, io::to_json(rep));
    return 0;
}

int cmd_rcsp(const std::string& in, const std::string& mode, const std::string& zeta,
             const std::string& out) {
    rcsp::RcspQuery q = io::rcsp_query_from_json(slurp(in));
    rcsp::RcspResult r;
    if (mode == "approx") r = rcsp::solve(q);
    else if (mode == "exact") r = rcsp::solve_exact_integer(q);
    else if (mode == "one-rational") r = rcsp::solve_one_rational(q, parse_rat(zeta));
    else throw std::invalid_argument("unknown mode " + mode);
    nlohmann::json j;
    j["status"] = r.status == rcsp::RcspStatus::Ok ? "ok"
                  : r.status == rcsp::RcspStatus::Infeasible ? "infeasible"
                                                             : "overflow";
    if (r.status == rcsp::RcspStatus::Ok) {
        j["cost"] = rat_to_string(r.cost);
        j["path"] = r.path;
        j["consumption"] = nlohmann::json::array();
        for (const Rat& c : r.consumption) j["consumption"].push_back(rat_to_string(c));
    }
    spit(out, j.dump(2) + "\n");
    if (r.status == rcsp::RcspStatus::Infeasible) return kExitInfeasible;
    if (r.status == rcsp::RcspStatus::Overflow) return kExitCap;
    return 0;
}

int cmd_junction(const std::string& in, const std::string& theta, int root, int h,
                 std::uint64_t seed, junction::Options jopt, const std::string& out) {
    Instance inst = load_instance(in);
    jopt.root_override = root;
    if (h > 0) jopt.h = h;
    std::vector<int> pairs(inst.demands.size());
    std::iota(pairs.begin(), pairs.end(), 0);
    auto jr = junction::min_density_junction_tree(inst, pairs, parse_rat(theta), seed, jopt);
    nlohmann::json j;
    j["root"] = jr.root;
    j["cost"] = rat_to_string(jr.cost);
    j["density"] = rat_to_string(jr.density);
    j["routes"] = nlohmann::json::object();
    for (const auto& [p, r] : jr.routes) j["routes"][std::to_string(p)] = r;
    spit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_oracle(const std::string& in, const std::string& what, const std::string& theta,
               const std::string& query, const std::string& out) {
    if (what == "rcsp") {
        auto q = io::rcsp_query_from_json(slurp(query));
        auto r = oracle::brute_force_rcsp(q);
        nlohmann::json j;
        j["status"] = r.feasible ? "ok" : "infeasible";
        if (r.feasible) {
            j["cost"] = rat_to_string(r.cost);
            j["path"] = r.path;
        }
        spit(out, j.dump(2) + "\n");
        return r.feasible ? 0 : kExitInfeasible;
    }
    Instance inst = load_instance(in);
    if (what == "optimum") {
        auto r = oracle::brute_force_optimum(inst, parse_rat(theta));
        if (!r.feasible) {
            std::cerr << "no feasible assignment\n";
            return kExitInfeasible;
        }
        auto rep = io::make_report(inst, "oracle-optimum", {{"theta", theta}}, 0, r.solution, {},
                                   0.0);
        spit(out, io::to_json(rep));
        return 0;
    }
    if (what == "junction") {
        auto r = oracle::brute_force_min_density_junction_tree(inst, parse_rat(theta));
        nlohmann::json j;
        j["found"] = r.found;
        if (r.found) {
            j["root"] = r.root;
            j["density"] = rat_to_string(r.density);
            j["pairs"] = r.pairs;
            j["routes"] = nlohmann::json::object();
            for (const auto& [p, rt] : r.solution.routes) j["routes"][std::to_string(p)] = rt;
        }
        spit(out, j.dump(2) + "\n");
        return r.found ? 0 : kExitInfeasible;
    }
    throw std::invalid_argument("unknown oracle target " + what);
}

int cmd_verify(const std::string& in, const std::string& report) {
    Instance inst = load_instance(in);
    auto rep = io::report_from_json(slurp(report));
    auto res = io::verify(inst, rep);
    if (res.ok) {
        std::cout << "pass\n";
        return 0;
    }
    for (const auto& d : res.diffs) std::cout << "fail: " << d << "\n";
    return kExitValidation;
}

int cmd_bench(std::vector<std::string> kinds, std::vector<std::string> algos, int seeds,
              std::uint64_t seed0, const GenFlags& gf, const SolveFlags& sf, bool no_oracle,
              const std::string& json_out) {
    if (kinds.empty()) kinds = {"random"};
    if (algos.empty()) algos = {"k"};
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream tab;
    tab << "instance           algo           cost       oracle     ratio    ms\n";
    for (const auto& kind : kinds) {
        for (int i = 0; i < seeds; ++i) {
            std::uint64_t seed = seed0 + (std::uint64_t)i;
            auto g = gen::generate(kind, gf.p, seed);
            std::string oracle_cost = "-";
            if (!no_oracle) {
                try {
                    auto opt = oracle::brute_force_optimum(g.inst, parse_rat(sf.theta));
                    if (opt.feasible) oracle_cost = rat_to_string(opt.cost);
                } catch (const std::exception&) {
                }
            }
            for (const auto& algo : algos) {
                std::string tag = kind + ":" + std::to_string(seed);
                nlohmann::json row{{"instance", tag}, {"algo", algo}};
                std::string cost = "-", ratio = "-";
                double ms = 0;
                try {
                    solvers::SolverConfig cfg = sf.config();
                    cfg.seed = seed;
                    auto t0 = std::chrono::steady_clock::now();
                    auto res = run_algo(g.inst, algo, cfg);
                    ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
                    Rat c = solution_cost(g.inst, res.solution);
                    cost = rat_to_string(c);
                    if (oracle_cost != "-") {
                        Rat oc = parse_rat(oracle_cost);
                        ratio = oc > 0 ? rat_to_string(Rat(c / oc)) : "-";
                    }
                } catch (const std::exception& e) {
                    cost = "err(" + std::to_string(classify(e)) + ")";
                }
                row["cost"] = cost;
                row["time_ms"] = ms;
                if (!no_oracle) {
                    row["oracle"] = oracle_cost;
                    row["ratio"] = ratio;
                }
                rows.push_back(row);
                char line[256];
                std::snprintf(line, sizeof line, "%-18s %-14s %-10s %-10s %-8s %.1f\n",
                              tag.c_str(), algo.c_str(), cost.c_str(),
                              no_oracle ? "" : oracle_cost.c_str(),
                              no_oracle ? "" : ratio.c_str(), ms);
                tab << line;
            }
        }
    }
    std::cout << tab.str();
    if (!json_out.empty()) spit(json_out, rows.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directed buy-at-bulk spanner toolkit"};
    app.require_subcommand(1);

    GenFlags gf;
    SolveFlags sf;
    std::string in = "-", out, report, query, mode = "approx", what = "optimum";
    std::string theta = "1/2", zeta = "1/10", json_out;
    std::vector<std::string> kinds, algos;
    int root = -1, h = 0, seeds = 3;
    std::uint64_t seed = 1, seed0 = 1;
    bool no_oracle = false;

    auto* g = app.add_subcommand("generate", "emit a seeded instance document");
    gf.attach(g);
    g->add_option("-o,--out", out);

    auto* s = app.add_subcommand("solve", "run a spanner solver and emit a report");
    s->add_option("-i,--instance", in)->required();
    sf.attach(s);
    s->add_option("-o,--out", out);

    auto* r = app.add_subcommand("rcsp", "standalone resource-constrained shortest path");
    r->add_option("-q,--query", query)->required();
    r->add_option("--mode", mode, "approx|exact|one-rational");
    r->add_option("--zeta", zeta);
    r->add_option("-o,--out", out);

    auto* j = app.add_subcommand("junction", "minimum-density junction tree over all pairs");
    j->add_option("-i,--instance", in)->required();
    j->add_option("--theta", theta);
    j->add_option("--root", root);
    j->add_option("--height", h);
    j->add_option("--seed", seed);
    junction::Options jopt;
    j->add_option("--max-layer-span", jopt.max_layer_span);
    j->add_option("--max-labels", jopt.max_labels);
    j->add_option("--max-tree-nodes", jopt.max_tree_nodes);
    j->add_option("-o,--out", out);

    auto* o = app.add_subcommand("oracle", "brute-force references at desk scale");
    o->add_option("-i,--instance", in);
    o->add_option("--what", what, "optimum|junction|rcsp");
    o->add_option("--theta", theta);
    o->add_option("-q,--query", query);
    o->add_option("-o,--out", out);

    auto* v = app.add_subcommand("verify", "recompute a report against its instance");
    v->add_option("-i,--instance", in)->required();
    v->add_option("-r,--report", report)->required();

    auto* b = app.add_subcommand("bench", "instance x algo sweep with optional oracle ratios");
    gf.attach(b);
    sf.attach(b, /*with_seed=*/false);  // --seed belongs to generation; bench sweeps --seed0
    b->add_option("--kinds", kinds)->delimiter(',');
    b->add_option("--algos", algos)->delimiter(',');
    b->add_option("--seeds", seeds);
    b->add_option("--seed0", seed0);
    b->add_flag("--no-oracle", no_oracle);
    b->add_option("--json", json_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g) return cmd_generate(gf, out);
        if (*s) return cmd_solve(in, sf, out);
        if (*r) return cmd_rcsp(query, mode, zeta, out);
        if (*j) return cmd_junction(in, theta, root, h, seed, jopt, out);
        if (*o) return cmd_oracle(in, what, theta, query, out);
        if (*v) return cmd_verify(in, report);
        if (*b) return cmd_bench(kinds, algos, seeds, seed0, gf, sf, no_oracle, json_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
    return 1;
}
