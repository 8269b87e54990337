#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bbs/instance.hpp"
#include "bbs/rcsp.hpp"
#include "bbs/solvers.hpp"

namespace bbs::io {

// rationals travel as exact "num" / "num/den" strings, never decimals
struct InstanceDocument {
    int version = 1;
    Instance inst;
    std::map<std::string, std::string> meta;
};

struct PairCheck {
    int pair = -1;
    Rat length;
    Rat margin;  // relaxed budget minus route length at the claimed theta
    bool feasible = false;
};

struct ReportDocument {
    int version = 1;
    std::string algo;
    std::map<std::string, std::string> config;  // echoed flags
    std::uint64_t seed = 0;
    RouteSolution solution;
    Rat sigma_part, delta_part, cost;
    std::vector<PairCheck> pairs;
    solvers::StageReport stages;
    double wall_seconds = 0;
};

std::string to_json(const InstanceDocument& doc);
InstanceDocument instance_from_json(const std::string& text);

std::string to_json(const ReportDocument& doc);
ReportDocument report_from_json(const std::string& text);

std::string to_json(const rcsp::RcspQuery& q);
rcsp::RcspQuery rcsp_query_from_json(const std::string& text);

ReportDocument make_report(const Instance& inst, const std::string& algo,
                           const std::map<std::string, std::string>& config, std::uint64_t seed,
                           const RouteSolution& sol, const solvers::StageReport& stages,
                           double wall_seconds);

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> diffs;
};

// recompute every number in the report from the instance; exact comparison
VerifyResult verify(const Instance& inst, const ReportDocument& rep);

}  // namespace bbs::io
