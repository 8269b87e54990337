#pragma once
#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "bbs/instance.hpp"

namespace bbs::gen {

// all randomness flows from one seed through named substreams
std::mt19937_64 substream(std::uint64_t seed, const std::string& name);

struct GenParams {
    int n = 8;
    int k = 3;
    int extra_edges = 8;       // edges beyond any planted structure
    long long max_demand = 1;
    int len_lo = 1;            // integer length range
    int len_hi = 5;
    int cost_hi = 5;           // sigma/delta drawn from [0, cost_hi]
    int budget_slack = 2;      // Dis = shortest + U[0, slack]
};

struct Generated {
    Instance inst;
    std::map<std::string, std::string> meta;  // generator params + planted annotations
};

// kind in {random, hub, backbone, negative, single_source}
Generated generate(const std::string& kind, const GenParams& p, std::uint64_t seed);

}  // namespace bbs::gen
