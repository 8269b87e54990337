#pragma once
#include <map>
#include <vector>

#include "bbs/rational.hpp"

namespace bbs {

struct Edge {
    int tail = 0;
    int head = 0;
    Rat length;
    Rat sigma;  // upfront cost, >= 0
    Rat delta;  // pay-per-use cost, >= 0
};

struct Demand {
    int source = 0;
    int sink = 0;
    long long demand = 1;       // positive integer
    Rat dist_budget;            // nonzero, possibly negative
};

struct Instance {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<Demand> demands;
};

// one route (ordered edge-id list) per resolved demand-pair index
struct RouteSolution {
    std::map<int, std::vector<int>> routes;
    Rat theta;  // tolerance under which feasibility is claimed
};

struct ConditionNumbers {
    Rat eta;  // >= 0
    Rat xi;   // >= 1
};

}  // namespace bbs
