#pragma once
#include <cstdint>
#include <vector>

#include "bbs/rational.hpp"

namespace bbs::rcsp {

struct REdge {
    int tail = 0;
    int head = 0;
    Rat cost;             // >= 0
    std::vector<Rat> w;   // resource consumption, m dims, may be negative
};

struct RcspQuery {
    int n = 0;
    std::vector<REdge> edges;
    int source = 0;
    int sink = 0;
    std::vector<Rat> budgets;     // L_i != 0
    std::vector<Rat> tolerances;  // eps_i, with eps_i * L_i > 0
};

struct RcspOptions {
    std::size_t max_patterns = std::size_t(1) << 22;
    std::size_t max_table_entries = std::size_t(1) << 27;
};

// scaled form: integer multipliers per edge over a valid pattern box
struct ScaledQuery {
    int n = 0;
    const std::vector<REdge>* edges = nullptr;
    std::vector<Rat> delta;                        // Delta_i > 0
    std::vector<std::vector<long long>> mult;      // [edge][dim] d_i(e)
    std::vector<long long> lo, hi;                 // valid pattern box
    std::vector<long long> target;                 // answer pattern floor((1+eps)L/Delta)
    std::vector<Rat> eff_eps;                      // effective tolerance per dim (for bounds reporting)
    Rat scaled_weight(int edge, int dim) const { return Rat(mult[edge][dim]) * delta[dim]; }
};

// Delta_i = eps_i*L_i/(n-1); d_i(e) = ceil(w_i(e)/Delta_i)
ScaledQuery scale_weights(const RcspQuery& q);

std::vector<std::vector<long long>> enumerate_valid_patterns(const ScaledQuery& sq,
                                                             const RcspOptions& opt = {});

std::size_t pattern_count(const ScaledQuery& sq);

enum class RcspStatus { Ok, Infeasible, Overflow };

struct RcspResult {
    RcspStatus status = RcspStatus::Infeasible;
    std::vector<int> path;         // edge indices into query edges
    Rat cost;
    std::vector<Rat> consumption;  // true w(P) per dim
};

// hop-indexed DP over valid patterns with predecessor links
class PatternTable {
  public:
    PatternTable(const ScaledQuery& sq, int source, const RcspOptions& opt = {});

    bool in_box(const std::vector<long long>& pat) const;
    std::size_t flat(const std::vector<long long>& pat) const;
    bool finite(std::size_t pat_flat, int v) const;            // at hop n
    bool finite(std::size_t pat_flat, int v, int hop) const;
    Rat cost(std::size_t pat_flat, int v) const;               // at hop n
    Rat cost(std::size_t pat_flat, int v, int hop) const;
    std::vector<int> backtrack(std::size_t pat_flat, int v) const;  // edge ids, simple-path cleanup left to caller

    std::size_t patterns() const { return npat_; }
    std::size_t relaxations() const { return relax_count_; }
    int dims() const { return m_; }
    const std::vector<long long>& strides() const { return stride_; }

  private:
    const ScaledQuery* sq_;
    int nv_, m_, source_;
    std::size_t npat_;
    std::vector<long long> stride_;
    bool int_mode_ = false;
    BigInt cost_den_;                 // costs stored as numerators over cost_den_ in int mode
    std::vector<long long> dpi_;      // [hop][pat][v], sentinel = INT64_MAX
    std::vector<Rat> dpr_;            // rational mode
    std::vector<bool> fin_;           // rational mode finiteness
    std::vector<std::int32_t> pred_;  // edge id, -1 = source start, -2 = unset
    std::size_t relax_count_ = 0;

    void fill();
    template <class Store>
    void fill_impl(Store& store);
};

RcspResult solve(const RcspQuery& q, const RcspOptions& opt = {});

// integral weights, strict budgets, exact min cost (scale collapses to Delta_i = 1)
RcspResult solve_exact_integer(const RcspQuery& q, const RcspOptions& opt = {});

// w_1..w_{m-1} integral (exact), w_m rational >= 0 within factor (1+zeta)
RcspResult solve_one_rational(const RcspQuery& q, const Rat& zeta, const RcspOptions& opt = {});

// gamma_i = |min(min_e w_i(e), 0)| / |L_i|
std::vector<Rat> resource_condition(const RcspQuery& q);

// scaled-query builders for the specializations (exposed for multi-sink users)
ScaledQuery scale_exact_integer(const RcspQuery& q);
ScaledQuery scale_one_rational(const RcspQuery& q, const Rat& zeta);

RcspResult extract_result(const ScaledQuery& sq, const PatternTable& table, int sink);

}  // namespace bbs::rcsp
