#include "bbs/rcsp.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace bbs::rcsp {

namespace {

constexpr long long kInf = LLONG_MAX;

// N_i = |min(min_e w_i(e), 0)|
std::vector<Rat> most_negative(const std::vector<REdge>& edges, int m) {
    std::vector<Rat> N(m, Rat(0));
    for (const REdge& e : edges)
        for (int i = 0; i < m; ++i)
            if (e.w[i] < -N[i]) N[i] = -e.w[i];
    return N;
}

void check_query(const RcspQuery& q) {
    if (q.n < 2) throw std::invalid_argument("rcsp: need n >= 2");
    int m = (int)q.budgets.size();
    for (const REdge& e : q.edges) {
        if ((int)e.w.size() != m) throw std::invalid_argument("rcsp: dim mismatch");
        if (e.cost < 0) throw std::invalid_argument("rcsp: negative cost");
    }
    for (int i = 0; i < m; ++i)
        if (q.budgets[i] == 0) throw std::invalid_argument("rcsp: zero budget");
    // no negative cycle in any single resource dimension
    for (int i = 0; i < m; ++i) {
        std::vector<Rat> dist(q.n, Rat(0));
        for (int round = 0; round < q.n; ++round) {
            bool any = false;
            for (const REdge& e : q.edges) {
                Rat cand = dist[e.tail] + e.w[i];
                if (cand < dist[e.head]) {
                    dist[e.head] = cand;
                    any = true;
                }
            }
            if (!any) break;
            if (round == q.n - 1)
                throw std::invalid_argument("rcsp: negative cycle in resource dimension " +
                                            std::to_string(i));
        }
    }
}

struct PatternOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<int> drop_walk_cycles(const std::vector<REdge>& edges, std::vector<int> ids) {
    if (ids.empty()) return ids;
    std::vector<int> verts{edges[ids.front()].tail};
    for (int id : ids) verts.push_back(edges[id].head);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < verts.size() && !changed; ++i)
            for (size_t j = verts.size() - 1; j > i; --j)
                if (verts[i] == verts[j]) {
                    verts.erase(verts.begin() + i, verts.begin() + j);
                    ids.erase(ids.begin() + i, ids.begin() + j);
                    changed = true;
                    break;
                }
    }
    return ids;
}

}  // namespace

ScaledQuery scale_weights(const RcspQuery& q) {
    check_query(q);
    int m = (int)q.budgets.size();
    ScaledQuery sq;
    sq.n = q.n;
    sq.edges = &q.edges;
    sq.eff_eps = q.tolerances;
    auto N = most_negative(q.edges, m);
    for (int i = 0; i < m; ++i) {
        if ((int)q.tolerances.size() != m || q.tolerances[i] * q.budgets[i] <= 0)
            throw std::invalid_argument("rcsp: need eps_i * L_i > 0");
        Rat d = q.tolerances[i] * q.budgets[i] / (q.n - 1);
        sq.delta.push_back(d);
        Rat slack = N[i] * q.n;
        Rat top = rat_abs(Rat(1) + q.tolerances[i]) * q.budgets[i] + slack;
        sq.lo.push_back(to_ll(rat_ceil(-slack / d)));
        sq.hi.push_back(to_ll(rat_floor(top / d)));
        sq.target.push_back(to_ll(rat_floor((Rat(1) + q.tolerances[i]) * q.budgets[i] / d)));
    }
    sq.mult.resize(q.edges.size(), std::vector<long long>(m));
    for (size_t e = 0; e < q.edges.size(); ++e)
        for (int i = 0; i < m; ++i)
            sq.mult[e][i] = to_ll(rat_ceil(q.edges[e].w[i] / sq.delta[i]));
    return sq;
}

static ScaledQuery scale_integral_dims(const RcspQuery& q, int upto) {
    // Delta_i = 1 on integral dims: the scaled weights equal the originals, so the
    // sandwich slack is never consumed and budgets hold strictly
    int m = (int)q.budgets.size();
    ScaledQuery sq;
    sq.n = q.n;
    sq.edges = &q.edges;
    auto N = most_negative(q.edges, m);
    for (int i = 0; i < upto; ++i) {
        for (const REdge& e : q.edges)
            if (!is_integer(e.w[i]))
                throw std::invalid_argument("rcsp: non-integral weight in exact dimension");
        sq.delta.push_back(Rat(1));
        long long slack = to_ll(BigInt(numerator(N[i])) * q.n);
        sq.lo.push_back(-slack);
        sq.target.push_back(to_ll(rat_floor(q.budgets[i])));
        sq.hi.push_back(sq.target.back() + slack);
        sq.eff_eps.push_back(Rat(q.n - 1) / q.budgets[i]);  // the eps for which Delta = 1
    }
    sq.mult.resize(q.edges.size(), std::vector<long long>(m));
    for (size_t e = 0; e < q.edges.size(); ++e)
        for (int i = 0; i < upto; ++i) sq.mult[e][i] = to_ll(numerator(q.edges[e].w[i]));
    return sq;
}

ScaledQuery scale_exact_integer(const RcspQuery& q) {
    check_query(q);
    return scale_integral_dims(q, (int)q.budgets.size());
}

ScaledQuery scale_one_rational(const RcspQuery& q, const Rat& zeta) {
    check_query(q);
    if (zeta <= 0) throw std::invalid_argument("rcsp: zeta must be positive");
    int m = (int)q.budgets.size();
    ScaledQuery sq = scale_integral_dims(q, m - 1);
    int i = m - 1;
    if (q.budgets[i] <= 0) throw std::invalid_argument("rcsp: rational dim needs L_m > 0");
    for (const REdge& e : q.edges)
        if (e.w[i] < 0) throw std::invalid_argument("rcsp: rational dim needs w_m >= 0");
    Rat d = zeta * q.budgets[i] / (q.n - 1);
    sq.delta.push_back(d);
    sq.lo.push_back(0);
    sq.target.push_back(to_ll(rat_floor((Rat(1) + zeta) * q.budgets[i] / d)));
    sq.hi.push_back(sq.target.back());
    sq.eff_eps.push_back(zeta);
    for (size_t e = 0; e < q.edges.size(); ++e)
        sq.mult[e][i] = to_ll(rat_ceil(q.edges[e].w[i] / d));
    return sq;
}

std::size_t pattern_count(const ScaledQuery& sq) {
    unsigned long long count = 1;
    for (size_t i = 0; i < sq.lo.size(); ++i) {
        if (sq.hi[i] < sq.lo[i]) return 0;
        unsigned long long span = (unsigned long long)(sq.hi[i] - sq.lo[i]) + 1;
        if (count > (unsigned long long)-1 / span) return (std::size_t)-1;  // saturate
        count *= span;
    }
    return (std::size_t)count;
}

std::vector<std::vector<long long>> enumerate_valid_patterns(const ScaledQuery& sq,
                                                             const RcspOptions& opt) {
    std::size_t count = pattern_count(sq);
    if (count > opt.max_patterns) throw PatternOverflow("rcsp: pattern space over cap");
    int m = (int)sq.lo.size();
    std::vector<std::vector<long long>> out;
    out.reserve(count);
    if (count == 0) return out;
    std::vector<long long> cur = sq.lo;
    for (;;) {
        out.push_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[i] == sq.hi[i]) { cur[i] = sq.lo[i]; --i; }
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

PatternTable::PatternTable(const ScaledQuery& sq, int source, const RcspOptions& opt)
    : sq_(&sq), nv_(sq.n), m_((int)sq.lo.size()), source_(source) {
    npat_ = pattern_count(sq);
    if (npat_ > opt.max_patterns) throw PatternOverflow("rcsp: pattern space over cap");
    stride_.assign(m_, 1);
    for (int i = m_ - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * (sq.hi[i + 1] - sq.lo[i + 1] + 1);
    std::size_t entries = (std::size_t)(nv_ + 1) * npat_ * nv_;
    if (entries > opt.max_table_entries) throw PatternOverflow("rcsp: DP table over cap");
    pred_.assign(entries, -2);

    // int fast path: costs as numerators over a common denominator when they fit
    BigInt den = 1;
    for (const REdge& e : *sq.edges) den = lcm(den, BigInt(denominator(e.cost)));
    BigInt maxnum = 0;
    for (const REdge& e : *sq.edges)
        maxnum = std::max(maxnum, BigInt(abs(numerator(e.cost)) * (den / denominator(e.cost))));
    if (den < (BigInt(1) << 32) && maxnum * (nv_ + 1) < (BigInt(1) << 62)) {
        int_mode_ = true;
        cost_den_ = den;
        dpi_.assign(entries, kInf);
    } else {
        dpr_.assign(entries, Rat(0));
        fin_.assign(entries, false);
    }
    if (npat_ > 0) fill();
}

bool PatternTable::in_box(const std::vector<long long>& pat) const {
    for (int i = 0; i < m_; ++i)
        if (pat[i] < sq_->lo[i] || pat[i] > sq_->hi[i]) return false;
    return true;
}

std::size_t PatternTable::flat(const std::vector<long long>& pat) const {
    std::size_t f = 0;
    for (int i = 0; i < m_; ++i) f += (std::size_t)(pat[i] - sq_->lo[i]) * stride_[i];
    return f;
}

void PatternTable::fill() {
    const auto& edges = *sq_->edges;
    const std::size_t layer = npat_ * nv_;
    int m = m_;
    // per-edge scaled cost and flat pattern offset
    std::vector<long long> ci(int_mode_ ? edges.size() : 0);
    std::vector<Rat> cr(int_mode_ ? 0 : edges.size());
    std::vector<long long> off(edges.size(), 0);
    for (size_t e = 0; e < edges.size(); ++e) {
        if (int_mode_)
            ci[e] = to_ll(BigInt(numerator(edges[e].cost)) *
                          (cost_den_ / denominator(edges[e].cost)));
        else
            cr[e] = edges[e].cost;
        for (int i = 0; i < m; ++i) off[e] += sq_->mult[e][i] * stride_[i];
    }

    auto init_source = [&](int hop) {
        std::vector<long long> cur = sq_->lo;
        for (std::size_t p = 0; p < npat_; ++p) {
            bool nonneg = true;
            for (int i = 0; i < m; ++i)
                if (cur[i] < 0) { nonneg = false; break; }
            if (nonneg) {
                std::size_t idx = (std::size_t)hop * layer + p * nv_ + source_;
                if (int_mode_) dpi_[idx] = 0; else { dpr_[idx] = 0; fin_[idx] = true; }
                pred_[idx] = -1;
            }
            int i = m - 1;
            while (i >= 0 && cur[i] == sq_->hi[i]) { cur[i] = sq_->lo[i]; --i; }
            if (i >= 0) ++cur[i];
        }
    };
    for (int hop = 0; hop <= nv_; ++hop) init_source(hop);

    std::vector<long long> cur(m);
    for (int hop = 1; hop <= nv_; ++hop) {
        const std::size_t base = (std::size_t)hop * layer;
        const std::size_t pbase = (std::size_t)(hop - 1) * layer;
        cur = sq_->lo;
        for (std::size_t p = 0; p < npat_; ++p) {
            for (size_t e = 0; e < edges.size(); ++e) {
                ++relax_count_;
                bool ok = true;
                for (int i = 0; i < m; ++i) {
                    long long pi = cur[i] - sq_->mult[e][i];
                    if (pi < sq_->lo[i] || pi > sq_->hi[i]) { ok = false; break; }
                }
                if (!ok) continue;
                std::size_t pidx = pbase + (std::size_t)((long long)p - off[e]) * nv_ + edges[e].tail;
                std::size_t idx = base + p * nv_ + edges[e].head;
                if (int_mode_) {
                    if (dpi_[pidx] == kInf) continue;
                    long long cand = dpi_[pidx] + ci[e];
                    if (cand < dpi_[idx]) {
                        dpi_[idx] = cand;
                        pred_[idx] = (std::int32_t)e;
                    }
                } else {
                    if (!fin_[pidx]) continue;
                    Rat cand = dpr_[pidx] + cr[e];
                    if (!fin_[idx] || cand < dpr_[idx]) {
                        dpr_[idx] = cand;
                        fin_[idx] = true;
                        pred_[idx] = (std::int32_t)e;
                    }
                }
            }
            int i = m - 1;
            while (i >= 0 && cur[i] == sq_->hi[i]) { cur[i] = sq_->lo[i]; --i; }
            if (i >= 0) ++cur[i];
        }
    }
}

bool PatternTable::finite(std::size_t pat_flat, int v, int hop) const {
    std::size_t idx = (std::size_t)hop * npat_ * nv_ + pat_flat * nv_ + v;
    return int_mode_ ? dpi_[idx] != kInf : (bool)fin_[idx];
}

bool PatternTable::finite(std::size_t pat_flat, int v) const { return finite(pat_flat, v, nv_); }

Rat PatternTable::cost(std::size_t pat_flat, int v, int hop) const {
    std::size_t idx = (std::size_t)hop * npat_ * nv_ + pat_flat * nv_ + v;
    if (int_mode_) {
        if (dpi_[idx] == kInf) throw std::logic_error("rcsp: cost of infinite entry");
        return Rat(BigInt(dpi_[idx]), cost_den_);
    }
    if (!fin_[idx]) throw std::logic_error("rcsp: cost of infinite entry");
    return dpr_[idx];
}

Rat PatternTable::cost(std::size_t pat_flat, int v) const { return cost(pat_flat, v, nv_); }

std::vector<int> PatternTable::backtrack(std::size_t pat_flat, int v) const {
    const auto& edges = *sq_->edges;
    std::vector<int> rev;
    int hop = nv_;
    std::size_t p = pat_flat;
    int at = v;
    for (;;) {
        std::int32_t pr = pred_[(std::size_t)hop * npat_ * nv_ + p * nv_ + at];
        if (pr == -1) break;
        if (pr == -2) throw std::logic_error("rcsp: backtrack through infinite entry");
        rev.push_back(pr);
        long long o = 0;
        for (int i = 0; i < m_; ++i) o += sq_->mult[pr][i] * stride_[i];
        p -= (std::size_t)o;
        at = edges[pr].tail;
        --hop;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

RcspResult extract_result(const ScaledQuery& sq, const PatternTable& table, int sink) {
    RcspResult res;
    if (pattern_count(sq) == 0 || !table.in_box(sq.target)) {
        res.status = RcspStatus::Infeasible;
        return res;
    }
    std::size_t tf = table.flat(sq.target);
    if (!table.finite(tf, sink)) {
        res.status = RcspStatus::Infeasible;
        return res;
    }
    res.status = RcspStatus::Ok;
    res.path = drop_walk_cycles(*sq.edges, table.backtrack(tf, sink));
    res.cost = 0;
    res.consumption.assign(sq.lo.size(), Rat(0));
    for (int id : res.path) {
        res.cost += (*sq.edges)[id].cost;
        for (size_t i = 0; i < res.consumption.size(); ++i)
            res.consumption[i] += (*sq.edges)[id].w[i];
    }
    return res;
}

static RcspResult run(const ScaledQuery& sq, int source, int sink, const RcspOptions& opt) {
    try {
        PatternTable table(sq, source, opt);
        return extract_result(sq, table, sink);
    } catch (const PatternOverflow&) {
        RcspResult res;
        res.status = RcspStatus::Overflow;
        return res;
    }
}

RcspResult solve(const RcspQuery& q, const RcspOptions& opt) {
    return run(scale_weights(q), q.source, q.sink, opt);
}

RcspResult solve_exact_integer(const RcspQuery& q, const RcspOptions& opt) {
    return run(scale_exact_integer(q), q.source, q.sink, opt);
}

RcspResult solve_one_rational(const RcspQuery& q, const Rat& zeta, const RcspOptions& opt) {
    return run(scale_one_rational(q, zeta), q.source, q.sink, opt);
}

std::vector<Rat> resource_condition(const RcspQuery& q) {
    int m = (int)q.budgets.size();
    auto N = most_negative(q.edges, m);
    std::vector<Rat> g(m);
    for (int i = 0; i < m; ++i) g[i] = N[i] / rat_abs(q.budgets[i]);
    return g;
}

}  // namespace bbs::rcsp
