#pragma once
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bbs/rational.hpp"

namespace bbs::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    T objective{};
    std::vector<T> x;
    // per added row: >= 0 for <= rows, <= 0 for >= rows, free for == rows,
    // normalized so that objective == sum_i dual[i] * rhs[i] at optimality
    std::vector<T> dual;
};

namespace detail {

template <class T>
struct Scalar {
    static T eps() { return T(0); }
};
template <>
struct Scalar<double> {
    static double eps() { return 1e-9; }
};

template <class T>
T tabs(const T& v) {
    return v < T(0) ? -v : v;
}

// dense tableau simplex (max c'x, Ax <= b, x >= 0) with a two-phase start.
// entering rule is steepest-coefficient with index tie-break; after a pivot
// budget proportional to the size it degrades to Bland's rule, which cannot
// cycle, so exact-arithmetic runs always terminate.
template <class T>
struct Tableau {
    int m, n;
    std::vector<int> N, B;
    std::vector<std::vector<T>> D;
    T eps = Scalar<T>::eps();
    long long pivots = 0, bland_after = 0;

    Tableau(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
            const std::vector<T>& c)
        : m((int)b.size()), n((int)c.size()), N(n + 1), B(m),
          D(m + 2, std::vector<T>(n + 2, T(0))) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) D[i][j] = A[i][j];
        N[n] = -1;
        D[m + 1][n] = T(1);
        for (int i = 0; i < m; ++i) {
            B[i] = n + i;
            D[i][n] = T(-1);
            D[i][n + 1] = b[i];
        }
        for (int j = 0; j < n; ++j) {
            N[j] = j;
            D[m][j] = -c[j];
        }
        bland_after = 2000 + 40LL * (m + n);
    }

    void pivot(int r, int s) {
        ++pivots;
        T inv = T(1) / D[r][s];
        for (int i = 0; i < m + 2; ++i) {
            if (i == r) continue;
            if (tabs(D[i][s]) > eps) {
                T f = D[i][s] * inv;
                for (int j = 0; j < n + 2; ++j) D[i][j] -= D[r][j] * f;
                D[i][s] = -f;  // this column now belongs to the leaving variable
            } else {
                D[i][s] = -D[i][s] * inv;
            }
        }
        for (int j = 0; j < n + 2; ++j)
            if (j != s) D[r][j] *= inv;
        D[r][s] = inv;
        std::swap(B[r], N[s]);
    }

    bool step(int phase) {
        int x = m + phase - 1;
        int s = -1;
        bool bland = pivots > bland_after;
        for (int j = 0; j <= n; ++j) {
            if (N[j] == -phase) continue;
            if (D[x][j] < -eps) {
                if (s == -1) s = j;
                else if (bland ? (N[j] < N[s])
                               : (std::pair<const T&, int>(D[x][j], N[j]) <
                                  std::pair<const T&, int>(D[x][s], N[s])))
                    s = j;
            }
        }
        if (s == -1) return false;  // optimal for this phase
        int r = -1;
        for (int i = 0; i < m; ++i) {
            if (D[i][s] <= eps) continue;
            if (r == -1) r = i;
            else {
                T lhs = D[i][n + 1] * D[r][s], rhs = D[r][n + 1] * D[i][s];
                if (lhs < rhs || (lhs == rhs && B[i] < B[r])) r = i;
            }
        }
        if (r == -1) throw std::overflow_error("simplex: unbounded");
        pivot(r, s);
        return true;
    }

    void run(int phase) {
        while (step(phase)) {}
    }

    // returns false when phase-1 proves infeasibility
    bool solve() {
        int r = 0;
        for (int i = 1; i < m; ++i)
            if (D[i][n + 1] < D[r][n + 1]) r = i;
        if (D[r][n + 1] < -eps) {
            pivot(r, n);
            run(2);
            if (D[m + 1][n + 1] < -eps) return false;
            for (int i = 0; i < m; ++i)
                if (B[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n; ++j)
                        if (std::pair<const T&, int>(D[i][j], N[j]) <
                            std::pair<const T&, int>(D[i][s], N[s]))
                            s = j;
                    pivot(i, s);
                }
        }
        run(1);
        return true;
    }
};

}  // namespace detail

// row-oriented builder; >= and == rows are normalized to <= internally and the
// reported duals carry the matching sign convention
template <class T>
class LpProblem {
  public:
    explicit LpProblem(int num_vars) : nvars_(num_vars), c_(num_vars, T(0)) {}

    void set_objective(std::vector<T> c) {
        if ((int)c.size() != nvars_) throw std::invalid_argument("objective size mismatch");
        c_ = std::move(c);
    }

    void add_le(std::vector<T> row, T rhs) { add_row(std::move(row), std::move(rhs), RowKind::Le); }
    void add_ge(std::vector<T> row, T rhs) { add_row(std::move(row), std::move(rhs), RowKind::Ge); }
    void add_eq(std::vector<T> row, T rhs) { add_row(std::move(row), std::move(rhs), RowKind::Eq); }

    int rows() const { return (int)kinds_.size(); }
    int vars() const { return nvars_; }

    LpResult<T> solve() const;

  private:
    enum class RowKind { Le, Ge, Eq };

    void add_row(std::vector<T> row, T rhs, RowKind k) {
        if ((int)row.size() != nvars_) throw std::invalid_argument("row size mismatch");
        rows_.push_back(std::move(row));
        rhs_.push_back(std::move(rhs));
        kinds_.push_back(k);
    }

    int nvars_;
    std::vector<T> c_;
    std::vector<std::vector<T>> rows_;
    std::vector<T> rhs_;
    std::vector<RowKind> kinds_;
};

template <class T>
LpResult<T> LpProblem<T>::solve() const {
    // expand to pure <= form; == contributes a row pair and a signed dual split
    std::vector<std::vector<T>> A;
    std::vector<T> b;
    std::vector<std::pair<int, T>> origin;  // (original row, dual sign)
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (kinds_[i] != RowKind::Ge) {
            A.push_back(rows_[i]);
            b.push_back(rhs_[i]);
            origin.push_back({(int)i, T(1)});
        }
        if (kinds_[i] != RowKind::Le) {
            std::vector<T> neg = rows_[i];
            for (T& v : neg) v = -v;
            A.push_back(std::move(neg));
            b.push_back(-rhs_[i]);
            origin.push_back({(int)i, T(-1)});
        }
    }

    detail::Tableau<T> t(A, b, c_);
    LpResult<T> res;
    try {
        if (!t.solve()) {
            res.status = LpStatus::Infeasible;
            return res;
        }
    } catch (const std::overflow_error&) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    res.status = LpStatus::Optimal;
    res.objective = t.D[t.m][t.n + 1];
    res.x.assign(nvars_, T(0));
    for (int i = 0; i < t.m; ++i)
        if (t.B[i] < t.n) res.x[t.B[i]] = t.D[i][t.n + 1];
    // duals: reduced cost of each row's slack variable (0 when the slack is basic)
    res.dual.assign(rows_.size(), T(0));
    for (int j = 0; j <= t.n; ++j) {
        int id = t.N[j];
        if (id >= t.n && id < t.n + t.m) {
            auto [orig, s] = origin[id - t.n];
            res.dual[orig] += s * t.D[t.m][j];
        }
    }
    return res;
}

using LpRat = LpProblem<Rat>;
using LpDouble = LpProblem<double>;

}  // namespace bbs::lp
