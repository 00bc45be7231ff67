#include "cusplab/simplex.hpp"

#include <stdexcept>

namespace cusplab {

namespace {

/// Dense tableau for min c.x, A x = b, x >= 0, b >= 0.
struct Tableau {
    int m, n;
    std::vector<QVec> A;  // m rows of length n
    QVec b;               // length m
    QVec cost;            // length n, current reduced costs
    Rat obj;              // current objective value (negated offset)
    std::vector<int> basis;

    void pivot(int row, int col) {
        Rat inv = Rat(1) / A[row][col];
        for (int j = 0; j < n; ++j) A[row][j] *= inv;
        b[row] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (int j = 0; j < n; ++j) A[i][j] -= f * A[row][j];
            b[i] -= f * b[row];
        }
        if (cost[col] != 0) {
            Rat f = cost[col];
            for (int j = 0; j < n; ++j) cost[j] -= f * A[row][j];
            obj += f * b[row];
        }
        basis[row] = col;
    }

    /// Bland: entering = lowest index with negative reduced cost;
    /// leaving = lowest basis index among minimal ratios.
    LPStatus iterate() {
        while (true) {
            int enter = -1;
            for (int j = 0; j < n; ++j)
                if (cost[j] < 0) { enter = j; break; }
            if (enter < 0) return LPStatus::optimal;
            int leave = -1;
            Rat best;
            for (int i = 0; i < m; ++i) {
                if (A[i][enter] <= 0) continue;
                Rat ratio = b[i] / A[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return LPStatus::unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LPSolution solve_lp(const LPProblem& p) {
    int nv = p.nvars;
    if (static_cast<int>(p.obj.size()) != nv || static_cast<int>(p.nonneg.size()) != nv)
        throw std::invalid_argument("LP shape mismatch");

    // Standard-form columns: x_j (and a mirror column for free variables).
    std::vector<int> pos_col(nv), neg_col(nv, -1);
    int n = 0;
    for (int j = 0; j < nv; ++j) {
        pos_col[j] = n++;
        if (!p.nonneg[j]) neg_col[j] = n++;
    }
    int m = static_cast<int>(p.rows.size());
    int slack_base = n;
    for (const auto& r : p.rows)
        if (r.rel != 0) ++n;

    Tableau t;
    t.m = m;
    t.n = n + m;  // + artificials
    t.A.assign(m, QVec(t.n, Rat(0)));
    t.b.assign(m, Rat(0));
    t.basis.assign(m, -1);

    int slack = slack_base;
    for (int i = 0; i < m; ++i) {
        const auto& r = p.rows[i];
        if (static_cast<int>(r.a.size()) != nv) throw std::invalid_argument("LP row shape");
        bool flip = r.rhs < 0;
        Rat sign = flip ? Rat(-1) : Rat(1);
        for (int j = 0; j < nv; ++j) {
            t.A[i][pos_col[j]] = sign * r.a[j];
            if (neg_col[j] >= 0) t.A[i][neg_col[j]] = -sign * r.a[j];
        }
        t.b[i] = sign * r.rhs;
        if (r.rel != 0) {
            // <= gets +slack, >= gets -slack (before any sign flip).
            Rat s = (r.rel < 0) ? Rat(1) : Rat(-1);
            t.A[i][slack] = sign * s;
            ++slack;
        }
        t.A[i][n + i] = Rat(1);  // artificial
        t.basis[i] = n + i;
    }

    // Phase 1: minimize the artificial mass.
    t.cost.assign(t.n, Rat(0));
    for (int i = 0; i < m; ++i) t.cost[n + i] = Rat(1);
    t.obj = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < t.n; ++j) t.cost[j] -= t.A[i][j];
        t.obj += t.b[i];
    }
    if (t.iterate() != LPStatus::optimal || t.obj != 0) {
        LPSolution s;
        s.status = (t.obj != 0) ? LPStatus::infeasible : LPStatus::unbounded;
        return s;
    }
    // Drive any residual artificial out of the basis, then freeze them.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (t.A[i][j] != 0) { col = j; break; }
        if (col >= 0) t.pivot(i, col);
        // else: redundant row, harmless to leave (b[i] == 0).
    }
    for (int i = 0; i < m; ++i)
        for (int j = n; j < t.n; ++j) t.A[i][j] = Rat(0);

    // Phase 2.
    t.cost.assign(t.n, Rat(0));
    for (int j = 0; j < nv; ++j) {
        t.cost[pos_col[j]] = p.obj[j];
        if (neg_col[j] >= 0) t.cost[neg_col[j]] = -p.obj[j];
    }
    for (int i = 0; i < m; ++i)
        for (int j = n; j < t.n; ++j) t.cost[j] = Rat(1);  // artificials stay out
    t.obj = 0;
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < 0 || t.cost[t.basis[i]] == 0) continue;
        Rat f = t.cost[t.basis[i]];
        for (int j = 0; j < t.n; ++j) t.cost[j] -= f * t.A[i][j];
        t.obj += f * t.b[i];
    }
    LPStatus st = t.iterate();
    LPSolution s;
    s.status = st;
    if (st != LPStatus::optimal) return s;

    QVec xs(t.n, Rat(0));
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= 0) xs[t.basis[i]] = t.b[i];
    s.x.assign(nv, Rat(0));
    for (int j = 0; j < nv; ++j) {
        s.x[j] = xs[pos_col[j]];
        if (neg_col[j] >= 0) s.x[j] -= xs[neg_col[j]];
    }
    s.value = t.obj;
    return s;
}

}  // namespace cusplab
