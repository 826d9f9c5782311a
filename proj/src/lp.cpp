#include "sapcert/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace sapcert {

namespace {

constexpr double kCostTol = 1.0e-9;   // reduced-cost threshold
constexpr double kPivotTol = 1.0e-11; // smallest acceptable pivot element
constexpr double kFeasTol = 1.0e-8;

// Dense simplex tableau. Column layout: structural + slack variables, then
// one artificial per row, then the rhs. Row `rows` is the phase objective.
struct Tableau {
    int rows = 0;
    int cols = 0; // structural + slack count
    std::vector<Vector> t;
    std::vector<int> basis;

    double& at(int i, int j) { return t[i][j]; }
    double rhs(int i) const { return t[i][cols + rows]; }

    void pivot(int prow, int pcol) {
        const int width = cols + rows + 1;
        const double inv = 1.0 / t[prow][pcol];
        for (int j = 0; j < width; ++j) t[prow][j] *= inv;
        t[prow][pcol] = 1.0;
        for (int i = 0; i <= rows; ++i) {
            if (i == prow) continue;
            const double factor = t[i][pcol];
            if (factor == 0.0) continue;
            for (int j = 0; j < width; ++j) t[i][j] -= factor * t[prow][j];
            t[i][pcol] = 0.0;
        }
        basis[prow] = pcol;
    }

    // Bland: entering = lowest eligible column index, leaving = smallest
    // ratio with ties broken by the lowest basic variable index.
    // `limit` excludes artificial columns during phase 2.
    LpStatus iterate(int limit, long max_iters) {
        for (long it = 0; it < max_iters; ++it) {
            int pcol = -1;
            for (int j = 0; j < limit; ++j) {
                if (t[rows][j] < -kCostTol) {
                    pcol = j;
                    break;
                }
            }
            if (pcol < 0) return LpStatus::optimal;

            int prow = -1;
            double best = 0.0;
            for (int i = 0; i < rows; ++i) {
                const double a = t[i][pcol];
                if (a <= kPivotTol) continue;
                const double ratio = rhs(i) / a;
                if (prow < 0 || ratio < best - 1.0e-12 ||
                    (ratio < best + 1.0e-12 && basis[i] < basis[prow])) {
                    prow = i;
                    best = ratio;
                }
            }
            if (prow < 0) return LpStatus::unbounded;
            pivot(prow, pcol);
        }
        return LpStatus::iteration_limit;
    }
};

} // namespace

LinearProgram::LinearProgram(int num_vars)
    : objective(num_vars, 0.0),
      eq_lhs(0, num_vars),
      ineq_lhs(0, num_vars),
      lower(num_vars, -kInf),
      upper(num_vars, kInf) {}

void LinearProgram::add_eq(Vector row, double rhs) {
    if (row.size() != static_cast<std::size_t>(num_vars())) throw std::invalid_argument("lp: row size mismatch");
    Matrix next(eq_lhs.rows() + 1, num_vars());
    for (int i = 0; i < eq_lhs.rows(); ++i)
        for (int j = 0; j < num_vars(); ++j) next(i, j) = eq_lhs(i, j);
    for (int j = 0; j < num_vars(); ++j) next(eq_lhs.rows(), j) = row[j];
    eq_lhs = std::move(next);
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_ineq(Vector row, double rhs) {
    if (row.size() != static_cast<std::size_t>(num_vars())) throw std::invalid_argument("lp: row size mismatch");
    Matrix next(ineq_lhs.rows() + 1, num_vars());
    for (int i = 0; i < ineq_lhs.rows(); ++i)
        for (int j = 0; j < num_vars(); ++j) next(i, j) = ineq_lhs(i, j);
    for (int j = 0; j < num_vars(); ++j) next(ineq_lhs.rows(), j) = row[j];
    ineq_lhs = std::move(next);
    ineq_rhs.push_back(rhs);
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp) {
    const int n = lp.num_vars();
    for (double v : lp.objective)
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite objective");
    if (lp.eq_rhs.size() != static_cast<std::size_t>(lp.eq_lhs.rows()) ||
        lp.ineq_rhs.size() != static_cast<std::size_t>(lp.ineq_lhs.rows()))
        throw std::invalid_argument("lp: rhs size mismatch");

    // Standard form: every variable becomes one or two nonnegative columns.
    // x_j = shift + sign * y  (free variables split into y+ - y-).
    struct Col {
        int var;
        double sign;
    };
    std::vector<Col> cols;
    Vector shift(n, 0.0);
    std::vector<int> pos_col(n, -1), neg_col(n, -1);
    std::vector<std::pair<int, double>> range_rows; // (var, upper-lower) for double-bounded vars

    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (lo > hi) return {LpStatus::infeasible, Vector(n, 0.0), 0.0};
        if (std::isinf(lo) && std::isinf(hi)) {
            pos_col[j] = static_cast<int>(cols.size());
            cols.push_back({j, 1.0});
            neg_col[j] = static_cast<int>(cols.size());
            cols.push_back({j, -1.0});
        } else if (!std::isinf(lo)) {
            shift[j] = lo;
            pos_col[j] = static_cast<int>(cols.size());
            cols.push_back({j, 1.0});
            if (!std::isinf(hi)) range_rows.emplace_back(j, hi - lo);
        } else {
            shift[j] = hi;
            pos_col[j] = static_cast<int>(cols.size());
            cols.push_back({j, -1.0});
        }
    }

    const int n_std = static_cast<int>(cols.size());
    const int m_eq = lp.eq_lhs.rows();
    const int m_ineq = lp.ineq_lhs.rows() + static_cast<int>(range_rows.size());
    const int m_total = m_eq + m_ineq;
    const int n_total = n_std + m_ineq; // structural + slacks

    // Assemble rows in y-space: first equalities, then inequalities (+ ranges).
    std::vector<Vector> rows(m_total, Vector(n_total, 0.0));
    Vector rhs(m_total, 0.0);
    auto fill_structural = [&](Vector& row, const Matrix& src, int i) {
        double adjust = 0.0;
        for (int j = 0; j < n; ++j) adjust += src(i, j) * shift[j];
        for (int c = 0; c < n_std; ++c) row[c] = src(i, cols[c].var) * cols[c].sign;
        return adjust;
    };
    for (int i = 0; i < m_eq; ++i) rhs[i] = lp.eq_rhs[i] - fill_structural(rows[i], lp.eq_lhs, i);
    for (int i = 0; i < lp.ineq_lhs.rows(); ++i) {
        const int r = m_eq + i;
        rhs[r] = lp.ineq_rhs[i] - fill_structural(rows[r], lp.ineq_lhs, i);
        rows[r][n_std + i] = 1.0; // slack
    }
    for (std::size_t k = 0; k < range_rows.size(); ++k) {
        const int r = m_eq + lp.ineq_lhs.rows() + static_cast<int>(k);
        rows[r][pos_col[range_rows[k].first]] = 1.0;
        rows[r][n_std + lp.ineq_lhs.rows() + static_cast<int>(k)] = 1.0;
        rhs[r] = range_rows[k].second;
    }

    Tableau tab;
    tab.rows = m_total;
    tab.cols = n_total;
    tab.t.assign(m_total + 1, Vector(n_total + m_total + 1, 0.0));
    tab.basis.assign(m_total, 0);
    for (int i = 0; i < m_total; ++i) {
        const double flip = rhs[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n_total; ++j) tab.t[i][j] = flip * rows[i][j];
        tab.t[i][n_total + i] = 1.0; // artificial
        tab.t[i][n_total + m_total] = flip * rhs[i];
        tab.basis[i] = n_total + i;
    }

    const long max_iters = 2000L + 200L * (m_total + n_total);

    // Phase 1: minimize the artificial sum; objective row = -sum of rows.
    for (int j = 0; j <= n_total + m_total; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m_total; ++i) acc += tab.t[i][j];
        tab.t[m_total][j] = -acc;
    }
    for (int i = 0; i < m_total; ++i) tab.t[m_total][n_total + i] = 0.0;

    LpStatus st = tab.iterate(n_total, max_iters);
    if (st == LpStatus::iteration_limit) return {st, Vector(n, 0.0), 0.0};
    const double phase1 = -tab.t[m_total][n_total + m_total];
    if (phase1 > kFeasTol) return {LpStatus::infeasible, Vector(n, 0.0), 0.0};

    // Drive leftover artificial basics out; rows that cannot pivot are
    // redundant and stay harmless (their artificial remains ~0).
    for (int i = 0; i < m_total; ++i) {
        if (tab.basis[i] < n_total) continue;
        for (int j = 0; j < n_total; ++j) {
            if (std::fabs(tab.t[i][j]) > 1.0e-9) {
                tab.pivot(i, j);
                break;
            }
        }
    }

    // Phase 2 objective in y-space, priced out against the current basis.
    Vector cost(n_total, 0.0);
    for (int c = 0; c < n_std; ++c) cost[c] = lp.objective[cols[c].var] * cols[c].sign;
    for (int j = 0; j <= n_total + m_total; ++j) tab.t[m_total][j] = 0.0;
    for (int j = 0; j < n_total; ++j) tab.t[m_total][j] = cost[j];
    for (int i = 0; i < m_total; ++i) {
        const int b = tab.basis[i];
        if (b >= n_total) continue;
        const double cb = cost[b];
        if (cb == 0.0) continue;
        for (int j = 0; j <= n_total + m_total; ++j) tab.t[m_total][j] -= cb * tab.t[i][j];
    }
    // keep artificials out of phase 2
    for (int i = 0; i < m_total; ++i) tab.t[m_total][n_total + i] = 1.0;

    st = tab.iterate(n_total, max_iters);

    Vector y(n_total, 0.0);
    for (int i = 0; i < m_total; ++i)
        if (tab.basis[i] < n_total) y[tab.basis[i]] = tab.rhs(i);

    Vector x = shift;
    for (int c = 0; c < n_std; ++c) x[cols[c].var] += cols[c].sign * y[c];

    double objective = 0.0;
    for (int j = 0; j < n; ++j) objective += lp.objective[j] * x[j];

    return {st == LpStatus::optimal ? LpStatus::optimal : st, std::move(x), objective};
}

} // namespace sapcert
