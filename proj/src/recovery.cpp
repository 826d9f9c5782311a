#include "sapcert/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sapcert/combinatorics.hpp"
#include "sapcert/linalg.hpp"
#include "sapcert/lp.hpp"

namespace sapcert {

namespace {

constexpr double kFeasSlack = 1.0e-9;

RecoveryResult finish(const RecoveryProblem& pr, Signal x, bool certified, SolveStatus status) {
    RecoveryResult out;
    out.residual_norm = lq_quasinorm(matvec(pr.a, x) - pr.measurements, pr.p);
    out.objective = std::pow(lq_quasinorm(x, pr.q), pr.q);
    out.solution = std::move(x);
    out.certified_optimal = certified;
    out.status = status;
    return out;
}

} // namespace

void RecoveryProblem::validate() const {
    if (a.rows() <= 0 || a.cols() <= 0) throw std::invalid_argument("recovery: empty matrix");
    if (measurements.size() != static_cast<std::size_t>(a.rows()))
        throw std::invalid_argument("recovery: measurement length != row count");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("recovery: eps must be finite and >= 0");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("recovery: q must lie in (0, 1]");
    if (!(p == 1.0 || p == 2.0 || std::isinf(p))) throw std::invalid_argument("recovery: p must be 1, 2, or inf");
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::success: return "success";
        case SolveStatus::iteration_limit: return "iteration_limit";
        case SolveStatus::internal_error: return "internal_error";
    }
    return "unknown";
}

RecoveryResult solve_l1(const RecoveryProblem& pr) {
    pr.validate();
    if (pr.q != 1.0) throw std::invalid_argument("solve_l1: q must be 1");
    const bool equality = pr.eps == 0.0;
    if (!equality && pr.p == 2.0)
        throw std::invalid_argument("solve_l1: p=2 with eps>0 needs solve_l1_l2");

    const int m = pr.a.rows();
    const int n = pr.a.cols();

    // variables: y+ (n), y- (n)[, u (m) for p=1]
    const bool p1 = !equality && pr.p == 1.0;
    const int nv = 2 * n + (p1 ? m : 0);
    LinearProgram lp(nv);
    for (int j = 0; j < 2 * n; ++j) {
        lp.objective[j] = 1.0;
        lp.lower[j] = 0.0;
    }
    for (int j = 2 * n; j < nv; ++j) lp.lower[j] = 0.0;

    auto residual_row = [&](int i, double sign) {
        Vector row(nv, 0.0);
        for (int j = 0; j < n; ++j) {
            row[j] = sign * pr.a(i, j);
            row[n + j] = -sign * pr.a(i, j);
        }
        return row;
    };

    if (equality) {
        for (int i = 0; i < m; ++i) lp.add_eq(residual_row(i, 1.0), pr.measurements[i]);
    } else if (std::isinf(pr.p)) {
        for (int i = 0; i < m; ++i) {
            lp.add_ineq(residual_row(i, 1.0), pr.measurements[i] + pr.eps);
            lp.add_ineq(residual_row(i, -1.0), -pr.measurements[i] + pr.eps);
        }
    } else { // p = 1, slack u with +-(Ay - z) <= u, sum u <= eps
        for (int i = 0; i < m; ++i) {
            Vector up = residual_row(i, 1.0);
            up[2 * n + i] = -1.0;
            lp.add_ineq(std::move(up), pr.measurements[i]);
            Vector dn = residual_row(i, -1.0);
            dn[2 * n + i] = -1.0;
            lp.add_ineq(std::move(dn), -pr.measurements[i]);
        }
        Vector budget(nv, 0.0);
        for (int i = 0; i < m; ++i) budget[2 * n + i] = 1.0;
        lp.add_ineq(std::move(budget), pr.eps);
    }

    const LpSolution sol = solve_lp(lp);
    Signal x(n, 0.0);
    for (int j = 0; j < n; ++j) x[j] = sol.point[j] - sol.point[n + j];

    switch (sol.status) {
        case LpStatus::optimal:
            return finish(pr, std::move(x), true, SolveStatus::success);
        case LpStatus::iteration_limit:
            return finish(pr, std::move(x), false, SolveStatus::iteration_limit);
        default:
            // the lift is exact, so this means inconsistent eps=0 measurements
            return finish(pr, Signal(n, 0.0), false, SolveStatus::internal_error);
    }
}

RecoveryResult solve_l1_l2(const RecoveryProblem& pr) {
    pr.validate();
    if (pr.q != 1.0 || pr.p != 2.0 || !(pr.eps > 0.0))
        throw std::invalid_argument("solve_l1_l2: requires q=1, p=2, eps>0");

    const int m = pr.a.rows();
    const int n = pr.a.cols();
    const SvdResult f = svd(pr.a);
    const int rank = f.rank();

    // constant residual energy outside the range of A
    const Vector zt = matvec_transposed(f.u, pr.measurements);
    double outside = 0.0;
    for (int i = rank; i < m; ++i) outside += zt[i] * zt[i];
    const double eps2 = pr.eps * pr.eps;
    if (outside > eps2 * (1.0 + 1.0e-12))
        return finish(pr, Signal(n, 0.0), false, SolveStatus::internal_error);

    // Euclidean projection onto {x : ||Ax - z||_2 <= eps} in the SVD basis.
    auto project = [&](const Vector& v) {
        Vector vt = matvec_transposed(f.v, v);
        auto residual2 = [&](double lam) {
            double acc = outside;
            for (int i = 0; i < rank; ++i) {
                const double s = f.singular_values[i];
                const double xi = (vt[i] + lam * s * zt[i]) / (1.0 + lam * s * s);
                const double d = s * xi - zt[i];
                acc += d * d;
            }
            return acc;
        };
        if (residual2(0.0) <= eps2) return v;
        double lo = 0.0, hi = 1.0;
        int guard = 0;
        while (residual2(hi) > eps2 && guard++ < 200) {
            lo = hi;
            hi *= 4.0;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (residual2(mid) > eps2 ? lo : hi) = mid;
        }
        Vector xt(n, 0.0);
        for (int i = 0; i < rank; ++i) {
            const double s = f.singular_values[i];
            xt[i] = (vt[i] + hi * s * zt[i]) / (1.0 + hi * s * s);
        }
        for (int i = rank; i < n; ++i) xt[i] = vt[i];
        return matvec(f.v, xt);
    };

    // ADMM with penalty 1: x = Proj(w - u), w = shrink(x + u), u += x - w.
    // A stationary (x, w, u) triple is a KKT point, so the stop rule tracks
    // the change of the whole iterate, not just x.
    const int max_iters = 10000;
    Vector x(n, 0.0), w(n, 0.0), u(n, 0.0);
    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
        const Vector x_prev = x;
        const Vector w_prev = w;
        x = project(w - u);
        Vector xu = x + u;
        for (int j = 0; j < n; ++j)
            w[j] = std::copysign(std::max(std::fabs(xu[j]) - 1.0, 0.0), xu[j]);
        double dual_step = 0.0;
        for (int j = 0; j < n; ++j) {
            u[j] += x[j] - w[j];
            dual_step = std::max(dual_step, std::fabs(x[j] - w[j]));
        }
        const double change = std::max({norm_inf(x - x_prev), norm_inf(w - w_prev), dual_step});
        if (it > 0 && change <= 1.0e-9) {
            converged = true;
            break;
        }
    }
    return finish(pr, std::move(x), false, converged ? SolveStatus::success : SolveStatus::iteration_limit);
}

RecoveryResult solve_lq_irls(const RecoveryProblem& pr) {
    pr.validate();
    if (!(pr.q > 0.0 && pr.q < 1.0)) throw std::invalid_argument("solve_lq_irls: requires 0 < q < 1");
    if (pr.eps != 0.0) throw std::invalid_argument("solve_lq_irls: requires eps = 0");

    const int m = pr.a.rows();
    const int n = pr.a.cols();
    const SvdResult f = svd(pr.a);
    if (f.rank() < m) throw std::invalid_argument("solve_lq_irls: matrix must have full row rank");

    Vector x = svd_least_squares(f, pr.measurements);
    bool converged = false;

    // weights w_i = (x_i^2 + eta^2)^(q/2 - 1); the weighted equality-
    // constrained minimizer is x = D A^t (A D A^t)^{-1} z with D = 1/w.
    for (double eta = 1.0; eta >= 1.0e-10; eta *= 0.1) {
        converged = false;
        for (int inner = 0; inner < 100; ++inner) {
            Vector d(n);
            for (int j = 0; j < n; ++j)
                d[j] = std::pow(x[j] * x[j] + eta * eta, 1.0 - pr.q / 2.0);
            Matrix ada(m, m);
            for (int i = 0; i < m; ++i)
                for (int k = i; k < m; ++k) {
                    double acc = 0.0;
                    for (int j = 0; j < n; ++j) acc += pr.a(i, j) * d[j] * pr.a(k, j);
                    ada(i, k) = acc;
                    ada(k, i) = acc;
                }
            const Vector lambda = spd_solve(ada, pr.measurements);
            Vector next(n);
            const Vector atl = matvec_transposed(pr.a, lambda);
            for (int j = 0; j < n; ++j) next[j] = d[j] * atl[j];
            const double change = norm_inf(next - x);
            x = std::move(next);
            if (change <= 1.0e-11 * std::max(1.0, norm_inf(x))) {
                converged = true;
                break;
            }
        }
    }
    return finish(pr, std::move(x), false, converged ? SolveStatus::success : SolveStatus::iteration_limit);
}

std::optional<RecoveryResult> sparse_oracle(const RecoveryProblem& pr, int max_support) {
    pr.validate();
    const int n = pr.a.cols();
    if (max_support < 0 || max_support > n) throw std::invalid_argument("sparse_oracle: support size out of range");
    if (binomial_capped(n, max_support, 1000000) > 1000000 ||
        subset_count_up_to(n, max_support, 4000000) > 4000000)
        throw std::invalid_argument("sparse_oracle: enumeration too large");

    std::optional<Signal> best;
    double best_obj = kInf;

    auto consider = [&](const Signal& y) {
        const double residual = lq_quasinorm(matvec(pr.a, y) - pr.measurements, pr.p);
        if (residual > pr.eps + kFeasSlack) return;
        const double obj = std::pow(lq_quasinorm(y, pr.q), pr.q);
        if (obj < best_obj - 1.0e-15) {
            best_obj = obj;
            best = y;
        }
    };

    consider(Signal(n, 0.0)); // empty support
    for (int size = 1; size <= max_support; ++size) {
        for_each_combination(n, size, [&](const std::vector<int>& support) {
            const Matrix sub = pr.a.columns(support);
            const Vector coeffs = svd_least_squares(sub, pr.measurements);
            Signal y(n, 0.0);
            for (std::size_t k = 0; k < support.size(); ++k) y[support[k]] = coeffs[k];
            consider(y);
        });
    }

    if (!best) return std::nullopt;
    return finish(pr, std::move(*best), false, SolveStatus::success);
}

} // namespace sapcert
