#include "sapcert/precondition.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sapcert/linalg.hpp"
#include "sapcert/lp.hpp"
#include "sapcert/parallel.hpp"
#include "sapcert/rng.hpp"
#include "sapcert/signal.hpp"

namespace sapcert {

namespace {

SvdResult full_rank_svd(const Matrix& a, const char* who) {
    const SvdResult f = svd(a);
    if (a.rows() > a.cols() || f.rank() < a.rows()) {
        std::ostringstream os;
        os << who << ": matrix must have full row rank";
        throw std::invalid_argument(os.str());
    }
    return f;
}

} // namespace

std::pair<Preconditioner, Matrix> svd_preconditioner(const Matrix& a) {
    const SvdResult f = full_rank_svd(a, "svd_preconditioner");
    const int m = a.rows();
    Preconditioner pre;
    pre.sigma_prime.assign(f.singular_values.begin(), f.singular_values.begin() + m);
    pre.p = Matrix(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) pre.p(i, j) = f.u(j, i) / pre.sigma_prime[i];
    Matrix tilde = matmul(pre.p, a);
    return {std::move(pre), std::move(tilde)};
}

double eq12_value(const Matrix& a) {
    const SvdResult f = full_rank_svd(a, "eq12_value");
    const int m = a.rows();
    const int n = a.cols();
    const int k = n - m; // null-space dimension

    std::vector<double> distances(m);
    parallel_for(0, m, [&](int i) {
        const Vector vi = f.v.column(i);
        if (k == 0) {
            distances[i] = norm1(vi);
            return;
        }
        // min ||v_i - N c||_1 over c: variables c (k, free) and t (n, >= 0)
        LinearProgram lp(k + n);
        for (int j = 0; j < n; ++j) {
            lp.objective[k + j] = 1.0;
            lp.lower[k + j] = 0.0;
        }
        for (int row = 0; row < n; ++row) {
            Vector up(k + n, 0.0), dn(k + n, 0.0);
            for (int j = 0; j < k; ++j) {
                up[j] = -f.v(row, m + j);
                dn[j] = f.v(row, m + j);
            }
            up[k + row] = -1.0;
            dn[k + row] = -1.0;
            lp.add_ineq(std::move(up), -vi[row]); //  v - Nc <= t
            lp.add_ineq(std::move(dn), vi[row]);  // -v + Nc <= t
        }
        const LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::optimal) throw std::runtime_error("eq12_value: LP did not solve");
        distances[i] = sol.objective_value;
    });

    double worst = 0.0;
    for (double v : distances) worst = std::max(worst, v);
    return worst;
}

CheckReport invariance_check(const Matrix& a, const Matrix& p, int s,
                             const std::optional<SapCertificate>& cert, int samples, std::uint64_t seed) {
    if (p.rows() != a.rows() || p.cols() != a.rows())
        throw std::invalid_argument("invariance_check: preconditioner shape mismatch");
    const SvdResult pf = svd(p);
    if (pf.singular_values.back() <= 1.0e-12 * std::max(pf.singular_values.front(), 1.0))
        throw std::invalid_argument("invariance_check: preconditioner is singular");

    CheckReport report;
    const Matrix pa = matmul(p, a);

    const NspCertificate before = nsp_constant_l1(a, s);
    const NspCertificate after = nsp_constant_l1(pa, s);
    std::ostringstream os;
    const bool both_infinite = !std::isfinite(before.gamma) && !std::isfinite(after.gamma);
    if (!both_infinite && std::fabs(before.gamma - after.gamma) > 1.0e-8) {
        report.pass = false;
        os << "gamma_" << s << " changed under preconditioning: " << before.gamma << " -> " << after.gamma;
        report.detail = os.str();
        return report;
    }
    os << "gamma_" << s << "(A) = " << before.gamma << " preserved";

    if (cert) {
        const Matrix p_inv = svd_inverse(p);
        const double norm_p_inv = operator_norm(p_inv, cert->p);
        const double d_transfer = std::pow(norm_p_inv, cert->q) * cert->d_const;
        const double scale = sparsity_scale(cert->s, cert->q, cert->r);
        Rng rng(seed);
        const int n = a.cols();
        for (int it = 0; it < samples; ++it) {
            Vector x(n);
            for (int j = 0; j < n; ++j) x[j] = rng.normal();
            const double nx = norm2(x);
            if (nx < 1.0e-14) continue;
            x = scaled(x, 1.0 / nx);
            const BestTermResult bt = best_s_term(x, cert->s, cert->q);
            const double lhs = std::pow(lq_quasinorm(bt.kept, cert->r), cert->q);
            const double rhs = d_transfer * std::pow(lq_quasinorm(matvec(pa, x), cert->p), cert->q) +
                               cert->beta * scale * std::pow(bt.sigma, cert->q);
            if (lhs > rhs + 1.0e-9) {
                report.pass = false;
                report.witness = x;
                std::ostringstream fail;
                fail << "transferred SAP inequality violated: " << lhs << " > " << rhs;
                report.detail = fail.str();
                return report;
            }
        }
        os << "; transferred SAP inequality held on " << samples << " samples with D' = " << d_transfer;
    }
    report.detail = os.str();
    return report;
}

} // namespace sapcert
