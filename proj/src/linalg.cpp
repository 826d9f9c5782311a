#include "sapcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sapcert {

namespace {

constexpr double kJacobiTol = 1.0e-14;
constexpr int kMaxSweeps = 60;

// One-sided Jacobi on a tall-or-square matrix (rows >= cols). Orthogonalizes
// the columns of w by right rotations accumulated into v.
void one_sided_jacobi(Matrix& w, Matrix& v) {
    const int n = w.cols();
    const int m = w.rows();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if (std::fabs(apq) <= kJacobiTol * std::sqrt(app * aqq) || app == 0.0 || aqq == 0.0)
                    continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) return;
    }
    throw std::runtime_error("svd: Jacobi sweeps did not converge");
}

// Extends the orthonormal columns in `basis` (first `have` columns filled) to
// a full square orthonormal matrix. Each new column is the standard basis
// vector with the largest residual after projecting out the filled columns;
// that residual has norm at least sqrt((m - filled)/m), so this cannot fail.
void complete_orthonormal(Matrix& basis, int have) {
    const int m = basis.rows();
    for (int filled = have; filled < m; ++filled) {
        Vector best;
        double best_norm = -1.0;
        for (int cand = 0; cand < m; ++cand) {
            Vector e(m, 0.0);
            e[cand] = 1.0;
            // two rounds of Gram-Schmidt for numerical orthogonality
            for (int round = 0; round < 2; ++round) {
                for (int j = 0; j < filled; ++j) {
                    double proj = 0.0;
                    for (int i = 0; i < m; ++i) proj += basis(i, j) * e[i];
                    for (int i = 0; i < m; ++i) e[i] -= proj * basis(i, j);
                }
            }
            const double nrm = norm2(e);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = std::move(e);
            }
        }
        for (int i = 0; i < m; ++i) basis(i, filled) = best[i] / best_norm;
    }
}

} // namespace

int SvdResult::rank(double tol) const {
    const double smax = singular_values.empty() ? 0.0 : singular_values.front();
    if (tol < 0.0) tol = 1.0e-10 * smax;
    int r = 0;
    for (double s : singular_values)
        if (s > tol) ++r;
    return r;
}

SvdResult svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    if (!a.all_finite()) throw std::invalid_argument("svd: non-finite entry");

    const bool transposed = a.rows() < a.cols();
    Matrix work = transposed ? a.transposed() : a;
    const int m = work.rows();
    const int n = work.cols();

    Matrix v = Matrix::identity(n);
    one_sided_jacobi(work, v);

    Vector sigma(n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += work(i, j) * work(i, j);
        sigma[j] = std::sqrt(acc);
    }

    // descending by magnitude, ties by original column index
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sigma[x] > sigma[y]; });

    const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    const double zero_tol = smax * 1.0e-13;

    Matrix u_full(m, m);
    Matrix v_sorted(n, n);
    Vector sigma_sorted(n);
    int determined = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        sigma_sorted[j] = sigma[src];
        for (int i = 0; i < n; ++i) v_sorted(i, j) = v(i, src);
        if (sigma[src] > zero_tol) {
            for (int i = 0; i < m; ++i) u_full(i, j) = work(i, src) / sigma[src];
            determined = j + 1;
        }
    }
    for (int j = determined; j < n; ++j) sigma_sorted[j] = 0.0;
    complete_orthonormal(u_full, determined);

    SvdResult out;
    if (!transposed) {
        out.u = std::move(u_full);
        out.v = std::move(v_sorted);
    } else {
        out.u = std::move(v_sorted);
        out.v = std::move(u_full);
    }
    out.singular_values = std::move(sigma_sorted);
    return out;
}

EigenResult symmetric_eigen(const Matrix& mat) {
    const int n = mat.rows();
    if (n != mat.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(mat(i, j) - mat(j, i)) > 1.0e-12)
                throw std::invalid_argument("symmetric_eigen: matrix not symmetric");

    Matrix b = mat;
    Matrix e = Matrix::identity(n);

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(b(i, j)));
    const double stop = scale * 1.0e-15;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::fabs(b(i, j)));
        if (off <= stop) break;
        if (sweep == kMaxSweeps - 1) throw std::runtime_error("symmetric_eigen: Jacobi did not converge");

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(b(p, q)) <= stop) continue;
                const double theta = (b(q, q) - b(p, p)) / (2.0 * b(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < n; ++i) {
                    const double bip = b(i, p), biq = b(i, q);
                    b(i, p) = c * bip - s * biq;
                    b(i, q) = s * bip + c * biq;
                }
                for (int j = 0; j < n; ++j) {
                    const double bpj = b(p, j), bqj = b(q, j);
                    b(p, j) = c * bpj - s * bqj;
                    b(q, j) = s * bpj + c * bqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double eip = e(i, p), eiq = e(i, q);
                    e(i, p) = c * eip - s * eiq;
                    e(i, q) = s * eip + c * eiq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return b(x, x) < b(y, y); });

    EigenResult out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = b(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = e(i, order[j]);
    }
    return out;
}

Matrix null_space_basis(const Matrix& a, double tol) {
    const SvdResult f = svd(a);
    const int n = a.cols();
    const int r = f.rank(tol);
    Matrix basis(n, n - r);
    for (int j = r; j < n; ++j)
        for (int i = 0; i < n; ++i) basis(i, j - r) = f.v(i, j);
    return basis;
}

std::pair<double, double> submatrix_extreme_singular_values(const Matrix& a, std::span<const int> cols) {
    if (cols.empty()) throw std::invalid_argument("submatrix singular values: empty index set");
    std::vector<int> seen(cols.begin(), cols.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("submatrix singular values: duplicate index");

    const Matrix sub = a.columns(cols); // throws on out-of-range
    const SvdResult f = svd(sub);
    const double smax = f.singular_values.front();
    const double smin = static_cast<int>(cols.size()) > a.rows() ? 0.0 : f.singular_values.back();
    return {smin, smax};
}

Vector svd_least_squares(const SvdResult& f, const Vector& b, double tol) {
    const double smax = f.singular_values.empty() ? 0.0 : f.singular_values.front();
    if (tol < 0.0) tol = 1.0e-12 * smax;
    const Vector ub = matvec_transposed(f.u, b);
    Vector y(f.v.cols(), 0.0);
    for (std::size_t i = 0; i < f.singular_values.size(); ++i) {
        if (f.singular_values[i] > tol) y[i] = ub[i] / f.singular_values[i];
    }
    return matvec(f.v, y);
}

Vector svd_least_squares(const Matrix& a, const Vector& b) {
    return svd_least_squares(svd(a), b, -1.0);
}

Matrix svd_inverse(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("svd_inverse: matrix not square");
    const SvdResult f = svd(a);
    const double smax = f.singular_values.front();
    if (tol < 0.0) tol = 1.0e-12 * std::max(smax, 1.0);
    if (f.singular_values.back() <= tol) throw std::invalid_argument("svd_inverse: matrix is singular");
    const int n = a.rows();
    Matrix inv(n, n);
    // V diag(1/sigma) U^t
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += f.v(i, k) / f.singular_values[k] * f.u(j, k);
            inv(i, j) = acc;
        }
    return inv;
}

Vector spd_solve(const Matrix& m, const Vector& b) {
    const int n = m.rows();
    if (n != m.cols() || b.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("spd_solve: size mismatch");
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = m(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (diag <= 0.0) throw std::runtime_error("spd_solve: matrix not positive definite");
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double v = m(i, j);
            for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        double v = b[i];
        for (int k = 0; k < i; ++k) v -= l(i, k) * y[k];
        y[i] = v / l(i, i);
    }
    Vector x(n);
    for (int i = n - 1; i >= 0; --i) {
        double v = y[i];
        for (int k = i + 1; k < n; ++k) v -= l(k, i) * x[k];
        x[i] = v / l(i, i);
    }
    return x;
}

double operator_norm(const Matrix& m, double p) {
    if (p == 1.0) {
        double worst = 0.0;
        for (int j = 0; j < m.cols(); ++j) {
            double col = 0.0;
            for (int i = 0; i < m.rows(); ++i) col += std::fabs(m(i, j));
            worst = std::max(worst, col);
        }
        return worst;
    }
    if (std::isinf(p)) {
        double worst = 0.0;
        for (int i = 0; i < m.rows(); ++i) {
            double row = 0.0;
            for (int j = 0; j < m.cols(); ++j) row += std::fabs(m(i, j));
            worst = std::max(worst, row);
        }
        return worst;
    }
    if (p == 2.0) return svd(m).singular_values.front();
    throw std::invalid_argument("operator_norm: p must be 1, 2, or inf");
}

} // namespace sapcert
