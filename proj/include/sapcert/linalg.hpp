#pragma once

#include <span>
#include <utility>

#include "sapcert/matrix.hpp"

namespace sapcert {

/// Full factorization A = U diag(sigma) V^t with square orthonormal U (m x m)
/// and V (n x n). Singular values are nonincreasing; exact ties keep the
/// original column order.
struct SvdResult {
    Matrix u;
    Vector singular_values; // min(m, n) entries
    Matrix v;

    int rank(double tol = -1.0) const; // tol < 0 -> 1e-10 * sigma_max
};

/// One-sided Jacobi SVD. Throws std::runtime_error if the sweep cap is hit
/// before convergence (does not happen at desk scale).
SvdResult svd(const Matrix& a);

struct EigenResult {
    Vector values;  // ascending
    Matrix vectors; // columns match values
};

/// Cyclic Jacobi for symmetric matrices; input must be symmetric within 1e-12.
EigenResult symmetric_eigen(const Matrix& m);

/// Orthonormal basis of the null space as columns of an n x k matrix
/// (k = n - numerical rank). tol < 0 selects 1e-10 * sigma_max.
Matrix null_space_basis(const Matrix& a, double tol = -1.0);

/// Extreme singular values (min, max) of the column submatrix A_S.
/// If |S| exceeds the row count the minimum is 0.
std::pair<double, double> submatrix_extreme_singular_values(const Matrix& a, std::span<const int> cols);

/// Minimum-norm least squares solution of min ||A x - b||_2 via SVD.
Vector svd_least_squares(const SvdResult& f, const Vector& b, double tol = -1.0);
Vector svd_least_squares(const Matrix& a, const Vector& b);

/// Inverse through the SVD; throws if the matrix is numerically singular.
Matrix svd_inverse(const Matrix& a, double tol = -1.0);

/// Cholesky solve for symmetric positive definite systems (IRLS inner loop).
Vector spd_solve(const Matrix& m, const Vector& b);

/// Operator norm ||M||_{p->p} for p in {1, 2, inf}.
double operator_norm(const Matrix& m, double p);

} // namespace sapcert
