#include "sapcert/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace sapcert {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative dimension");
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, Vector entries) : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative dimension");
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("matrix: entry count does not match dimensions");
    if (!all_finite()) throw std::invalid_argument("matrix: non-finite entry");
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector Matrix::column(int j) const {
    Vector c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Matrix Matrix::columns(std::span<const int> indices) const {
    Matrix sub(rows_, static_cast<int>(indices.size()));
    for (int i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < indices.size(); ++j) {
            const int src = indices[j];
            if (src < 0 || src >= cols_) throw std::invalid_argument("matrix: column index out of range");
            sub(i, static_cast<int>(j)) = (*this)(i, src);
        }
    return sub;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (x.size() != static_cast<std::size_t>(a.cols())) throw std::invalid_argument("matvec: size mismatch");
    Vector y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        const auto r = a.row(i);
        for (int j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
    if (x.size() != static_cast<std::size_t>(a.rows())) throw std::invalid_argument("matvec_transposed: size mismatch");
    Vector y(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        for (int j = 0; j < a.cols(); ++j) y[j] += r[j] * x[i];
    }
    return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: size mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator+(const Vector& a, const Vector& b) {
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vector operator-(const Vector& a, const Vector& b) {
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

Vector scaled(const Vector& a, double c) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

double dot(const Vector& a, const Vector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double norm1(const Vector& a) {
    double acc = 0.0;
    for (double v : a) acc += std::fabs(v);
    return acc;
}

double norm_inf(const Vector& a) {
    double acc = 0.0;
    for (double v : a) acc = std::max(acc, std::fabs(v));
    return acc;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]));
    return worst;
}

} // namespace sapcert
