#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace sapcert {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Small sizes only (desk scale, n <= ~256).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);
    Matrix(int rows, int cols, Vector entries);

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

    const Vector& data() const { return data_; }
    Vector& data() { return data_; }

    Matrix transposed() const;
    Vector column(int j) const;
    /// Matrix whose columns are the given columns of *this, in the given order.
    Matrix columns(std::span<const int> indices) const;

    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    Vector data_;
};

Vector matvec(const Matrix& a, const Vector& x);
/// y = A^t x
Vector matvec_transposed(const Matrix& a, const Vector& x);
Matrix matmul(const Matrix& a, const Matrix& b);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector scaled(const Vector& a, double c);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm1(const Vector& a);
double norm_inf(const Vector& a);

/// max_ij |a_ij - b_ij|; matrices must have equal shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace sapcert
