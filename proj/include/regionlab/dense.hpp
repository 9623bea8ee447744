#pragma once

// Small dense linear algebra used throughout the library. Vectors are plain
// std::vector<double>; matrices are row-major with explicit dimensions.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace regionlab {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, Vector row_major);
    /// Nested-list construction, one initializer list per row.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    Vector column(std::size_t j) const;

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

Vector matvec(const Matrix& a, std::span<const double> x);
Vector transpose_matvec(const Matrix& a, std::span<const double> y);
/// out = A x - b, writing into a preallocated span.
void affine_into(const Matrix& a, std::span<const double> x, std::span<const double> b,
                 std::span<double> out);
void transpose_matvec_into(const Matrix& a, std::span<const double> y, std::span<double> out);

Matrix transpose(const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);
/// Horizontal concatenation [a, b]; row counts must agree.
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix hcat(const Matrix& a, std::span<const double> column);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
double frobenius_norm(const Matrix& a);
double max_row_norm(const Matrix& a);
double max_column_norm(const Matrix& a);

struct SpectralNormEstimate {
    double value = 0.0;
    int iterations = 0;
    /// False when the iteration cap was reached before the relative change
    /// dropped below the tolerance; the value is then approximate.
    bool converged = false;
};

inline constexpr int kSpectralNormMaxIterations = 10000;

/// Largest singular value by power iteration on A^T A, started from the
/// normalized all-ones vector.
SpectralNormEstimate spectral_norm(const Matrix& a, double tol);

/// Numerical rank by Gaussian elimination with partial pivoting after scaling
/// every column to unit Euclidean norm. A pivot counts when its magnitude
/// exceeds rel_tol.
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-9);

/// Unit vector spanning the null space of a (rows < cols typical), or an
/// empty vector when the null space is not one-dimensional at rel_tol.
Vector null_vector(const Matrix& a, double rel_tol = 1e-9);

}  // namespace regionlab
