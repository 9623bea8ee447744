#include "regionlab/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regionlab/error.hpp"

namespace regionlab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    require(rows >= 1 && cols >= 1, "Matrix: row and column counts must be at least 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    require(rows >= 1 && cols >= 1, "Matrix: row and column counts must be at least 1");
    require(data_.size() == rows * cols, "Matrix: entry count " + std::to_string(data_.size()) +
                                             " != " + std::to_string(rows) + "x" +
                                             std::to_string(cols));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    require(rows.size() >= 1, "Matrix: need at least one row");
    rows_ = rows.size();
    cols_ = rows.begin()->size();
    require(cols_ >= 1, "Matrix: need at least one column");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matvec: A has " + std::to_string(a.cols()) +
                                      " columns but x has " + std::to_string(x.size()) +
                                      " entries");
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
        out[i] = s;
    }
    return out;
}

Vector transpose_matvec(const Matrix& a, std::span<const double> y) {
    require(a.rows() == y.size(), "transpose_matvec: A has " + std::to_string(a.rows()) +
                                      " rows but y has " + std::to_string(y.size()) +
                                      " entries");
    Vector out(a.cols(), 0.0);
    transpose_matvec_into(a, y, out);
    return out;
}

void affine_into(const Matrix& a, std::span<const double> x, std::span<const double> b,
                 std::span<double> out) {
    const std::size_t n = a.cols();
    const double* p = a.data().data();
    for (std::size_t i = 0; i < a.rows(); ++i, p += n) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += p[j] * x[j];
        out[i] = s - b[i];
    }
}

void transpose_matvec_into(const Matrix& a, std::span<const double> y, std::span<double> out) {
    const std::size_t n = a.cols();
    std::fill(out.begin(), out.end(), 0.0);
    const double* p = a.data().data();
    for (std::size_t i = 0; i < a.rows(); ++i, p += n) {
        const double yi = y[i];
        for (std::size_t j = 0; j < n; ++j) out[j] += p[j] * yi;
    }
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "hcat: row counts differ");
    Matrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

Matrix hcat(const Matrix& a, std::span<const double> column) {
    require(a.rows() == column.size(), "hcat: column length differs from row count");
    return hcat(a, Matrix(column.size(), 1, Vector(column.begin(), column.end())));
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> x) {
    // Scaled accumulation so that huge or tiny entries do not overflow.
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) {
        const double t = v / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double max_row_norm(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) m = std::max(m, norm2(a.row(i)));
    return m;
}

double max_column_norm(const Matrix& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, norm2(a.column(j)));
    return m;
}

namespace {

// One power-iteration run from a given unit start vector.
SpectralNormEstimate power_iterate(const Matrix& a, Vector u, double tol) {
    SpectralNormEstimate est;
    Vector w(a.rows());
    Vector z(a.cols());
    const Vector zero_bias(a.rows(), 0.0);
    double prev = -1.0;
    for (int it = 1; it <= kSpectralNormMaxIterations; ++it) {
        affine_into(a, u, zero_bias, w);
        const double current = norm2(w);  // ||A u|| <= sigma_max for unit u
        est.value = std::max(est.value, current);
        est.iterations = it;
        if (current == 0.0) break;
        transpose_matvec_into(a, w, z);
        const double zn = norm2(z);
        if (zn == 0.0) break;
        for (std::size_t j = 0; j < z.size(); ++j) u[j] = z[j] / zn;
        if (prev > 0.0 && std::abs(current - prev) <= tol * current) {
            est.converged = true;
            break;
        }
        prev = current;
    }
    return est;
}

}  // namespace

SpectralNormEstimate spectral_norm(const Matrix& a, double tol) {
    require(tol > 0.0, "spectral_norm: tolerance must be positive");
    const double n = static_cast<double>(a.cols());
    SpectralNormEstimate est = power_iterate(a, Vector(a.cols(), 1.0 / std::sqrt(n)), tol);
    if (est.value > 0.0 || frobenius_norm(a) == 0.0) {
        if (est.value == 0.0) est.converged = true;
        return est;
    }
    // The all-ones start lies in the null space of A; restart from the
    // coordinate direction of the largest column.
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double cn = norm2(a.column(j));
        if (cn > best_norm) {
            best_norm = cn;
            best = j;
        }
    }
    Vector e(a.cols(), 0.0);
    e[best] = 1.0;
    SpectralNormEstimate retry = power_iterate(a, std::move(e), tol);
    retry.iterations += est.iterations;
    return retry;
}

namespace {

struct Echelon {
    Matrix reduced;
    std::vector<std::size_t> pivot_cols;
    Vector col_scale;
};

// Reduced row echelon form of a with unit-norm columns.
Echelon reduce(const Matrix& a, double rel_tol) {
    Echelon e{a, {}, Vector(a.cols(), 1.0)};
    Matrix& m = e.reduced;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double cn = norm2(m.column(j));
        if (cn > 0.0) {
            e.col_scale[j] = cn;
            for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) /= cn;
        }
    }
    std::size_t r = 0;
    for (std::size_t j = 0; j < m.cols() && r < m.rows(); ++j) {
        std::size_t p = r;
        for (std::size_t i = r + 1; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > std::abs(m(p, j))) p = i;
        if (std::abs(m(p, j)) <= rel_tol) continue;
        if (p != r)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
        const double piv = m(r, j);
        for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) /= piv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            const double f = m(i, j);
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) -= f * m(r, k);
        }
        e.pivot_cols.push_back(j);
        ++r;
    }
    return e;
}

}  // namespace

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
    return reduce(a, rel_tol).pivot_cols.size();
}

Vector null_vector(const Matrix& a, double rel_tol) {
    const Echelon e = reduce(a, rel_tol);
    if (e.pivot_cols.size() + 1 != a.cols()) return {};
    std::size_t free_col = 0;
    {
        std::size_t p = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (p < e.pivot_cols.size() && e.pivot_cols[p] == j) {
                ++p;
                continue;
            }
            free_col = j;
            break;
        }
    }
    // Solve in scaled coordinates, then undo the column scaling.
    Vector y(a.cols(), 0.0);
    y[free_col] = 1.0;
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
        y[e.pivot_cols[r]] = -e.reduced(r, free_col);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] /= e.col_scale[j];
    const double n = norm2(y);
    for (double& v : y) v /= n;
    return y;
}

}  // namespace regionlab
