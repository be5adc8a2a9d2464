#include "l0babai/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace l0babai {

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(std::max(rows, 0)) * std::max(cols, 0), 0.0) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
    if (a_.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("entry count does not match dimensions");
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

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double Matrix::col_norm(int j, int row_first, int row_last) const {
    double s = 0.0;
    for (int i = row_first; i <= row_last; ++i) {
        double v = (*this)(i, j);
        s += v * v;
    }
    return std::sqrt(s);
}

void Matrix::swap_cols(int j1, int j2) {
    if (j1 == j2) return;
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, j1), (*this)(i, j2));
}

void Matrix::scale_row(int i, double s) {
    for (int j = 0; j < cols_; ++j) (*this)(i, j) *= s;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matT_vec(const Matrix& a, const std::vector<double>& x) {
    if (a.rows() != static_cast<int>(x.size()))
        throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<double> y(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
    }
    return y;
}

UpperTriangular UpperTriangular::from_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("upper-triangular factor must be square");
    UpperTriangular r(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        if (!(m(i, i) > 0.0))
            throw std::invalid_argument("upper-triangular factor needs a strictly positive diagonal");
        for (int j = 0; j < m.cols(); ++j) {
            if (j < i && m(i, j) != 0.0)
                throw std::invalid_argument("entries below the diagonal must be exactly zero");
            r(i, j) = m(i, j);
        }
    }
    return r;
}

Matrix UpperTriangular::to_matrix() const {
    Matrix m(n_, n_);
    m.data() = a_;
    return m;
}

UpperTriangular UpperTriangular::leading(int k) const {
    UpperTriangular r(k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) r(i, j) = (*this)(i, j);
    return r;
}

double UpperTriangular::diag_product() const {
    double prod = 1.0;
    for (int i = 0; i < n_; ++i) prod *= diag(i);
    return prod;
}

double UpperTriangular::min_diag() const {
    double v = diag(0);
    for (int i = 1; i < n_; ++i) v = std::min(v, diag(i));
    return v;
}

double UpperTriangular::max_diag() const {
    double v = diag(0);
    for (int i = 1; i < n_; ++i) v = std::max(v, diag(i));
    return v;
}

std::vector<double> solve_transposed(const UpperTriangular& r, const std::vector<double>& w) {
    const int n = r.n();
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("solve shape mismatch");
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) {
        double s = w[i];
        for (int j = 0; j < i; ++j) s -= r(j, i) * z[j];
        z[i] = s / r(i, i);
    }
    return z;
}

Matrix inverse_transpose(const UpperTriangular& r) {
    const int n = r.n();
    Matrix f(n, n);
    for (int j = 0; j < n; ++j) {
        // Column j of R^{-T} solves R^T f_j = e_j; lower triangular result.
        f(j, j) = 1.0 / r(j, j);
        for (int i = j + 1; i < n; ++i) {
            double s = 0.0;
            for (int t = j; t < i; ++t) s -= r(t, i) * f(t, j);
            f(i, j) = s / r(i, i);
        }
    }
    return f;
}

PermutationVector PermutationVector::identity(int n) {
    PermutationVector pv;
    pv.p.resize(n);
    std::iota(pv.p.begin(), pv.p.end(), 1);
    return pv;
}

bool PermutationVector::is_identity() const {
    for (int k = 0; k < size(); ++k)
        if (p[k] != k + 1) return false;
    return true;
}

bool PermutationVector::is_valid() const {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 1 || v > size() || seen[v - 1]) return false;
        seen[v - 1] = true;
    }
    return true;
}

Matrix apply_permutation(const Matrix& m, const PermutationVector& p) {
    if (p.size() != m.cols()) throw std::invalid_argument("permutation length mismatch");
    Matrix out(m.rows(), m.cols());
    for (int k = 0; k < p.size(); ++k) {
        int src = p.orig0(k);
        for (int i = 0; i < m.rows(); ++i) out(i, k) = m(i, src);
    }
    return out;
}

} // namespace l0babai
