#pragma once

#include <vector>

namespace l0babai {

/// Dense real matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);
    Matrix(int rows, int cols, std::vector<double> entries);

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Matrix transposed() const;
    double frobenius_norm() const;

    /// Euclidean norm of rows first..last (inclusive) of one column.
    double col_norm(int j, int row_first, int row_last) const;

    void swap_cols(int j1, int j2);
    void scale_row(int i, double s);

    bool operator==(const Matrix& o) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x);
std::vector<double> matT_vec(const Matrix& a, const std::vector<double>& x);

/// n x n upper-triangular matrix with strictly positive diagonal.
class UpperTriangular {
public:
    UpperTriangular() = default;
    explicit UpperTriangular(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

    /// Validates shape, exact lower-triangle zeros, and positive diagonal.
    static UpperTriangular from_matrix(const Matrix& m);

    int n() const { return n_; }

    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }

    Matrix to_matrix() const;

    /// Leading k x k block.
    UpperTriangular leading(int k) const;

    double diag(int k) const { return (*this)(k, k); }
    double diag_product() const;
    double min_diag() const;
    double max_diag() const;

    bool operator==(const UpperTriangular& o) const = default;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// Lower-triangular solve: R^T z = w with R upper triangular.
std::vector<double> solve_transposed(const UpperTriangular& r, const std::vector<double>& w);

/// Inverse transpose of R (lower triangular), F = R^{-T}.
Matrix inverse_transpose(const UpperTriangular& r);

/// p[k] = 1-based original column index of the column now at position k+1.
struct PermutationVector {
    std::vector<int> p;

    static PermutationVector identity(int n);

    int size() const { return static_cast<int>(p.size()); }
    bool is_identity() const;
    bool is_valid() const;

    /// 0-based original index at 0-based position k.
    int orig0(int k) const { return p[k] - 1; }

    void swap_positions(int k1, int k2) { std::swap(p[k1], p[k2]); }

    bool operator==(const PermutationVector& o) const = default;
};

/// Columns of m reordered so position k holds original column p[k].
Matrix apply_permutation(const Matrix& m, const PermutationVector& p);

} // namespace l0babai
