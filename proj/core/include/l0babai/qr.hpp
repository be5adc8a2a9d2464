#pragma once

#include "l0babai/matrix.hpp"

namespace l0babai {

struct QrResult {
    Matrix q1;          // m x n, orthonormal columns
    UpperTriangular r;  // n x n, positive diagonal
};

/// Householder QR of an m x n matrix (m >= n) with positive diagonal.
/// Throws rank_error when the smallest |r_kk| <= 1e-12 * largest.
QrResult qr_factorize(const Matrix& a);

/// One step of a recorded orthogonal row transform.
struct RowOp {
    int i1 = 0, i2 = 0;     // row pair; i2 < 0 marks a sign flip of row i1
    double c = 1.0, s = 0.0;
};

/// Accumulated G^T of a retriangularization, replayable onto other matrices.
struct RotationRecord {
    std::vector<RowOp> ops;

    /// Left-multiplies the recorded G^T onto rows of m, columns [col_first, col_last].
    void apply(Matrix& m, int col_first, int col_last) const;
    bool empty() const { return ops.empty(); }
};

/// Swap adjacent columns k-1, k (1-based level k) and restore triangularity.
UpperTriangular swap_adjacent_retriangularize(const UpperTriangular& r, int k);

/// Swap columns j and k (1-based, j <= k) and restore triangularity with
/// Givens rotations on rows j..k; the record is the accumulated G^T.
/// The result equals the positive-diagonal QR factor of the permuted matrix.
std::pair<UpperTriangular, RotationRecord>
move_column_retriangularize(const UpperTriangular& r, int j, int k);

} // namespace l0babai
