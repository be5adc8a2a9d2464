#include "l0babai/qr.hpp"

#include "l0babai/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace l0babai {

QrResult qr_factorize(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    if (m < n) throw std::invalid_argument("qr_factorize needs rows >= cols");

    Matrix w = a;
    std::vector<std::vector<double>> reflectors;
    reflectors.reserve(n);

    for (int k = 0; k < n; ++k) {
        double norm = w.col_norm(k, k, m - 1);
        std::vector<double> v(m - k, 0.0);
        if (norm > 0.0) {
            double head = w(k, k);
            double alpha = head >= 0.0 ? -norm : norm;
            for (int i = k; i < m; ++i) v[i - k] = w(i, k);
            v[0] -= alpha;
            double vnorm2 = 0.0;
            for (double t : v) vnorm2 += t * t;
            if (vnorm2 > 0.0) {
                for (int j = k; j < n; ++j) {
                    double dot = 0.0;
                    for (int i = k; i < m; ++i) dot += v[i - k] * w(i, j);
                    double f = 2.0 * dot / vnorm2;
                    for (int i = k; i < m; ++i) w(i, j) -= f * v[i - k];
                }
            }
            w(k, k) = alpha;
            for (int i = k + 1; i < m; ++i) w(i, k) = 0.0;
        }
        reflectors.push_back(std::move(v));
    }

    // Thin Q1: apply reflectors in reverse to the leading m x n identity block.
    Matrix q1(m, n);
    for (int j = 0; j < n; ++j) q1(j, j) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        const std::vector<double>& v = reflectors[k];
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v[i - k] * q1(i, j);
            double f = 2.0 * dot / vnorm2;
            for (int i = k; i < m; ++i) q1(i, j) -= f * v[i - k];
        }
    }

    // Positive diagonal: flip matching R row and Q1 column signs.
    for (int k = 0; k < n; ++k) {
        if (w(k, k) < 0.0) {
            for (int j = k; j < n; ++j) w(k, j) = -w(k, j);
            for (int i = 0; i < m; ++i) q1(i, k) = -q1(i, k);
        }
    }

    double dmin = std::abs(w(0, 0));
    double dmax = dmin;
    for (int k = 1; k < n; ++k) {
        double d = std::abs(w(k, k));
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    if (!(dmin > 1e-12 * dmax))
        throw rank_error("matrix is numerically rank deficient");

    UpperTriangular r(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) r(i, j) = w(i, j);
    return {std::move(q1), std::move(r)};
}

void RotationRecord::apply(Matrix& m, int col_first, int col_last) const {
    for (const RowOp& op : ops) {
        if (op.i2 < 0) {
            for (int j = col_first; j <= col_last; ++j) m(op.i1, j) = -m(op.i1, j);
            continue;
        }
        for (int j = col_first; j <= col_last; ++j) {
            double a = m(op.i1, j);
            double b = m(op.i2, j);
            m(op.i1, j) = op.c * a + op.s * b;
            m(op.i2, j) = -op.s * a + op.c * b;
        }
    }
}

namespace {

// Rotation zeroing b against a: c*a + s*b = hypot(a, b), -s*a + c*b = 0.
bool make_givens(double a, double b, double& c, double& s) {
    if (b == 0.0) return false;
    double r = std::hypot(a, b);
    c = a / r;
    s = b / r;
    return true;
}

void rotate_rows(Matrix& w, int i1, int i2, double c, double s, int col_first, int col_last) {
    for (int j = col_first; j <= col_last; ++j) {
        double a = w(i1, j);
        double b = w(i2, j);
        w(i1, j) = c * a + s * b;
        w(i2, j) = -s * a + c * b;
    }
}

} // namespace

std::pair<UpperTriangular, RotationRecord>
move_column_retriangularize(const UpperTriangular& r, int j, int k) {
    const int n = r.n();
    if (j < 1 || k < j || k > n) throw std::invalid_argument("need 1 <= j <= k <= n");
    if (j == k) return {r, RotationRecord{}};

    const int j0 = j - 1;
    const int k0 = k - 1;
    Matrix w = r.to_matrix();
    w.swap_cols(j0, k0);
    RotationRecord rec;

    // Sweep 1: clear the swapped-in spike in column j (rows j+1..k) bottom-up.
    // Each rotation fills one subdiagonal entry (i, i-1) of the lower row.
    for (int i = k0; i > j0; --i) {
        double c, s;
        if (make_givens(w(i - 1, j0), w(i, j0), c, s)) {
            rotate_rows(w, i - 1, i, c, s, j0, n - 1);
            rec.ops.push_back({i - 1, i, c, s});
        }
        w(i, j0) = 0.0;
    }

    // Sweep 2: clear the subdiagonal trail top-down.
    for (int i = j0 + 2; i <= k0; ++i) {
        double c, s;
        if (make_givens(w(i - 1, i - 1), w(i, i - 1), c, s)) {
            rotate_rows(w, i - 1, i, c, s, i - 1, n - 1);
            rec.ops.push_back({i - 1, i, c, s});
        }
        w(i, i - 1) = 0.0;
    }

    // Positive diagonal within the affected rows; only row k can flip when
    // every rotation fired, but partially-zero spikes can leave others.
    for (int i = j0; i <= k0; ++i) {
        if (w(i, i) < 0.0) {
            for (int t = i; t < n; ++t) w(i, t) = -w(i, t);
            rec.ops.push_back({i, -1, 0.0, 0.0});
        }
    }

    UpperTriangular out(n);
    for (int i = 0; i < n; ++i)
        for (int t = i; t < n; ++t) out(i, t) = w(i, t);
    return {std::move(out), std::move(rec)};
}

UpperTriangular swap_adjacent_retriangularize(const UpperTriangular& r, int k) {
    if (k < 2 || k > r.n()) throw std::invalid_argument("need 2 <= k <= n");
    return move_column_retriangularize(r, k - 1, k).first;
}

} // namespace l0babai
