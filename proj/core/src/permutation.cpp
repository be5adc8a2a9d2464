#include "l0babai/permutation.hpp"

#include "l0babai/errors.hpp"
#include "l0babai/qr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace l0babai {

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::lllp: return "lllp";
        case Strategy::sqrd: return "sqrd";
        case Strategy::lsp: return "lsp";
        case Strategy::gsp: return "gsp";
        case Strategy::msp: return "msp";
    }
    return "lllp";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
    if (name == "lllp") return Strategy::lllp;
    if (name == "sqrd") return Strategy::sqrd;
    if (name == "lsp") return Strategy::lsp;
    if (name == "gsp") return Strategy::gsp;
    if (name == "msp") return Strategy::msp;
    return std::nullopt;
}

namespace {

// Success probability of the leading k x k subproblem under the RB detector.
double leading_sp(const UpperTriangular& r, int k, double sigma, double lambda,
                  const Alphabet& alphabet) {
    double prod = 1.0;
    for (int t = 0; t < k; ++t) prod *= rho_rb(r.diag(t), sigma, lambda, alphabet);
    return prod;
}

void attach_sp(PermutationOutcome& out, const UpperTriangular& before, const SpContext* ctx) {
    if (!ctx) return;
    out.sp_before = sp_rb(before, ctx->sigma, ctx->lambda, ctx->alphabet);
    out.sp_after = sp_rb(out.r_hat, ctx->sigma, ctx->lambda, ctx->alphabet);
}

// F stays lower triangular in exact arithmetic; clearing the strict upper
// triangle removes the rounding residue the row rotations leave behind.
void clear_strict_upper(Matrix& f) {
    for (int i = 0; i < f.rows(); ++i)
        for (int j = i + 1; j < f.cols(); ++j) f(i, j) = 0.0;
}

// d_j = ||F(j:k, j)|| in 1-based level terms; the new r_kk after moving
// column j to position k is 1/d_j, so argmin d maximizes it.
int vblast_candidate(const Matrix& f, int k) {
    int j_min = 1;
    double d_min = std::numeric_limits<double>::infinity();
    double d_k = 0.0;
    for (int j = 1; j <= k; ++j) {
        double d = f.col_norm(j - 1, j - 1, k - 1);
        if (j == k) d_k = d;
        if (d < d_min) {
            d_min = d;
            j_min = j;
        }
    }
    return d_k == d_min ? k : j_min;
}

// Maintains F = R^{-T} across the same column swap and rotations applied to R.
void update_inverse_factor(Matrix& f, const RotationRecord& rec, int j, int k) {
    f.swap_cols(j - 1, k - 1);
    rec.apply(f, 0, f.cols() - 1);
    clear_strict_upper(f);
}

// Final R for the SP-greedy strategies: refactorize the permuted original
// columns rather than accumulating rotation roundoff level by level.
UpperTriangular refactorized(const UpperTriangular& r, const PermutationVector& p) {
    if (p.is_identity()) return r;
    return qr_factorize(apply_permutation(r.to_matrix(), p)).r;
}

} // namespace

PermutationOutcome lll_p(const UpperTriangular& r, double delta, const SpContext* ctx) {
    if (!(delta > 0.25) || !(delta <= 1.0))
        throw std::invalid_argument("delta must lie in (1/4, 1]");
    const int n = r.n();
    PermutationOutcome out;
    out.strategy = Strategy::lllp;
    out.p = PermutationVector::identity(n);
    out.r_hat = r;

    int k = 2;
    while (k <= n) {
        double a = out.r_hat.diag(k - 2);
        double b = out.r_hat(k - 2, k - 1);
        double c = out.r_hat.diag(k - 1);
        if (delta * a * a > b * b + c * c) {
            out.r_hat = swap_adjacent_retriangularize(out.r_hat, k);
            out.p.swap_positions(k - 2, k - 1);
            k = std::max(k - 1, 2);
        } else {
            ++k;
        }
    }
    attach_sp(out, r, ctx);
    return out;
}

PermutationOutcome sqrd(const Matrix& a, const SpContext* ctx) {
    const int m = a.rows();
    const int n = a.cols();
    if (n < 1 || m < n) throw std::invalid_argument("matrix must be m x n with m >= n >= 1");

    Matrix w = a;
    PermutationVector p = PermutationVector::identity(n);
    for (int t = 0; t < n; ++t) {
        int pivot = t;
        double best = w.col_norm(t, t, m - 1);
        for (int c = t + 1; c < n; ++c) {
            double norm = w.col_norm(c, t, m - 1);
            if (norm < best) {
                best = norm;
                pivot = c;
            }
        }
        if (pivot != t) {
            w.swap_cols(t, pivot);
            p.swap_positions(t, pivot);
        }

        // Householder reflection zeroing rows t+1..m-1 of column t.
        double norm = w.col_norm(t, t, m - 1);
        if (norm == 0.0) continue;
        double alpha = w(t, t) >= 0.0 ? -norm : norm;
        std::vector<double> v(m - t);
        for (int i = t; i < m; ++i) v[i - t] = w(i, t);
        v[0] -= alpha;
        double vsq = 0.0;
        for (double x : v) vsq += x * x;
        if (vsq == 0.0) continue;
        for (int c = t; c < n; ++c) {
            double d = 0.0;
            for (int i = t; i < m; ++i) d += v[i - t] * w(i, c);
            double scale = 2.0 * d / vsq;
            for (int i = t; i < m; ++i) w(i, c) -= scale * v[i - t];
        }
        w(t, t) = alpha;
        for (int i = t + 1; i < m; ++i) w(i, t) = 0.0;
    }

    PermutationOutcome out;
    out.strategy = Strategy::sqrd;
    out.p = p;
    out.r_hat = qr_factorize(apply_permutation(a, p)).r;
    if (ctx) {
        out.sp_before = sp_rb(qr_factorize(a).r, ctx->sigma, ctx->lambda, ctx->alphabet);
        out.sp_after = sp_rb(out.r_hat, ctx->sigma, ctx->lambda, ctx->alphabet);
    }
    return out;
}

PermutationOutcome lsp_vblast(const UpperTriangular& r, const SpContext* ctx) {
    const int n = r.n();
    PermutationOutcome out;
    out.strategy = Strategy::lsp;
    out.p = PermutationVector::identity(n);
    out.r_hat = r;

    Matrix f = inverse_transpose(r);
    for (int k = n; k >= 2; --k) {
        int j = vblast_candidate(f, k);
        if (j == k) continue;
        auto [moved, rec] = move_column_retriangularize(out.r_hat, j, k);
        out.r_hat = std::move(moved);
        update_inverse_factor(f, rec, j, k);
        out.p.swap_positions(j - 1, k - 1);
    }
    attach_sp(out, r, ctx);
    return out;
}

PermutationOutcome gsp(const UpperTriangular& r, double sigma, double lambda,
                       const Alphabet& alphabet) {
    const int n = r.n();
    UpperTriangular work = r;
    PermutationVector p = PermutationVector::identity(n);

    for (int k = n; k >= 2; --k) {
        double best_sp = leading_sp(work, k, sigma, lambda, alphabet);
        int best_j = k;
        for (int j = 1; j < k; ++j) {
            UpperTriangular cand = move_column_retriangularize(work, j, k).first;
            double sp = leading_sp(cand, k, sigma, lambda, alphabet);
            if (sp > best_sp) {
                best_sp = sp;
                best_j = j;
            }
        }
        if (best_j != k) {
            work = move_column_retriangularize(work, best_j, k).first;
            p.swap_positions(best_j - 1, k - 1);
        }
    }

    PermutationOutcome out;
    out.strategy = Strategy::gsp;
    out.p = p;
    out.r_hat = refactorized(r, p);
    SpContext ctx{sigma, lambda, alphabet};
    attach_sp(out, r, &ctx);
    return out;
}

PermutationOutcome msp(const UpperTriangular& r, double sigma, double lambda,
                       const Alphabet& alphabet) {
    const int n = r.n();
    UpperTriangular work = r;
    Matrix f = inverse_transpose(r);
    PermutationVector p = PermutationVector::identity(n);

    for (int k = n; k >= 2; --k) {
        int j_l = vblast_candidate(f, k);
        if (j_l == k) continue;  // keeping the column leaves the SP unchanged
        double sp_cur = leading_sp(work, k, sigma, lambda, alphabet);
        auto [cand, rec] = move_column_retriangularize(work, j_l, k);
        if (leading_sp(cand, k, sigma, lambda, alphabet) >= sp_cur) {
            work = std::move(cand);
            update_inverse_factor(f, rec, j_l, k);
            p.swap_positions(j_l - 1, k - 1);
            continue;
        }
        // Greedy fallback over the remaining candidates for this level.
        double best_sp = sp_cur;
        int best_j = k;
        for (int j = 1; j < k; ++j) {
            if (j == j_l) continue;
            UpperTriangular cand = move_column_retriangularize(work, j, k).first;
            double sp = leading_sp(cand, k, sigma, lambda, alphabet);
            if (sp > best_sp) {
                best_sp = sp;
                best_j = j;
            }
        }
        if (best_j != k) {
            auto [cand, rec] = move_column_retriangularize(work, best_j, k);
            work = std::move(cand);
            update_inverse_factor(f, rec, best_j, k);
            p.swap_positions(best_j - 1, k - 1);
        }
    }

    PermutationOutcome out;
    out.strategy = Strategy::msp;
    out.p = p;
    out.r_hat = refactorized(r, p);
    SpContext ctx{sigma, lambda, alphabet};
    attach_sp(out, r, &ctx);
    return out;
}

} // namespace l0babai
