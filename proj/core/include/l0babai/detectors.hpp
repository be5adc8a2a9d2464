#pragma once

#include "l0babai/alphabet.hpp"
#include "l0babai/matrix.hpp"

#include <vector>

namespace l0babai {

/// Output of one sequential Babai detection sweep.
struct DetectionResult {
    std::vector<int> x_hat;  // entries in X for rb/bb, any integers for ob
    std::vector<double> c;   // per-level centers c_k
    std::vector<double> g;   // per-level scores g_k (regularized detector only)
};

/// L0-regularized box-constrained Babai point. For k = n..1:
///   c_k = (ytilde_k - sum_{j>k} r_kj x_j) / r_kk
///   g_k = 0.5 r_kk^2 q^2 - r_kk^2 q c_k + lambda  with q = round-to-X(c_k)
///   x_k = 0 if g_k >= 0, else q.
DetectionResult babai_regularized(const UpperTriangular& r, const std::vector<double>& y_tilde,
                                  double lambda, const Alphabet& alphabet);

/// Box-constrained Babai point: x_k = round-to-X(c_k).
DetectionResult babai_box(const UpperTriangular& r, const std::vector<double>& y_tilde,
                          const Alphabet& alphabet);

/// Ordinary Babai point: x_k = round-to-integer(c_k), ties to smaller magnitude.
DetectionResult babai_ordinary(const UpperTriangular& r, const std::vector<double>& y_tilde);

/// Objective 0.5 ||ytilde - R x||^2 + lambda ||x||_0.
double rbils_objective(const UpperTriangular& r, const std::vector<double>& y_tilde,
                       const std::vector<int>& x, double lambda);

} // namespace l0babai
