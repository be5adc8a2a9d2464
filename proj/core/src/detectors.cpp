#include "l0babai/detectors.hpp"

#include <stdexcept>

namespace l0babai {

namespace {

void check_dims(const UpperTriangular& r, const std::vector<double>& y_tilde) {
    if (r.n() != static_cast<int>(y_tilde.size()))
        throw std::invalid_argument("ytilde length must match R dimension");
}

double center(const UpperTriangular& r, const std::vector<double>& y_tilde,
              const std::vector<int>& x, int k) {
    double s = y_tilde[k];
    for (int j = k + 1; j < r.n(); ++j) s -= r(k, j) * x[j];
    return s / r(k, k);
}

} // namespace

DetectionResult babai_regularized(const UpperTriangular& r, const std::vector<double>& y_tilde,
                                  double lambda, const Alphabet& alphabet) {
    check_dims(r, y_tilde);
    const int n = r.n();
    DetectionResult res;
    res.x_hat.assign(n, 0);
    res.c.assign(n, 0.0);
    res.g.assign(n, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        double c = center(r, y_tilde, res.x_hat, k);
        int q = nearest_in_alphabet(c, alphabet);
        double rkk2 = r(k, k) * r(k, k);
        double g = 0.5 * rkk2 * q * q - rkk2 * q * c + lambda;
        res.c[k] = c;
        res.g[k] = g;
        res.x_hat[k] = g >= 0.0 ? 0 : q;
    }
    return res;
}

DetectionResult babai_box(const UpperTriangular& r, const std::vector<double>& y_tilde,
                          const Alphabet& alphabet) {
    check_dims(r, y_tilde);
    const int n = r.n();
    DetectionResult res;
    res.x_hat.assign(n, 0);
    res.c.assign(n, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        double c = center(r, y_tilde, res.x_hat, k);
        res.c[k] = c;
        res.x_hat[k] = nearest_in_alphabet(c, alphabet);
    }
    return res;
}

DetectionResult babai_ordinary(const UpperTriangular& r, const std::vector<double>& y_tilde) {
    check_dims(r, y_tilde);
    const int n = r.n();
    DetectionResult res;
    res.x_hat.assign(n, 0);
    res.c.assign(n, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        double c = center(r, y_tilde, res.x_hat, k);
        res.c[k] = c;
        res.x_hat[k] = static_cast<int>(nearest_integer(c));
    }
    return res;
}

double rbils_objective(const UpperTriangular& r, const std::vector<double>& y_tilde,
                       const std::vector<int>& x, double lambda) {
    check_dims(r, y_tilde);
    if (r.n() != static_cast<int>(x.size()))
        throw std::invalid_argument("x length must match R dimension");
    double obj = 0.0;
    int nnz = 0;
    for (int k = 0; k < r.n(); ++k) {
        double s = y_tilde[k];
        for (int j = k; j < r.n(); ++j) s -= r(k, j) * x[j];
        obj += 0.5 * s * s;
        if (x[k] != 0) ++nnz;
    }
    return obj + lambda * nnz;
}

} // namespace l0babai
