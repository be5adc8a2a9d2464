#include "l0babai/model.hpp"

#include <cmath>
#include <stdexcept>

namespace l0babai {

double lambda_bar_star(const Alphabet& alphabet) {
    double p = alphabet.p();
    // Exact zero at the largest admissible p, where the prior odds are even.
    if (p == Alphabet::p_max(alphabet.M())) return 0.0;
    return std::log((1.0 - p) * (2.0 * alphabet.M()) / p);
}

double lambda_star(double sigma, const Alphabet& alphabet) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    return sigma * sigma * lambda_bar_star(alphabet);
}

std::vector<int> sample_x_star(int n, const Alphabet& alphabet, Rng& rng) {
    std::vector<int> x(n, 0);
    const double p = alphabet.p();
    const int two_m = 2 * alphabet.M();
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        if (u < 1.0 - p) continue;
        int idx = static_cast<int>((u - (1.0 - p)) / (p / two_m));
        if (idx >= two_m) idx = two_m - 1;
        int magnitude = 2 * (idx / 2) + 1;
        x[i] = idx % 2 ? -magnitude : magnitude;
    }
    return x;
}

Observation simulate_observation(const Matrix& a, const std::vector<int>& x_star,
                                 double sigma, Rng& rng) {
    if (a.cols() != static_cast<int>(x_star.size()))
        throw std::invalid_argument("x* length must match matrix columns");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
    Observation obs;
    obs.v.resize(a.rows());
    for (double& vi : obs.v) vi = sigma == 0.0 ? 0.0 : sigma * rng.gaussian();
    obs.y.resize(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x_star[j];
        obs.y[i] = s + obs.v[i];
    }
    return obs;
}

} // namespace l0babai
