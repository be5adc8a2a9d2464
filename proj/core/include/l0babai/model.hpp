#pragma once

#include "l0babai/alphabet.hpp"
#include "l0babai/matrix.hpp"
#include "l0babai/rng.hpp"

namespace l0babai {

/// One realization of the linear model y = A x* + v.
struct ModelInstance {
    Matrix a;
    std::vector<int> x_star;
    double sigma = 0.0;
    std::vector<double> y;
    double lambda = 0.0;
};

/// MAP-matched regularization weight sigma^2 ln((1-p)/(p/(2M))).
/// Exactly 0 at p = 2M/(2M+1). Throws std::invalid_argument outside
/// 0 < p <= 2M/(2M+1).
double lambda_star(double sigma, const Alphabet& alphabet);

/// Dimensionless weight ln((1-p)/(p/(2M))) = lambda_star / sigma^2.
double lambda_bar_star(const Alphabet& alphabet);

/// n i.i.d. draws from the sparsity prior.
std::vector<int> sample_x_star(int n, const Alphabet& alphabet, Rng& rng);

struct Observation {
    std::vector<double> y;
    std::vector<double> v;
};

/// y = A x* + v with v ~ N(0, sigma^2 I).
Observation simulate_observation(const Matrix& a, const std::vector<int>& x_star,
                                 double sigma, Rng& rng);

} // namespace l0babai
