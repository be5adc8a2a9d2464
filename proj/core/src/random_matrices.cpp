#include "l0babai/random_matrices.hpp"

#include "l0babai/qr.hpp"

#include <cmath>
#include <stdexcept>

namespace l0babai {

Matrix generate_type1(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
    return a;
}

std::vector<double> type2_singular_values(int n) {
    std::vector<double> d(n);
    for (int i = 1; i <= n; ++i)
        d[i - 1] = std::pow(10.0, 3.0 * (n / 2.0 - i) / (n - 1));
    return d;
}

Matrix generate_type2(int n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("dimension must be at least 2");
    Matrix u = qr_factorize(generate_type1(n, rng)).q1;
    Matrix v = qr_factorize(generate_type1(n, rng)).q1;
    std::vector<double> d = type2_singular_values(n);
    // A = U D V^T.
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int t = 0; t < n; ++t) s += u(i, t) * d[t] * v(j, t);
            a(i, j) = s;
        }
    return a;
}

} // namespace l0babai
