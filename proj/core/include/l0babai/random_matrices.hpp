#pragma once

#include "l0babai/matrix.hpp"
#include "l0babai/rng.hpp"

namespace l0babai {

/// n x n matrix with i.i.d. standard normal entries.
Matrix generate_type1(int n, Rng& rng);

/// n x n matrix A = U D V^T with U, V orthonormal factors of random Gaussian
/// matrices and d_ii = 10^(3(n/2 - i)/(n-1)), i = 1..n; cond(A) = 1000.
Matrix generate_type2(int n, Rng& rng);

/// The d_ii sequence used by generate_type2.
std::vector<double> type2_singular_values(int n);

} // namespace l0babai
