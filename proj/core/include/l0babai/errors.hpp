#pragma once

#include <stdexcept>

namespace l0babai {

/// Numeric failure at runtime (root search exhausted, breakpoint hit, guard tripped).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix numerically rank deficient under the positivity threshold.
struct rank_error : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace l0babai
