#pragma once

#include <vector>

namespace l0babai {

/// Constellation X = {0} u {+-1, +-3, ..., +-(2M-1)} with sparsity prior p:
/// an entry is 0 with probability 1-p and each nonzero member with
/// probability p/(2M). Requires 0 < p <= 2M/(2M+1).
class Alphabet {
public:
    Alphabet(int m_half, double p);

    int M() const { return m_; }
    double p() const { return p_; }
    int max_member() const { return 2 * m_ - 1; }

    /// Largest admissible p for this M.
    static double p_max(int m_half) { return 2.0 * m_half / (2.0 * m_half + 1.0); }

    bool contains(int x) const;

    /// All members sorted ascending: -(2M-1), ..., -1, 0, 1, ..., 2M-1.
    std::vector<int> sorted_members() const;

private:
    int m_;
    double p_;
};

/// Nearest member of X to c; exact ties go to the smaller magnitude;
/// saturates at +-(2M-1).
int nearest_in_alphabet(double c, const Alphabet& alphabet);

/// Nearest integer to c with ties toward the smaller magnitude.
long long nearest_integer(double c);

} // namespace l0babai
