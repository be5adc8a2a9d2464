#include "l0babai/alphabet.hpp"

#include <cmath>
#include <stdexcept>

namespace l0babai {

Alphabet::Alphabet(int m_half, double p) : m_(m_half), p_(p) {
    if (m_half < 1) throw std::invalid_argument("constellation half-size M must be >= 1");
    if (!(p > 0.0) || p > p_max(m_half))
        throw std::invalid_argument("sparsity p must lie in (0, 2M/(2M+1)]");
}

bool Alphabet::contains(int x) const {
    if (x == 0) return true;
    int ax = x < 0 ? -x : x;
    return ax % 2 == 1 && ax <= max_member();
}

std::vector<int> Alphabet::sorted_members() const {
    std::vector<int> out;
    out.reserve(2 * m_ + 1);
    for (int v = max_member(); v >= 1; v -= 2) out.push_back(-v);
    out.push_back(0);
    for (int v = 1; v <= max_member(); v += 2) out.push_back(v);
    return out;
}

int nearest_in_alphabet(double c, const Alphabet& alphabet) {
    double ac = std::abs(c);
    if (ac <= 0.5) return 0;
    // Nearest odd number to ac is 2 ceil(ac/2) - 1; the ceil ties at even ac
    // resolve downward, matching the smaller-magnitude rule.
    long long t = static_cast<long long>(std::ceil(ac / 2.0));
    long long o = 2 * t - 1;
    long long cap = alphabet.max_member();
    if (o > cap) o = cap;
    return static_cast<int>(c < 0.0 ? -o : o);
}

long long nearest_integer(double c) {
    double ac = std::abs(c);
    long long q = static_cast<long long>(std::ceil(ac - 0.5));
    return c < 0.0 ? -q : q;
}

} // namespace l0babai
