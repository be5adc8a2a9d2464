#include "l0babai/sp_analysis.hpp"

#include "l0babai/errors.hpp"
#include "l0babai/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace l0babai {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125739;

double sqrt2() { return 1.4142135623730950488; }

} // namespace

double erf_accurate(double x) {
    // Sign split keeps oddness exact even if libm rounds erf(-x) differently.
    if (x < 0.0) return -std::erf(-x);
    if (x == 0.0) return x;  // preserves signed zero
    return std::erf(x);
}

double alpha_kj(double lambda, double r_kk, int j) {
    if (!(r_kk > 0.0)) throw std::invalid_argument("r_kk must be positive");
    if (j < 1) throw std::invalid_argument("branch index must be >= 1");
    double odd = 2.0 * j - 1.0;
    return lambda / (r_kk * r_kk * odd) - odd / 2.0;
}

int j_k(double lambda_bar, double r_bar, int M) {
    if (!(r_bar > 0.0)) throw std::invalid_argument("r_bar must be positive");
    double root = std::sqrt(1.0 + lambda_bar / (r_bar * r_bar));
    int j = static_cast<int>(std::floor(0.5 * root)) + 1;
    return std::min(M, j);
}

double rho_rb_dimensionless(double gamma, double lambda_bar, const Alphabet& alphabet) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (lambda_bar < 0.0) throw std::invalid_argument("lambda_bar must be nonnegative");
    const int M = alphabet.M();
    const double p = alphabet.p();
    const int j = j_k(lambda_bar, gamma, M);
    const double odd = 2.0 * j - 1.0;
    // alpha in the dimensionless form: lambda_bar/(2 gamma^2 (2j-1)) - (2j-1)/2.
    const double alpha = lambda_bar / (2.0 * gamma * gamma * odd) - odd / 2.0;
    double rho = p / (2.0 * M);
    rho += (static_cast<double>(M - j) / M) * p * erf_accurate(gamma);
    rho -= (p / (2.0 * M)) * erf_accurate(alpha * gamma);
    rho += (1.0 - p) * erf_accurate((odd + alpha) * gamma);
    return std::min(rho, 1.0);
}

double rho_bb_dimensionless(double gamma, const Alphabet& alphabet) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const int M = alphabet.M();
    const double p = alphabet.p();
    double rho = p / (2.0 * M);
    rho += (static_cast<double>(M - 1) / M) * p * erf_accurate(gamma);
    rho += (1.0 - (2.0 * M - 1.0) * p / (2.0 * M)) * erf_accurate(gamma / 2.0);
    return std::min(rho, 1.0);
}

double rho_rb(double r_kk, double sigma, double lambda, const Alphabet& alphabet) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    return rho_rb_dimensionless(r_kk / (sqrt2() * sigma), lambda / (sigma * sigma), alphabet);
}

double rho_bb(double r_kk, double sigma, const Alphabet& alphabet) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    return rho_bb_dimensionless(r_kk / (sqrt2() * sigma), alphabet);
}

SpReport sp_rb(const UpperTriangular& r, double sigma, double lambda, const Alphabet& alphabet) {
    SpReport rep;
    rep.detector = DetectorTag::rb;
    rep.rho.resize(r.n());
    rep.total = 1.0;
    for (int k = 0; k < r.n(); ++k) {
        rep.rho[k] = rho_rb(r.diag(k), sigma, lambda, alphabet);
        rep.total *= rep.rho[k];
    }
    return rep;
}

SpReport sp_bb(const UpperTriangular& r, double sigma, const Alphabet& alphabet) {
    SpReport rep;
    rep.detector = DetectorTag::bb;
    rep.rho.resize(r.n());
    rep.total = 1.0;
    for (int k = 0; k < r.n(); ++k) {
        rep.rho[k] = rho_bb(r.diag(k), sigma, alphabet);
        rep.total *= rep.rho[k];
    }
    return rep;
}

namespace {

double theta_of(double gamma, double lambda_bar, int j) {
    double odd = 2.0 * j - 1.0;
    return lambda_bar / (2.0 * odd * gamma) + odd * gamma / 2.0;
}

} // namespace

double rho_rb_dgamma(double gamma, double lambda_bar, const Alphabet& alphabet) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const int M = alphabet.M();
    const double p = alphabet.p();
    const int j = j_k(lambda_bar, gamma, M);
    const double odd = 2.0 * j - 1.0;
    const double theta = theta_of(gamma, lambda_bar, j);
    double d = (static_cast<double>(M - j) / M) * p * std::exp(-gamma * gamma);
    d += (1.0 - p) * odd * std::exp(-theta * theta);
    return kTwoOverSqrtPi * d;
}

double rho_rb_d2gamma(double gamma, double lambda_bar, const Alphabet& alphabet) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const int M = alphabet.M();
    const double p = alphabet.p();
    const int j = j_k(lambda_bar, gamma, M);
    const double odd = 2.0 * j - 1.0;
    const double theta = theta_of(gamma, lambda_bar, j);
    double d = -2.0 * (static_cast<double>(M - j) / M) * p * gamma * std::exp(-gamma * gamma);
    double bracket = lambda_bar * lambda_bar / (odd * odd * gamma * gamma * gamma) - odd * odd * gamma;
    d += 0.5 * (1.0 - p) * odd * std::exp(-theta * theta) * bracket;
    return kTwoOverSqrtPi * d;
}

std::vector<double> gamma_breakpoints(double lambda_bar, int M) {
    std::vector<double> out;
    if (M < 2 || lambda_bar <= 0.0) return out;
    out.reserve(M - 1);
    for (int i = 1; i <= M - 1; ++i) {
        int u = M - i + 1;  // branch index active left of (and at) this point
        double denom = (2.0 * u - 1.0) * (2.0 * u - 3.0);
        out.push_back(std::sqrt(lambda_bar / denom));
    }
    return out;
}

double f_second(double zeta, double lambda_bar, const Alphabet& alphabet) {
    double gamma = std::exp(zeta);
    for (double bp : gamma_breakpoints(lambda_bar, alphabet.M())) {
        if (std::abs(gamma - bp) <= 1e-13 * std::max(1.0, bp))
            throw numeric_error("F'' evaluated at a branch transition point");
    }
    double rho = rho_rb_dimensionless(gamma, lambda_bar, alphabet);
    double d1 = rho_rb_dgamma(gamma, lambda_bar, alphabet);
    double d2 = rho_rb_d2gamma(gamma, lambda_bar, alphabet);
    double t = d1 / rho * gamma;
    return d2 / rho * gamma * gamma + t - t * t;
}

namespace {

// Roots of F'' inside [lo, hi] found by a sign-change scan plus bisection.
// Exact zeros from underflowed tails are plateaus, not crossings, so only
// strict sign flips (or an isolated zero between opposite signs) count.
// Deep in the Gaussian tails the two exponential terms of F'' underflow at
// slightly different abscissas, so inside the denormal fringe the computed
// sign is noise; a flip only counts when at least one endpoint is above it.
void scan_roots(double lo, double hi, int grid, double lambda_bar, const Alphabet& alphabet,
                std::vector<double>& roots) {
    constexpr double fringe = 1e-280;
    if (!(hi > lo)) return;
    auto f = [&](double z) { return f_second(z, lambda_bar, alphabet); };
    double step = (hi - lo) / grid;
    std::vector<double> fv(grid + 1);
    for (int i = 0; i <= grid; ++i) fv[i] = f(lo + i * step);
    for (int i = 0; i < grid; ++i) {
        double za = lo + i * step, zb = za + step;
        if (std::max(std::abs(fv[i]), std::abs(fv[i + 1])) <= fringe) continue;
        if ((fv[i] > 0.0 && fv[i + 1] < 0.0) || (fv[i] < 0.0 && fv[i + 1] > 0.0)) {
            double a = za, b = zb, fa = fv[i];
            while (b - a > 1e-12) {
                double mid = 0.5 * (a + b);
                double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        } else if (i > 0 && fv[i] == 0.0 &&
                   ((fv[i - 1] > 0.0 && fv[i + 1] < 0.0) ||
                    (fv[i - 1] < 0.0 && fv[i + 1] > 0.0))) {
            roots.push_back(za);
        }
    }
}

} // namespace

std::pair<double, double> mu_roots(double lambda_bar, const Alphabet& alphabet) {
    if (lambda_bar < 0.0) throw std::invalid_argument("lambda_bar must be nonnegative");
    const double margin = 1e-9;  // keeps scan endpoints off the transition points
    double lo = std::log(1e-6);
    double hi = std::log(1e6);
    const int grid = 4096;

    for (int attempt = 0; attempt < 4; ++attempt) {
        // Piece boundaries: the log of each branch transition splits the window.
        std::vector<double> cuts{lo};
        for (double bp : gamma_breakpoints(lambda_bar, alphabet.M())) {
            double z = std::log(bp);
            if (z > lo && z < hi) cuts.push_back(z);
        }
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());

        std::vector<double> roots;
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            scan_roots(cuts[i] + (i == 0 ? 0.0 : margin),
                       cuts[i + 1] - (i + 2 == cuts.size() ? 0.0 : margin),
                       grid, lambda_bar, alphabet, roots);
        if (!roots.empty()) {
            auto [mn, mx] = std::minmax_element(roots.begin(), roots.end());
            return {std::exp(*mn), std::exp(*mx)};
        }
        lo -= std::log(1e3);
        hi += std::log(1e3);
    }
    throw numeric_error("no F'' root found inside the scan window");
}

std::pair<double, double> mu_roots_cached(const Alphabet& alphabet) {
    static std::map<std::pair<int, double>, std::pair<double, double>> cache;
    static std::mutex mu;
    std::pair<int, double> key{alphabet.M(), alphabet.p()};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto value = mu_roots(lambda_bar_star(alphabet), alphabet);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, value).first->second;
}

BoundReport sp_bound(const UpperTriangular& r, double sigma, const Alphabet& alphabet) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    BoundReport rep;
    double log_sum = 0.0;
    for (int k = 0; k < r.n(); ++k) log_sum += std::log(r.diag(k));
    rep.omega = std::exp(log_sum / r.n());
    rep.omega_bar = rep.omega / (sqrt2() * sigma);
    auto [mu1, mu2] = mu_roots_cached(alphabet);
    rep.mu1 = mu1;
    rep.mu2 = mu2;
    double lambda_bar = lambda_bar_star(alphabet);
    rep.bound_value = std::pow(rho_rb_dimensionless(rep.omega_bar, lambda_bar, alphabet), r.n());
    if (r.max_diag() <= sqrt2() * sigma * mu1)
        rep.side = BoundSide::lower;
    else if (r.min_diag() >= sqrt2() * sigma * mu2)
        rep.side = BoundSide::upper;
    else
        rep.side = BoundSide::inconclusive;
    return rep;
}

double phi(double gamma, double beta, double lambda_bar, const Alphabet& alphabet) {
    if (!(gamma > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("gamma and beta must be positive");
    return rho_rb_dimensionless(gamma, lambda_bar, alphabet) *
           rho_rb_dimensionless(beta / gamma, lambda_bar, alphabet);
}

} // namespace l0babai
