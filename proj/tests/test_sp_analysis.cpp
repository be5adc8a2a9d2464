#include "doctest.h"

#include "l0babai/alphabet.hpp"
#include "l0babai/errors.hpp"
#include "l0babai/matrix.hpp"
#include "l0babai/model.hpp"
#include "l0babai/qr.hpp"
#include "l0babai/random_matrices.hpp"
#include "l0babai/rng.hpp"
#include "l0babai/sp_analysis.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace l0babai;

namespace {

// Independent oracle: composite Simpson quadrature of (2/sqrt(pi)) e^{-t^2}
// in long double. 2^16 panels keep the truncation error below 1e-16.
long double erf_quadrature(long double x) {
    const int panels = 1 << 16;
    const long double h = x / panels;
    long double sum = std::exp(-0.0L) + std::exp(-x * x);
    for (int i = 1; i < panels; ++i) {
        long double t = i * h;
        sum += (i % 2 ? 4.0L : 2.0L) * std::exp(-t * t);
    }
    const long double two_over_sqrt_pi = 1.128379167095512573896158903121545172L;
    return two_over_sqrt_pi * sum * h / 3.0L;
}

std::uint64_t bits_of(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

Matrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
    Matrix a(rows, cols);
    for (auto& v : a.data()) v = rng.gaussian();
    return a;
}

UpperTriangular diag_r(const std::vector<double>& d) {
    int n = (int)d.size();
    std::vector<double> e(n * n, 0.0);
    for (int i = 0; i < n; ++i) e[i * n + i] = d[i];
    return UpperTriangular::from_matrix(Matrix(n, n, e));
}

double min_gap_to_breakpoints(double gamma, const std::vector<double>& bps) {
    double gap = 1e300;
    for (double b : bps) gap = std::min(gap, std::fabs(gamma - b));
    return gap;
}

} // namespace

TEST_CASE("erf matches quadrature to 1e-14 relative") {
    for (double x : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.3, 1.7,
                     2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0}) {
        double want = (double)erf_quadrature((long double)x);
        CHECK(erf_accurate(x) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("erf saturates cleanly past the representable shoulder") {
    // True 1 - erf(6.2) is below 2e-18, so the correctly rounded double is 1.
    for (double x : {6.2, 7.0, 10.0, 50.0}) {
        CHECK(erf_accurate(x) <= 1.0);
        CHECK(std::fabs(erf_accurate(x) - 1.0) <= 1e-17);
    }
}

TEST_CASE("erf oddness is bitwise exact") {
    Rng rng(601);
    for (int i = 0; i < 200; ++i) {
        double x = 12.0 * (rng.uniform() - 0.5);
        CHECK(bits_of(erf_accurate(-x)) == bits_of(-erf_accurate(x)));
    }
    CHECK(erf_accurate(0.0) == 0.0);
}

TEST_CASE("two-level success probability regression") {
    auto r = UpperTriangular::from_matrix(Matrix(2, 2, {0.8432, -0.6045, 0.0, 0.8980}));
    Alphabet a(4, 0.6);
    CHECK(std::fabs(sp_bb(r, 0.2, a).total - 0.9718) <= 5e-4);
    CHECK(std::fabs(sp_rb(r, 0.2, 0.0670, a).total - 0.9805) <= 5e-4);
    CHECK(std::fabs(sp_rb(r, 0.2, 0.2, a).total - 0.9537) <= 5e-4);
}

TEST_CASE("report totals are the product of the per-level factors") {
    Rng rng(602);
    Alphabet a(2, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = qr_factorize(random_gaussian_matrix(8, 6, rng)).r;
        double sigma = 0.05 + rng.uniform();
        auto rep = sp_rb(r, sigma, lambda_star(sigma, a), a);
        REQUIRE(rep.rho.size() == 6);
        double prod = 1.0;
        for (double f : rep.rho) {
            CHECK(f > 0.0);
            CHECK(f <= 1.0);
            prod *= f;
        }
        CHECK(rep.total == doctest::Approx(prod).epsilon(1e-14));
        CHECK(rep.total > 0.0);
        CHECK(rep.total <= 1.0);

        auto bb = sp_bb(r, sigma, a);
        CHECK(bb.detector == DetectorTag::bb);
        CHECK(rep.detector == DetectorTag::rb);
    }
}

TEST_CASE("alpha agrees between natural and dimensionless forms") {
    Rng rng(603);
    for (int trial = 0; trial < 2000; ++trial) {
        double sigma = 0.05 + 2.0 * rng.uniform();
        double r_kk = 0.05 + 3.0 * rng.uniform();
        double lambda = 0.01 + rng.uniform();
        int j = 1 + (int)(rng.uniform() * 4.0);
        double lambda_bar = lambda / (sigma * sigma);
        double gamma = r_kk / (std::sqrt(2.0) * sigma);
        double odd = 2.0 * j - 1.0;
        double dimless = lambda_bar / (2.0 * gamma * gamma * odd) - odd / 2.0;
        CHECK(alpha_kj(lambda, r_kk, j) == doctest::Approx(dimless).epsilon(1e-13));
    }
    // Strictly decreasing in j.
    for (int j = 1; j < 6; ++j)
        CHECK(alpha_kj(0.3, 0.9, j) > alpha_kj(0.3, 0.9, j + 1));
}

TEST_CASE("active branch index equals the largest j with alpha_j >= -1") {
    Rng rng(604);
    for (int trial = 0; trial < 2000; ++trial) {
        int m = 1 + (int)(rng.uniform() * 6.0);
        double lambda_bar = rng.uniform() * 5.0;
        double gamma = 0.02 + 3.0 * rng.uniform();
        int j = j_k(lambda_bar, gamma, m);
        REQUIRE(j >= 1);
        REQUIRE(j <= m);
        int scan = 1;
        for (int jj = 1; jj <= m; ++jj) {
            double odd = 2.0 * jj - 1.0;
            double alpha = lambda_bar / (2.0 * gamma * gamma * odd) - odd / 2.0;
            if (alpha >= -1.0) scan = jj;
        }
        CHECK(j == scan);
    }
}

TEST_CASE("branch transitions sit where the index steps down") {
    Rng rng(605);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 2 + (int)(rng.uniform() * 5.0);
        Alphabet a(m, 0.05 + 0.8 * Alphabet::p_max(m) * rng.uniform());
        double lb = lambda_bar_star(a);
        if (lb <= 0.0) continue;
        auto bps = gamma_breakpoints(lb, m);
        REQUIRE((int)bps.size() == m - 1);
        for (size_t i = 1; i < bps.size(); ++i) CHECK(bps[i] > bps[i - 1]);
        for (size_t i = 0; i < bps.size(); ++i) {
            int u = m - (int)i;  // piece ending at bps[i] uses branch u = M-i (1-based i)
            CHECK(j_k(lb, bps[i] * (1.0 - 1e-9), m) == u);
            CHECK(j_k(lb, bps[i] * (1.0 + 1e-9), m) == u - 1);
        }
    }
    CHECK(gamma_breakpoints(1.0, 1).empty());
    CHECK(gamma_breakpoints(0.0, 4).empty());
}

TEST_CASE("factors are continuous across branch transitions") {
    for (int m : {2, 3, 4, 8}) {
        Alphabet a(m, 0.3);
        double lb = lambda_bar_star(a);
        for (double bp : gamma_breakpoints(lb, m)) {
            double left = rho_rb_dimensionless(bp - 1e-10, lb, a);
            double right = rho_rb_dimensionless(bp + 1e-10, lb, a);
            CHECK(std::fabs(left - right) <= 1e-9);
        }
    }
}

TEST_CASE("limits of the factors at the noise extremes") {
    for (int m : {1, 2, 4}) {
        Alphabet a(m, 0.3);
        double lb = lambda_bar_star(a);
        CHECK(rho_rb_dimensionless(1e-8, lb, a) == doctest::Approx(0.7).epsilon(1e-6));
        CHECK(rho_rb_dimensionless(30.0, lb, a) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rho_bb_dimensionless(1e-8, a)
              == doctest::Approx(0.3 / (2.0 * m)).epsilon(1e-6));
        CHECK(rho_bb_dimensionless(30.0, a) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("zero weight recovers the box factor") {
    Rng rng(606);
    for (int trial = 0; trial < 500; ++trial) {
        int m = 1 + (int)(rng.uniform() * 5.0);
        Alphabet a(m, 0.02 + 0.95 * Alphabet::p_max(m) * rng.uniform());
        double gamma = 0.02 + 4.0 * rng.uniform();
        CHECK(rho_rb_dimensionless(gamma, 0.0, a)
              == doctest::Approx(rho_bb_dimensionless(gamma, a)).epsilon(1e-14));
    }
}

TEST_CASE("matched weight never loses to the box detector") {
    Rng rng(607);
    for (int trial = 0; trial < 2000; ++trial) {
        int m = 1 + (int)(rng.uniform() * 5.0);
        Alphabet a(m, 0.05 + 0.9 * Alphabet::p_max(m) * rng.uniform());
        double gamma = std::exp(std::log(1e-3) + rng.uniform() * std::log(3.0 / 1e-3));
        CHECK(rho_rb_dimensionless(gamma, lambda_bar_star(a), a)
              >= rho_bb_dimensionless(gamma, a) * (1.0 - 1e-15));
    }
}

TEST_CASE("factors increase strictly with the diagonal entry") {
    // Band chosen so the increments stay representable: below gamma ~ 0.1 the
    // regularized factor is flat to double precision (its slope underflows).
    Rng rng(608);
    for (int trial = 0; trial < 2000; ++trial) {
        int m = 1 + (int)(rng.uniform() * 5.0);
        double pmax = Alphabet::p_max(m);
        Alphabet a(m, 0.1 + (0.95 * pmax - 0.1) * rng.uniform());
        double lb = lambda_bar_star(a);
        double g1 = std::exp(std::log(0.3) + rng.uniform() * std::log(3.0 / 0.3));
        double g2 = g1 * (1.0 + 0.01 + rng.uniform());
        CHECK(rho_rb_dimensionless(g1, lb, a) < rho_rb_dimensionless(g2, lb, a));
        CHECK(rho_bb_dimensionless(g1, a) < rho_bb_dimensionless(g2, a));
    }
}

TEST_CASE("the success ratio decreases strictly with the prior") {
    Rng rng(609);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + (int)(rng.uniform() * 4.0);
        int m = 1 + (int)(rng.uniform() * 4.0);
        auto r = qr_factorize(random_gaussian_matrix(n + 2, n, rng)).r;
        double sigma = 0.3 + rng.uniform();
        double pmax = Alphabet::p_max(m);
        double prev = -1.0;
        for (double frac : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            Alphabet a(m, frac * pmax);
            double ratio = sp_rb(r, sigma, lambda_star(sigma, a), a).total
                           / sp_bb(r, sigma, a).total;
            if (prev > 0.0) CHECK(ratio < prev);
            prev = ratio;
        }
        Alphabet edge(m, pmax);
        double ratio = sp_rb(r, sigma, lambda_star(sigma, edge), edge).total
                       / sp_bb(r, sigma, edge).total;
        CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("derivative is positive wherever it does not underflow") {
    Rng rng(610);
    for (int trial = 0; trial < 1000; ++trial) {
        int m = 1 + (int)(rng.uniform() * 5.0);
        double pmax = Alphabet::p_max(m);
        Alphabet a(m, 0.1 + (0.95 * pmax - 0.1) * rng.uniform());
        double gamma = std::exp(std::log(0.1) + rng.uniform() * std::log(6.0 / 0.1));
        CHECK(rho_rb_dgamma(gamma, lambda_bar_star(a), a) > 0.0);
    }
}

TEST_CASE("derivatives match central differences at the matched weight") {
    Rng rng(611);
    int tested = 0;
    int attempts = 0;
    while (tested < 50) {
        REQUIRE(++attempts < 10000);
        int m = 1 + (int)(rng.uniform() * 5.0);
        Alphabet a(m, 0.1 + 0.75 * Alphabet::p_max(m) * rng.uniform());
        double lb = lambda_bar_star(a);
        double gamma = std::exp(std::log(0.05) + rng.uniform() * std::log(3.0 / 0.05));
        auto bps = gamma_breakpoints(lb, m);
        if (min_gap_to_breakpoints(gamma, bps) < 1e-3 * gamma) continue;

        double an1 = rho_rb_dgamma(gamma, lb, a);
        if (an1 < 1e-30) continue;  // flat to double precision
        double h = 1e-5 * gamma;
        // Central differences carry rounding noise of order eps*|f|/h on top
        // of the O(h^2) truncation term, so the tolerance combines a relative
        // part with that absolute floor (|rho| <= 1, |rho'| <= an1 nearby).
        double noise1 = 20.0 * std::numeric_limits<double>::epsilon() / h;
        double fd1 = (rho_rb_dimensionless(gamma + h, lb, a)
                      - rho_rb_dimensionless(gamma - h, lb, a)) / (2.0 * h);
        CHECK(std::fabs(fd1 - an1) <= 1e-5 * std::fabs(an1) + noise1);

        double an2 = rho_rb_d2gamma(gamma, lb, a);
        if (std::fabs(an2) * gamma < 1e-3 * std::fabs(an1)) continue;  // too close to an inflection
        double noise2 = 20.0 * std::numeric_limits<double>::epsilon() * an1 / h;
        double fd2 = (rho_rb_dgamma(gamma + h, lb, a)
                      - rho_rb_dgamma(gamma - h, lb, a)) / (2.0 * h);
        CHECK(std::fabs(fd2 - an2) <= 1e-5 * std::fabs(an2) + noise2);
        ++tested;
    }
}

TEST_CASE("log-domain curvature guards its branch transitions") {
    Alphabet a(2, 0.1);
    double lb = lambda_bar_star(a);
    auto bps = gamma_breakpoints(lb, 2);
    REQUIRE(bps.size() == 1);
    CHECK_THROWS_AS(f_second(std::log(bps[0]), lb, a), numeric_error);
    CHECK_NOTHROW(f_second(std::log(bps[0] * (1.0 + 1e-6)), lb, a));
    // The curvature jumps upward across the transition.
    double left = f_second(std::log(bps[0] * (1.0 - 1e-6)), lb, a);
    double right = f_second(std::log(bps[0] * (1.0 + 1e-6)), lb, a);
    CHECK(right > left);
}

TEST_CASE("curvature sign pattern around the outer roots") {
    Alphabet a(2, 0.1);
    double lb = lambda_bar_star(a);
    auto [mu1, mu2] = mu_roots(lb, a);
    CHECK(std::fabs(mu1 - 0.7182) <= 5e-4);
    CHECK(std::fabs(mu2 - 2.0972) <= 5e-4);
    CHECK(f_second(std::log(mu1) - 0.1, lb, a) > 0.0);
    CHECK(f_second(std::log(mu2) + 0.1, lb, a) < 0.0);
    CHECK(f_second(std::log(mu1) - 1e-5, lb, a) * f_second(std::log(mu1) + 1e-5, lb, a) < 0.0);
    CHECK(f_second(std::log(mu2) - 1e-5, lb, a) * f_second(std::log(mu2) + 1e-5, lb, a) < 0.0);
}

TEST_CASE("outer root table") {
    // Pinned against a 50-digit arbitrary-precision scan of F''. At M=32 a
    // narrow negative dip ends at a branch transition where F'' jumps upward
    // through zero; the jump point is a sign change but not a root, so mu1 is
    // the continuous crossing that opens the dip.
    struct Row { int m; double p, mu1, mu2; };
    const Row rows[] = {
        {2, 0.1, 0.7182, 2.0972}, {2, 0.7, 0.3865, 0.6913},
        {4, 0.1, 0.3304, 2.2065}, {4, 0.7, 0.4637, 0.6775},
        {32, 0.1, 0.6233, 0.7551}, {32, 0.7, 0.4648, 0.5491},
        {2, 0.5, 0.4982, 1.0429}, {4, 0.3, 0.2840, 0.6518},
        {2, 0.4, 0.5475, 1.2546},
    };
    for (const auto& row : rows) {
        Alphabet a(row.m, row.p);
        auto [mu1, mu2] = mu_roots_cached(a);
        CHECK(std::fabs(mu1 - row.mu1) <= 5e-4);
        CHECK(std::fabs(mu2 - row.mu2) <= 5e-4);
        CHECK(mu1 < mu2);
        // The cache returns the same pair on every call.
        auto again = mu_roots_cached(a);
        CHECK(again.first == mu1);
        CHECK(again.second == mu2);
    }
}

TEST_CASE("geometric-mean bound brackets the success probability") {
    Rng rng(612);
    Alphabet a(2, 0.4);
    auto [mu1, mu2] = mu_roots_cached(a);
    for (int trial = 0; trial < 200; ++trial) {
        double sigma = 0.1 + rng.uniform();
        double scale = std::sqrt(2.0) * sigma;
        int n = 2 + (int)(rng.uniform() * 5.0);

        std::vector<double> low(n), high(n);
        for (int i = 0; i < n; ++i) {
            low[i] = scale * mu1 * (0.2 + 0.8 * rng.uniform());
            high[i] = scale * mu2 * (1.0 + 2.0 * rng.uniform());
        }
        auto rl = diag_r(low);
        auto bl = sp_bound(rl, sigma, a);
        CHECK(bl.side == BoundSide::lower);
        CHECK(sp_rb(rl, sigma, lambda_star(sigma, a), a).total
              >= bl.bound_value * (1.0 - 1e-12));

        auto rh = diag_r(high);
        auto bh = sp_bound(rh, sigma, a);
        CHECK(bh.side == BoundSide::upper);
        CHECK(sp_rb(rh, sigma, lambda_star(sigma, a), a).total
              <= bh.bound_value * (1.0 + 1e-12));
    }
}

TEST_CASE("bound is exact for an equal diagonal and reports its inputs") {
    Alphabet a(2, 0.4);
    double sigma = 0.3;
    auto r = diag_r({0.9, 0.9, 0.9, 0.9, 0.9});
    auto b = sp_bound(r, sigma, a);
    CHECK(b.omega == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(b.omega_bar == doctest::Approx(0.9 / (std::sqrt(2.0) * sigma)).epsilon(1e-14));
    auto [mu1, mu2] = mu_roots_cached(a);
    CHECK(b.mu1 == mu1);
    CHECK(b.mu2 == mu2);
    double total = sp_rb(r, sigma, lambda_star(sigma, a), a).total;
    CHECK(b.bound_value == doctest::Approx(total).epsilon(1e-12));

    // A diagonal straddling the root interval decides neither side.
    auto mixed = diag_r({std::sqrt(2.0) * sigma * mu1 * 0.5, std::sqrt(2.0) * sigma * mu2 * 2.0});
    CHECK(sp_bound(mixed, sigma, a).side == BoundSide::inconclusive);
}

TEST_CASE("pair objective splits into its two factors") {
    Alphabet a(2, 0.3);
    double lb = lambda_bar_star(a);
    Rng rng(613);
    for (int trial = 0; trial < 200; ++trial) {
        double gamma = 0.1 + 2.0 * rng.uniform();
        double beta = 0.1 + 3.0 * rng.uniform();
        double direct = rho_rb_dimensionless(gamma, lb, a)
                        * rho_rb_dimensionless(beta / gamma, lb, a);
        CHECK(phi(gamma, beta, lb, a) == doctest::Approx(direct).epsilon(1e-14));
        CHECK(phi(gamma, beta, lb, a)
              == doctest::Approx(phi(beta / gamma, beta, lb, a)).epsilon(1e-12));
    }
}

TEST_CASE("analysis entry points validate their domains") {
    Alphabet a(2, 0.5);
    CHECK_THROWS_AS(rho_rb_dimensionless(0.0, 1.0, a), std::invalid_argument);
    CHECK_THROWS_AS(rho_rb_dimensionless(1.0, -0.5, a), std::invalid_argument);
    CHECK_THROWS_AS(rho_bb_dimensionless(-1.0, a), std::invalid_argument);
    CHECK_THROWS_AS(rho_rb(0.5, 0.0, 0.1, a), std::invalid_argument);
    CHECK_THROWS_AS(rho_bb(0.5, -0.2, a), std::invalid_argument);
    CHECK_THROWS_AS(alpha_kj(0.1, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(alpha_kj(0.1, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(mu_roots(-1.0, a), std::invalid_argument);
    CHECK_THROWS_AS(phi(0.0, 1.0, 1.0, a), std::invalid_argument);
}
