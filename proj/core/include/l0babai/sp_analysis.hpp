#pragma once

#include "l0babai/alphabet.hpp"
#include "l0babai/matrix.hpp"

#include <vector>

namespace l0babai {

/// Dimensionless parameters of the per-level success probability:
/// lambda_bar = lambda/sigma^2 and r_bar_k = r_kk/(sqrt(2) sigma).
struct SpParams {
    double lambda_bar = 0.0;
    std::vector<double> r_bar;
    int M = 1;
    double p = 0.5;
};

enum class DetectorTag { rb, bb };

/// Per-level success factors and their product.
struct SpReport {
    std::vector<double> rho;
    double total = 1.0;
    DetectorTag detector = DetectorTag::rb;
};

enum class BoundSide { lower, upper, inconclusive };

/// Geometric-mean success-probability bound rho(omega_bar)^n.
struct BoundReport {
    double omega = 0.0;      // geometric mean of the diagonal
    double omega_bar = 0.0;  // omega/(sqrt(2) sigma)
    double mu1 = 0.0;
    double mu2 = 0.0;
    BoundSide side = BoundSide::inconclusive;
    double bound_value = 0.0;
};

/// erf with exact oddness: erf(-x) == -erf(x) bitwise.
double erf_accurate(double x);

/// alpha_j = lambda/(r_kk^2 (2j-1)) - (2j-1)/2, strictly decreasing in j.
double alpha_kj(double lambda, double r_kk, int j);

/// Active branch index: min(M, floor(0.5 sqrt(1 + lambda_bar/r_bar^2)) + 1);
/// equals the largest j in 1..M with alpha_j >= -1.
int j_k(double lambda_bar, double r_bar, int M);

/// Per-level success factor of the regularized detector in dimensionless form.
double rho_rb_dimensionless(double gamma, double lambda_bar, const Alphabet& alphabet);

/// Per-level success factor of the box detector in dimensionless form.
double rho_bb_dimensionless(double gamma, const Alphabet& alphabet);

/// rho for level diagonal r_kk in natural units.
double rho_rb(double r_kk, double sigma, double lambda, const Alphabet& alphabet);
double rho_bb(double r_kk, double sigma, const Alphabet& alphabet);

/// Success probability of the regularized / box Babai point over all levels.
SpReport sp_rb(const UpperTriangular& r, double sigma, double lambda, const Alphabet& alphabet);
SpReport sp_bb(const UpperTriangular& r, double sigma, const Alphabet& alphabet);

/// d rho/d gamma at the MAP-matched weight (lambda_bar = ln((1-p) 2M/p)):
///   (2/sqrt(pi)) [ ((M-j)/M) p e^{-gamma^2} + (1-p)(2j-1) e^{-theta^2} ]
/// with theta = lambda_bar/(2(2j-1)gamma) + (2j-1)gamma/2.
double rho_rb_dgamma(double gamma, double lambda_bar, const Alphabet& alphabet);

/// d^2 rho/d gamma^2 under the same matching:
///   (2/sqrt(pi)) [ -2((M-j)/M) p gamma e^{-gamma^2}
///                  + 0.5 (1-p)(2j-1) e^{-theta^2} (lambda_bar^2/((2j-1)^2 gamma^3) - (2j-1)^2 gamma) ].
double rho_rb_d2gamma(double gamma, double lambda_bar, const Alphabet& alphabet);

/// Branch-transition points gamma^(i) = sqrt(lambda_bar/((2u-1)(2u-3))),
/// u = M-i+1, i = 1..M-1, sorted ascending; empty for M = 1 or lambda_bar = 0.
std::vector<double> gamma_breakpoints(double lambda_bar, int M);

/// F''(zeta) for F(zeta) = ln rho(e^zeta):
///   (rho''/rho) g^2 + (rho'/rho) g - ((rho'/rho) g)^2, g = e^zeta.
/// Throws numeric_error when e^zeta sits within 1e-13 of a breakpoint.
double f_second(double zeta, double lambda_bar, const Alphabet& alphabet);

/// Exponentials of the smallest and largest roots of F''.
/// Throws numeric_error if the sign-change scan exhausts its window.
std::pair<double, double> mu_roots(double lambda_bar, const Alphabet& alphabet);

/// mu_roots at the MAP-matched weight, cached per (M, p).
std::pair<double, double> mu_roots_cached(const Alphabet& alphabet);

/// Geometric-mean bound report at the MAP-matched weight: side = lower when
/// max r_kk <= sqrt(2) sigma mu1 (SP >= bound), upper when
/// min r_kk >= sqrt(2) sigma mu2 (SP <= bound).
BoundReport sp_bound(const UpperTriangular& r, double sigma, const Alphabet& alphabet);

/// Phi(gamma, beta) = rho(gamma) rho(beta/gamma), dimensionless.
double phi(double gamma, double beta, double lambda_bar, const Alphabet& alphabet);

} // namespace l0babai
