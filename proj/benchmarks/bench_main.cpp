// Microbenchmarks for the hot paths: factorization, retriangularization,
// detection sweeps, closed-form SP evaluation, threshold roots, orderings,
// and the Monte-Carlo trial loop.

#include "l0babai/detectors.hpp"
#include "l0babai/experiments.hpp"
#include "l0babai/model.hpp"
#include "l0babai/permutation.hpp"
#include "l0babai/qr.hpp"
#include "l0babai/random_matrices.hpp"
#include "l0babai/rng.hpp"
#include "l0babai/sp_analysis.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace l0babai;

Matrix gaussian_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a(rows, cols);
    for (auto& v : a.data()) v = rng.gaussian();
    return a;
}

UpperTriangular fixture_r(int n, std::uint64_t seed) { return qr_factorize(gaussian_matrix(n + 2, n, seed)).r; }

std::vector<double> fixture_y(const UpperTriangular& r, const Alphabet& alphabet, double sigma,
                              std::uint64_t seed) {
    Rng rng(seed);
    auto x = sample_x_star(r.n(), alphabet, rng);
    std::vector<double> y(r.n());
    for (int i = 0; i < r.n(); ++i) {
        y[i] = sigma * rng.gaussian();
        for (int j = i; j < r.n(); ++j) y[i] += r(i, j) * x[j];
    }
    return y;
}

void bm_qr_factorize(benchmark::State& state) {
    auto a = gaussian_matrix(20, 20, 1);
    for (auto _ : state) benchmark::DoNotOptimize(qr_factorize(a));
}
BENCHMARK(bm_qr_factorize);

void bm_move_column(benchmark::State& state) {
    auto r = fixture_r(20, 2);
    for (auto _ : state) benchmark::DoNotOptimize(move_column_retriangularize(r, 3, 17));
}
BENCHMARK(bm_move_column);

void bm_babai_regularized(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    auto r = fixture_r(20, 3);
    double sigma = 0.5;
    double lambda = lambda_star(sigma, alphabet);
    auto y = fixture_y(r, alphabet, sigma, 4);
    for (auto _ : state) benchmark::DoNotOptimize(babai_regularized(r, y, lambda, alphabet));
}
BENCHMARK(bm_babai_regularized);

void bm_rho_rb(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    double lb = lambda_bar_star(alphabet);
    double gamma = 0.8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rho_rb_dimensionless(gamma, lb, alphabet));
        gamma += 1e-9;
    }
}
BENCHMARK(bm_rho_rb);

void bm_sp_rb_n20(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    auto r = fixture_r(20, 5);
    double sigma = 0.5;
    double lambda = lambda_star(sigma, alphabet);
    for (auto _ : state) benchmark::DoNotOptimize(sp_rb(r, sigma, lambda, alphabet));
}
BENCHMARK(bm_sp_rb_n20);

void bm_mu_roots(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    double lb = lambda_bar_star(alphabet);
    for (auto _ : state) benchmark::DoNotOptimize(mu_roots(lb, alphabet));
}
BENCHMARK(bm_mu_roots);

void bm_lll_p(benchmark::State& state) {
    auto r = fixture_r(20, 6);
    for (auto _ : state) benchmark::DoNotOptimize(lll_p(r));
}
BENCHMARK(bm_lll_p);

void bm_lsp_vblast(benchmark::State& state) {
    auto r = fixture_r(20, 7);
    for (auto _ : state) benchmark::DoNotOptimize(lsp_vblast(r));
}
BENCHMARK(bm_lsp_vblast);

void bm_gsp(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    auto r = fixture_r(20, 8);
    double sigma = 0.5;
    double lambda = lambda_star(sigma, alphabet);
    for (auto _ : state) benchmark::DoNotOptimize(gsp(r, sigma, lambda, alphabet));
}
BENCHMARK(bm_gsp);

void bm_msp(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    auto r = fixture_r(20, 9);
    double sigma = 0.5;
    double lambda = lambda_star(sigma, alphabet);
    for (auto _ : state) benchmark::DoNotOptimize(msp(r, sigma, lambda, alphabet));
}
BENCHMARK(bm_msp);

void bm_monte_carlo_sp_1k(benchmark::State& state) {
    Alphabet alphabet(4, 0.3);
    auto r = fixture_r(20, 10);
    double sigma = 0.5;
    double lambda = lambda_star(sigma, alphabet);
    for (auto _ : state) {
        Rng rng(11);
        benchmark::DoNotOptimize(monte_carlo_sp(r, sigma, lambda, alphabet, 1000, rng));
    }
}
BENCHMARK(bm_monte_carlo_sp_1k);

}  // namespace

BENCHMARK_MAIN();
