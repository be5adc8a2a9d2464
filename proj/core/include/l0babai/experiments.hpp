#pragma once

#include "l0babai/alphabet.hpp"
#include "l0babai/matrix.hpp"
#include "l0babai/permutation.hpp"
#include "l0babai/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace l0babai {

enum class MatrixType { type1, type2 };

std::string matrix_type_name(MatrixType t);

/// Scale and sweep parameters for one experiment run.
struct ExperimentConfig {
    std::optional<MatrixType> matrix_type;  // unset: sweep both types
    int n = 20;
    int m = 20;
    int M = 4;
    std::vector<double> p_list;      // experiment default when empty
    std::vector<double> sigma_list;  // experiment default when empty
    int n_matrices = 20;
    int n_x = 100;
    int n_noise = 100;
    std::vector<std::string> strategies;  // experiment default when empty
    std::uint64_t seed = 1;
    std::string output_dir = "results";

    static ExperimentConfig desk_scale();
    static ExperimentConfig paper_scale();

    void validate() const;  // throws std::invalid_argument
};

/// Binomial estimate with a 1.96 sqrt(est(1-est)/trials) half-width.
struct McEstimate {
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double estimate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
    double ci95_halfwidth() const;
};

/// Monte-Carlo success probability of the regularized Babai point on
/// ytilde = R x* + vtilde, exact vector equality counted as success.
McEstimate monte_carlo_sp(const UpperTriangular& r, double sigma, double lambda,
                          const Alphabet& alphabet, std::int64_t trials, Rng& rng);

/// Exhaustive minimizer of 0.5||ytilde - R x||^2 + lambda||x||_0 over X^n.
/// Ties break to the lexicographically smallest vector. Guard: (2M+1)^n <= 1e7.
std::vector<int> brute_force_map(const UpperTriangular& r, const std::vector<double>& y_tilde,
                                 double lambda, const Alphabet& alphabet);

/// One output table: header plus rows of printable cells.
struct ResultTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
    std::vector<ResultTable> tables;
};

/// Theoretical-vs-simulated SP sweep over sigma for both detectors,
/// both matrix types, p in p_list (default {0.3, 0.7}).
ExperimentResult run_figure1(const ExperimentConfig& config);

/// LLL-P SP-change counts at sigma pushed inside each direction threshold:
/// sigma1 = min r_kk/(2 sqrt(2) mu2), sigma2 = sqrt(2) max r_kk/mu1.
ExperimentResult run_lll_direction(const ExperimentConfig& config);

/// Monte-Carlo SP of both detectors under each permutation strategy.
ExperimentResult run_sp_permutation_tables(const ExperimentConfig& config);

/// Strict increase / strict decrease / no change counts of the theoretical
/// SP after each strategy.
ExperimentResult run_sp_change_tables(const ExperimentConfig& config);

/// Writes each table as CSV plus a manifest.json into config.output_dir.
/// Returns the manifest path.
std::string persist_results(const ExperimentConfig& config, const std::string& experiment_name,
                            const ExperimentResult& result);

} // namespace l0babai
