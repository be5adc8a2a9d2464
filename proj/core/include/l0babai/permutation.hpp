#pragma once

#include "l0babai/alphabet.hpp"
#include "l0babai/matrix.hpp"
#include "l0babai/sp_analysis.hpp"

#include <optional>
#include <string>

namespace l0babai {

enum class Strategy { lllp, sqrd, lsp, gsp, msp };

std::string strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

/// Success-probability context for strategies that do not need it to run.
struct SpContext {
    double sigma;
    double lambda;
    Alphabet alphabet;
};

/// Result of one column-permutation strategy.
struct PermutationOutcome {
    PermutationVector p;
    UpperTriangular r_hat;
    std::optional<SpReport> sp_before;
    std::optional<SpReport> sp_after;
    Strategy strategy = Strategy::lllp;
};

/// Column-permuting LLL without size reduction: swaps adjacent columns until
/// delta r_{k-1,k-1}^2 <= r_{k-1,k}^2 + r_kk^2 holds for every k.
/// delta in (1/4, 1]; returns R bitwise-unchanged when no swap fires.
PermutationOutcome lll_p(const UpperTriangular& r, double delta = 1.0,
                         const SpContext* ctx = nullptr);

/// Sorted QR decomposition of the model matrix A: Householder QR with column
/// pivoting on the smallest residual column norm at each step.
PermutationOutcome sqrd(const Matrix& a, const SpContext* ctx = nullptr);

/// V-BLAST ordering: from level n downward, pick the column maximizing the
/// resulting r_kk (argmin over j of ||(f_j)_{j:k}|| with F = R^{-T}).
PermutationOutcome lsp_vblast(const UpperTriangular& r, const SpContext* ctx = nullptr);

/// Greedy SP ordering: per level k, keep the candidate column whose move to
/// position k strictly raises the leading-block success probability.
PermutationOutcome gsp(const UpperTriangular& r, double sigma, double lambda,
                       const Alphabet& alphabet);

/// Mixed ordering: tries the V-BLAST candidate first, falls back to the
/// greedy scan for the level when that candidate lowers the SP.
PermutationOutcome msp(const UpperTriangular& r, double sigma, double lambda,
                       const Alphabet& alphabet);

} // namespace l0babai
