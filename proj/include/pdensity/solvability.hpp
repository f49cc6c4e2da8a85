#pragma once

// Is Lambda(D, b) = { l : L(D, q^l, b_l) non-empty } non-empty, and if so,
// which l0 generates it (Lambda = l0 Z>=1).
//
// Linear-algebra conventions: the system has one row per coordinate j
// (equation sum_i d_ij v_i = b_j x) and one column per exponent vector.

#include "pdensity/arith.hpp"
#include "pdensity/exponent_system.hpp"

#include <optional>
#include <vector>

namespace pdensity {

using IntMatrix = std::vector<IntVector>;

/// The m x n coefficient matrix A[j][i] = d_ij.
IntMatrix coefficient_matrix(const ProblemSpec& spec);

struct EliminationResult {
    /// transform * [A | b], rows with pivots first.
    IntMatrix reduced;
    IntVector reduced_rhs;
    /// Column of each pivot row, strictly increasing.
    std::vector<std::size_t> pivot_columns;
    /// beta_j of the zero rows 0 = beta_j x.
    IntVector residuals;
    /// Unimodular m x m row-operation record.
    IntMatrix transform;
    /// Product of the pivots; adjugate * Delta = scale_n * I where Delta is
    /// the triangular block on the pivot columns.
    BigInt scale_n;
    IntMatrix adjugate;
};

struct PrimeCondition {
    BigInt prime;
    int e = 0;      // v_r(q - 1)
    int f_min = 0;  // least f with sum v_i d_i = r^f b mod r^(e+f) solvable
};

struct SolvabilityReport {
    bool solvable = false;
    IntVector residuals;
    std::optional<BigInt> generator;
    std::vector<PrimeCondition> per_prime;
};

/// Fraction-free elimination with left-to-right extended-gcd folding and
/// positive pivots.
EliminationResult eliminate(const ProblemSpec& spec);
EliminationResult eliminate(const IntMatrix& a, const IntVector& rhs);

/// Solvable flag and residuals only.
SolvabilityReport is_solvable(const ProblemSpec& spec);

/// Throws StateError on an unsolvable spec.
BigInt lambda_generator(const ProblemSpec& spec);

/// Flag, residuals, generator and the per-prime exponents.
SolvabilityReport analyze(const ProblemSpec& spec);

/// For n = m: true when gcd(det D, q - 1) = 1, absent otherwise.
/// Throws PreconditionError when n != m.
std::optional<bool> square_system_shortcut(const ProblemSpec& spec);

/// Bareiss determinant of a square integer matrix.
BigInt determinant(IntMatrix a);

/// U A V = diag, U and V unimodular. diag has min(rows, cols) entries.
struct DiagonalForm {
    IntMatrix u;
    IntMatrix v;
    IntVector diag;
};
DiagonalForm diagonalize(const IntMatrix& a);

/// Some x in Z^cols with A x = c mod modulus, entries reduced to [0, modulus).
std::optional<IntVector> solve_congruences(const IntMatrix& a, const IntVector& c, const BigInt& modulus);

/// A member of L(D, q^l, b_l) from the congruence solver, or absent if
/// l is outside Lambda(D, b).
std::optional<SolutionVector> construct_solution(const ProblemSpec& spec, int level);

}  // namespace pdensity
