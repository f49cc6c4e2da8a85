#pragma once

// Test-only reference implementations. Deliberately naive and written
// without the library's algorithms: digit loops, plain enumeration, a
// digit-column walk DP, and congruence solving over Z/r^k by CRT.

#include "pdensity/arith.hpp"
#include "pdensity/exponent_system.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using pdensity::BigInt;
using pdensity::IntVector;
using pdensity::ProblemSpec;
using pdensity::Rational;

std::uint64_t digit_sum(BigInt t, std::uint64_t base);
BigInt digit_factorials(BigInt t, std::uint64_t p);

/// sum_i u_i d_i + b_l = 0 mod (q^l - 1), straight from the definition.
bool member(const ProblemSpec& spec, const IntVector& u, int level);

struct Scan {
    std::optional<std::uint64_t> sigma;
    std::vector<IntVector> minimizers;
};

/// Exhaustive scan of [0, q^l - 1]^n; nullopt past `budget` candidates.
std::optional<Scan> sigma_scan(const ProblemSpec& spec, int level, std::uint64_t budget = 2'000'000);

/// Minimal p-weight over closed digit-column walks of length `level`:
/// a state c moves to (c + b + sum a_i d_i) / q for every digit vector a.
/// Returns sigma(l) for l = 1..max_level (index 0 unused).
std::vector<std::optional<std::uint64_t>> sigma_walks(const ProblemSpec& spec, int max_level);

/// min sigma(l) / (f l (p - 1)) over l up to the box cardinality.
std::optional<Rational> density(const ProblemSpec& spec);

/// Is A x = c (mod modulus) solvable (A is m x n, given by rows)?
bool solvable_mod(const std::vector<std::vector<std::int64_t>>& a, const std::vector<std::int64_t>& c,
                  std::int64_t modulus);

/// L(D, q^l, b_l) is non-empty.
bool level_nonempty(const ProblemSpec& spec, int level);

struct RandomSpecOptions {
    std::vector<std::int64_t> primes{2, 3, 5};
    int max_f = 2;
    int max_m = 2;
    int max_n = 3;
    std::int64_t max_abs_d = 3;
    bool allow_zero_twist = false;
};

ProblemSpec random_spec(std::mt19937_64& rng, const RandomSpecOptions& opt);

}  // namespace oracle
