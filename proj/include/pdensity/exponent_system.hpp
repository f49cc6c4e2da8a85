#pragma once

// Problem data (p, f, D, b) and the combinatorics of the solution sets
//
//   L(D, q^l, b_l) = { u in [0, q^l - 1]^n : sum_i u_i d_i + b_l = 0 mod (q^l - 1) },
//   b_l = b (q^l - 1) / (q - 1),
//
// together with the digit rotation delta_l, the carry map
// phi_l(u) = (sum_i u_i d_i + b_l) / (q^l - 1) and its orbit Phi_u.
//
// Digit convention: u_i = q^l - 1 is expanded with l digits all equal to
// q - 1, so delta_l is the cyclic digit shift everywhere including the
// fixed point.

#include "pdensity/arith.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pdensity {

using ExponentMatrix = std::vector<std::vector<std::int64_t>>;

struct SpecOptions {
    /// Reject exponent matrices with an all-zero column.
    bool require_all_variables = true;

    friend bool operator==(const SpecOptions&, const SpecOptions&) = default;
};

class ProblemSpec {
public:
    /// Validates every invariant; throws InputError with the offending location.
    static ProblemSpec make(std::int64_t p, int f, ExponentMatrix exponents, std::vector<std::int64_t> twist,
                            SpecOptions options = {});

    std::int64_t p() const { return p_; }
    int f() const { return f_; }
    std::int64_t q() const { return q_; }
    std::size_t m() const { return twist_.size(); }
    std::size_t n() const { return exponents_.size(); }
    const ExponentMatrix& exponents() const { return exponents_; }
    const std::vector<std::int64_t>& row(std::size_t i) const { return exponents_[i]; }
    std::int64_t exponent(std::size_t i, std::size_t j) const { return exponents_[i][j]; }
    const std::vector<std::int64_t>& twist() const { return twist_; }
    const SpecOptions& options() const { return options_; }
    bool twist_is_zero() const;

    /// q^l - 1.
    BigInt level_modulus(int level) const;
    /// (q^l - 1)/(q - 1).
    BigInt level_cofactor(int level) const;

    ProblemSpec with_twist(std::vector<std::int64_t> twist) const;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

private:
    ProblemSpec() = default;

    std::int64_t p_ = 0;
    int f_ = 0;
    std::int64_t q_ = 0;
    ExponentMatrix exponents_;
    std::vector<std::int64_t> twist_;
    SpecOptions options_;
};

/// A member u of L(D, q^l, b_l) with its base-q digit matrix (n x l,
/// least significant column first) and p-weight.
struct SolutionVector {
    int level = 0;
    IntVector entries;
    std::vector<std::vector<std::uint64_t>> digit_matrix;
    std::uint64_t p_weight = 0;

    /// Checks range and membership; throws RangeError / DomainError.
    static SolutionVector make(const ProblemSpec& spec, IntVector entries, int level);
};

struct BoxBounds {
    std::vector<std::int64_t> lower;
    std::vector<std::int64_t> upper;
    BigInt cardinality;

    bool contains(std::span<const BigInt> point) const;
};

IntVector twist_at_level(const ProblemSpec& spec, int level);

/// Throws RangeError if some u_i lies outside [0, q^l - 1].
bool is_member(const ProblemSpec& spec, std::span<const BigInt> u, int level);

/// delta_l on one coordinate: q x mod (q^l - 1), fixing q^l - 1.
BigInt delta(const BigInt& x, std::int64_t q, int level);

IntVector frobenius(const ProblemSpec& spec, std::span<const BigInt> u, int level);
SolutionVector frobenius(const ProblemSpec& spec, const SolutionVector& u);

/// Sum of the delta_l orbit of u. Checked against (q^l-1)/(q-1) * sigma_q(u_i).
IntVector frobenius_orbit_sum(const ProblemSpec& spec, std::span<const BigInt> u, int level);

BoxBounds box(const ProblemSpec& spec);

/// Throws DomainError when u is not a member (quotient not integral).
IntVector phi(const ProblemSpec& spec, std::span<const BigInt> u, int level);

/// Phi_u(0), ..., Phi_u(l - 1).
std::vector<IntVector> phi_orbit(const ProblemSpec& spec, std::span<const BigInt> u, int level);

/// Splits a member on an orbit collision Phi_u(0) = Phi_u(t): writing
/// u_i = q^(l-t) w_i + v_i with v_i < q^(l-t), returns (v at level l - t,
/// w at level t). Throws DomainError when the collision does not hold.
std::pair<SolutionVector, SolutionVector> split(const ProblemSpec& spec, const SolutionVector& u, int t);

/// u (q^(kl) - 1)/(q^l - 1), a member at level k l with k times the weight.
SolutionVector lift_solution(const ProblemSpec& spec, const SolutionVector& u, int k);

}  // namespace pdensity
