#pragma once

// S_l(F, b) = sum over x in (F_{q^l}^x)^m of
//   omega(Nr_{F_{q^l}/F_q}(x^b)) * psi(Tr_{F_{q^l}/F_q}(F(x))),
// with psi(c) = (1 + pi)^Tr_{F_q/F_p}(c) and omega the Teichmuller character
// of the canonical generator g of F_q.
//
// Enumeration runs over dlog exponents x_j = G^(k_j). Writing
// a_i = g^(alpha_i) = G^(alpha_i Q), Q = (q^l - 1)/(q - 1):
//   a_i x^(d_i) = G^(alpha_i Q + sum_j d_ij k_j),
//   Nr(x_j) = G^(k_j Q) = g^(k_j), so omega(Nr(x^b)) = zeta^(sum_j b_j k_j).
// Only the counts N(c, t) of (character exponent mod q-1, additive trace)
// are accumulated; the tower is touched (q-1) p times.

#include "pdensity/arith.hpp"
#include "pdensity/density.hpp"
#include "pdensity/exponent_system.hpp"
#include "pdensity/finite_field.hpp"
#include "pdensity/padic_tower.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pdensity {

/// F = sum_i a_i x^(d_i) with a_i in F_q^x.
struct LaurentPolynomial {
    ProblemSpec spec;
    std::vector<FieldElement> coefficients;

    /// Throws InputError on a length mismatch, a zero coefficient or an
    /// element outside the canonical F_q.
    static LaurentPolynomial make(const ProblemSpec& spec, std::vector<FieldElement> coefficients);
    /// All a_i = 1.
    static LaurentPolynomial unit(const ProblemSpec& spec);
};

/// The canonical F_q of a spec (same field for every tower level).
FieldPtr base_field_of(const ProblemSpec& spec);

struct EvalOptions {
    std::uint64_t point_budget = 10'000'000;
    /// Enumerate x^(q^s) instead of x; the value must not change.
    int frobenius_shift = 0;
};

struct CharSumResult {
    int level = 0;
    TowerElement value;
    Valuation v_pi;
    /// v_pi / (f(p-1)); a lower bound when v_pi is not exact.
    Rational v_q;
    int precision_k = 0;
    /// L(D, q^l, b_l) is empty, so the sum vanishes identically.
    bool exact_zero = false;
    std::uint64_t points = 0;
};

CharSumResult evaluate_sum(const LaurentPolynomial& F, int level, int K, const EvalOptions& options = {});

/// K = ceil((sigma_target + guard)/(p-1)) + 2.
int choose_precision(std::int64_t sigma_target, std::uint64_t p, int guard = 4);

struct BoundReport {
    int level = 0;
    Valuation v_pi;
    Rational v_q;
    /// l s_p(D, b).
    Rational bound;
    bool holds = false;
    bool equality = false;
    /// v_pi was only known as "at least", but that already beats the bound.
    bool marker_dominated = false;
    int precision_k = 0;
};

/// v_q(S_l) >= l s_p(D, b). Precision is raised (doubling K) until the
/// comparison is decided or `max_k` is reached, then PrecisionError. A
/// forced K below choose_precision of the target is refused up front.
BoundReport verify_bound(const LaurentPolynomial& F, int level, const DensityCertificate& certificate,
                         std::optional<int> forced_k = std::nullopt, int max_k = 64, const EvalOptions& options = {});

struct CongruenceReport {
    int level = 0;
    /// Absent when L(D, q^l, b_l) is empty (the check is then S_l = 0).
    std::optional<std::uint64_t> sigma;
    std::size_t minimizers = 0;
    /// v_pi(S_l) on the evaluated precision.
    Valuation v_pi;
    /// sum_G prod_i omega(a_i)^(u_i) / rho_p(u_i) is a unit.
    bool unit_nonzero = false;
    /// Sign in front of the right-hand side: (-1)^m.
    int sign = 1;
    bool congruence_holds = false;
    /// Same comparison without the (-1)^m factor.
    bool unsigned_congruence_holds = false;
    /// Set when unit_nonzero: v_pi(S_l) = sigma exactly.
    std::optional<bool> exact_valuation;
    int precision_k = 0;
};

CongruenceReport verify_congruence_S(const LaurentPolynomial& F, int level, std::uint64_t brute_budget = 100'000'000,
                                     const EvalOptions& options = {});

/// The leading unit sum_G prod_i a_i^(u_i) / rho_p(u_i) reduced to F_q.
FieldElement leading_unit_residue(const ProblemSpec& spec, const std::vector<FieldElement>& a,
                                  const std::vector<IntVector>& minimizers);

struct AttainmentResult {
    LaurentPolynomial polynomial;
    std::uint64_t sigma = 0;
    Valuation v_pi;
    std::uint64_t candidates_tried = 0;
};

/// Some a in (F_q^x)^n with v_pi(S_1(F, b)) = sigma(D, q, b). Candidates
/// are visited in dlog-lexicographic order, those with a non-vanishing
/// leading unit first. Throws PreconditionError when 1 is not in Lambda,
/// ResourceError past `tuple_budget`, FalsificationError if none attains.
AttainmentResult attainment_search(const ProblemSpec& spec, std::uint64_t tuple_budget = 10'000);

}  // namespace pdensity
