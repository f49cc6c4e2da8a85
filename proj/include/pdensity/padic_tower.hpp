#pragma once

// O = W[pi]/E(pi) with W = Z_p[zeta_{q-1}] kept modulo p^K and
// E(pi) = ((1+pi)^p - 1)/pi = sum_{j=1}^{p} C(p,j) pi^(j-1), so zeta_p = 1 + pi.
//
// W is Z/p^K[x]/(P~) where P~ is the integer lift of the defining polynomial
// of F_q; it is unramified, so v_p of an element is the least v_p of its
// power-basis coordinates (the basis reduces to an F_p-basis of F_q).
// A TowerElement sum_{i<p-1} w_i pi^i is known modulo pi^N, N <= (p-1)K, and
//   v_pi = min_i (i + (p-1) v_p(w_i)),
// the residues i mod (p-1) being distinct. Below N the value is exact.

#include "pdensity/arith.hpp"
#include "pdensity/finite_field.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace pdensity {

class TowerRing;
using TowerRingPtr = std::shared_ptr<const TowerRing>;

/// Element of W: f coordinates modulo p^K.
class UnramifiedElement {
public:
    UnramifiedElement() = default;
    UnramifiedElement(TowerRingPtr ring, IntVector coords);

    const TowerRingPtr& ring() const { return ring_; }
    const IntVector& coords() const { return coords_; }
    bool is_zero() const;
    /// Least p-valuation of the coordinates; K when the element is 0 mod p^K.
    int valuation() const;
    /// Residue in F_q, coordinates in the same power basis.
    std::vector<std::uint64_t> residue() const;

    UnramifiedElement operator+(const UnramifiedElement& o) const;
    UnramifiedElement operator-(const UnramifiedElement& o) const;
    UnramifiedElement operator*(const UnramifiedElement& o) const;
    UnramifiedElement pow(const BigInt& e) const;

    friend bool operator==(const UnramifiedElement& a, const UnramifiedElement& b) { return a.coords_ == b.coords_; }

private:
    TowerRingPtr ring_;
    IntVector coords_;
};

struct Valuation {
    std::int64_t value = 0;
    /// False means "at least value" (the precision ran out).
    bool exact = true;

    friend bool operator==(const Valuation&, const Valuation&) = default;
};

class TowerElement {
public:
    TowerElement() = default;
    /// coeffs[i] are the W-coordinates of pi^i, i < p - 1.
    TowerElement(TowerRingPtr ring, std::vector<IntVector> coeffs, std::int64_t precision);

    const TowerRingPtr& ring() const { return ring_; }
    const std::vector<IntVector>& coeffs() const { return coeffs_; }
    std::int64_t precision() const { return precision_; }

    TowerElement operator+(const TowerElement& o) const;
    TowerElement operator-(const TowerElement& o) const;
    TowerElement operator-() const;
    TowerElement operator*(const TowerElement& o) const;
    TowerElement scale(const BigInt& c) const;
    TowerElement pow(std::uint64_t e) const;
    TowerElement mul_pi_power(std::int64_t k) const;
    /// Lowers the precision to min(precision, n).
    TowerElement with_precision(std::int64_t n) const;
    /// Zeroes every digit at or beyond the precision.
    TowerElement truncated() const;

    /// x = y modulo pi^min(N_x, N_y).
    bool congruent(const TowerElement& o) const;

private:
    TowerRingPtr ring_;
    std::vector<IntVector> coeffs_;
    std::int64_t precision_ = 0;
};

class TowerRing : public std::enable_shared_from_this<TowerRing> {
public:
    /// `base_modulus` is the defining polynomial of F_q over F_p.
    TowerRing(std::uint64_t p, Poly base_modulus, int K);

    std::uint64_t p() const { return p_; }
    int f() const { return static_cast<int>(lift_.size()) - 1; }
    std::uint64_t q() const { return q_; }
    int K() const { return K_; }
    const BigInt& modulus() const { return pk_; }
    /// (p - 1) K, the largest representable precision.
    std::int64_t cap() const { return static_cast<std::int64_t>(p_ - 1) * K_; }
    const Poly& base_modulus() const { return base_; }

    UnramifiedElement w_zero() const;
    UnramifiedElement w_one() const;
    UnramifiedElement w_from_int(const BigInt& c) const;
    /// Naive lift of residue coordinates.
    UnramifiedElement w_lift(const std::vector<std::uint64_t>& residue) const;

    TowerElement zero() const;
    TowerElement one() const;
    TowerElement from_int(const BigInt& c) const;
    TowerElement from_unramified(const UnramifiedElement& w) const;
    TowerElement pi() const;
    /// The unit eps with pi^(p-1) = p eps.
    TowerElement epsilon() const;

    // Internal arithmetic on raw coordinates.
    IntVector w_mul(const IntVector& a, const IntVector& b) const;
    void w_reduce(IntVector& a) const;
    std::vector<IntVector> t_mul(const std::vector<IntVector>& a, const std::vector<IntVector>& b) const;

private:
    std::uint64_t p_;
    std::uint64_t q_;
    int K_;
    BigInt pk_;
    Poly base_;
    IntVector lift_;
    // C(p, j) for j = 1..p-1, the reduction rule for pi^(p-1).
    IntVector binom_;
};

TowerRingPtr make_tower_ring(std::uint64_t p, Poly base_modulus, int K);
/// Ring over the base field of `tower`.
TowerRingPtr make_tower_ring(const FieldTower& tower, int K);

/// Unique (q-1)-th root of unity lifting a (a in the base field F_q).
/// Throws DomainError for a = 0.
UnramifiedElement teichmuller(const TowerRingPtr& ring, const FieldElement& a);

Valuation v_pi(const TowerElement& x);

/// (1 + pi)^(t mod p).
TowerElement zeta_p_power(const TowerRingPtr& ring, std::int64_t t);

/// Throws DomainError unless v_pi(x) = 0 exactly.
TowerElement invert_unit(const TowerElement& x);

/// x / p^j; throws DomainError when x is not divisible.
TowerElement divide_exact(const TowerElement& x, int j);

/// x / pi^k; throws DomainError when v_pi(x) < k. Loses k units of precision.
TowerElement div_pi_power(const TowerElement& x, std::int64_t k);

/// x / y for y != 0 when the quotient is integral; PrecisionError when y
/// vanishes to precision, DomainError when the quotient is not integral.
TowerElement divide(const TowerElement& x, const TowerElement& y);

}  // namespace pdensity
