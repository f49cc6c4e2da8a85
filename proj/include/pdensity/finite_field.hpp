#pragma once

// F_p, F_q = F_{p^f} and F_{q^l} in power bases of deterministic defining
// polynomials, with the explicit embedding F_q -> F_{q^l}.
//
// Polynomial choice ("pseudo-Conway"): among monic irreducibles of degree d
// whose root is primitive, take the least under Conway's ordering, i.e.
// write P = x^d - c_1 x^(d-1) + c_2 x^(d-2) - ... + (-1)^d c_d and compare
// (c_1, ..., c_d) lexicographically. The top field additionally requires
// P_f(G^((q^l-1)/(q-1))) = 0 so that the embedding sends the base root to a
// power of the top root.

#include "pdensity/arith.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace pdensity {

/// Polynomial over F_p, coefficients low degree first.
using Poly = std::vector<std::uint64_t>;

class FieldElement;

class Field : public std::enable_shared_from_this<Field> {
public:
    /// `modulus` is monic of degree >= 1 and assumed irreducible with a
    /// primitive root; build through make_field so the checks run.
    Field(std::uint64_t p, Poly modulus);

    std::uint64_t p() const { return p_; }
    std::size_t degree() const { return modulus_.size() - 1; }
    /// p^degree.
    std::uint64_t order() const { return order_; }
    const Poly& modulus() const { return modulus_; }

    FieldElement zero() const;
    FieldElement one() const;
    /// x mod P, the canonical primitive root.
    FieldElement generator() const;
    FieldElement from_int(std::int64_t c) const;
    FieldElement from_coords(std::vector<std::uint64_t> coords) const;
    /// Integer code sum_i c_i p^i and back.
    std::uint64_t encode(const std::vector<std::uint64_t>& coords) const;
    FieldElement decode(std::uint64_t code) const;

    /// generator^k.
    FieldElement exp(std::uint64_t k) const;
    /// Table when order <= 2^20, baby-step giant-step beyond. Throws
    /// DomainError for zero.
    std::uint64_t dlog(const FieldElement& x) const;

    /// Tr_{F/F_p}(generator^i) for i < degree; Tr is the dot product with coords.
    const std::vector<std::uint64_t>& trace_functional() const;

    /// x * generator in O(degree); used for walking the unit group.
    void times_generator(std::vector<std::uint64_t>& coords) const;

    // Raw coordinate arithmetic.
    std::vector<std::uint64_t> mul(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const;

    friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_ && a.modulus_ == b.modulus_; }

private:
    void build_log_tables() const;

    std::uint64_t p_;
    Poly modulus_;
    std::uint64_t order_;
    mutable std::once_flag log_once_;
    mutable std::vector<std::uint32_t> log_table_;
    mutable std::unordered_map<std::uint64_t, std::uint64_t> baby_steps_;
    mutable std::uint64_t giant_ = 0;
    mutable std::once_flag trace_once_;
    mutable std::vector<std::uint64_t> trace_functional_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Checks irreducibility and primitivity of the root.
FieldPtr make_field(std::uint64_t p, Poly modulus);

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldPtr field, std::vector<std::uint64_t> coords);

    const FieldPtr& field() const { return field_; }
    const std::vector<std::uint64_t>& coords() const { return coords_; }
    bool is_zero() const;
    std::uint64_t code() const { return field_->encode(coords_); }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement pow(std::uint64_t e) const;
    /// Throws DomainError for zero.
    FieldElement inverse() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b);

private:
    void check_same(const FieldElement& o) const;

    FieldPtr field_;
    std::vector<std::uint64_t> coords_;
};

enum class Subfield { prime, base };

struct FieldTower {
    std::uint64_t p = 0;
    int f = 0;
    int ell = 0;
    FieldPtr prime_field;
    FieldPtr base_field;
    FieldPtr top_field;
    /// Image of the base generator: G^((q^l-1)/(q-1)).
    FieldElement embedded_generator;

    std::uint64_t q() const { return base_field->order(); }
    FieldPtr subfield(Subfield s) const { return s == Subfield::prime ? prime_field : base_field; }
    /// Base or prime field element into the top field.
    FieldElement embed(const FieldElement& x) const;
    /// Top (or base) field element lying in the subfield; throws DomainError otherwise.
    FieldElement restrict_to(const FieldElement& x, Subfield target) const;
};

/// Throws ResourceError when p^(f l) exceeds `budget`, InputError for a
/// composite p or non-positive degrees.
FieldTower build_tower(std::uint64_t p, int f, int ell, std::uint64_t budget = 1ULL << 24);

/// Sum over the relative Frobenius orbit; x in the top or base field.
FieldElement trace_to_base(const FieldTower& tower, const FieldElement& x, Subfield target);
FieldElement norm_to_base(const FieldTower& tower, const FieldElement& x, Subfield target);

std::uint64_t dlog(const FieldElement& x);

bool is_irreducible(std::uint64_t p, const Poly& poly);
/// Root of the monic `poly` has multiplicative order p^deg - 1 (poly irreducible).
bool has_primitive_root(std::uint64_t p, const Poly& poly);

/// Least degree-d pseudo-Conway polynomial; when `sub` is given the root G
/// must also satisfy sub(G^cofactor) = 0.
Poly pseudo_conway_polynomial(std::uint64_t p, int degree, const Poly* sub = nullptr, std::uint64_t cofactor = 1);

}  // namespace pdensity
