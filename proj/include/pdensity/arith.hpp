#pragma once

// Exact integer/rational plumbing shared by every module: GMP aliases, the
// error hierarchy, and a few number-theoretic helpers on small moduli.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdensity {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<BigInt>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside its admissible range (digit width, vector entries, ...).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Mathematical domain violation: non-member vectors, non-units, ...
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation called with a violated structural precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Operation called in a state where its result does not exist.
class StateError : public Error {
public:
    using Error::Error;
};

/// An enumeration or table would exceed its configured budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Working p-adic precision too small to certify a result.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// Malformed user input (problem files, CLI arguments).
class InputError : public Error {
public:
    using Error::Error;
};

/// A checked mathematical statement failed on a concrete instance.
class FalsificationError : public Error {
public:
    using Error::Error;
};

BigInt ipow(const BigInt& base, unsigned long exponent);

/// Least non-negative residue of a modulo m (m > 0).
BigInt mod_floor(const BigInt& a, const BigInt& m);

/// Exponent of the largest power of `prime` dividing x; x must be non-zero.
int valuation(const BigInt& x, const BigInt& prime);

std::int64_t to_i64(const BigInt& x);
std::uint64_t to_u64(const BigInt& x);

bool is_prime(std::int64_t n);

/// Prime factorisation by trial division; intended for the small moduli
/// (q-1, p^d-1, q^l-1 at desk scale) that occur here.
std::vector<std::pair<BigInt, int>> factor(BigInt n);

/// Multiplicative order of a modulo m; requires gcd(a, m) = 1.
BigInt multiplicative_order(const BigInt& a, const BigInt& m);

/// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

/// Serialises an exact rational as "num/den", always with a denominator.
std::string to_fraction_string(const Rational& r);

Rational parse_fraction(const std::string& text);

}  // namespace pdensity
