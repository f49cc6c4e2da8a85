#include "pdensity/arith.hpp"

#include <limits>

namespace pdensity {

BigInt ipow(const BigInt& base, unsigned long exponent) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

int valuation(const BigInt& x, const BigInt& prime) {
    if (x == 0) throw DomainError("valuation of zero");
    BigInt rest;
    return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t()));
}

std::int64_t to_i64(const BigInt& x) {
    if (!x.fits_slong_p()) throw RangeError("integer does not fit in 64 bits: " + x.get_str());
    return x.get_si();
}

std::uint64_t to_u64(const BigInt& x) {
    if (x < 0 || !x.fits_ulong_p()) throw RangeError("integer does not fit in unsigned 64 bits: " + x.get_str());
    return x.get_ui();
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::pair<BigInt, int>> factor(BigInt n) {
    if (n <= 0) throw DomainError("factor expects a positive integer");
    std::vector<std::pair<BigInt, int>> out;
    for (BigInt d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt r;
    if (m == 1) return 0;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DomainError("no inverse of " + a.get_str() + " modulo " + m.get_str());
    return r;
}

namespace {

BigInt powmod(const BigInt& a, const BigInt& e, const BigInt& m) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

}  // namespace

BigInt multiplicative_order(const BigInt& a, const BigInt& m) {
    if (m == 1) return 1;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (g != 1) throw DomainError("multiplicative order requires a unit");
    // Carmichael-free route: start from phi(m) and strip prime factors.
    BigInt phi = 1;
    for (const auto& [r, e] : factor(m)) phi *= ipow(r, static_cast<unsigned long>(e - 1)) * (r - 1);
    BigInt order = phi;
    for (const auto& [r, e] : factor(phi)) {
        (void)e;
        while (order % r == 0 && powmod(a, order / r, m) == 1) order /= r;
    }
    return order;
}

std::string to_fraction_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_fraction(const std::string& text) {
    Rational r;
    if (r.set_str(text, 10) != 0) throw InputError("not a fraction: " + text);
    if (r.get_den() == 0) throw InputError("zero denominator: " + text);
    r.canonicalize();
    return r;
}

}  // namespace pdensity
