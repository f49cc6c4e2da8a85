#pragma once

#include "pdensity/arith.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pdensity {

/// Base-b expansion of a non-negative integer, least significant digit
/// first, zero padded to `width`.
struct DigitExpansion {
    BigInt value;
    std::uint64_t base = 2;
    std::vector<std::uint64_t> digits;
    std::size_t width = 1;

    BigInt recompose() const;
};

/// Throws RangeError for t < 0, base < 2, or a width too small for t.
DigitExpansion expand(const BigInt& t, std::uint64_t base, std::optional<std::size_t> width = std::nullopt);

/// Sum of the base-b digits of t.
std::uint64_t weight(const BigInt& t, std::uint64_t base);

/// Product of the factorials of the base-p digits of t. Coprime to p.
BigInt rho(const BigInt& t, std::uint64_t p);

std::uint64_t vector_weight(std::span<const BigInt> u, std::uint64_t base);

/// Machine-word digit sum used on hot enumeration paths.
inline std::uint64_t digit_sum(std::uint64_t t, std::uint64_t base) {
    std::uint64_t s = 0;
    while (t != 0) {
        s += t % base;
        t /= base;
    }
    return s;
}

}  // namespace pdensity
