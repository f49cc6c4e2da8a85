#include "pdensity/digits.hpp"

#include <string>

namespace pdensity {

namespace {

void check_base(std::uint64_t base) {
    if (base < 2) throw RangeError("digit base must be at least 2");
}

}  // namespace

BigInt DigitExpansion::recompose() const {
    BigInt acc = 0;
    for (std::size_t k = digits.size(); k-- > 0;) {
        acc *= BigInt(static_cast<unsigned long>(base));
        acc += BigInt(static_cast<unsigned long>(digits[k]));
    }
    return acc;
}

DigitExpansion expand(const BigInt& t, std::uint64_t base, std::optional<std::size_t> width) {
    check_base(base);
    if (t < 0) throw RangeError("cannot expand a negative integer");
    DigitExpansion out;
    out.value = t;
    out.base = base;
    const BigInt b(static_cast<unsigned long>(base));
    BigInt rest = t;
    while (rest != 0) {
        BigInt r = rest % b;
        out.digits.push_back(r.get_ui());
        rest /= b;
    }
    if (width) {
        if (*width == 0) throw RangeError("digit width must be at least 1");
        if (out.digits.size() > *width)
            throw RangeError(t.get_str() + " needs " + std::to_string(out.digits.size()) + " base-" +
                             std::to_string(base) + " digits, width " + std::to_string(*width) + " given");
        out.digits.resize(*width, 0);
    } else if (out.digits.empty()) {
        out.digits.push_back(0);
    }
    out.width = out.digits.size();
    return out;
}

std::uint64_t weight(const BigInt& t, std::uint64_t base) {
    check_base(base);
    if (t < 0) throw RangeError("weight of a negative integer");
    if (t.fits_ulong_p()) return digit_sum(t.get_ui(), base);
    std::uint64_t s = 0;
    for (auto d : expand(t, base).digits) s += d;
    return s;
}

BigInt rho(const BigInt& t, std::uint64_t p) {
    BigInt out = 1;
    for (auto d : expand(t, p).digits) {
        BigInt fact;
        mpz_fac_ui(fact.get_mpz_t(), d);
        out *= fact;
    }
    return out;
}

std::uint64_t vector_weight(std::span<const BigInt> u, std::uint64_t base) {
    std::uint64_t s = 0;
    for (const auto& x : u) s += weight(x, base);
    return s;
}

}  // namespace pdensity
