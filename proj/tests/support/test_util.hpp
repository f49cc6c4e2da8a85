#pragma once

#include "pdensity/arith.hpp"
#include "pdensity/exponent_system.hpp"

#include <initializer_list>
#include <string>

namespace testutil {

inline pdensity::IntVector iv(std::initializer_list<long> xs) {
    pdensity::IntVector out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

inline pdensity::Rational frac(long num, long den) {
    pdensity::Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string str(const pdensity::Rational& r) { return pdensity::to_fraction_string(r); }

}  // namespace testutil
