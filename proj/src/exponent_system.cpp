#include "pdensity/exponent_system.hpp"

#include "pdensity/digits.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace pdensity {

namespace {

std::string at(std::size_t i, std::size_t j) {
    return "exponents[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

void check_level(int level) {
    if (level < 1) throw RangeError("level must be at least 1");
}

void check_range(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    if (u.size() != spec.n())
        throw RangeError("vector has " + std::to_string(u.size()) + " entries, expected " + std::to_string(spec.n()));
    const BigInt top = spec.level_modulus(level);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < 0 || u[i] > top)
            throw RangeError("u[" + std::to_string(i) + "] = " + u[i].get_str() + " outside [0, " + top.get_str() + "]");
}

// sum_i u_i d_i + b_l, coordinate-wise.
IntVector shifted_sum(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    IntVector acc = twist_at_level(spec, level);
    for (std::size_t i = 0; i < spec.n(); ++i)
        for (std::size_t j = 0; j < spec.m(); ++j)
            if (spec.exponent(i, j) != 0) acc[j] += u[i] * BigInt(static_cast<long>(spec.exponent(i, j)));
    return acc;
}

}  // namespace

ProblemSpec ProblemSpec::make(std::int64_t p, int f, ExponentMatrix exponents, std::vector<std::int64_t> twist,
                              SpecOptions options) {
    if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
    if (f < 1) throw InputError("f must be at least 1");
    const BigInt q_big = ipow(BigInt(static_cast<long>(p)), static_cast<unsigned long>(f));
    if (q_big > BigInt(1L << 40)) throw InputError("q = p^f too large");
    if (twist.empty()) throw InputError("twist must have m >= 1 entries");
    if (exponents.empty()) throw InputError("exponents must have n >= 1 rows");

    ProblemSpec s;
    s.p_ = p;
    s.f_ = f;
    s.q_ = q_big.get_si();
    s.options_ = options;
    const std::size_t m = twist.size();
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i].size() != m)
            throw InputError("exponents[" + std::to_string(i) + "] has " + std::to_string(exponents[i].size()) +
                             " entries, expected m = " + std::to_string(m));
    for (std::size_t j = 0; j < m; ++j)
        if (twist[j] < 0 || twist[j] > s.q_ - 2)
            throw InputError("twist[" + std::to_string(j) + "] = " + std::to_string(twist[j]) + " outside [0, q-2] = [0, " +
                             std::to_string(s.q_ - 2) + "]");
    if (options.require_all_variables) {
        for (std::size_t j = 0; j < m; ++j) {
            bool present = false;
            for (const auto& row : exponents) present = present || row[j] != 0;
            if (!present) throw InputError("variable " + std::to_string(j) + " does not appear: column " + std::to_string(j) + " of exponents is zero");
        }
    }
    std::set<std::vector<std::int64_t>> seen;
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (!seen.insert(exponents[i]).second) throw InputError(at(i, 0) + ": row repeats an earlier exponent");
    s.exponents_ = std::move(exponents);
    s.twist_ = std::move(twist);
    return s;
}

bool ProblemSpec::twist_is_zero() const {
    return std::all_of(twist_.begin(), twist_.end(), [](std::int64_t b) { return b == 0; });
}

BigInt ProblemSpec::level_modulus(int level) const {
    check_level(level);
    return ipow(BigInt(static_cast<long>(q_)), static_cast<unsigned long>(level)) - 1;
}

BigInt ProblemSpec::level_cofactor(int level) const {
    return level_modulus(level) / BigInt(static_cast<long>(q_ - 1));
}

ProblemSpec ProblemSpec::with_twist(std::vector<std::int64_t> twist) const {
    return make(p_, f_, exponents_, std::move(twist), options_);
}

SolutionVector SolutionVector::make(const ProblemSpec& spec, IntVector entries, int level) {
    if (!is_member(spec, entries, level)) throw DomainError("vector is not a member of L(D, q^l, b_l)");
    SolutionVector s;
    s.level = level;
    s.digit_matrix.reserve(entries.size());
    const auto q = static_cast<std::uint64_t>(spec.q());
    const auto p = static_cast<std::uint64_t>(spec.p());
    for (const auto& u : entries) {
        s.digit_matrix.push_back(expand(u, q, static_cast<std::size_t>(level)).digits);
        s.p_weight += weight(u, p);
    }
    s.entries = std::move(entries);
    return s;
}

bool BoxBounds::contains(std::span<const BigInt> point) const {
    if (point.size() != lower.size()) return false;
    for (std::size_t j = 0; j < point.size(); ++j)
        if (point[j] < BigInt(static_cast<long>(lower[j])) || point[j] > BigInt(static_cast<long>(upper[j]))) return false;
    return true;
}

IntVector twist_at_level(const ProblemSpec& spec, int level) {
    const BigInt c = spec.level_cofactor(level);
    IntVector out;
    out.reserve(spec.m());
    for (auto b : spec.twist()) out.push_back(c * BigInt(static_cast<long>(b)));
    return out;
}

bool is_member(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    check_range(spec, u, level);
    const BigInt modulus = spec.level_modulus(level);
    for (const auto& s : shifted_sum(spec, u, level))
        if (mod_floor(s, modulus) != 0) return false;
    return true;
}

BigInt delta(const BigInt& x, std::int64_t q, int level) {
    const BigInt modulus = ipow(BigInt(static_cast<long>(q)), static_cast<unsigned long>(level)) - 1;
    if (x < 0 || x > modulus) throw RangeError("delta argument outside [0, q^l - 1]");
    if (x == modulus) return x;
    return mod_floor(x * BigInt(static_cast<long>(q)), modulus);
}

IntVector frobenius(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    check_range(spec, u, level);
    IntVector out;
    out.reserve(u.size());
    for (const auto& x : u) out.push_back(delta(x, spec.q(), level));
    return out;
}

SolutionVector frobenius(const ProblemSpec& spec, const SolutionVector& u) {
    return SolutionVector::make(spec, frobenius(spec, u.entries, u.level), u.level);
}

IntVector frobenius_orbit_sum(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    IntVector acc(u.size(), BigInt(0));
    IntVector cur(u.begin(), u.end());
    for (int k = 0; k < level; ++k) {
        for (std::size_t i = 0; i < u.size(); ++i) acc[i] += cur[i];
        cur = frobenius(spec, cur, level);
    }
    const BigInt c = spec.level_cofactor(level);
    const auto q = static_cast<std::uint64_t>(spec.q());
    for (std::size_t i = 0; i < u.size(); ++i)
        if (acc[i] != c * BigInt(static_cast<unsigned long>(weight(u[i], q))))
            throw std::logic_error("orbit sum identity failed for u[" + std::to_string(i) + "] = " + u[i].get_str());
    return acc;
}

BoxBounds box(const ProblemSpec& spec) {
    BoxBounds b;
    b.lower.assign(spec.m(), 0);
    b.upper.assign(spec.m(), 0);
    b.cardinality = 1;
    for (std::size_t j = 0; j < spec.m(); ++j) {
        for (std::size_t i = 0; i < spec.n(); ++i) {
            const auto d = spec.exponent(i, j);
            (d > 0 ? b.upper[j] : b.lower[j]) += d;
        }
        b.cardinality *= BigInt(static_cast<long>(b.upper[j] - b.lower[j] + 1));
    }
    return b;
}

IntVector phi(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    check_range(spec, u, level);
    const BigInt modulus = spec.level_modulus(level);
    IntVector out = shifted_sum(spec, u, level);
    for (auto& s : out) {
        if (mod_floor(s, modulus) != 0) throw DomainError("phi: vector is not a member (quotient not integral)");
        s /= modulus;
    }
    return out;
}

std::vector<IntVector> phi_orbit(const ProblemSpec& spec, std::span<const BigInt> u, int level) {
    std::vector<IntVector> out;
    out.reserve(static_cast<std::size_t>(level));
    IntVector cur(u.begin(), u.end());
    for (int t = 0; t < level; ++t) {
        out.push_back(phi(spec, cur, level));
        cur = frobenius(spec, cur, level);
    }
    return out;
}

std::pair<SolutionVector, SolutionVector> split(const ProblemSpec& spec, const SolutionVector& u, int t) {
    const int level = u.level;
    if (t < 1 || t > level - 1) throw RangeError("split point t must lie in [1, l - 1]");
    const auto orbit = phi_orbit(spec, u.entries, level);
    if (orbit[0] != orbit[static_cast<std::size_t>(t)])
        throw DomainError("split requires the orbit collision Phi_u(0) = Phi_u(t)");
    const BigInt low = ipow(BigInt(static_cast<long>(spec.q())), static_cast<unsigned long>(level - t));
    IntVector v;
    IntVector w;
    for (const auto& x : u.entries) {
        v.push_back(x % low);
        w.push_back(x / low);
    }
    return {SolutionVector::make(spec, std::move(v), level - t), SolutionVector::make(spec, std::move(w), t)};
}

SolutionVector lift_solution(const ProblemSpec& spec, const SolutionVector& u, int k) {
    if (k < 1) throw RangeError("lift factor must be at least 1");
    const BigInt factor_ = spec.level_modulus(u.level * k) / spec.level_modulus(u.level);
    IntVector out;
    for (const auto& x : u.entries) out.push_back(x * factor_);
    return SolutionVector::make(spec, std::move(out), u.level * k);
}

}  // namespace pdensity
