#include "pdensity/finite_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdensity {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod P for monic P.
Poly poly_mod(Poly a, const Poly& P, std::uint64_t p) {
    const std::size_t d = P.size() - 1;
    trim(a);
    while (a.size() > d) {
        const std::uint64_t c = a.back();
        const std::size_t shift = a.size() - 1 - d;
        for (std::size_t i = 0; i < d; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, P[i], p)) % p;
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& P, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    return poly_mod(std::move(r), P, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& P, std::uint64_t p) {
    Poly r = poly_mod({1}, P, p);
    base = poly_mod(std::move(base), P, p);
    while (e != 0) {
        if (e & 1) r = poly_mulmod(r, base, P, p);
        e >>= 1;
        if (e != 0) base = poly_mulmod(base, base, P, p);
    }
    return r;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    return mod_inverse(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(p))).get_ui();
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic, then a mod b
        const std::uint64_t inv = inv_mod(b.back(), p);
        for (auto& c : b) c = mulmod(c, inv, p);
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (const auto& [r, e] : factor(BigInt(static_cast<unsigned long>(n)))) {
        (void)e;
        out.push_back(r.get_ui());
    }
    return out;
}

std::uint64_t checked_power(std::uint64_t p, std::size_t d) {
    const BigInt v = ipow(BigInt(static_cast<unsigned long>(p)), d);
    if (!v.fits_ulong_p() || v > BigInt(1UL << 62)) throw ResourceError("field order p^d too large");
    return v.get_ui();
}

}  // namespace

bool is_irreducible(std::uint64_t p, const Poly& poly) {
    Poly P = poly;
    trim(P);
    if (P.size() < 2 || P.back() != 1) throw DomainError("irreducibility test expects a monic polynomial of degree >= 1");
    const std::size_t d = P.size() - 1;
    if (d == 1) return true;
    if (P[0] == 0) return false;
    const Poly x{0, 1};
    std::vector<Poly> frob(d + 1);
    frob[0] = poly_mod(x, P, p);
    for (std::size_t k = 1; k <= d; ++k) frob[k] = poly_powmod(frob[k - 1], p, P, p);
    if (frob[d] != frob[0]) return false;
    for (auto r : prime_divisors(d)) {
        const Poly g = poly_gcd(P, poly_sub(frob[d / r], x, p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

bool has_primitive_root(std::uint64_t p, const Poly& poly) {
    const std::size_t d = poly.size() - 1;
    const std::uint64_t n = checked_power(p, d) - 1;
    const Poly x{0, 1};
    const Poly one = poly_mod({1}, poly, p);
    if (poly_powmod(x, n, poly, p) != one) return false;
    for (auto r : prime_divisors(n))
        if (poly_powmod(x, n / r, poly, p) == one) return false;
    return true;
}

Poly pseudo_conway_polynomial(std::uint64_t p, int degree, const Poly* sub, std::uint64_t cofactor) {
    if (degree < 1) throw RangeError("degree must be at least 1");
    const auto d = static_cast<std::size_t>(degree);
    const std::uint64_t count = checked_power(p, d);
    Poly P(d + 1, 0);
    P[d] = 1;
    std::vector<std::uint64_t> c(d + 1, 0);  // c[1..d], c[1] most significant
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t i = d; i >= 1; --i) {
            c[i] = rest % p;
            rest /= p;
        }
        if (c[d] == 0) continue;
        for (std::size_t i = 1; i <= d; ++i) P[d - i] = (i % 2 == 0) ? c[i] : (p - c[i]) % p;
        if (!is_irreducible(p, P) || !has_primitive_root(p, P)) continue;
        if (sub != nullptr) {
            const Poly y = poly_powmod({0, 1}, cofactor, P, p);
            Poly acc;
            for (std::size_t k = sub->size(); k-- > 0;) {
                acc = poly_mulmod(acc, y, P, p);
                acc = poly_sub(acc, Poly{(p - (*sub)[k] % p) % p}, p);
            }
            if (!acc.empty()) continue;
        }
        return P;
    }
    throw std::logic_error("no compatible primitive polynomial of degree " + std::to_string(degree));
}

Field::Field(std::uint64_t p, Poly modulus) : p_(p), modulus_(std::move(modulus)) {
    if (modulus_.size() < 2 || modulus_.back() != 1) throw DomainError("field modulus must be monic of degree >= 1");
    order_ = checked_power(p_, degree());
}

FieldPtr make_field(std::uint64_t p, Poly modulus) {
    if (!is_prime(static_cast<std::int64_t>(p))) throw InputError("p = " + std::to_string(p) + " is not prime");
    if (!is_irreducible(p, modulus)) throw DomainError("field modulus is reducible");
    if (!has_primitive_root(p, modulus)) throw DomainError("field modulus root is not primitive");
    return std::make_shared<const Field>(p, std::move(modulus));
}

FieldElement Field::zero() const { return from_coords(std::vector<std::uint64_t>(degree(), 0)); }

FieldElement Field::one() const { return from_int(1); }

FieldElement Field::generator() const {
    std::vector<std::uint64_t> c(degree(), 0);
    if (degree() == 1) {
        c[0] = (p_ - modulus_[0]) % p_;
    } else {
        c[1] = 1;
    }
    return from_coords(std::move(c));
}

FieldElement Field::from_int(std::int64_t v) const {
    std::vector<std::uint64_t> c(degree(), 0);
    const auto pp = static_cast<std::int64_t>(p_);
    c[0] = static_cast<std::uint64_t>(((v % pp) + pp) % pp);
    return from_coords(std::move(c));
}

FieldElement Field::from_coords(std::vector<std::uint64_t> coords) const {
    if (coords.size() != degree()) throw RangeError("coordinate vector has the wrong length");
    for (auto& x : coords) x %= p_;
    return FieldElement(shared_from_this(), std::move(coords));
}

std::uint64_t Field::encode(const std::vector<std::uint64_t>& coords) const {
    std::uint64_t code = 0;
    for (std::size_t i = coords.size(); i-- > 0;) code = code * p_ + coords[i];
    return code;
}

FieldElement Field::decode(std::uint64_t code) const {
    std::vector<std::uint64_t> c(degree());
    for (auto& x : c) {
        x = code % p_;
        code /= p_;
    }
    return from_coords(std::move(c));
}

std::vector<std::uint64_t> Field::mul(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
    const std::size_t d = degree();
    std::vector<std::uint64_t> r(2 * d - 1, 0);
    for (std::size_t i = 0; i < d; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p_)) % p_;
    }
    for (std::size_t k = r.size(); k-- > d;) {
        const std::uint64_t c = r[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i < d; ++i) r[k - d + i] = (r[k - d + i] + p_ - mulmod(c, modulus_[i], p_)) % p_;
    }
    r.resize(d);
    return r;
}

void Field::times_generator(std::vector<std::uint64_t>& c) const {
    const std::size_t d = degree();
    if (d == 1) {
        c[0] = mulmod(c[0], (p_ - modulus_[0]) % p_, p_);
        return;
    }
    const std::uint64_t top = c[d - 1];
    for (std::size_t i = d - 1; i > 0; --i) c[i] = c[i - 1];
    c[0] = 0;
    if (top == 0) return;
    for (std::size_t i = 0; i < d; ++i) c[i] = (c[i] + p_ - mulmod(top, modulus_[i], p_)) % p_;
}

FieldElement Field::exp(std::uint64_t k) const { return generator().pow(k % (order_ - 1)); }

void Field::build_log_tables() const {
    const std::uint64_t units = order_ - 1;
    if (order_ <= (1ULL << 20)) {
        log_table_.assign(order_, 0);
        std::vector<std::uint64_t> x = one().coords();
        for (std::uint64_t k = 0; k < units; ++k) {
            log_table_[encode(x)] = static_cast<std::uint32_t>(k);
            times_generator(x);
        }
        return;
    }
    giant_ = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(units))));
    std::vector<std::uint64_t> x = one().coords();
    for (std::uint64_t j = 0; j < giant_; ++j) {
        baby_steps_.emplace(encode(x), j);
        times_generator(x);
    }
}

std::uint64_t Field::dlog(const FieldElement& x) const {
    if (*x.field() != *this) throw DomainError("dlog: element belongs to another field");
    if (x.is_zero()) throw DomainError("dlog of zero");
    std::call_once(log_once_, [this] { build_log_tables(); });
    if (!log_table_.empty()) return log_table_[x.code()];
    const FieldElement step = generator().pow(giant_).inverse();
    FieldElement y = x;
    for (std::uint64_t i = 0; i <= giant_; ++i) {
        if (auto it = baby_steps_.find(y.code()); it != baby_steps_.end()) return (i * giant_ + it->second) % (order_ - 1);
        y = y * step;
    }
    throw std::logic_error("baby-step giant-step failed");
}

const std::vector<std::uint64_t>& Field::trace_functional() const {
    std::call_once(trace_once_, [this] {
        trace_functional_.assign(degree(), 0);
        const FieldElement g = generator();
        FieldElement power = one();
        for (std::size_t i = 0; i < degree(); ++i) {
            FieldElement acc = zero();
            FieldElement conj = power;
            for (std::size_t k = 0; k < degree(); ++k) {
                acc = acc + conj;
                conj = conj.pow(p_);
            }
            trace_functional_[i] = acc.coords()[0];
            power = power * g;
        }
    });
    return trace_functional_;
}

FieldElement::FieldElement(FieldPtr field, std::vector<std::uint64_t> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {}

bool FieldElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](std::uint64_t c) { return c == 0; });
}

void FieldElement::check_same(const FieldElement& o) const {
    if (!field_ || !o.field_) throw StateError("uninitialised field element");
    if (field_ != o.field_ && *field_ != *o.field_) throw DomainError("field elements from different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same(o);
    std::vector<std::uint64_t> c(coords_.size());
    const std::uint64_t p = field_->p();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (coords_[i] + o.coords_[i]) % p;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same(o);
    std::vector<std::uint64_t> c(coords_.size());
    const std::uint64_t p = field_->p();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (coords_[i] + p - o.coords_[i]) % p;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-() const { return field_->zero() - *this; }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same(o);
    return FieldElement(field_, field_->mul(coords_, o.coords_));
}

FieldElement FieldElement::pow(std::uint64_t e) const {
    FieldElement r = field_->one();
    FieldElement b = *this;
    while (e != 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e != 0) b = b * b;
    }
    return r;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    return pow(field_->order() - 2);
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    if (!a.field_ || !b.field_) return !a.field_ && !b.field_;
    return (a.field_ == b.field_ || *a.field_ == *b.field_) && a.coords_ == b.coords_;
}

FieldElement FieldTower::embed(const FieldElement& x) const {
    const auto& fld = *x.field();
    if (fld == *top_field) return x;
    if (fld.degree() == 1 && (fld == *prime_field || fld == *base_field)) return top_field->from_int(static_cast<std::int64_t>(x.coords()[0]));
    if (fld != *base_field) throw DomainError("embed: element is not in the tower");
    FieldElement acc = top_field->zero();
    FieldElement power = top_field->one();
    for (auto c : x.coords()) {
        acc = acc + top_field->from_int(static_cast<std::int64_t>(c)) * power;
        power = power * embedded_generator;
    }
    return acc;
}

FieldElement FieldTower::restrict_to(const FieldElement& x, Subfield target) const {
    const auto& fld = *x.field();
    const auto& c = x.coords();
    if (target == Subfield::prime) {
        if (!std::all_of(c.begin() + 1, c.end(), [](std::uint64_t v) { return v == 0; }))
            throw DomainError("element does not lie in the prime field");
        return prime_field->from_int(static_cast<std::int64_t>(c[0]));
    }
    if (fld == *base_field) return x;
    if (fld == *prime_field) return base_field->from_int(static_cast<std::int64_t>(c[0]));
    if (fld != *top_field) throw DomainError("restrict: element is not in the tower");
    // Solve sum_i a_i beta^i = x over F_p.
    const std::size_t rows = top_field->degree();
    const std::size_t cols = base_field->degree();
    std::vector<std::vector<std::uint64_t>> mat(rows, std::vector<std::uint64_t>(cols + 1, 0));
    FieldElement power = top_field->one();
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) mat[i][j] = power.coords()[i];
        power = power * embedded_generator;
    }
    for (std::size_t i = 0; i < rows; ++i) mat[i][cols] = c[i];
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t j = 0; j < cols && r < rows; ++j) {
        std::size_t s = r;
        while (s < rows && mat[s][j] == 0) ++s;
        if (s == rows) continue;
        std::swap(mat[r], mat[s]);
        const std::uint64_t inv = inv_mod(mat[r][j], p);
        for (auto& v : mat[r]) v = mulmod(v, inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || mat[i][j] == 0) continue;
            const std::uint64_t factor_ = mat[i][j];
            for (std::size_t k = 0; k <= cols; ++k) mat[i][k] = (mat[i][k] + p - mulmod(factor_, mat[r][k], p)) % p;
        }
        pivots.push_back(j);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (mat[i][cols] != 0) throw DomainError("element does not lie in the base field");
    std::vector<std::uint64_t> out(cols, 0);
    for (std::size_t k = 0; k < r; ++k) out[pivots[k]] = mat[k][cols];
    return base_field->from_coords(std::move(out));
}

FieldTower build_tower(std::uint64_t p, int f, int ell, std::uint64_t budget) {
    if (!is_prime(static_cast<std::int64_t>(p))) throw InputError("p = " + std::to_string(p) + " is not prime");
    if (f < 1 || ell < 1) throw InputError("tower degrees must be at least 1");
    const BigInt top_order = ipow(BigInt(static_cast<unsigned long>(p)), static_cast<unsigned long>(f * ell));
    if (top_order > BigInt(static_cast<unsigned long>(budget)))
        throw ResourceError("field of order " + top_order.get_str() + " exceeds budget " + std::to_string(budget));
    FieldTower t;
    t.p = p;
    t.f = f;
    t.ell = ell;
    t.prime_field = make_field(p, pseudo_conway_polynomial(p, 1));
    if (f == 1) {
        t.base_field = t.prime_field;
    } else {
        const std::uint64_t cof = (checked_power(p, static_cast<std::size_t>(f)) - 1) / (p - 1);
        t.base_field = make_field(p, pseudo_conway_polynomial(p, f, &t.prime_field->modulus(), cof));
    }
    const std::uint64_t q = t.base_field->order();
    const std::uint64_t cofactor = (top_order.get_ui() - 1) / (q - 1);
    if (ell == 1) {
        t.top_field = t.base_field;
    } else {
        t.top_field = make_field(p, pseudo_conway_polynomial(p, f * ell, &t.base_field->modulus(), cofactor));
    }
    t.embedded_generator = t.top_field->generator().pow(cofactor);
    // The embedding must carry the base modulus to zero.
    FieldElement acc = t.top_field->zero();
    const auto& bm = t.base_field->modulus();
    for (std::size_t k = bm.size(); k-- > 0;)
        acc = acc * t.embedded_generator + t.top_field->from_int(static_cast<std::int64_t>(bm[k]));
    if (!acc.is_zero()) throw std::logic_error("tower embedding is not compatible");
    return t;
}

namespace {

struct Orbit {
    std::size_t length;
    std::uint64_t step;
};

Orbit relative_orbit(const FieldTower& tower, const FieldElement& x, Subfield target) {
    const auto& fld = *x.field();
    if (target == Subfield::base) {
        if (fld == *tower.top_field) return {static_cast<std::size_t>(tower.ell), tower.q()};
        if (fld == *tower.base_field) return {1, tower.q()};
        throw DomainError("trace/norm to F_q needs an element of F_q or F_{q^l}");
    }
    if (fld == *tower.top_field || fld == *tower.base_field || fld == *tower.prime_field)
        return {fld.degree(), tower.p};
    throw DomainError("element is not in the tower");
}

}  // namespace

FieldElement trace_to_base(const FieldTower& tower, const FieldElement& x, Subfield target) {
    const Orbit o = relative_orbit(tower, x, target);
    FieldElement acc = x.field()->zero();
    FieldElement conj = x;
    for (std::size_t k = 0; k < o.length; ++k) {
        acc = acc + conj;
        conj = conj.pow(o.step);
    }
    if (acc.pow(o.step) != acc) throw std::logic_error("trace is not Frobenius-fixed");
    return tower.restrict_to(acc, target);
}

FieldElement norm_to_base(const FieldTower& tower, const FieldElement& x, Subfield target) {
    const Orbit o = relative_orbit(tower, x, target);
    FieldElement acc = x.field()->one();
    FieldElement conj = x;
    for (std::size_t k = 0; k < o.length; ++k) {
        acc = acc * conj;
        conj = conj.pow(o.step);
    }
    if (acc.pow(o.step) != acc) throw std::logic_error("norm is not Frobenius-fixed");
    return tower.restrict_to(acc, target);
}

std::uint64_t dlog(const FieldElement& x) {
    if (!x.field()) throw StateError("uninitialised field element");
    return x.field()->dlog(x);
}

}  // namespace pdensity
