#include "pdensity/padic_tower.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pdensity {

namespace {

void require_same(const TowerRingPtr& a, const TowerRingPtr& b) {
    if (!a || !b) throw StateError("uninitialised tower element");
    if (a != b && (a->p() != b->p() || a->K() != b->K() || a->base_modulus() != b->base_modulus()))
        throw DomainError("tower elements from different rings");
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return a <= 0 ? -((-a) / b) : (a + b - 1) / b;
}

std::vector<IntVector> zero_coeffs(const TowerRing& r) {
    return std::vector<IntVector>(r.p() - 1, IntVector(static_cast<std::size_t>(r.f()), BigInt(0)));
}

}  // namespace

TowerRing::TowerRing(std::uint64_t p, Poly base_modulus, int K) : p_(p), K_(K), base_(std::move(base_modulus)) {
    if (!is_prime(static_cast<std::int64_t>(p))) throw InputError("p = " + std::to_string(p) + " is not prime");
    if (K < 1) throw RangeError("p-adic precision K must be at least 1");
    if (base_.size() < 2 || base_.back() != 1) throw DomainError("base modulus must be monic of degree >= 1");
    const BigInt P(static_cast<unsigned long>(p));
    pk_ = ipow(P, static_cast<unsigned long>(K));
    q_ = ipow(P, base_.size() - 1).get_ui();
    for (auto c : base_) lift_.push_back(BigInt(static_cast<unsigned long>(c)));
    BigInt b;
    for (std::uint64_t j = 1; j < p; ++j) {
        mpz_bin_uiui(b.get_mpz_t(), p, j);
        binom_.push_back(b);
    }
}

TowerRingPtr make_tower_ring(std::uint64_t p, Poly base_modulus, int K) {
    return std::make_shared<const TowerRing>(p, std::move(base_modulus), K);
}

TowerRingPtr make_tower_ring(const FieldTower& tower, int K) {
    return make_tower_ring(tower.p, tower.base_field->modulus(), K);
}

void TowerRing::w_reduce(IntVector& a) const {
    const std::size_t d = lift_.size() - 1;
    for (std::size_t k = a.size(); k-- > d;) {
        const BigInt c = a[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i < d; ++i) a[k - d + i] -= c * lift_[i];
        a[k] = 0;
    }
    a.resize(d);
    for (auto& x : a) x = mod_floor(x, pk_);
}

IntVector TowerRing::w_mul(const IntVector& a, const IntVector& b) const {
    IntVector r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    w_reduce(r);
    return r;
}

std::vector<IntVector> TowerRing::t_mul(const std::vector<IntVector>& a, const std::vector<IntVector>& b) const {
    const std::size_t e = p_ - 1;
    const std::size_t d = lift_.size() - 1;
    std::vector<IntVector> r(2 * e - 1, IntVector(d, BigInt(0)));
    for (std::size_t i = 0; i < e; ++i)
        for (std::size_t j = 0; j < e; ++j) {
            const IntVector prod = w_mul(a[i], b[j]);
            for (std::size_t k = 0; k < d; ++k) r[i + j][k] += prod[k];
        }
    // pi^(p-1) = -sum_{j=1}^{p-1} C(p,j) pi^(j-1)
    for (std::size_t k = r.size(); k-- > e;) {
        for (std::size_t j = 1; j < p_; ++j)
            for (std::size_t c = 0; c < d; ++c) r[k - p_ + j][c] -= binom_[j - 1] * r[k][c];
    }
    r.resize(e);
    for (auto& w : r)
        for (auto& x : w) x = mod_floor(x, pk_);
    return r;
}

UnramifiedElement TowerRing::w_zero() const { return w_from_int(0); }
UnramifiedElement TowerRing::w_one() const { return w_from_int(1); }

UnramifiedElement TowerRing::w_from_int(const BigInt& c) const {
    IntVector v(lift_.size() - 1, BigInt(0));
    v[0] = mod_floor(c, pk_);
    return UnramifiedElement(shared_from_this(), std::move(v));
}

UnramifiedElement TowerRing::w_lift(const std::vector<std::uint64_t>& residue) const {
    if (residue.size() != lift_.size() - 1) throw RangeError("residue has the wrong length");
    IntVector v;
    for (auto c : residue) v.push_back(BigInt(static_cast<unsigned long>(c)));
    return UnramifiedElement(shared_from_this(), std::move(v));
}

TowerElement TowerRing::zero() const { return TowerElement(shared_from_this(), zero_coeffs(*this), cap()); }
TowerElement TowerRing::one() const { return from_int(1); }

TowerElement TowerRing::from_int(const BigInt& c) const { return from_unramified(w_from_int(c)); }

TowerElement TowerRing::from_unramified(const UnramifiedElement& w) const {
    auto coeffs = zero_coeffs(*this);
    coeffs[0] = w.coords();
    return TowerElement(shared_from_this(), std::move(coeffs), cap());
}

TowerElement TowerRing::pi() const {
    if (p_ == 2) return from_int(-2);
    auto coeffs = zero_coeffs(*this);
    coeffs[1][0] = 1;
    return TowerElement(shared_from_this(), std::move(coeffs), cap());
}

TowerElement TowerRing::epsilon() const {
    auto coeffs = zero_coeffs(*this);
    coeffs[0][0] = mod_floor(BigInt(-1), pk_);
    for (std::size_t j = 2; j < p_; ++j) coeffs[j - 1][0] = mod_floor(-(binom_[j - 1] / BigInt(static_cast<unsigned long>(p_))), pk_);
    return TowerElement(shared_from_this(), std::move(coeffs), cap());
}

UnramifiedElement::UnramifiedElement(TowerRingPtr ring, IntVector coords) : ring_(std::move(ring)), coords_(std::move(coords)) {
    for (auto& x : coords_) x = mod_floor(x, ring_->modulus());
}

bool UnramifiedElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const BigInt& x) { return x == 0; });
}

int UnramifiedElement::valuation() const {
    int v = ring_->K();
    const BigInt p(static_cast<unsigned long>(ring_->p()));
    for (const auto& x : coords_)
        if (x != 0) v = std::min(v, pdensity::valuation(x, p));
    return v;
}

std::vector<std::uint64_t> UnramifiedElement::residue() const {
    std::vector<std::uint64_t> out;
    const BigInt p(static_cast<unsigned long>(ring_->p()));
    for (const auto& x : coords_) out.push_back(mod_floor(x, p).get_ui());
    return out;
}

UnramifiedElement UnramifiedElement::operator+(const UnramifiedElement& o) const {
    require_same(ring_, o.ring_);
    IntVector c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] + o.coords_[i];
    return UnramifiedElement(ring_, std::move(c));
}

UnramifiedElement UnramifiedElement::operator-(const UnramifiedElement& o) const {
    require_same(ring_, o.ring_);
    IntVector c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] - o.coords_[i];
    return UnramifiedElement(ring_, std::move(c));
}

UnramifiedElement UnramifiedElement::operator*(const UnramifiedElement& o) const {
    require_same(ring_, o.ring_);
    return UnramifiedElement(ring_, ring_->w_mul(coords_, o.coords_));
}

UnramifiedElement UnramifiedElement::pow(const BigInt& e) const {
    if (e < 0) throw RangeError("negative exponent");
    UnramifiedElement r = ring_->w_one();
    UnramifiedElement b = *this;
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t k = bits; k-- > 0;) {
        r = r * r;
        if (mpz_tstbit(e.get_mpz_t(), k)) r = r * b;
    }
    return r;
}

TowerElement::TowerElement(TowerRingPtr ring, std::vector<IntVector> coeffs, std::int64_t precision)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)), precision_(std::min(precision, ring_->cap())) {
    if (coeffs_.size() != ring_->p() - 1) throw RangeError("tower element needs p - 1 coefficients");
    for (auto& w : coeffs_) {
        if (w.size() != static_cast<std::size_t>(ring_->f())) throw RangeError("W coefficient has the wrong length");
        for (auto& x : w) x = mod_floor(x, ring_->modulus());
    }
    if (precision_ < 0) throw PrecisionError("negative precision");
}

TowerElement TowerElement::operator+(const TowerElement& o) const {
    require_same(ring_, o.ring_);
    auto c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t k = 0; k < c[i].size(); ++k) c[i][k] += o.coeffs_[i][k];
    return TowerElement(ring_, std::move(c), std::min(precision_, o.precision_));
}

TowerElement TowerElement::operator-(const TowerElement& o) const {
    require_same(ring_, o.ring_);
    auto c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t k = 0; k < c[i].size(); ++k) c[i][k] -= o.coeffs_[i][k];
    return TowerElement(ring_, std::move(c), std::min(precision_, o.precision_));
}

TowerElement TowerElement::operator-() const { return ring_->zero() - *this; }

TowerElement TowerElement::operator*(const TowerElement& o) const {
    require_same(ring_, o.ring_);
    const Valuation va = v_pi(*this);
    const Valuation vb = v_pi(o);
    const std::int64_t n = std::min(precision_ + vb.value, o.precision_ + va.value);
    return TowerElement(ring_, ring_->t_mul(coeffs_, o.coeffs_), n);
}

TowerElement TowerElement::scale(const BigInt& c) const {
    auto out = coeffs_;
    for (auto& w : out)
        for (auto& x : w) x *= c;
    std::int64_t n = ring_->cap();
    if (mod_floor(c, ring_->modulus()) != 0)
        n = precision_ + static_cast<std::int64_t>(ring_->p() - 1) * valuation(c, BigInt(static_cast<unsigned long>(ring_->p())));
    return TowerElement(ring_, std::move(out), n);
}

TowerElement TowerElement::pow(std::uint64_t e) const {
    TowerElement r = ring_->one();
    TowerElement b = *this;
    while (e != 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e != 0) b = b * b;
    }
    return r;
}

TowerElement TowerElement::mul_pi_power(std::int64_t k) const {
    if (k < 0) throw RangeError("negative pi power");
    return *this * ring_->pi().pow(static_cast<std::uint64_t>(k));
}

TowerElement TowerElement::with_precision(std::int64_t n) const {
    return TowerElement(ring_, coeffs_, std::min(precision_, n));
}

TowerElement TowerElement::truncated() const {
    auto c = coeffs_;
    const auto e = static_cast<std::int64_t>(ring_->p() - 1);
    const BigInt p(static_cast<unsigned long>(ring_->p()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::int64_t keep = std::max<std::int64_t>(0, ceil_div(precision_ - static_cast<std::int64_t>(i), e));
        const BigInt m = ipow(p, static_cast<unsigned long>(keep));
        for (auto& x : c[i]) x = mod_floor(x, m);
    }
    return TowerElement(ring_, std::move(c), precision_);
}

bool TowerElement::congruent(const TowerElement& o) const { return !v_pi(*this - o).exact; }

UnramifiedElement teichmuller(const TowerRingPtr& ring, const FieldElement& a) {
    if (!a.field() || a.field()->modulus() != ring->base_modulus()) throw DomainError("teichmuller: element is not in F_q");
    if (a.is_zero()) throw DomainError("teichmuller lift of zero");
    UnramifiedElement y = ring->w_lift(a.coords());
    const BigInt q(static_cast<unsigned long>(ring->q()));
    for (int it = 0; it <= ring->K() + 1; ++it) {
        UnramifiedElement z = y.pow(q);
        if (z == y) {
            if (y.residue() != a.coords()) throw std::logic_error("teichmuller lift changed the residue");
            return y;
        }
        y = std::move(z);
    }
    throw std::logic_error("teichmuller iteration did not stabilise");
}

Valuation v_pi(const TowerElement& x) {
    const auto& ring = *x.ring();
    const auto e = static_cast<std::int64_t>(ring.p() - 1);
    const BigInt p(static_cast<unsigned long>(ring.p()));
    std::int64_t best = x.precision();
    for (std::size_t i = 0; i < x.coeffs().size(); ++i)
        for (const auto& c : x.coeffs()[i])
            if (c != 0) best = std::min(best, static_cast<std::int64_t>(i) + e * valuation(c, p));
    if (best < x.precision()) return {best, true};
    return {x.precision(), false};
}

TowerElement zeta_p_power(const TowerRingPtr& ring, std::int64_t t) {
    const auto p = static_cast<std::int64_t>(ring->p());
    const std::int64_t r = ((t % p) + p) % p;
    return (ring->one() + ring->pi()).pow(static_cast<std::uint64_t>(r));
}

TowerElement invert_unit(const TowerElement& x) {
    const Valuation v = v_pi(x);
    if (!v.exact) throw PrecisionError("invert_unit: element vanishes to precision");
    if (v.value != 0) throw DomainError("invert_unit: element is not a unit (v_pi = " + std::to_string(v.value) + ")");
    const auto& ring = x.ring();
    const UnramifiedElement w0(ring, x.coeffs()[0]);
    TowerElement y = ring->from_unramified(w0.pow(BigInt(static_cast<unsigned long>(ring->q() - 2))));
    const TowerElement two = ring->from_int(2);
    std::int64_t good = 1;
    while (good < ring->cap()) {
        y = y * (two - x * y);
        y = TowerElement(ring, y.coeffs(), ring->cap());
        good *= 2;
    }
    y = TowerElement(ring, y.coeffs(), x.precision());
    if (!(x * y).congruent(ring->one())) throw std::logic_error("Newton inversion did not converge");
    return y;
}

TowerElement divide_exact(const TowerElement& x, int j) {
    if (j < 0) throw RangeError("negative p power");
    if (j == 0) return x;
    const auto& ring = x.ring();
    const std::int64_t n = x.precision() - static_cast<std::int64_t>(ring->p() - 1) * j;
    if (n < 0) throw PrecisionError("division by p^" + std::to_string(j) + " exhausts the precision");
    const TowerElement t = x.truncated();
    const BigInt pj = ipow(BigInt(static_cast<unsigned long>(ring->p())), static_cast<unsigned long>(j));
    auto c = t.coeffs();
    for (auto& w : c)
        for (auto& v : w) {
            if (v % pj != 0) throw DomainError("element is not divisible by p^" + std::to_string(j));
            v /= pj;
        }
    return TowerElement(ring, std::move(c), n);
}

TowerElement div_pi_power(const TowerElement& x, std::int64_t k) {
    if (k < 0) throw RangeError("negative pi power");
    if (k == 0) return x;
    const Valuation v = v_pi(x);
    if (v.value < k) {
        if (v.exact) throw DomainError("div_pi_power: v_pi(x) = " + std::to_string(v.value) + " < " + std::to_string(k));
        throw PrecisionError("div_pi_power: precision " + std::to_string(x.precision()) + " below " + std::to_string(k));
    }
    // One pi at a time: w_0 = p w_0' and p / pi = pi^(p-2) eps^-1, so each
    // step costs exactly one unit of precision.
    const auto& ring = x.ring();
    const TowerElement carry = ring->pi().pow(ring->p() - 2) * invert_unit(ring->epsilon());
    const BigInt p(static_cast<unsigned long>(ring->p()));
    TowerElement cur = x.truncated();
    for (std::int64_t step = 0; step < k; ++step) {
        auto c = cur.coeffs();
        IntVector w0 = c[0];
        for (auto& v : w0) {
            if (v % p != 0) throw std::logic_error("div_pi_power: constant term not divisible by p");
            v /= p;
        }
        for (std::size_t i = 0; i + 1 < c.size(); ++i) c[i] = c[i + 1];
        for (auto& v : c.back()) v = 0;
        auto zero = ring->zero().coeffs();
        zero[0] = std::move(w0);
        const TowerElement low = TowerElement(ring, std::move(zero), ring->cap()) * carry;
        cur = (TowerElement(ring, std::move(c), ring->cap()) + low).with_precision(x.precision() - step - 1).truncated();
    }
    return cur;
}

TowerElement divide(const TowerElement& x, const TowerElement& y) {
    const Valuation vy = v_pi(y);
    if (!vy.exact) throw PrecisionError("division by an element that vanishes to precision");
    const TowerElement unit = div_pi_power(y, vy.value);
    const TowerElement z = x * invert_unit(unit);
    return div_pi_power(z, vy.value);
}

}  // namespace pdensity
