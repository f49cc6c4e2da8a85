#include "pdensity/lfunction.hpp"

#include <algorithm>
#include <string>

namespace pdensity {

namespace {

TowerElement rebase(const TowerRingPtr& ring, const TowerElement& x) {
    return TowerElement(ring, x.coeffs(), x.precision());
}

// Cross product sign of (b - a) x (c - a).
BigInt cross(const std::pair<std::int64_t, std::int64_t>& a, const std::pair<std::int64_t, std::int64_t>& b,
             const std::pair<std::int64_t, std::int64_t>& c) {
    return BigInt(static_cast<long>(b.first - a.first)) * BigInt(static_cast<long>(c.second - a.second)) -
           BigInt(static_cast<long>(b.second - a.second)) * BigInt(static_cast<long>(c.first - a.first));
}

TowerElement coefficient(const LSeries& s, std::int64_t k) {
    if (k < 0) return s.coefficients[0].ring()->zero();
    return s.coefficients[static_cast<std::size_t>(k)];
}

// Solves M e = rhs with full pivoting on the least valuation.
std::vector<TowerElement> solve(std::vector<std::vector<TowerElement>> M, std::vector<TowerElement> rhs) {
    const std::size_t t = rhs.size();
    std::vector<std::size_t> col(t);
    for (std::size_t i = 0; i < t; ++i) col[i] = i;
    for (std::size_t k = 0; k < t; ++k) {
        std::optional<std::int64_t> best;
        std::size_t br = 0, bc = 0;
        for (std::size_t r = k; r < t; ++r)
            for (std::size_t c = k; c < t; ++c) {
                const Valuation v = v_pi(M[r][c]);
                if (v.exact && (!best || v.value < *best)) {
                    best = v.value;
                    br = r;
                    bc = c;
                }
            }
        if (!best) throw PrecisionError("recurrence system is singular to precision; raise precision or lower the degrees");
        std::swap(M[k], M[br]);
        std::swap(rhs[k], rhs[br]);
        for (auto& row : M) std::swap(row[k], row[bc]);
        std::swap(col[k], col[bc]);
        for (std::size_t r = k + 1; r < t; ++r) {
            const TowerElement factor = divide(M[r][k], M[k][k]);
            for (std::size_t c = k; c < t; ++c) M[r][c] = M[r][c] - factor * M[k][c];
            rhs[r] = rhs[r] - factor * rhs[k];
        }
    }
    std::vector<TowerElement> x(t);
    for (std::size_t k = t; k-- > 0;) {
        TowerElement acc = rhs[k];
        for (std::size_t c = k + 1; c < t; ++c) acc = acc - M[k][c] * x[c];
        try {
            x[k] = divide(acc, M[k][k]);
        } catch (const DomainError&) {
            throw ReconstructionError("denominator coefficients are not integral; degrees do not fit");
        }
    }
    std::vector<TowerElement> out(t);
    for (std::size_t k = 0; k < t; ++k) out[col[k]] = x[k];
    return out;
}

void require_leading(const std::vector<TowerElement>& poly, const char* what) {
    if (poly.size() > 1 && !v_pi(poly.back()).exact)
        throw ReconstructionError(std::string(what) + " leading coefficient vanishes to precision; degree not attained");
}

}  // namespace

LSeries build_series(const LaurentPolynomial& F, int L, int K, const EvalOptions& options) {
    if (L < 0) throw RangeError("series length must be non-negative");
    const ProblemSpec& spec = F.spec;
    const TowerRingPtr ring = make_tower_ring(build_tower(static_cast<std::uint64_t>(spec.p()), spec.f(), 1), K);
    LSeries out{spec, {ring->one()}, {ring->zero()}};
    for (int l = 1; l <= L; ++l) out.sums.push_back(rebase(ring, evaluate_sum(F, l, K, options).value));

    const BigInt p(static_cast<long>(spec.p()));
    for (int k = 1; k <= L; ++k) {
        TowerElement acc = ring->zero();
        for (int l = 1; l <= k; ++l) acc = acc + out.sums[l] * out.coefficients[k - l];
        BigInt unit(k);
        const int v = valuation(unit, p);
        unit /= ipow(p, static_cast<unsigned long>(v));
        acc = acc.scale(mod_inverse(unit, ring->modulus()));
        try {
            out.coefficients.push_back(divide_exact(acc, v));
        } catch (const PrecisionError&) {
            throw PrecisionError("c_" + std::to_string(k) + " cannot be certified at K = " + std::to_string(K) +
                                 "; raise precision");
        } catch (const DomainError&) {
            throw DomainError("c_" + std::to_string(k) + ": " + std::to_string(k) + " c_k is not divisible by " +
                              std::to_string(k));
        }
    }
    return out;
}

NewtonPolygon newton_polygon(const std::vector<TowerElement>& poly, int f) {
    if (poly.empty()) throw PreconditionError("empty polynomial");
    const auto p = static_cast<std::int64_t>(poly[0].ring()->p());
    const Valuation v0 = v_pi(poly[0]);
    if (!v0.exact || v0.value != 0) throw PreconditionError("constant term is not a unit");
    if (!v_pi(poly.back()).exact) throw PrecisionError("leading coefficient vanishes to precision");

    std::vector<std::pair<std::int64_t, std::int64_t>> hull;
    std::vector<std::pair<std::int64_t, std::int64_t>> markers;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Valuation v = v_pi(poly[i]);
        const std::pair<std::int64_t, std::int64_t> pt{static_cast<std::int64_t>(i), v.value};
        if (!v.exact) {
            markers.push_back(pt);
            continue;
        }
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
        hull.push_back(pt);
    }
    NewtonPolygon out;
    out.vertices = hull;
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const auto [x0, y0] = hull[s];
        const auto [x1, y1] = hull[s + 1];
        for (const auto& [xm, ym] : markers) {
            if (xm <= x0 || xm >= x1) continue;
            // ym (a lower bound) must not undercut the segment.
            if (BigInt(static_cast<long>(ym - y0)) * (x1 - x0) < BigInt(static_cast<long>(y1 - y0)) * (xm - x0))
                throw PrecisionError("coefficient " + std::to_string(xm) + " is below the Newton polygon only to precision");
        }
        Rational slope(BigInt(static_cast<long>(y1 - y0)), BigInt(static_cast<long>((x1 - x0) * f * (p - 1))));
        slope.canonicalize();
        for (std::int64_t k = x0; k < x1; ++k) out.slopes.push_back(slope);
    }
    return out;
}

LFunctionResult reconstruct_rational(const LSeries& series, int num_degree, int den_degree) {
    if (num_degree < 0 || den_degree < 0) throw RangeError("degrees must be non-negative");
    const auto L = static_cast<std::int64_t>(series.length());
    const std::int64_t s = num_degree, t = den_degree;
    if (L < s + 2 * t + 1)
        throw PreconditionError("series length " + std::to_string(L) + " < s + 2t + 1 = " + std::to_string(s + 2 * t + 1));
    const TowerRingPtr& ring = series.coefficients[0].ring();

    std::vector<std::vector<TowerElement>> M(static_cast<std::size_t>(t), std::vector<TowerElement>(static_cast<std::size_t>(t)));
    std::vector<TowerElement> rhs(static_cast<std::size_t>(t));
    for (std::int64_t r = 0; r < t; ++r) {
        const std::int64_t k = s + 1 + r;
        for (std::int64_t j = 1; j <= t; ++j) M[r][j - 1] = coefficient(series, k - j);
        rhs[r] = -coefficient(series, k);
    }
    LFunctionResult out;
    out.num_degree = num_degree;
    out.den_degree = den_degree;
    out.experimental = series.spec.m() >= 2;
    out.denominator.push_back(ring->one());
    for (auto& e : solve(std::move(M), std::move(rhs))) out.denominator.push_back(e);

    auto product = [&](std::int64_t k) {
        TowerElement acc = ring->zero();
        for (std::int64_t j = 0; j <= std::min(k, t); ++j) acc = acc + out.denominator[j] * coefficient(series, k - j);
        return acc;
    };
    for (std::int64_t i = 0; i <= s; ++i) out.numerator.push_back(product(i));
    out.residual_precision = ring->cap();
    for (std::int64_t k = s + 1; k <= L; ++k) {
        const Valuation v = v_pi(product(k));
        if (v.exact)
            throw ReconstructionError("D L - N has v_pi = " + std::to_string(v.value) + " at T^" + std::to_string(k));
        out.residual_precision = std::min(out.residual_precision, v.value);
        if (k > s + t) ++out.residual_checks;
    }
    require_leading(out.numerator, "numerator");
    require_leading(out.denominator, "denominator");

    const int f = series.spec.f();
    out.numerator_polygon = newton_polygon(out.numerator, f);
    out.denominator_polygon = newton_polygon(out.denominator, f);
    for (const auto* poly : {&out.numerator_polygon, &out.denominator_polygon})
        if (!poly->slopes.empty() && (!out.mu || poly->slopes.front() < *out.mu)) out.mu = poly->slopes.front();
    return out;
}

LFunctionResult detect_and_reconstruct(const LSeries& series, int cap) {
    const auto L = static_cast<int>(series.length());
    for (int d = 0; d <= cap; ++d)
        for (int t = 0; t <= d; ++t) {
            const int s = d - t;
            if (L < s + 2 * t + 1) continue;
            try {
                return reconstruct_rational(series, s, t);
            } catch (const ReconstructionError&) {
            } catch (const PrecisionError&) {
            }
        }
    throw ReconstructionError("no degrees with s + t <= " + std::to_string(cap) + " fit the series of length " +
                              std::to_string(L));
}

MuReport verify_mu(const LFunctionResult& result, const DensityCertificate& certificate) {
    MuReport rep;
    rep.mu = result.mu;
    rep.density = certificate.density;
    if (!result.mu) {
        rep.vacuous = rep.holds = true;
        return rep;
    }
    rep.gap = *result.mu - certificate.density;
    rep.gap->canonicalize();
    rep.holds = sgn(*rep.gap) >= 0;
    rep.equality = sgn(*rep.gap) == 0;
    return rep;
}

}  // namespace pdensity
