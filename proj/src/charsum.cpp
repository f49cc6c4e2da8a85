#include "pdensity/charsum.hpp"

#include "pdensity/digits.hpp"
#include "pdensity/solvability.hpp"

#include <stdexcept>
#include <string>

namespace pdensity {

namespace {

bool level_in_lambda(const ProblemSpec& spec, int level) {
    const auto rep = analyze(spec);
    return rep.solvable && BigInt(level) % *rep.generator == 0;
}

std::uint64_t mod_u64(std::int64_t a, std::uint64_t m) {
    const auto mm = static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(((a % mm) + mm) % mm);
}

struct Counts {
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    std::uint64_t points = 0;
    // counts[c * p + t]
    std::vector<std::uint64_t> table;
};

Counts count_points(const LaurentPolynomial& F, const FieldTower& tower, int level, const EvalOptions& options) {
    const ProblemSpec& spec = F.spec;
    const std::uint64_t p = tower.p;
    const std::uint64_t q = tower.q();
    const std::uint64_t units = tower.top_field->order() - 1;
    const std::uint64_t cof = units / (q - 1);
    const std::size_t n = spec.n();
    const std::size_t m = spec.m();

    const BigInt points = ipow(BigInt(static_cast<unsigned long>(units)), m);
    if (points > BigInt(static_cast<unsigned long>(options.point_budget)))
        throw ResourceError("sum over " + points.get_str() + " points exceeds budget " + std::to_string(options.point_budget));

    // Tr_{F_{q^l}/F_p}(G^e) for every e.
    std::vector<std::uint32_t> trace(units);
    {
        const auto& functional = tower.top_field->trace_functional();
        std::vector<std::uint64_t> x = tower.top_field->one().coords();
        for (std::uint64_t e = 0; e < units; ++e) {
            std::uint64_t t = 0;
            for (std::size_t i = 0; i < x.size(); ++i) t = (t + x[i] * functional[i]) % p;
            trace[e] = static_cast<std::uint32_t>(t);
            tower.top_field->times_generator(x);
        }
    }

    // x_j = G^(k_j q^s): raising the step by q^s permutes the enumeration.
    std::uint64_t shift = 1;
    for (int s = 0; s < options.frobenius_shift; ++s) shift = static_cast<std::uint64_t>((static_cast<unsigned __int128>(shift) * q) % units);

    std::vector<std::vector<std::uint64_t>> step(m, std::vector<std::uint64_t>(n));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i)
            step[j][i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(mod_u64(spec.exponent(i, j), units)) * shift) % units);
    std::vector<std::uint64_t> cstep(m);
    for (std::size_t j = 0; j < m; ++j) cstep[j] = static_cast<std::uint64_t>(spec.twist()[j]) % (q - 1);

    std::vector<std::uint64_t> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t alpha = dlog(F.coefficients[i]);
        e[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(alpha) * cof) % units);
    }
    std::uint64_t c = 0;
    std::vector<std::uint64_t> k(m, 0);

    Counts out;
    out.q = q;
    out.p = p;
    out.points = points.get_ui();
    out.table.assign((q - 1) * p, 0);
    for (std::uint64_t pt = 0; pt < out.points; ++pt) {
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < n; ++i) t += trace[e[i]];
        ++out.table[c * p + t % p];
        // Odometer step: every coordinate touched (wrapped or incremented)
        // advances by one modulo q^l - 1.
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                e[i] += step[j][i];
                if (e[i] >= units) e[i] -= units;
            }
            c += cstep[j];
            if (c >= q - 1) c -= q - 1;
            if (++k[j] < units) break;
            k[j] = 0;
        }
    }
    return out;
}

TowerElement assemble(const Counts& counts, const TowerRingPtr& ring, const UnramifiedElement& zeta) {
    std::vector<TowerElement> additive;
    for (std::uint64_t t = 0; t < counts.p; ++t) additive.push_back(zeta_p_power(ring, static_cast<std::int64_t>(t)));
    TowerElement total = ring->zero();
    UnramifiedElement zc = ring->w_one();
    for (std::uint64_t c = 0; c + 1 < counts.q; ++c) {
        TowerElement inner = ring->zero();
        for (std::uint64_t t = 0; t < counts.p; ++t) {
            const std::uint64_t cnt = counts.table[c * counts.p + t];
            if (cnt != 0) inner = inner + additive[t].scale(BigInt(static_cast<unsigned long>(cnt)));
        }
        total = total + inner * ring->from_unramified(zc);
        zc = zc * zeta;
    }
    return total;
}

Rational to_vq(const Valuation& v, const ProblemSpec& spec) {
    Rational r(v.value, spec.f() * (spec.p() - 1));
    r.canonicalize();
    return r;
}

}  // namespace

FieldPtr base_field_of(const ProblemSpec& spec) {
    return build_tower(static_cast<std::uint64_t>(spec.p()), spec.f(), 1).base_field;
}

LaurentPolynomial LaurentPolynomial::make(const ProblemSpec& spec, std::vector<FieldElement> coefficients) {
    if (coefficients.size() != spec.n())
        throw InputError("coefficients: expected " + std::to_string(spec.n()) + " entries, got " + std::to_string(coefficients.size()));
    const FieldPtr field = base_field_of(spec);
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (!coefficients[i].field() || *coefficients[i].field() != *field)
            throw InputError("coefficients[" + std::to_string(i) + "] is not an element of the canonical F_q");
        if (coefficients[i].is_zero()) throw InputError("coefficients[" + std::to_string(i) + "] is zero");
    }
    return LaurentPolynomial{spec, std::move(coefficients)};
}

LaurentPolynomial LaurentPolynomial::unit(const ProblemSpec& spec) {
    const FieldPtr field = base_field_of(spec);
    return make(spec, std::vector<FieldElement>(spec.n(), field->one()));
}

int choose_precision(std::int64_t sigma_target, std::uint64_t p, int guard) {
    const auto e = static_cast<std::int64_t>(p - 1);
    const std::int64_t need = std::max<std::int64_t>(0, sigma_target + guard);
    return static_cast<int>((need + e - 1) / e) + 2;
}

CharSumResult evaluate_sum(const LaurentPolynomial& F, int level, int K, const EvalOptions& options) {
    const ProblemSpec& spec = F.spec;
    const FieldTower tower = build_tower(static_cast<std::uint64_t>(spec.p()), spec.f(), level);
    const TowerRingPtr ring = make_tower_ring(tower, K);
    const Counts counts = count_points(F, tower, level, options);
    const UnramifiedElement zeta = teichmuller(ring, tower.base_field->generator());

    CharSumResult out;
    out.level = level;
    out.precision_k = K;
    out.points = counts.points;
    out.value = assemble(counts, ring, zeta);
    out.v_pi = v_pi(out.value);
    out.v_q = to_vq(out.v_pi, spec);
    out.exact_zero = !level_in_lambda(spec, level);
    if (out.exact_zero && out.v_pi.exact)
        throw FalsificationError("S_" + std::to_string(level) + " is non-zero although L(D, q^l, b_l) is empty");
    return out;
}

BoundReport verify_bound(const LaurentPolynomial& F, int level, const DensityCertificate& certificate,
                         std::optional<int> forced_k, int max_k, const EvalOptions& options) {
    const ProblemSpec& spec = F.spec;
    const std::int64_t fp = spec.f() * (spec.p() - 1);
    BoundReport rep;
    rep.level = level;
    rep.bound = certificate.density * Rational(level);
    rep.bound.canonicalize();
    // Target in pi-units: l s_p f (p - 1).
    Rational target = rep.bound * Rational(fp);
    target.canonicalize();
    BigInt target_ceil;
    mpz_cdiv_q(target_ceil.get_mpz_t(), target.get_num_mpz_t(), target.get_den_mpz_t());
    const int guarded = choose_precision(to_i64(target_ceil), static_cast<std::uint64_t>(spec.p()));
    if (forced_k && *forced_k < guarded)
        throw PrecisionError("precision K = " + std::to_string(*forced_k) + " is below the guarded minimum " +
                             std::to_string(guarded) + " for v_q(S_" + std::to_string(level) + ") >= " +
                             to_fraction_string(rep.bound) + "; raise precision");
    int K = forced_k ? *forced_k : guarded;
    while (true) {
        const CharSumResult s = evaluate_sum(F, level, K, options);
        rep.v_pi = s.v_pi;
        rep.v_q = s.v_q;
        rep.precision_k = K;
        if (s.v_pi.exact) {
            rep.holds = s.v_q >= rep.bound;
            rep.equality = s.v_q == rep.bound;
            return rep;
        }
        if (Rational(s.v_pi.value) >= target) {
            rep.holds = true;
            rep.marker_dominated = true;
            return rep;
        }
        if (forced_k || K >= max_k)
            throw PrecisionError("precision K = " + std::to_string(K) + " cannot certify v_q(S_" + std::to_string(level) +
                                 ") >= " + to_fraction_string(rep.bound) + "; raise precision");
        K = std::min(2 * K, max_k);
    }
}

FieldElement leading_unit_residue(const ProblemSpec& spec, const std::vector<FieldElement>& a,
                                  const std::vector<IntVector>& minimizers) {
    const FieldPtr field = a.at(0).field();
    const auto p = static_cast<std::uint64_t>(spec.p());
    const BigInt qm1(static_cast<long>(spec.q() - 1));
    FieldElement total = field->zero();
    for (const auto& u : minimizers) {
        FieldElement term = field->one();
        for (std::size_t i = 0; i < u.size(); ++i) {
            term = term * a[i].pow(mod_floor(u[i], qm1).get_ui());
            const BigInt r = mod_floor(rho(u[i], p), BigInt(static_cast<unsigned long>(p)));
            term = term * field->from_int(r.get_si()).inverse();
        }
        total = total + term;
    }
    return total;
}

CongruenceReport verify_congruence_S(const LaurentPolynomial& F, int level, std::uint64_t brute_budget,
                                     const EvalOptions& options) {
    const ProblemSpec& spec = F.spec;
    CongruenceReport rep;
    rep.level = level;
    rep.sign = spec.m() % 2 == 0 ? 1 : -1;
    if (!level_in_lambda(spec, level)) {
        const int K = choose_precision(0, static_cast<std::uint64_t>(spec.p()));
        const CharSumResult s = evaluate_sum(F, level, K, options);
        rep.v_pi = s.v_pi;
        rep.precision_k = K;
        rep.congruence_holds = rep.unsigned_congruence_holds = s.exact_zero && !s.v_pi.exact;
        return rep;
    }
    const BruteForceMinimum bf = sigma_min_bruteforce(spec, level, brute_budget);
    if (!bf.sigma) throw std::logic_error("level in Lambda but brute force found no member");
    const std::uint64_t sigma = *bf.sigma;
    rep.sigma = sigma;
    rep.minimizers = bf.minimizers.size();
    const int K = choose_precision(static_cast<std::int64_t>(sigma) + 1, static_cast<std::uint64_t>(spec.p()));
    rep.precision_k = K;
    const CharSumResult s = evaluate_sum(F, level, K, options);
    rep.v_pi = s.v_pi;

    const FieldTower tower = build_tower(static_cast<std::uint64_t>(spec.p()), spec.f(), 1);
    const TowerRingPtr& ring = s.value.ring();
    const UnramifiedElement zeta = teichmuller(ring, tower.base_field->generator());
    const BigInt qm1(static_cast<long>(spec.q() - 1));
    const auto p = static_cast<std::uint64_t>(spec.p());
    TowerElement unit = ring->zero();
    for (const auto& u : bf.minimizers) {
        UnramifiedElement w = ring->w_one();
        BigInt rho_all = 1;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const BigInt alpha(static_cast<unsigned long>(dlog(F.coefficients[i])));
            w = w * zeta.pow(mod_floor(alpha * u[i], qm1));
            rho_all *= rho(u[i], p);
        }
        unit = unit + ring->from_unramified(w).scale(mod_inverse(rho_all, ring->modulus()));
    }
    const Valuation vu = v_pi(unit);
    rep.unit_nonzero = vu.exact && vu.value == 0;
    const TowerElement rhs = unit.mul_pi_power(static_cast<std::int64_t>(sigma));
    const auto target = static_cast<std::int64_t>(sigma) + 1;
    auto agrees = [&](const TowerElement& candidate) {
        const Valuation d = v_pi(s.value - candidate);
        if (!d.exact && d.value < target) throw PrecisionError("precision too low to compare modulo pi^(sigma+1)");
        return d.value >= target;
    };
    rep.congruence_holds = agrees(rep.sign == 1 ? rhs : -rhs);
    rep.unsigned_congruence_holds = agrees(rhs);
    if (rep.unit_nonzero) rep.exact_valuation = s.v_pi.exact && s.v_pi.value == static_cast<std::int64_t>(sigma);
    return rep;
}

AttainmentResult attainment_search(const ProblemSpec& spec, std::uint64_t tuple_budget) {
    if (!level_in_lambda(spec, 1)) throw PreconditionError("attainment search needs 1 in Lambda(D, b)");
    const auto q = static_cast<std::uint64_t>(spec.q());
    const std::size_t n = spec.n();
    const BigInt tuples = ipow(BigInt(static_cast<unsigned long>(q - 1)), n);
    if (tuples > BigInt(static_cast<unsigned long>(tuple_budget)))
        throw ResourceError("attainment search over " + tuples.get_str() + " tuples exceeds budget");
    const BruteForceMinimum bf = sigma_min_bruteforce(spec, 1);
    const std::uint64_t sigma = *bf.sigma;
    const FieldPtr field = base_field_of(spec);
    const int K = choose_precision(static_cast<std::int64_t>(sigma) + 1, static_cast<std::uint64_t>(spec.p()));

    auto tuple_at = [&](std::uint64_t index) {
        std::vector<FieldElement> a(n);
        for (std::size_t i = n; i-- > 0;) {
            a[i] = field->exp(index % (q - 1));
            index /= q - 1;
        }
        return a;
    };
    AttainmentResult out{LaurentPolynomial::unit(spec), sigma, {}, 0};
    auto attains = [&](const std::vector<FieldElement>& a) {
        ++out.candidates_tried;
        LaurentPolynomial F = LaurentPolynomial::make(spec, a);
        const CharSumResult s = evaluate_sum(F, 1, K);
        if (s.v_pi.exact && s.v_pi.value == static_cast<std::int64_t>(sigma)) {
            out.polynomial = std::move(F);
            out.v_pi = s.v_pi;
            return true;
        }
        return false;
    };
    const std::uint64_t total = tuples.get_ui();
    std::vector<std::uint64_t> deferred;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const auto a = tuple_at(idx);
        if (leading_unit_residue(spec, a, bf.minimizers).is_zero()) {
            deferred.push_back(idx);
            continue;
        }
        if (attains(a)) return out;
    }
    for (auto idx : deferred)
        if (attains(tuple_at(idx))) return out;
    throw FalsificationError("no coefficient tuple attains v_pi(S_1) = sigma = " + std::to_string(sigma));
}

}  // namespace pdensity
