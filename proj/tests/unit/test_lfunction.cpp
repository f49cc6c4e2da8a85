#include "pdensity/lfunction.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace pdensity;
using testutil::frac;

namespace {

LaurentPolynomial unit_poly(std::int64_t p, int f, ExponentMatrix d, std::vector<std::int64_t> b, SpecOptions opt = {}) {
    return LaurentPolynomial::unit(ProblemSpec::make(p, f, std::move(d), std::move(b), opt));
}

LSeries series(const LaurentPolynomial& F, int L) {
    const auto& s = F.spec;
    const std::int64_t unit = static_cast<std::int64_t>(s.f()) * (s.p() - 1);
    return build_series(F, L, choose_precision(L * static_cast<std::int64_t>(s.m()) * unit + (s.p() - 1) * L, s.p()));
}

SpecOptions loose() {
    SpecOptions o;
    o.require_all_variables = false;
    return o;
}

}  // namespace

TEST_CASE("series coefficients") {
    const auto F = unit_poly(7, 1, {{1}}, {2});
    const auto s = series(F, 3);
    REQUIRE(s.length() == 3);
    CHECK(s.coefficients[0].congruent(s.coefficients[0].ring()->one()));
    CHECK(s.coefficients[1].congruent(s.sums[1]));
    // 2 c_2 = S_1 c_1 + S_2
    const auto two_c2 = s.sums[1] * s.coefficients[1] + s.sums[2];
    CHECK(two_c2.congruent(s.coefficients[2].scale(2)));
}

TEST_CASE("Gauss sum: L = 1 + g T") {
    const auto F = unit_poly(7, 1, {{1}}, {2});
    const auto s = series(F, 3);
    const auto r = detect_and_reconstruct(s);
    CHECK(r.num_degree == 1);
    CHECK(r.den_degree == 0);
    REQUIRE(r.numerator.size() == 2);
    CHECK(r.numerator[1].congruent(s.sums[1]));
    REQUIRE(r.mu);
    CHECK(*r.mu == frac(2, 3));
    CHECK_FALSE(r.experimental);
    const auto m = verify_mu(r, *density(F.spec));
    CHECK(m.holds);
    CHECK(m.equality);
    CHECK(m.gap == Rational(0));
}

TEST_CASE("detected degrees and mu >= s_p") {
    struct Row {
        LaurentPolynomial F;
        int s, t;
        Rational mu;
    };
    const std::vector<Row> rows = {
        {unit_poly(7, 1, {{1}, {2}}, {2}), 2, 0, frac(1, 3)},
        {unit_poly(3, 1, {{2}}, {1}), 2, 0, frac(1, 2)},
        {unit_poly(5, 1, {{1}}, {0}), 1, 0, Rational(0)},
        {unit_poly(5, 1, {{1}, {3}}, {1}), 3, 0, frac(1, 4)},
    };
    for (const auto& row : rows) {
        const auto r = detect_and_reconstruct(series(row.F, 7));
        CHECK(r.num_degree == row.s);
        CHECK(r.den_degree == row.t);
        REQUIRE(r.mu);
        CHECK(*r.mu == row.mu);
        CHECK(r.residual_checks > 0);
        CHECK(verify_mu(r, *density(row.F.spec)).holds);
    }
}

TEST_CASE("a genuine denominator: (1 - qT)/(1 - T)") {
    const auto F = unit_poly(3, 1, {{1, 0}}, {0, 0}, loose());
    const auto s = series(F, 5);
    const auto r = detect_and_reconstruct(s);
    CHECK(r.num_degree == 1);
    CHECK(r.den_degree == 1);
    CHECK(r.experimental);
    const auto& R = r.numerator[0].ring();
    CHECK(r.numerator[1].congruent(R->from_int(-3)));
    CHECK(r.denominator[1].congruent(R->from_int(-1)));
    CHECK(r.numerator_polygon.slopes == std::vector<Rational>{Rational(1)});
    CHECK(r.denominator_polygon.slopes == std::vector<Rational>{Rational(0)});
    CHECK(*r.mu == 0);
    CHECK_THROWS_AS(reconstruct_rational(s, 1, 0), ReconstructionError);
    CHECK_THROWS_AS(reconstruct_rational(series(F, 3), 1, 1), PreconditionError);
}

TEST_CASE("vanishing sums give L = 1") {
    const auto F = unit_poly(5, 1, {{1, 0}}, {0, 1}, loose());
    const auto r = detect_and_reconstruct(series(F, 4));
    CHECK(r.num_degree == 0);
    CHECK(r.den_degree == 0);
    CHECK_FALSE(r.mu);
}

TEST_CASE("Newton polygon") {
    const auto R = make_tower_ring(build_tower(5, 1, 1), 4);
    const auto p5 = R->from_int(5);
    // 1 + 5T + pi T^2: vertices (0,0), (2,1); both slopes 1/8 in q-units
    const std::vector<TowerElement> a = {R->one(), p5, R->pi()};
    const auto np = newton_polygon(a, 1);
    CHECK(np.vertices == std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 0}, {2, 1}});
    CHECK(np.slopes == std::vector<Rational>{frac(1, 8), frac(1, 8)});

    // scaling every coefficient by a unit does not move the polygon
    const auto u = R->from_int(3) + R->pi();
    std::vector<TowerElement> b;
    for (const auto& x : a) b.push_back(x * u);
    CHECK(newton_polygon(b, 1).slopes == np.slopes);

    CHECK_THROWS_AS(newton_polygon({R->pi(), R->one()}, 1), PreconditionError);
}
