#include "pdensity/charsum.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace pdensity;
using testutil::frac;

namespace {

LaurentPolynomial poly(std::int64_t p, int f, ExponentMatrix d, std::vector<std::int64_t> b,
                       std::vector<std::int64_t> a = {}, SpecOptions opt = {}) {
    const auto spec = ProblemSpec::make(p, f, std::move(d), std::move(b), opt);
    if (a.empty()) return LaurentPolynomial::unit(spec);
    const auto F = base_field_of(spec);
    std::vector<FieldElement> c;
    for (auto x : a) c.push_back(F->from_int(x));
    return LaurentPolynomial::make(spec, c);
}

}  // namespace

TEST_CASE("v_pi(S_1) over prime fields, frozen from the reference script") {
    struct Row {
        LaurentPolynomial F;
        std::int64_t v;
    };
    const std::vector<Row> rows = {
        {poly(7, 1, {{1}}, {2}), 4},
        {poly(7, 1, {{1}, {2}}, {2}), 2},
        {poly(7, 1, {{1}, {2}}, {2}, {3, 5}), 2},
        {poly(5, 1, {{1}}, {0}), 0},
        {poly(5, 1, {{1, 1}, {1, 2}}, {1, 1}), 3},
        {poly(5, 1, {{1}, {-1}}, {2}), 2},
        {poly(5, 1, {{1}, {-1}}, {2}, {2, 3}), 2},
        {poly(7, 1, {{1, 0}, {0, 1}, {1, 1}}, {1, 3}), 5},
        {poly(11, 1, {{1}, {3}}, {4}, {1, 2}), 2},
    };
    for (const auto& r : rows) {
        const auto s = evaluate_sum(r.F, 1, 4);
        CHECK(s.v_pi == Valuation{r.v, true});
        CHECK_FALSE(s.exact_zero);
    }
    const auto z = evaluate_sum(poly(3, 1, {{1, 1}, {1, -1}}, {1, 0}, {1, 2}), 1, 4);
    CHECK(z.exact_zero);
    CHECK_FALSE(z.v_pi.exact);
}

TEST_CASE("small closed forms") {
    // sum over F_q^x of psi(x) is -1
    for (auto [p, f] : {std::pair{5, 1}, {3, 2}, {2, 3}}) {
        const auto s = evaluate_sum(poly(p, f, {{1}}, {0}), 1, 3);
        CHECK(s.value.congruent(-s.value.ring()->one()));
    }
    // a variable with nonzero twist that F ignores kills the sum
    SpecOptions loose;
    loose.require_all_variables = false;
    const auto s = evaluate_sum(poly(5, 1, {{1, 0}}, {0, 1}, {}, loose), 1, 3);
    CHECK(s.exact_zero);
    CHECK_FALSE(v_pi(s.value).exact);

    CHECK_THROWS_AS(poly(5, 1, {{1}}, {1}, {0}), InputError);
    CHECK_THROWS_AS(poly(5, 1, {{1}}, {1}, {1, 2}), InputError);
    CHECK_THROWS_AS(evaluate_sum(poly(5, 1, {{1}, {2}}, {1}), 3, 3, {.point_budget = 100}), ResourceError);
}

TEST_CASE("Frobenius shift leaves the sum unchanged") {
    for (const auto& F : {poly(3, 2, {{1}}, {3}), poly(2, 2, {{1}, {3}}, {1}), poly(3, 1, {{1}, {2}}, {1})}) {
        for (int l = 1; l <= 2; ++l) {
            const auto a = evaluate_sum(F, l, 4);
            for (int shift = 1; shift <= 2; ++shift) {
                const auto b = evaluate_sum(F, l, 4, {.frobenius_shift = shift});
                CHECK(a.value.congruent(b.value));
            }
        }
    }
}

TEST_CASE("Gauss sums lift: S_2 = -(-S_1)^2") {
    for (const auto& F : {poly(5, 1, {{1}}, {1}), poly(7, 1, {{1}}, {2}), poly(3, 2, {{1}}, {3}), poly(2, 2, {{1}}, {1})}) {
        const auto s1 = evaluate_sum(F, 1, 6);
        const auto s2 = evaluate_sum(F, 2, 6);
        CHECK(s2.value.congruent(-(s1.value * s1.value)));
        CHECK(s2.v_q == 2 * s1.v_q);
    }
}

TEST_CASE("precision choice and the bound") {
    CHECK(choose_precision(4, 7) == 4);
    CHECK(choose_precision(0, 2) == 6);
    const auto F = poly(7, 1, {{1}}, {2});
    const auto cert = *density(F.spec);
    const auto r = verify_bound(F, 1, cert);
    CHECK(r.holds);
    CHECK(r.equality);
    CHECK(r.bound == frac(2, 3));
    CHECK(r.v_q == frac(2, 3));
    CHECK_THROWS_AS(verify_bound(F, 1, cert, 1), PrecisionError);
    CHECK(verify_bound(F, 2, cert).holds);
}

TEST_CASE("leading unit and the congruence") {
    const auto spec = ProblemSpec::make(7, 1, {{1}}, {2});
    const auto F = base_field_of(spec);
    // 1 / 4! = 1/24 = 5 mod 7
    CHECK(leading_unit_residue(spec, {F->one()}, {IntVector{BigInt(4)}}).coords() == std::vector<std::uint64_t>{5});

    const auto gauss = verify_congruence_S(LaurentPolynomial::unit(spec), 1);
    CHECK(gauss.sigma == 4u);
    CHECK(gauss.sign == -1);
    CHECK(gauss.unit_nonzero);
    CHECK(gauss.congruence_holds);
    CHECK_FALSE(gauss.unsigned_congruence_holds);
    CHECK(gauss.exact_valuation == true);

    const auto two = verify_congruence_S(poly(5, 1, {{1, 1}, {1, 2}}, {1, 1}), 1);
    CHECK(two.sign == 1);
    CHECK(two.congruence_holds);
    CHECK(two.sigma == 3u);

    const auto empty = verify_congruence_S(poly(3, 1, {{1, 1}, {1, -1}}, {1, 0}, {1, 2}), 1);
    CHECK_FALSE(empty.sigma);
    CHECK(empty.congruence_holds);

    for (int l = 1; l <= 2; ++l) {
        const auto r = verify_congruence_S(poly(3, 2, {{1}, {2}}, {2}, {1, 2}), l);
        CHECK(r.congruence_holds);
    }
    CHECK_THROWS_AS(verify_congruence_S(poly(7, 1, {{1}, {2}}, {2}), 3, 1000), ResourceError);
}

TEST_CASE("attainment search") {
    const auto a = attainment_search(ProblemSpec::make(2, 3, {{1}, {2}, {3}}, {1}));
    CHECK(a.sigma == 1);
    CHECK(a.v_pi == Valuation{1, true});
    CHECK(evaluate_sum(a.polynomial, 1, 4).v_pi == a.v_pi);

    const auto b = attainment_search(ProblemSpec::make(7, 1, {{1}, {2}}, {2}));
    CHECK(b.sigma == 2);
    CHECK(b.v_pi == Valuation{2, true});
    CHECK(b.candidates_tried >= 1);

    CHECK_THROWS_AS(attainment_search(ProblemSpec::make(3, 1, {{2}}, {1})), PreconditionError);
    CHECK_THROWS_AS(attainment_search(ProblemSpec::make(7, 1, {{1}, {2}, {3}, {4}, {5}, {6}}, {2}), 100), ResourceError);
}
