#include "pdensity/finite_field.hpp"

#include <doctest.h>

#include <random>

using namespace pdensity;

TEST_CASE("defining polynomials") {
    CHECK(pseudo_conway_polynomial(3, 2) == Poly{2, 2, 1});
    CHECK(pseudo_conway_polynomial(2, 3) == Poly{1, 1, 0, 1});
    CHECK(pseudo_conway_polynomial(2, 1) == Poly{1, 1});
    CHECK(pseudo_conway_polynomial(7, 1) == Poly{4, 1});  // x - 3, 3 the least primitive root
    CHECK(is_irreducible(2, Poly{1, 1, 1}));
    CHECK_FALSE(is_irreducible(2, Poly{1, 0, 1}));
    CHECK(is_irreducible(3, Poly{1, 0, 1}));
    CHECK_FALSE(has_primitive_root(3, Poly{1, 0, 1}));  // root is i, of order 4
    CHECK(has_primitive_root(3, Poly{2, 2, 1}));
    CHECK_THROWS(make_field(3, Poly{1, 0, 1}));
}

TEST_CASE("F_9 worked values") {
    const auto t = build_tower(3, 1, 2);
    const auto& F = *t.top_field;
    CHECK(F.modulus() == Poly{2, 2, 1});
    const auto alpha = F.generator();
    CHECK(trace_to_base(t, alpha, Subfield::base).coords() == std::vector<std::uint64_t>{1});
    CHECK(norm_to_base(t, alpha, Subfield::base).coords() == std::vector<std::uint64_t>{2});
    CHECK(dlog(F.from_int(2)) == 4);
    CHECK(F.order() == 9);
    CHECK_THROWS_AS(dlog(F.zero()), DomainError);
    CHECK_THROWS_AS(F.zero().inverse(), DomainError);
}

TEST_CASE("prime field discrete logs") {
    const auto t = build_tower(7, 1, 1);
    CHECK(dlog(t.base_field->from_int(2)) == 2);
    CHECK(t.base_field->generator().code() == 3);
    CHECK_THROWS_AS(build_tower(6, 1, 1), InputError);
    CHECK_THROWS_AS(build_tower(2, 0, 1), InputError);
    CHECK_THROWS_AS(build_tower(2, 13, 2), ResourceError);
}

TEST_CASE("embedding lands on a power of the top generator") {
    for (auto [p, f, l] : {std::tuple{2ULL, 2, 3}, {3ULL, 2, 2}, {5ULL, 1, 3}, {2ULL, 3, 2}}) {
        const auto t = build_tower(p, f, l);
        const std::uint64_t Q = (t.top_field->order() - 1) / (t.q() - 1);
        CHECK(t.embedded_generator == t.top_field->exp(Q));
        CHECK(t.embed(t.base_field->generator()) == t.embedded_generator);
        CHECK(t.restrict_to(t.embedded_generator, Subfield::base) == t.base_field->generator());
        CHECK_THROWS_AS(t.restrict_to(t.top_field->generator(), Subfield::base), DomainError);
    }
}

TEST_CASE("field properties on random elements") {
    std::mt19937_64 rng(5);
    const std::vector<std::tuple<std::uint64_t, int, int>> shapes = {
        {2, 1, 4}, {2, 2, 3}, {3, 1, 3}, {3, 2, 2}, {5, 1, 2}, {5, 2, 2}, {7, 1, 3}, {2, 3, 2}};
    for (const auto& [p, f, l] : shapes) {
        const auto t = build_tower(p, f, l);
        const auto& F = t.top_field;
        const std::uint64_t Q = (F->order() - 1) / (t.q() - 1);
        auto random = [&] { return F->decode(rng() % F->order()); };
        auto random_unit = [&] { return F->exp(rng() % (F->order() - 1)); };
        for (int it = 0; it < 125; ++it) {
            const auto x = random(), y = random();
            const auto c = t.base_field->decode(rng() % t.q());
            // trace is F_q-linear
            CHECK(trace_to_base(t, x + t.embed(c) * y, Subfield::base) ==
                  trace_to_base(t, x, Subfield::base) + c * trace_to_base(t, y, Subfield::base));
            // norm is multiplicative and equals x^Q
            CHECK(norm_to_base(t, x * y, Subfield::base) ==
                  norm_to_base(t, x, Subfield::base) * norm_to_base(t, y, Subfield::base));
            CHECK(t.embed(norm_to_base(t, x, Subfield::base)) == x.pow(Q));
            // transitivity down to F_p
            CHECK(trace_to_base(t, x, Subfield::prime) ==
                  trace_to_base(t, trace_to_base(t, x, Subfield::base), Subfield::prime));
            CHECK(norm_to_base(t, x, Subfield::prime) ==
                  norm_to_base(t, norm_to_base(t, x, Subfield::base), Subfield::prime));
            // dlog and exp are inverse
            const std::uint64_t k = rng() % (F->order() - 1);
            CHECK(dlog(F->exp(k)) == k);
            const auto u = random_unit();
            CHECK(F->exp(dlog(u)) == u);
            CHECK(u * u.inverse() == F->one());
            // encode / decode
            CHECK(F->decode(x.code()) == x);
            // trace functional agrees with the orbit sum
            std::uint64_t dot = 0;
            const auto& tf = F->trace_functional();
            for (std::size_t i = 0; i < tf.size(); ++i) dot = (dot + tf[i] * x.coords()[i]) % p;
            CHECK(trace_to_base(t, x, Subfield::prime).coords()[0] == dot);
        }
    }
}
