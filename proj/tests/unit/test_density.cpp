#include "pdensity/density.hpp"
#include "pdensity/solvability.hpp"

#include "oracle.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace pdensity;
using testutil::frac;
using testutil::iv;

namespace {

struct SigmaRow {
    ProblemSpec spec;
    int level;
    std::optional<std::uint64_t> sigma;
    std::vector<IntVector> minimizers;
};

// Frozen from tests/support/oracle.py ("sigma tables").
std::vector<SigmaRow> sigma_table() {
    return {
        {ProblemSpec::make(7, 1, {{1}, {2}}, {2}), 1, 2, {iv({0, 2})}},
        {ProblemSpec::make(7, 1, {{1}, {2}}, {2}), 2, 4, {iv({0, 16})}},
        {ProblemSpec::make(7, 1, {{1}}, {2}), 1, 4, {iv({4})}},
        {ProblemSpec::make(7, 1, {{1}}, {2}), 2, 8, {iv({32})}},
        {ProblemSpec::make(3, 1, {{2}}, {1}), 1, std::nullopt, {}},
        {ProblemSpec::make(3, 1, {{2}}, {1}), 2, 2, {iv({2}), iv({6})}},
        {ProblemSpec::make(3, 1, {{2}}, {1}), 3, std::nullopt, {}},
        {ProblemSpec::make(3, 1, {{2}}, {1}), 4, 4, {iv({20}), iv({60})}},
        {ProblemSpec::make(2, 3, {{1}, {2}, {3}}, {1}), 1, 1, {iv({0, 0, 2})}},
        {ProblemSpec::make(5, 1, {{1, 1}, {1, 2}}, {1, 1}), 1, 3, {iv({3, 0})}},
        {ProblemSpec::make(5, 1, {{1, 1}, {1, 2}}, {1, 1}), 2, 6, {iv({18, 0})}},
        {ProblemSpec::make(3, 1, {{1, 1}, {1, -1}}, {1, 0}), 1, std::nullopt, {}},
        {ProblemSpec::make(3, 1, {{1, 1}, {1, -1}}, {1, 0}), 2, 4, {iv({2, 2}), iv({6, 6})}},
        {ProblemSpec::make(5, 1, {{1}, {-1}}, {2}), 1, 2, {iv({2, 0}), iv({0, 2})}},
        {ProblemSpec::make(5, 1, {{1}, {-1}}, {2}), 2, 4, {iv({12, 0}), iv({0, 12})}},
    };
}

bool same_set(std::vector<IntVector> a, std::vector<IntVector> b) {
    auto key = [](const IntVector& x, const IntVector& y) { return x < y; };
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    return a == b;
}

}  // namespace

TEST_CASE("sigma_min_bruteforce matches the frozen oracle table") {
    for (const auto& row : sigma_table()) {
        const auto bf = sigma_min_bruteforce(row.spec, row.level);
        CHECK(bf.sigma == row.sigma);
        CHECK(same_set(bf.minimizers, row.minimizers));
        const auto g = sigma_min_graph(row.spec, row.level);
        CHECK(g.sigma == row.sigma);
        if (g.witness) {
            CHECK(is_member(row.spec, g.witness->entries, row.level));
            CHECK(g.witness->p_weight == *row.sigma);
        }
    }
    CHECK_THROWS_AS(sigma_min_bruteforce(ProblemSpec::make(7, 1, {{1}, {2}}, {2}), 3, 1000), ResourceError);
}

TEST_CASE("phi graph edges") {
    const auto g = build_phi_graph(ProblemSpec::make(3, 1, {{2}}, {1}));
    CHECK(g.state_count == 3);
    auto edge = [&](std::int64_t a, std::int64_t b) -> std::optional<PhiEdge> {
        const auto e = g.edge(*g.index_of({a}), *g.index_of({b}));
        if (!e) return std::nullopt;
        return g.edges[*e];
    };
    REQUIRE(edge(0, 1));
    CHECK(edge(0, 1)->weight == 1);
    CHECK(edge(0, 1)->digits == std::vector<std::uint64_t>{1});
    REQUIRE(edge(1, 2));
    CHECK(edge(1, 2)->weight == 2);
    REQUIRE(edge(2, 1));
    CHECK(edge(2, 1)->weight == 0);
    CHECK(g.edges.size() == 3);

    const auto h = build_phi_graph(ProblemSpec::make(7, 1, {{1}}, {2}));
    CHECK(h.state_count == 2);
    const auto e01 = h.edge(*h.index_of({0}), *h.index_of({1}));
    const auto e11 = h.edge(*h.index_of({1}), *h.index_of({1}));
    REQUIRE(e01);
    REQUIRE(e11);
    CHECK(h.edges[*e01].weight == 5);
    CHECK(h.edges[*e11].weight == 4);
    CHECK_THROWS_AS(build_phi_graph(ProblemSpec::make(7, 1, {{1}}, {0})), PreconditionError);
    CHECK_THROWS_AS(build_phi_graph(ProblemSpec::make(7, 1, {{50}, {-50}}, {2}), 10), ResourceError);
}

TEST_CASE("min_mean_cycle") {
    const auto g = build_phi_graph(ProblemSpec::make(3, 1, {{2}}, {1}));
    const auto c = min_mean_cycle(g);
    REQUIRE(c);
    CHECK(c->mean == 1);
    REQUIRE(c->states.size() == 2);
    CHECK(g.state(c->states[0]) == std::vector<std::int64_t>{1});
    CHECK(g.state(c->states[1]) == std::vector<std::int64_t>{2});

    const auto h = build_phi_graph(ProblemSpec::make(7, 1, {{1}}, {2}));
    const auto d = min_mean_cycle(h);
    REQUIRE(d);
    CHECK(d->mean == 4);
    CHECK(d->states.size() == 1);

    CHECK_FALSE(min_mean_cycle(build_phi_graph(ProblemSpec::make(7, 1, {{1, 1}}, {1, 2}))));
}

TEST_CASE("density certificates") {
    auto c = density(ProblemSpec::make(3, 1, {{2}}, {1}));
    REQUIRE(c);
    CHECK(c->density == frac(1, 2));
    CHECK(c->level == 2);
    CHECK(c->witness.entries == iv({2}));

    c = density(ProblemSpec::make(7, 1, {{1}}, {2}));
    REQUIRE(c);
    CHECK(c->density == frac(2, 3));
    CHECK(c->level == 1);
    CHECK(c->witness.entries == iv({4}));

    c = density(ProblemSpec::make(7, 1, {{1}}, {0}));
    REQUIRE(c);
    CHECK(c->density == 0);
    CHECK(c->witness.entries == iv({0}));

    CHECK_FALSE(density(ProblemSpec::make(7, 1, {{1, 1}}, {1, 2})));

    // Frozen from tests/support/oracle.py ("densities").
    const std::vector<std::pair<ProblemSpec, Rational>> table = {
        {ProblemSpec::make(7, 1, {{1}, {2}}, {2}), frac(1, 3)},
        {ProblemSpec::make(7, 1, {{1, 1}}, {1, 1}), frac(5, 6)},
        {ProblemSpec::make(2, 3, {{1}, {2}, {3}}, {1}), frac(1, 3)},
        {ProblemSpec::make(5, 1, {{1}, {-1}}, {2}), frac(1, 2)},
        {ProblemSpec::make(3, 1, {{1}, {-2}}, {1}), frac(1, 2)},
    };
    for (const auto& [spec, expected] : table) {
        const auto cert = density(spec);
        REQUIRE(cert);
        CHECK(cert->density == expected);
        CHECK(is_member(spec, cert->witness.entries, cert->level));
        Rational r(BigInt(static_cast<unsigned long>(cert->witness.p_weight)), BigInt(spec.f() * cert->level * (spec.p() - 1)));
        r.canonicalize();
        CHECK(r == cert->density);
        CHECK(BigInt(cert->level) <= cert->bound_used);
    }
    // Scan horizons of 4 in the oracle only give upper bounds here.
    CHECK(density(ProblemSpec::make(3, 1, {{1, 1}, {1, -1}}, {1, 0}))->density <= 1);
    CHECK(density(ProblemSpec::make(5, 1, {{1}, {3}}, {2}))->density <= frac(1, 2));
}

TEST_CASE("practical_lower_bound") {
    auto lb = practical_lower_bound(ProblemSpec::make(7, 1, {{1}, {2}}, {2}));
    CHECK(lb.bound == frac(1, 3));
    CHECK_FALSE(lb.heuristic);
    lb = practical_lower_bound(ProblemSpec::make(2, 3, {{1}, {2}, {3}}, {1}));
    CHECK(lb.bound == frac(1, 3));
    lb = practical_lower_bound(ProblemSpec::make(5, 1, {{1, 1}, {1, 2}}, {1, 1}));
    CHECK(lb.heuristic);
}

TEST_CASE("walks, brute force and the oracle agree on random specs") {
    std::mt19937_64 rng(17);
    oracle::RandomSpecOptions opt;
    opt.primes = {2, 3, 5, 7};
    opt.max_f = 2;
    opt.max_m = 2;
    opt.max_n = 2;
    opt.max_abs_d = 2;
    int checked = 0;
    for (int iter = 0; iter < 150; ++iter) {
        const auto s = oracle::random_spec(rng, opt);
        if (box(s).cardinality > 9 || s.q() > 9) continue;
        const auto walks = oracle::sigma_walks(s, 4);
        for (int l = 1; l <= 4; ++l) {
            const auto scan = oracle::sigma_scan(s, l, 100'000);
            const auto g = sigma_min_graph(s, l);
            CHECK(g.sigma == walks[l]);
            if (scan) {
                CHECK(scan->sigma == walks[l]);
                const auto bf = sigma_min_bruteforce(s, l);
                CHECK(bf.sigma == scan->sigma);
                CHECK(same_set(bf.minimizers, scan->minimizers));
            }
        }
        const auto cert = density(s);
        const auto ref = oracle::density(s);
        CHECK(cert.has_value() == ref.has_value());
        if (cert && ref) {
            CHECK(cert->density == *ref);
            const auto lb = practical_lower_bound(s);
            if (!lb.heuristic) CHECK(cert->density >= lb.bound);
        }
        ++checked;
    }
    CHECK(checked > 50);
}
