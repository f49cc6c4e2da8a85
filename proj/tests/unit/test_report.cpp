#include "pdensity/report.hpp"

#include <doctest.h>

#include <sstream>

using namespace pdensity;

namespace {

std::string error_of(const std::string& text) {
    std::istringstream in(text);
    try {
        load_problem(in);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

bool mentions(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("problem file errors name the location") {
    CHECK(mentions(error_of("{\"p\": 7"), "malformed JSON"));
    CHECK(mentions(error_of("[1,2]"), "expected a JSON object"));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1]]})"), "missing key \"twist\""));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1]],"twist":[2],"colour":1})"), "unknown key \"colour\""));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1],[2,3]],"twist":[2]})"), "exponents[1]"));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1],["x"]],"twist":[2]})"), "exponents[1][0]"));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":2,"exponents":[[1]],"twist":[2]})"), "m:"));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1]],"twist":[2],"coefficients":[1,2]})"),
                   "coefficients: expected 1 entries"));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1]],"twist":[2],"budgets":{"time":3}})"),
                   "budgets: unknown key"));
    CHECK(mentions(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1]],"twist":[2],"L":0})"), "L"));
    // b_j must lie in [0, q-2]
    CHECK_THROWS_AS(parse_problem(Json::parse(R"({"p":7,"f":1,"m":1,"exponents":[[1]],"twist":[6]})")), InputError);
    CHECK(error_of(R"({"p":7,"f":1,"m":1,"exponents":[[1]],"twist":[2]})").empty());
}

TEST_CASE("coordinate formats") {
    CHECK(parse_coordinates(Json(5), 3, "a") == std::vector<std::int64_t>{2, 1});
    CHECK(parse_coordinates(Json(0), 3, "a") == std::vector<std::int64_t>{0});
    CHECK(parse_coordinates(Json::parse("[1, 2]"), 3, "a") == std::vector<std::int64_t>{1, 2});
    CHECK(parse_coordinates(Json("[1, 2]"), 3, "a") == std::vector<std::int64_t>{1, 2});
    CHECK(parse_coordinates(Json("1,2"), 3, "a") == std::vector<std::int64_t>{1, 2});
    CHECK(parse_coordinates(Json("2"), 3, "a") == std::vector<std::int64_t>{2});
    CHECK_THROWS_AS(parse_coordinates(Json("[3]"), 3, "a"), InputError);
    CHECK_THROWS_AS(parse_coordinates(Json("x"), 3, "a"), InputError);
    CHECK_THROWS_AS(parse_coordinates(Json(-1), 3, "a"), InputError);
    CHECK_THROWS_AS(parse_coordinates(Json::array(), 3, "a"), InputError);

    const auto file = parse_problem(
        Json::parse(R"({"p":3,"f":2,"m":1,"exponents":[[1],[2]],"twist":[3],"coefficients":[4,"[0,1]"]})"));
    const auto F = file.polynomial();
    REQUIRE(F);
    CHECK(F->coefficients[0].coords() == std::vector<std::uint64_t>{1, 1});
    CHECK(F->coefficients[1].coords() == std::vector<std::uint64_t>{0, 1});
    CHECK_THROWS_AS(parse_problem(Json::parse(R"({"p":3,"f":2,"m":1,"exponents":[[1]],"twist":[3],"coefficients":[0]})"))
                        .polynomial(),
                    InputError);
}

TEST_CASE("round trip and determinism") {
    const auto text = R"({"p":5,"f":1,"m":2,"exponents":[[1,0],[2,0]],"twist":[1,0],"allow_zero_columns":true,
                         "coefficients":[[1],[3]],"ell":2,"L":4,"precision":7,"budgets":{"points":1000}})";
    const auto a = parse_problem(Json::parse(text));
    CHECK_FALSE(a.spec.options().require_all_variables);
    CHECK(a.budgets.points == 1000);
    CHECK(a.budgets.states == Budgets{}.states);
    const auto j = to_json(a);
    const auto b = parse_problem(j);
    CHECK(b.spec == a.spec);
    CHECK(b.coefficients == a.coefficients);
    CHECK(b.ell == 2);
    CHECK(b.L == 4);
    CHECK(b.precision == 7);
    CHECK(to_json(b).dump() == j.dump());

    const auto spec = ProblemSpec::make(7, 1, {{1}}, {2});
    const auto cert = density(spec);
    REQUIRE(cert);
    const auto first = to_json(*cert, practical_lower_bound(spec)).dump();
    CHECK(first == to_json(*density(spec), practical_lower_bound(spec)).dump());
    const auto jc = Json::parse(first);
    CHECK(jc["density"] == "2/3");
    CHECK(jc["level"] == 1);
    CHECK(jc["witness"] == Json::parse("[4]"));
}

TEST_CASE("serializers") {
    CHECK(big_to_json(BigInt(12)) == Json(12));
    CHECK(big_to_json(BigInt("123456789012345678901234567890")) == Json("123456789012345678901234567890"));
    CHECK(to_json(Valuation{3, false}).dump() == R"({"value":3,"exact":false})");

    const auto spec = ProblemSpec::make(3, 1, {{2}}, {1});
    const auto lm = sigma_min_graph(spec, 1);
    CHECK(to_json(lm, 1)["member"] == false);
    CHECK(to_json(lm, 2).contains("sigma"));
    const auto ss = to_json(analyze(spec));
    CHECK(ss["solvable"] == true);

    const std::string text = render_text(Json::parse(R"({"a":1,"b":{"c":"x"},"d":[1,2]})"));
    CHECK(mentions(text, "a: 1"));
    CHECK(mentions(text, "  c: x"));
}
