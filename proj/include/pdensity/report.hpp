#pragma once

// Problem files and JSON serialization of every report. Rationals are
// "num/den" strings; integers that fit in 64 bits are JSON numbers and
// larger ones decimal strings; tower elements are nested coordinate arrays
// (strings, they live modulo p^K) with their pi-adic precision.

#include "pdensity/charsum.hpp"
#include "pdensity/density.hpp"
#include "pdensity/exponent_system.hpp"
#include "pdensity/lfunction.hpp"
#include "pdensity/solvability.hpp"

#include <json.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace pdensity {

using Json = nlohmann::ordered_json;

struct Budgets {
    std::uint64_t points = 10'000'000;
    std::uint64_t brute = 100'000'000;
    std::uint64_t states = 10'000;
    std::uint64_t tuples = 10'000;
};

struct ProblemFile {
    ProblemSpec spec;
    /// Raw coefficient encodings, resolved against F_q by coefficients().
    std::optional<std::vector<std::vector<std::int64_t>>> coefficients;
    std::optional<int> ell;
    std::optional<int> L;
    std::optional<int> precision;
    Budgets budgets;

    std::optional<LaurentPolynomial> polynomial() const;
};

/// Throws InputError naming the offending key, e.g. "exponents[1][0]".
ProblemFile parse_problem(const Json& j);
ProblemFile load_problem(std::istream& in);
Json to_json(const ProblemFile& file);

/// An F_q element given as an integer (< p, or its base-p code) or as a
/// coordinate list, low degree first, written either as a JSON array or as a
/// string such as "[1, 2]" or "1,2".
std::vector<std::int64_t> parse_coordinates(const Json& j, std::uint64_t p, const std::string& where);

Json big_to_json(const BigInt& x);
Json to_json(const IntVector& v);
Json to_json(const Valuation& v);
Json to_json(const TowerElement& x);
Json to_json(const FieldElement& x);
Json to_json(const SolutionVector& u);
Json to_json(const SolvabilityReport& r);
Json to_json(const DensityCertificate& c, const std::optional<LowerBound>& lower);
Json to_json(const LevelMinimum& m, int level);
Json to_json(const CharSumResult& s);
Json to_json(const BoundReport& b);
Json to_json(const CongruenceReport& c);
Json to_json(const NewtonPolygon& poly);
Json to_json(const LFunctionResult& r);
Json to_json(const MuReport& r);

/// Indented "key: value" rendering for terminals.
std::string render_text(const Json& j);

}  // namespace pdensity
