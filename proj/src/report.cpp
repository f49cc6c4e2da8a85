#include "pdensity/report.hpp"

#include <set>
#include <sstream>

namespace pdensity {

namespace {

const std::set<std::string> kKeys = {"p",  "f",         "m",       "exponents",        "twist", "coefficients",
                                     "ell", "L",        "precision", "budgets", "allow_zero_columns"};
const std::set<std::string> kBudgetKeys = {"points", "brute", "states", "tuples"};

std::int64_t get_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
    return j.get<std::int64_t>();
}

std::uint64_t get_positive(const Json& j, const std::string& where) {
    const std::int64_t v = get_int(j, where);
    if (v <= 0) throw InputError(where + ": expected a positive integer");
    return static_cast<std::uint64_t>(v);
}

std::optional<int> get_level(const Json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const std::uint64_t v = get_positive(j.at(key), key);
    if (v > 1'000'000) throw InputError(std::string(key) + ": value out of range");
    return static_cast<int>(v);
}

Json fraction(const Rational& r) { return to_fraction_string(r); }

}  // namespace

std::vector<std::int64_t> parse_coordinates(const Json& j, std::uint64_t p, const std::string& where) {
    std::vector<std::int64_t> coords;
    if (j.is_number_integer()) {
        std::int64_t code = j.get<std::int64_t>();
        if (code < 0) throw InputError(where + ": negative element code");
        do {
            coords.push_back(code % static_cast<std::int64_t>(p));
            code /= static_cast<std::int64_t>(p);
        } while (code > 0);
        return coords;
    }
    Json list = j;
    if (j.is_string()) {
        std::string text = j.get<std::string>();
        if (text.find('[') == std::string::npos) text = "[" + text + "]";
        try {
            list = Json::parse(text);
        } catch (const Json::parse_error&) {
            throw InputError(where + ": cannot parse coordinate list \"" + j.get<std::string>() + "\"");
        }
    }
    if (!list.is_array() || list.empty()) throw InputError(where + ": expected a non-empty coordinate list");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::int64_t c = get_int(list[i], where + "[" + std::to_string(i) + "]");
        if (c < 0 || static_cast<std::uint64_t>(c) >= p)
            throw InputError(where + "[" + std::to_string(i) + "]: coordinate outside [0, p)");
        coords.push_back(c);
    }
    return coords;
}

std::optional<LaurentPolynomial> ProblemFile::polynomial() const {
    if (!coefficients) return std::nullopt;
    const FieldPtr field = base_field_of(spec);
    std::vector<FieldElement> a;
    for (std::size_t i = 0; i < coefficients->size(); ++i) {
        const auto& c = (*coefficients)[i];
        if (c.size() > field->degree())
            throw InputError("coefficients[" + std::to_string(i) + "]: more than f coordinates");
        std::vector<std::uint64_t> coords(field->degree(), 0);
        for (std::size_t k = 0; k < c.size(); ++k) coords[k] = static_cast<std::uint64_t>(c[k]);
        a.push_back(field->from_coords(coords));
    }
    return LaurentPolynomial::make(spec, std::move(a));
}

ProblemFile parse_problem(const Json& j) {
    if (!j.is_object()) throw InputError("problem file: expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kKeys.count(key)) throw InputError("unknown key \"" + key + "\"");
    for (const char* key : {"p", "f", "exponents", "twist"})
        if (!j.contains(key)) throw InputError(std::string("missing key \"") + key + "\"");

    const std::int64_t p = get_int(j.at("p"), "p");
    const std::int64_t f = get_int(j.at("f"), "f");
    if (f < 1 || f > 64) throw InputError("f: expected 1 <= f <= 64");

    const Json& tw = j.at("twist");
    if (!tw.is_array()) throw InputError("twist: expected an array");
    std::vector<std::int64_t> twist;
    for (std::size_t k = 0; k < tw.size(); ++k) twist.push_back(get_int(tw[k], "twist[" + std::to_string(k) + "]"));

    const Json& ex = j.at("exponents");
    if (!ex.is_array()) throw InputError("exponents: expected an array of rows");
    ExponentMatrix exponents;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const std::string where = "exponents[" + std::to_string(i) + "]";
        if (!ex[i].is_array()) throw InputError(where + ": expected an array");
        std::vector<std::int64_t> row;
        for (std::size_t k = 0; k < ex[i].size(); ++k) row.push_back(get_int(ex[i][k], where + "[" + std::to_string(k) + "]"));
        if (row.size() != twist.size())
            throw InputError(where + ": row has " + std::to_string(row.size()) + " entries but twist has " +
                             std::to_string(twist.size()));
        exponents.push_back(std::move(row));
    }
    if (j.contains("m") && get_int(j.at("m"), "m") != static_cast<std::int64_t>(twist.size()))
        throw InputError("m: does not match the twist length " + std::to_string(twist.size()));

    SpecOptions options;
    if (j.contains("allow_zero_columns")) {
        if (!j.at("allow_zero_columns").is_boolean()) throw InputError("allow_zero_columns: expected a boolean");
        options.require_all_variables = !j.at("allow_zero_columns").get<bool>();
    }
    ProblemFile out{ProblemSpec::make(p, static_cast<int>(f), std::move(exponents), std::move(twist), options), {}, {}, {}, {}, {}};

    if (j.contains("coefficients")) {
        const Json& co = j.at("coefficients");
        if (!co.is_array()) throw InputError("coefficients: expected an array");
        if (co.size() != out.spec.n())
            throw InputError("coefficients: expected " + std::to_string(out.spec.n()) + " entries, got " +
                             std::to_string(co.size()));
        std::vector<std::vector<std::int64_t>> list;
        for (std::size_t i = 0; i < co.size(); ++i)
            list.push_back(parse_coordinates(co[i], static_cast<std::uint64_t>(p), "coefficients[" + std::to_string(i) + "]"));
        out.coefficients = std::move(list);
        out.polynomial();
    }
    out.ell = get_level(j, "ell");
    out.L = get_level(j, "L");
    out.precision = get_level(j, "precision");
    if (j.contains("budgets")) {
        const Json& b = j.at("budgets");
        if (!b.is_object()) throw InputError("budgets: expected an object");
        for (const auto& [key, value] : b.items()) {
            if (!kBudgetKeys.count(key)) throw InputError("budgets: unknown key \"" + key + "\"");
            const std::uint64_t v = get_positive(value, "budgets." + key);
            if (key == "points") out.budgets.points = v;
            if (key == "brute") out.budgets.brute = v;
            if (key == "states") out.budgets.states = v;
            if (key == "tuples") out.budgets.tuples = v;
        }
    }
    return out;
}

ProblemFile load_problem(std::istream& in) {
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return parse_problem(j);
}

Json to_json(const ProblemFile& file) {
    Json j;
    j["p"] = file.spec.p();
    j["f"] = file.spec.f();
    j["m"] = file.spec.m();
    j["exponents"] = file.spec.exponents();
    j["twist"] = file.spec.twist();
    if (!file.spec.options().require_all_variables) j["allow_zero_columns"] = true;
    if (file.coefficients) j["coefficients"] = *file.coefficients;
    if (file.ell) j["ell"] = *file.ell;
    if (file.L) j["L"] = *file.L;
    if (file.precision) j["precision"] = *file.precision;
    j["budgets"] = {{"points", file.budgets.points},
                    {"brute", file.budgets.brute},
                    {"states", file.budgets.states},
                    {"tuples", file.budgets.tuples}};
    return j;
}

Json big_to_json(const BigInt& x) {
    if (x.fits_slong_p()) return static_cast<std::int64_t>(x.get_si());
    return x.get_str();
}

Json to_json(const IntVector& v) {
    Json j = Json::array();
    for (const auto& x : v) j.push_back(big_to_json(x));
    return j;
}

Json to_json(const Valuation& v) { return {{"value", v.value}, {"exact", v.exact}}; }

Json to_json(const TowerElement& x) {
    Json coeffs = Json::array();
    for (const auto& w : x.coeffs()) {
        Json row = Json::array();
        for (const auto& c : w) row.push_back(c.get_str());
        coeffs.push_back(std::move(row));
    }
    return {{"precision", x.precision()}, {"coefficients", std::move(coeffs)}};
}

Json to_json(const FieldElement& x) { return x.coords(); }

Json to_json(const SolutionVector& u) {
    return {{"level", u.level}, {"u", to_json(u.entries)}, {"p_weight", u.p_weight}, {"digits", u.digit_matrix}};
}

Json to_json(const SolvabilityReport& r) {
    Json primes = Json::array();
    for (const auto& c : r.per_prime) primes.push_back({{"prime", big_to_json(c.prime)}, {"e", c.e}, {"f_min", c.f_min}});
    Json j;
    j["solvable"] = r.solvable;
    j["residuals"] = to_json(r.residuals);
    j["generator"] = r.generator ? big_to_json(*r.generator) : Json(nullptr);
    j["primes"] = std::move(primes);
    return j;
}

Json to_json(const DensityCertificate& c, const std::optional<LowerBound>& lower) {
    Json j;
    j["density"] = fraction(c.density);
    j["level"] = c.level;
    j["witness"] = to_json(c.witness.entries);
    j["p_weight"] = c.witness.p_weight;
    j["cycle"] = c.cycle;
    j["box_cardinality"] = big_to_json(c.bound_used);
    j["cyclic_states"] = c.cyclic_states;
    if (lower) j["lower_bound"] = {{"value", fraction(lower->bound)}, {"heuristic", lower->heuristic}};
    return j;
}

Json to_json(const LevelMinimum& m, int level) {
    Json j;
    j["level"] = level;
    j["member"] = m.sigma.has_value();
    j["sigma"] = m.sigma ? Json(*m.sigma) : Json(nullptr);
    j["witness"] = m.witness ? to_json(m.witness->entries) : Json(nullptr);
    return j;
}

Json to_json(const CharSumResult& s) {
    Json j;
    j["level"] = s.level;
    j["points"] = s.points;
    j["precision_k"] = s.precision_k;
    j["exact_zero"] = s.exact_zero;
    j["v_pi"] = to_json(s.v_pi);
    j["v_q"] = fraction(s.v_q);
    j["value"] = to_json(s.value);
    return j;
}

Json to_json(const BoundReport& b) {
    Json j;
    j["level"] = b.level;
    j["bound"] = fraction(b.bound);
    j["v_pi"] = to_json(b.v_pi);
    j["v_q"] = fraction(b.v_q);
    j["holds"] = b.holds;
    j["equality"] = b.equality;
    j["marker_dominated"] = b.marker_dominated;
    j["precision_k"] = b.precision_k;
    return j;
}

Json to_json(const CongruenceReport& c) {
    Json j;
    j["level"] = c.level;
    j["sigma"] = c.sigma ? Json(*c.sigma) : Json(nullptr);
    j["minimizers"] = c.minimizers;
    j["v_pi"] = to_json(c.v_pi);
    j["sign"] = c.sign;
    j["unit_nonzero"] = c.unit_nonzero;
    j["holds"] = c.congruence_holds;
    j["unsigned_holds"] = c.unsigned_congruence_holds;
    j["exact_valuation"] = c.exact_valuation ? Json(*c.exact_valuation) : Json(nullptr);
    j["precision_k"] = c.precision_k;
    return j;
}

Json to_json(const NewtonPolygon& poly) {
    Json vertices = Json::array();
    for (const auto& [x, y] : poly.vertices) vertices.push_back({x, y});
    Json slopes = Json::array();
    for (const auto& s : poly.slopes) slopes.push_back(fraction(s));
    return {{"vertices", std::move(vertices)}, {"slopes", std::move(slopes)}};
}

Json to_json(const LFunctionResult& r) {
    auto poly = [](const std::vector<TowerElement>& v) {
        Json a = Json::array();
        for (const auto& x : v) a.push_back(to_json(x));
        return a;
    };
    Json j;
    j["num_degree"] = r.num_degree;
    j["den_degree"] = r.den_degree;
    j["mu"] = r.mu ? fraction(*r.mu) : Json("inf");
    j["numerator_polygon"] = to_json(r.numerator_polygon);
    j["denominator_polygon"] = to_json(r.denominator_polygon);
    j["residual_checks"] = r.residual_checks;
    j["residual_precision"] = r.residual_precision;
    j["experimental"] = r.experimental;
    j["numerator"] = poly(r.numerator);
    j["denominator"] = poly(r.denominator);
    return j;
}

Json to_json(const MuReport& r) {
    Json j;
    j["mu"] = r.mu ? fraction(*r.mu) : Json("inf");
    j["density"] = fraction(r.density);
    j["gap"] = r.gap ? fraction(*r.gap) : Json("inf");
    j["holds"] = r.holds;
    j["vacuous"] = r.vacuous;
    j["equality"] = r.equality;
    return j;
}

namespace {

bool is_scalar_array(const Json& j) {
    if (!j.is_array()) return false;
    for (const auto& x : j)
        if (x.is_structured() && !is_scalar_array(x)) return false;
    return true;
}

void render(const Json& j, int indent, std::ostringstream& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_structured() && !is_scalar_array(value) && !value.empty()) {
                out << pad << key << ":\n";
                render(value, indent + 2, out);
            } else {
                out << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& item : j) {
            out << pad << "-\n";
            render(item, indent + 2, out);
        }
    } else {
        out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

std::string render_text(const Json& j) {
    std::ostringstream out;
    render(j, 0, out);
    return out.str();
}

}  // namespace pdensity
