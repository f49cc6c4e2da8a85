#include "pdensity/charsum.hpp"
#include "pdensity/density.hpp"
#include "pdensity/lfunction.hpp"
#include "pdensity/report.hpp"
#include "pdensity/solvability.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

using namespace pdensity;

namespace {

enum Exit { kPass = 0, kInput = 1, kNegative = 2, kResource = 3 };

struct Options {
    std::string file = "-";
    std::optional<int> precision;
    std::optional<std::uint64_t> budget;
    std::optional<std::uint64_t> seed;
    bool json = false;
    std::optional<int> ell;
    std::optional<int> L;
    std::optional<int> num_deg;
    std::optional<int> den_deg;
    bool attain = false;
};

// A failing stage of `verify`, carrying the exit code of its cause.
struct StageError {
    std::string stage;
    std::string message;
    int code;
};

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const PrecisionError*>(&e)) return kResource;
    if (dynamic_cast<const FalsificationError*>(&e)) return kNegative;
    return kInput;
}

template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const std::exception& e) {
        throw StageError{name, e.what(), exit_code(e)};
    }
}

ProblemFile load(const Options& o) {
    if (o.file == "-") return load_problem(std::cin);
    std::ifstream in(o.file);
    if (!in) throw InputError("cannot open " + o.file);
    return load_problem(in);
}

EvalOptions eval_options(const ProblemFile& file, const Options& o) {
    EvalOptions e;
    e.point_budget = o.budget.value_or(file.budgets.points);
    return e;
}

void emit(const Json& j, const Options& o) {
    if (o.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << render_text(j);
}

// Coefficients from the file, the attainment search, or a seeded draw;
// `fallback_unit` allows all-ones when none is given.
LaurentPolynomial resolve_polynomial(const ProblemFile& file, const Options& o, bool fallback_unit) {
    if (auto F = file.polynomial()) return *F;
    if (o.attain) return attainment_search(file.spec, file.budgets.tuples).polynomial;
    if (o.seed) {
        std::mt19937_64 rng(*o.seed);
        const FieldPtr field = base_field_of(file.spec);
        std::uniform_int_distribution<std::uint64_t> dist(0, field->order() - 2);
        std::vector<FieldElement> a;
        for (std::size_t i = 0; i < file.spec.n(); ++i) a.push_back(field->exp(dist(rng)));
        return LaurentPolynomial::make(file.spec, std::move(a));
    }
    if (fallback_unit) return LaurentPolynomial::unit(file.spec);
    throw InputError("no coefficients: add \"coefficients\" to the file, or pass --attain or --seed");
}

Json polynomial_json(const LaurentPolynomial& F) {
    Json a = Json::array();
    for (const auto& c : F.coefficients) a.push_back(to_json(c));
    return a;
}

int precision_for(const ProblemFile& file, const Options& o, const ProblemSpec& spec, int level) {
    if (o.precision) return *o.precision;
    if (file.precision) return *file.precision;
    const auto cert = density(spec, file.budgets.states);
    std::int64_t target = 0;
    if (cert) {
        Rational t = cert->density * level * spec.f() * (spec.p() - 1);
        BigInt c;
        mpz_cdiv_q(c.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
        target = to_i64(c);
    }
    return choose_precision(target, static_cast<std::uint64_t>(spec.p()));
}

int cmd_solvable(const Options& o) {
    const ProblemFile file = load(o);
    const auto rep = analyze(file.spec);
    emit(to_json(rep), o);
    return rep.solvable ? kPass : kNegative;
}

int cmd_density(const Options& o) {
    const ProblemFile file = load(o);
    const auto rep = analyze(file.spec);
    if (!rep.solvable) {
        emit(to_json(rep), o);
        return kNegative;
    }
    const auto cert = density(file.spec, file.budgets.states);
    std::optional<LowerBound> lower;
    try {
        lower = practical_lower_bound(file.spec);
    } catch (const DomainError&) {
    }
    emit(to_json(*cert, lower), o);
    return kPass;
}

int cmd_sigma(const Options& o) {
    const ProblemFile file = load(o);
    const int level = o.ell.value_or(file.ell.value_or(1));
    const LevelMinimum m = sigma_min_graph(file.spec, level, file.budgets.states);
    emit(to_json(m, level), o);
    return m.sigma ? kPass : kNegative;
}

int cmd_sum(const Options& o) {
    const ProblemFile file = load(o);
    const int level = o.ell.value_or(file.ell.value_or(1));
    const LaurentPolynomial F = resolve_polynomial(file, o, true);
    const int K = precision_for(file, o, file.spec, level);
    const CharSumResult s = evaluate_sum(F, level, K, eval_options(file, o));
    Json j;
    j["coefficients"] = polynomial_json(F);
    j["sum"] = to_json(s);
    emit(j, o);
    return kPass;
}

LSeries series_for(const ProblemFile& file, const Options& o, const LaurentPolynomial& F, int& L) {
    const ProblemSpec& spec = file.spec;
    if (o.L) L = *o.L;
    else if (file.L) L = *file.L;
    else if (o.num_deg && o.den_deg) L = *o.num_deg + 2 * *o.den_deg + 1;
    else L = 6;
    int K;
    if (o.precision) K = *o.precision;
    else if (file.precision) K = *file.precision;
    else {
        // Slopes are at most m in q-units; leave room for the divisions by k <= L.
        std::int64_t loss = 0;
        for (std::int64_t k = 1; k <= L; ++k) loss += valuation(BigInt(k), BigInt(spec.p()));
        const std::int64_t fp = spec.f() * (spec.p() - 1);
        K = choose_precision(static_cast<std::int64_t>(L) * static_cast<std::int64_t>(spec.m()) * fp + (spec.p() - 1) * loss,
                             static_cast<std::uint64_t>(spec.p()));
    }
    return build_series(F, L, K, eval_options(file, o));
}

LFunctionResult reconstruct(const LSeries& series, const Options& o) {
    if (o.num_deg || o.den_deg) return reconstruct_rational(series, o.num_deg.value_or(0), o.den_deg.value_or(0));
    return detect_and_reconstruct(series);
}

int cmd_lfunction(const Options& o) {
    const ProblemFile file = load(o);
    const LaurentPolynomial F = resolve_polynomial(file, o, true);
    int L = 0;
    const LSeries series = series_for(file, o, F, L);
    const LFunctionResult r = reconstruct(series, o);
    Json j;
    j["coefficients"] = polynomial_json(F);
    j["series_length"] = L;
    j["lfunction"] = to_json(r);
    bool pass = true;
    if (const auto cert = density(file.spec, file.budgets.states)) {
        const MuReport mu = verify_mu(r, *cert);
        j["mu_check"] = to_json(mu);
        pass = mu.holds;
    }
    emit(j, o);
    return pass ? kPass : kNegative;
}

int cmd_verify(const Options& o) {
    const ProblemFile file = load(o);
    const ProblemSpec& spec = file.spec;
    Json j;
    bool pass = true;
    try {
        const auto solv = stage("solvability", [&] { return analyze(spec); });
        j["solvability"] = to_json(solv);
        if (!solv.solvable) {
            j["passed"] = false;
            emit(j, o);
            return kNegative;
        }
        const auto cert = *stage("density", [&] { return density(spec, file.budgets.states); });
        j["density"] = to_json(cert, std::nullopt);
        const LaurentPolynomial F = stage("coefficients", [&] { return resolve_polynomial(file, o, false); });
        j["coefficients"] = polynomial_json(F);

        const int top = o.ell.value_or(file.ell.value_or(static_cast<int>(to_i64(*solv.generator))));
        const EvalOptions eo = eval_options(file, o);
        std::optional<int> forced = o.precision ? o.precision : file.precision;
        Json levels = Json::array();
        for (int level = 1; level <= top; ++level) {
            Json entry;
            entry["level"] = level;
            const BoundReport b = stage("bound", [&] { return verify_bound(F, level, cert, forced, 64, eo); });
            entry["bound"] = to_json(b);
            pass = pass && b.holds;
            try {
                const CongruenceReport c = stage("congruence", [&] { return verify_congruence_S(F, level, file.budgets.brute, eo); });
                entry["congruence"] = to_json(c);
                pass = pass && c.congruence_holds && c.exact_valuation.value_or(true);
            } catch (const StageError& e) {
                if (e.code != kResource) throw;
                entry["congruence"] = {{"skipped", e.message}};
            }
            levels.push_back(std::move(entry));
        }
        j["levels"] = std::move(levels);

        if (o.num_deg || o.den_deg || o.L || file.L) {
            int L = 0;
            const LSeries series = stage("series", [&] { return series_for(file, o, F, L); });
            const LFunctionResult r = stage("lfunction", [&] { return reconstruct(series, o); });
            const MuReport mu = verify_mu(r, cert);
            j["lfunction"] = to_json(r);
            j["mu_check"] = to_json(mu);
            pass = pass && mu.holds;
        }
    } catch (const StageError& e) {
        j["passed"] = false;
        j["failed_stage"] = e.stage;
        j["error"] = e.message;
        emit(j, o);
        std::cerr << "pdensity verify: stage " << e.stage << ": " << e.message << "\n";
        return e.code;
    }
    j["passed"] = pass;
    emit(j, o);
    return pass ? kPass : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-density, character-sum valuations and L-function slopes for twisted toric sums"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--precision", o.precision, "p-adic precision K (coordinates mod p^K)")->check(CLI::PositiveNumber);
    app.add_option("--budget", o.budget, "point budget for character-sum enumeration")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "draw random coefficients when the file has none");
    app.add_flag("--json", o.json, "machine-readable output");

    auto* solvable = app.add_subcommand("solvable", "solvability, residuals and the level generator");
    auto* dens = app.add_subcommand("density", "p-density certificate");
    auto* sigma = app.add_subcommand("sigma", "minimal p-weight at one level");
    auto* sum = app.add_subcommand("sum", "evaluate S_l and its valuation");
    auto* verify = app.add_subcommand("verify", "bound, congruence and optional L-function checks");
    auto* lfun = app.add_subcommand("lfunction", "L-series reconstruction and Newton polygons");
    for (auto* sub : {solvable, dens, sigma, sum, verify, lfun})
        sub->add_option("file", o.file, "problem file ('-' for stdin)");
    for (auto* sub : {sigma, sum, verify}) sub->add_option("--ell", o.ell, "level")->check(CLI::PositiveNumber);
    for (auto* sub : {verify, lfun}) {
        sub->add_option("--num-deg", o.num_deg, "numerator degree s")->check(CLI::NonNegativeNumber);
        sub->add_option("--den-deg", o.den_deg, "denominator degree t")->check(CLI::NonNegativeNumber);
        sub->add_option("--L", o.L, "series length")->check(CLI::PositiveNumber);
    }
    for (auto* sub : {sum, verify, lfun}) sub->add_flag("--attain", o.attain, "search coefficients attaining v = sigma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInput;
    }

    try {
        if (*solvable) return cmd_solvable(o);
        if (*dens) return cmd_density(o);
        if (*sigma) return cmd_sigma(o);
        if (*sum) return cmd_sum(o);
        if (*verify) return cmd_verify(o);
        return cmd_lfunction(o);
    } catch (const std::exception& e) {
        std::cerr << "pdensity: " << e.what() << "\n";
        if (dynamic_cast<const PrecisionError*>(&e) && std::string(e.what()).find("raise precision") == std::string::npos)
            std::cerr << "hint: raise precision with --precision\n";
        return exit_code(e);
    }
}
