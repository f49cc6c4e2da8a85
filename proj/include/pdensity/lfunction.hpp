#pragma once

// L(F, b, T) = exp(sum_l S_l T^l / l) as a truncated power series over the
// tower, rational reconstruction N(T)/D(T) and Newton polygons of both.

#include "pdensity/arith.hpp"
#include "pdensity/charsum.hpp"
#include "pdensity/density.hpp"
#include "pdensity/padic_tower.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace pdensity {

struct LSeries {
    ProblemSpec spec;
    /// c_0 = 1, c_1, ..., c_L; each carries its own precision.
    std::vector<TowerElement> coefficients;
    /// S_1, ..., S_L as evaluated (index 0 unused).
    std::vector<TowerElement> sums;

    std::size_t length() const { return coefficients.size() - 1; }
};

/// k c_k = sum_{l=1..k} S_l c_{k-l}. Division by p^(v_p(k)) costs
/// (p-1) v_p(k) units of precision; PrecisionError names the first
/// coefficient that cannot be certified.
LSeries build_series(const LaurentPolynomial& F, int L, int K, const EvalOptions& options = {});

/// Lower convex hull of (i, v_pi(a_i)).
struct NewtonPolygon {
    std::vector<std::pair<std::int64_t, std::int64_t>> vertices;
    /// Reciprocal-root valuations in q-units, with multiplicity, ascending.
    std::vector<Rational> slopes;
};

/// Polynomial a_0 + a_1 T + ... with a_0 a unit and a leading coefficient of
/// exact valuation. Coefficients known only as "at least v" must lie on or
/// above the hull, otherwise PrecisionError.
NewtonPolygon newton_polygon(const std::vector<TowerElement>& poly, int f);

class ReconstructionError : public Error {
public:
    using Error::Error;
};

struct LFunctionResult {
    int num_degree = 0;
    int den_degree = 0;
    std::vector<TowerElement> numerator;
    std::vector<TowerElement> denominator;
    NewtonPolygon numerator_polygon;
    NewtonPolygon denominator_polygon;
    /// Minimum over both slope multisets; nullopt stands for +infinity.
    std::optional<Rational> mu;
    /// Coefficients of D L - N checked beyond the fitted range.
    std::size_t residual_checks = 0;
    /// Least precision (pi-units) at which a residual was certified zero.
    std::int64_t residual_precision = 0;
    /// Set for m >= 2, where degrees are not known in advance.
    bool experimental = false;
};

/// Solves the order-t recurrence for D, truncates D L for N, then checks
/// every remaining coefficient of D L - N. Needs L >= s + 2t + 1.
/// PrecisionError when the linear system is singular to precision,
/// ReconstructionError when the residual is non-zero.
LFunctionResult reconstruct_rational(const LSeries& series, int num_degree, int den_degree);

/// First (s, t) by increasing s + t, then t, whose reconstruction passes
/// with L >= s + 2t + 1. ReconstructionError when nothing up to `cap` fits.
LFunctionResult detect_and_reconstruct(const LSeries& series, int cap = 8);

struct MuReport {
    std::optional<Rational> mu;
    Rational density;
    /// mu - density; absent when mu is infinite.
    std::optional<Rational> gap;
    bool holds = false;
    bool vacuous = false;
    bool equality = false;
};

MuReport verify_mu(const LFunctionResult& result, const DensityCertificate& certificate);

}  // namespace pdensity
