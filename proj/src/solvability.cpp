#include "pdensity/solvability.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pdensity {

namespace {

IntMatrix identity(std::size_t k) {
    IntMatrix out(k, IntVector(k, BigInt(0)));
    for (std::size_t i = 0; i < k; ++i) out[i][i] = 1;
    return out;
}

// (row_r, row_k) <- (s row_r + t row_k, u row_r + w row_k)
void combine(IntVector& r, IntVector& k, const BigInt& s, const BigInt& t, const BigInt& u, const BigInt& w) {
    for (std::size_t c = 0; c < r.size(); ++c) {
        BigInt nr = s * r[c] + t * k[c];
        BigInt nk = u * r[c] + w * k[c];
        r[c] = std::move(nr);
        k[c] = std::move(nk);
    }
}

IntVector twist_vector(const ProblemSpec& spec) {
    IntVector b;
    for (auto x : spec.twist()) b.push_back(BigInt(static_cast<long>(x)));
    return b;
}

}  // namespace

IntMatrix coefficient_matrix(const ProblemSpec& spec) {
    IntMatrix a(spec.m(), IntVector(spec.n(), BigInt(0)));
    for (std::size_t i = 0; i < spec.n(); ++i)
        for (std::size_t j = 0; j < spec.m(); ++j) a[j][i] = BigInt(static_cast<long>(spec.exponent(i, j)));
    return a;
}

EliminationResult eliminate(const IntMatrix& a, const IntVector& rhs) {
    const std::size_t m = a.size();
    if (rhs.size() != m) throw RangeError("eliminate: right-hand side length mismatch");
    const std::size_t n = m == 0 ? 0 : a[0].size();
    EliminationResult out;
    out.reduced = a;
    out.reduced_rhs = rhs;
    out.transform = identity(m);
    auto& red = out.reduced;
    auto& b = out.reduced_rhs;
    auto& tr = out.transform;

    auto row_op = [&](std::size_t r, std::size_t k, const BigInt& s, const BigInt& t, const BigInt& u, const BigInt& w) {
        combine(red[r], red[k], s, t, u, w);
        combine(tr[r], tr[k], s, t, u, w);
        BigInt nr = s * b[r] + t * b[k];
        BigInt nk = u * b[r] + w * b[k];
        b[r] = std::move(nr);
        b[k] = std::move(nk);
    };

    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m; ++col) {
        for (std::size_t k = r + 1; k < m; ++k) {
            const BigInt c = red[k][col];
            if (c == 0) continue;
            const BigInt piv = red[r][col];
            if (piv == 0) {
                std::swap(red[r], red[k]);
                std::swap(tr[r], tr[k]);
                std::swap(b[r], b[k]);
                continue;
            }
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), piv.get_mpz_t(), c.get_mpz_t());
            row_op(r, k, s, t, BigInt(-c / g), BigInt(piv / g));
        }
        if (red[r][col] == 0) continue;
        if (red[r][col] < 0) {
            for (auto& x : red[r]) x = -x;
            for (auto& x : tr[r]) x = -x;
            b[r] = -b[r];
        }
        out.pivot_columns.push_back(col);
        ++r;
    }
    out.residuals.assign(b.begin() + static_cast<std::ptrdiff_t>(r), b.end());

    // Back-substitution on the triangular pivot block.
    const std::size_t rank = r;
    out.scale_n = 1;
    for (std::size_t k = 0; k < rank; ++k) out.scale_n *= red[k][out.pivot_columns[k]];
    std::vector<std::vector<Rational>> inv(rank, std::vector<Rational>(rank, Rational(0)));
    for (std::size_t col = 0; col < rank; ++col) {
        // Solve Delta x = e_col from the bottom row up.
        for (std::size_t k = rank; k-- > 0;) {
            Rational acc = k == col ? 1 : 0;
            for (std::size_t l = k + 1; l < rank; ++l) acc -= Rational(red[k][out.pivot_columns[l]]) * inv[l][col];
            inv[k][col] = acc / Rational(red[k][out.pivot_columns[k]]);
        }
    }
    out.adjugate.assign(rank, IntVector(rank, BigInt(0)));
    for (std::size_t k = 0; k < rank; ++k)
        for (std::size_t l = 0; l < rank; ++l) {
            Rational v = inv[k][l] * Rational(out.scale_n);
            v.canonicalize();
            if (v.get_den() != 1) throw std::logic_error("adjugate not integral");
            out.adjugate[k][l] = v.get_num();
        }
    return out;
}

EliminationResult eliminate(const ProblemSpec& spec) {
    return eliminate(coefficient_matrix(spec), twist_vector(spec));
}

SolvabilityReport is_solvable(const ProblemSpec& spec) {
    SolvabilityReport rep;
    rep.residuals = eliminate(spec).residuals;
    const BigInt qm1(static_cast<long>(spec.q() - 1));
    rep.solvable = std::all_of(rep.residuals.begin(), rep.residuals.end(),
                               [&](const BigInt& beta) { return mod_floor(beta, qm1) == 0; });
    return rep;
}

SolvabilityReport analyze(const ProblemSpec& spec) {
    SolvabilityReport rep = is_solvable(spec);
    if (!rep.solvable) return rep;
    if (spec.twist_is_zero()) {
        rep.generator = BigInt(1);
        return rep;
    }
    const IntMatrix a = coefficient_matrix(spec);
    const IntVector b = twist_vector(spec);
    const DiagonalForm diag = diagonalize(a);
    const BigInt qm1(static_cast<long>(spec.q() - 1));
    BigInt modulus = 1;
    for (const auto& [r, e] : (qm1 > 1 ? factor(qm1) : std::vector<std::pair<BigInt, int>>{})) {
        // f = max v_r(s_i) always suffices once the zero-row conditions hold.
        int bound = 0;
        for (const auto& s : diag.diag)
            if (s != 0) bound = std::max(bound, valuation(s, r));
        std::optional<int> found;
        for (int f = 0; f <= bound && !found; ++f) {
            const BigInt rf = ipow(r, static_cast<unsigned long>(f));
            IntVector rhs;
            for (const auto& x : b) rhs.push_back(rf * x);
            if (solve_congruences(a, rhs, ipow(r, static_cast<unsigned long>(e + f)))) found = f;
        }
        if (!found) throw std::logic_error("no feasible exponent for prime " + r.get_str() + " on a solvable system");
        rep.per_prime.push_back({r, e, *found});
        modulus *= ipow(r, static_cast<unsigned long>(e + *found));
    }
    rep.generator = multiplicative_order(BigInt(static_cast<long>(spec.q())), modulus);
    return rep;
}

BigInt lambda_generator(const ProblemSpec& spec) {
    const auto rep = analyze(spec);
    if (!rep.solvable) throw StateError("lambda_generator called on an unsolvable system");
    return *rep.generator;
}

std::optional<bool> square_system_shortcut(const ProblemSpec& spec) {
    if (spec.n() != spec.m())
        throw PreconditionError("square_system_shortcut needs n = m, got n = " + std::to_string(spec.n()) +
                                ", m = " + std::to_string(spec.m()));
    const BigInt det = determinant(coefficient_matrix(spec));
    BigInt g;
    const BigInt qm1(static_cast<long>(spec.q() - 1));
    mpz_gcd(g.get_mpz_t(), det.get_mpz_t(), qm1.get_mpz_t());
    if (g == 1) return true;
    return std::nullopt;
}

BigInt determinant(IntMatrix a) {
    const std::size_t k = a.size();
    for (const auto& row : a)
        if (row.size() != k) throw PreconditionError("determinant of a non-square matrix");
    if (k == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t t = 0; t + 1 < k; ++t) {
        if (a[t][t] == 0) {
            std::size_t s = t + 1;
            while (s < k && a[s][t] == 0) ++s;
            if (s == k) return 0;
            std::swap(a[t], a[s]);
            sign = -sign;
        }
        for (std::size_t i = t + 1; i < k; ++i) {
            for (std::size_t j = t + 1; j < k; ++j) a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) / prev;
            a[i][t] = 0;
        }
        prev = a[t][t];
    }
    return sign * a[k - 1][k - 1];
}

DiagonalForm diagonalize(const IntMatrix& input) {
    const std::size_t rows = input.size();
    const std::size_t cols = rows == 0 ? 0 : input[0].size();
    DiagonalForm out{identity(rows), identity(cols), {}};
    IntMatrix a = input;
    auto& u = out.u;
    auto& v = out.v;
    const std::size_t k = std::min(rows, cols);
    out.diag.assign(k, BigInt(0));
    for (std::size_t t = 0; t < k; ++t) {
        while (true) {
            std::size_t bi = rows, bj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (bi == rows || abs(a[i][j]) < abs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == rows) return out;
            std::swap(a[t], a[bi]);
            std::swap(u[t], u[bi]);
            for (auto& row : a) std::swap(row[t], row[bj]);
            for (auto& row : v) std::swap(row[t], row[bj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                const BigInt qt = a[i][t] / a[t][t];
                for (std::size_t j = 0; j < cols; ++j) a[i][j] -= qt * a[t][j];
                for (std::size_t j = 0; j < rows; ++j) u[i][j] -= qt * u[t][j];
                clean = clean && a[i][t] == 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                const BigInt qt = a[t][j] / a[t][t];
                for (std::size_t i = 0; i < rows; ++i) a[i][j] -= qt * a[i][t];
                for (std::size_t i = 0; i < cols; ++i) v[i][j] -= qt * v[i][t];
                clean = clean && a[t][j] == 0;
            }
            if (clean) break;
        }
        out.diag[t] = a[t][t];
    }
    return out;
}

std::optional<IntVector> solve_congruences(const IntMatrix& a, const IntVector& c, const BigInt& modulus) {
    if (modulus < 1) throw RangeError("modulus must be positive");
    const std::size_t rows = a.size();
    if (c.size() != rows) throw RangeError("solve_congruences: right-hand side length mismatch");
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    const DiagonalForm d = diagonalize(a);
    IntVector uc(rows, BigInt(0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j) uc[i] += d.u[i][j] * c[j];
    IntVector y(cols, BigInt(0));
    for (std::size_t i = 0; i < rows; ++i) {
        const BigInt s = i < d.diag.size() ? d.diag[i] : BigInt(0);
        const BigInt target = mod_floor(uc[i], modulus);
        BigInt g;
        mpz_gcd(g.get_mpz_t(), s.get_mpz_t(), modulus.get_mpz_t());
        if (target % g != 0) return std::nullopt;
        if (s == 0) continue;
        const BigInt sub = modulus / g;
        y[i] = mod_floor((target / g) * mod_inverse(mod_floor(s / g, sub), sub), sub);
    }
    IntVector x(cols, BigInt(0));
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < cols; ++j) x[i] += d.v[i][j] * y[j];
        x[i] = mod_floor(x[i], modulus);
    }
    return x;
}

std::optional<SolutionVector> construct_solution(const ProblemSpec& spec, int level) {
    const BigInt modulus = spec.level_modulus(level);
    IntVector rhs;
    for (const auto& bl : twist_at_level(spec, level)) rhs.push_back(-bl);
    auto u = solve_congruences(coefficient_matrix(spec), rhs, modulus);
    if (!u) return std::nullopt;
    return SolutionVector::make(spec, std::move(*u), level);
}

}  // namespace pdensity
