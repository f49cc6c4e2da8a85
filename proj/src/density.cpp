#include "pdensity/density.hpp"

#include "pdensity/digits.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace pdensity {

namespace {

constexpr std::uint32_t kInf32 = std::numeric_limits<std::uint32_t>::max();
constexpr std::int64_t kInf64 = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
    return d;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

struct Components {
    std::vector<std::size_t> id;
    std::size_t count = 0;
    std::vector<bool> cyclic;
};

// Iterative Tarjan.
Components strongly_connected(const PhiGraph& g) {
    const std::size_t v_count = g.state_count;
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    Components c;
    c.id.assign(v_count, none);
    std::vector<std::size_t> index(v_count, none), low(v_count, 0), stack;
    std::vector<bool> on_stack(v_count, false);
    std::size_t counter = 0;
    std::vector<std::pair<std::size_t, std::size_t>> call;
    for (std::size_t root = 0; root < v_count; ++root) {
        if (index[root] != none) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos == 0 && index[v] == none) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (pos < g.out[v].size()) {
                const std::size_t w = g.edges[g.out[v][pos]].to;
                ++pos;
                if (index[w] == none) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            if (low[done] == index[done]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    c.id[w] = c.count;
                } while (w != done);
                ++c.count;
            }
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    std::vector<std::size_t> size(c.count, 0);
    for (auto x : c.id) ++size[x];
    c.cyclic.assign(c.count, false);
    for (std::size_t k = 0; k < c.count; ++k) c.cyclic[k] = size[k] > 1;
    for (const auto& e : g.edges)
        if (e.from == e.to) c.cyclic[c.id[e.from]] = true;
    return c;
}

// Exact fraction num/den with den > 0, compared by cross-multiplication.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

bool less(const Frac& a, const Frac& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

// Karp's minimum cycle mean on one strongly connected component, rolling
// the walk-length table twice to keep memory linear.
Frac karp(const PhiGraph& g, const std::vector<std::size_t>& members, const std::vector<std::size_t>& local) {
    const std::size_t n = members.size();
    std::vector<std::int64_t> cur(n, kInf64), next(n);
    auto step = [&](const std::vector<std::int64_t>& from, std::vector<std::int64_t>& to) {
        std::fill(to.begin(), to.end(), kInf64);
        for (std::size_t a = 0; a < n; ++a) {
            if (from[a] >= kInf64) continue;
            for (auto ei : g.out[members[a]]) {
                const auto& e = g.edges[ei];
                const std::size_t b = local[e.to];
                if (b == std::numeric_limits<std::size_t>::max()) continue;
                to[b] = std::min(to[b], from[a] + static_cast<std::int64_t>(e.weight));
            }
        }
    };
    cur[0] = 0;
    for (std::size_t k = 0; k < n; ++k) {
        step(cur, next);
        std::swap(cur, next);
    }
    const std::vector<std::int64_t> dn = cur;
    std::vector<Frac> worst(n, Frac{-1, 0});
    std::fill(cur.begin(), cur.end(), kInf64);
    cur[0] = 0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t v = 0; v < n; ++v) {
            if (dn[v] >= kInf64 || cur[v] >= kInf64) continue;
            Frac r{dn[v] - cur[v], static_cast<std::int64_t>(n - k)};
            if (worst[v].den == 0 || less(worst[v], r)) worst[v] = r;
        }
        step(cur, next);
        std::swap(cur, next);
    }
    Frac best{0, 0};
    for (std::size_t v = 0; v < n; ++v) {
        if (dn[v] >= kInf64 || worst[v].den == 0) continue;
        if (best.den == 0 || less(worst[v], best)) best = worst[v];
    }
    if (best.den == 0) throw std::logic_error("Karp: no cycle in a cyclic component");
    return best;
}

}  // namespace

BruteForceMinimum sigma_min_bruteforce(const ProblemSpec& spec, int level, std::uint64_t budget) {
    const BigInt modulus_big = spec.level_modulus(level);
    const BigInt count = ipow(modulus_big + 1, static_cast<unsigned long>(spec.n()));
    if (count > BigInt(static_cast<unsigned long>(budget)))
        throw ResourceError("brute force over " + count.get_str() + " candidates exceeds budget " + std::to_string(budget));
    const std::uint64_t modulus = to_u64(modulus_big);
    const auto p = static_cast<std::uint64_t>(spec.p());
    const std::size_t n = spec.n();
    const std::size_t m = spec.m();
    std::vector<std::vector<std::uint64_t>> dm(n, std::vector<std::uint64_t>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            dm[i][j] = to_u64(mod_floor(BigInt(static_cast<long>(spec.exponent(i, j))), modulus_big));
    std::vector<std::uint64_t> sums(m);
    const auto bl = twist_at_level(spec, level);
    for (std::size_t j = 0; j < m; ++j) sums[j] = to_u64(mod_floor(bl[j], modulus_big));

    std::vector<std::uint64_t> u(n, 0), w(n, 0);
    std::uint64_t total = 0;
    BruteForceMinimum out;
    while (true) {
        if (std::all_of(sums.begin(), sums.end(), [](std::uint64_t s) { return s == 0; })) {
            if (!out.sigma || total < *out.sigma) {
                out.sigma = total;
                out.minimizers.clear();
            }
            if (total == *out.sigma) {
                IntVector v;
                for (auto x : u) v.push_back(BigInt(static_cast<unsigned long>(x)));
                out.minimizers.push_back(std::move(v));
            }
        }
        std::size_t i = 0;
        while (i < n && u[i] == modulus) {
            // u_i wraps from q^l - 1 to 0; the sum changes by a multiple of q^l - 1.
            u[i] = 0;
            total -= w[i];
            w[i] = 0;
            ++i;
        }
        if (i == n) break;
        ++u[i];
        total -= w[i];
        w[i] = digit_sum(u[i], p);
        total += w[i];
        for (std::size_t j = 0; j < m; ++j) {
            sums[j] += dm[i][j];
            if (sums[j] >= modulus) sums[j] -= modulus;
        }
    }
    return out;
}

DigitWeightTable::DigitWeightTable(const ProblemSpec& spec, std::uint64_t entry_budget)
    : n_(spec.n()), q_(static_cast<std::uint64_t>(spec.q())), rows_(spec.exponents()) {
    const std::size_t m = spec.m();
    const auto qm1 = static_cast<std::int64_t>(q_ - 1);
    lo_.assign(m, 0);
    hi_.assign(m, 0);
    for (const auto& row : rows_)
        for (std::size_t j = 0; j < m; ++j) (row[j] > 0 ? hi_[j] : lo_[j]) += qm1 * row[j];
    stride_.assign(m, 1);
    BigInt size = 1;
    for (std::size_t j = m; j-- > 0;) {
        stride_[j] = static_cast<std::size_t>(size.get_ui());
        size *= BigInt(static_cast<long>(hi_[j] - lo_[j] + 1));
        if (size * BigInt(static_cast<unsigned long>(n_ + 1)) > BigInt(static_cast<unsigned long>(entry_budget)))
            throw ResourceError("digit-weight table exceeds budget of " + std::to_string(entry_budget) + " entries");
    }
    size_ = static_cast<std::size_t>(size.get_ui());
    digit_weight_.resize(q_);
    for (std::uint64_t a = 0; a < q_; ++a)
        digit_weight_[a] = static_cast<std::uint32_t>(digit_sum(a, static_cast<std::uint64_t>(spec.p())));

    suffix_.assign(n_ + 1, std::vector<std::uint32_t>(size_, kInf32));
    suffix_[n_][*index(std::vector<std::int64_t>(m, 0))] = 0;
    for (std::size_t k = n_; k-- > 0;) {
        std::int64_t offset = 0;
        for (std::size_t j = 0; j < m; ++j) offset += rows_[k][j] * static_cast<std::int64_t>(stride_[j]);
        const auto& src = suffix_[k + 1];
        auto& dst = suffix_[k];
        for (std::size_t s = 0; s < size_; ++s) {
            if (src[s] == kInf32) continue;
            // Every partial sum stays inside the full range, so linear offsets are exact.
            for (std::uint64_t a = 0; a < q_; ++a) {
                const auto t = static_cast<std::size_t>(static_cast<std::int64_t>(s) + static_cast<std::int64_t>(a) * offset);
                dst[t] = std::min(dst[t], src[s] + digit_weight_[a]);
            }
        }
    }
}

std::optional<std::size_t> DigitWeightTable::index(const std::vector<std::int64_t>& target) const {
    if (target.size() != lo_.size()) throw RangeError("target has the wrong dimension");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < target.size(); ++j) {
        if (target[j] < lo_[j] || target[j] > hi_[j]) return std::nullopt;
        idx += static_cast<std::size_t>(target[j] - lo_[j]) * stride_[j];
    }
    return idx;
}

std::optional<std::uint64_t> DigitWeightTable::weight(const std::vector<std::int64_t>& target) const {
    const auto idx = index(target);
    if (!idx || suffix_[0][*idx] == kInf32) return std::nullopt;
    return suffix_[0][*idx];
}

std::vector<std::uint64_t> DigitWeightTable::witness(const std::vector<std::int64_t>& target) const {
    auto idx = index(target);
    if (!idx || suffix_[0][*idx] == kInf32) throw DomainError("target is not a digit combination");
    std::vector<std::uint64_t> out;
    std::vector<std::int64_t> rest = target;
    for (std::size_t k = 0; k < n_; ++k) {
        const std::uint32_t want = suffix_[k][*index(rest)];
        bool found = false;
        for (std::uint64_t a = 0; a < q_ && !found; ++a) {
            std::vector<std::int64_t> next = rest;
            for (std::size_t j = 0; j < next.size(); ++j) next[j] -= static_cast<std::int64_t>(a) * rows_[k][j];
            const auto ni = index(next);
            if (!ni || suffix_[k + 1][*ni] == kInf32) continue;
            if (suffix_[k + 1][*ni] + digit_weight_[a] == want) {
                out.push_back(a);
                rest = std::move(next);
                found = true;
            }
        }
        if (!found) throw std::logic_error("digit-weight table inconsistent");
    }
    return out;
}

std::vector<std::int64_t> PhiGraph::state(std::size_t index) const {
    std::vector<std::int64_t> c(lower.size());
    for (std::size_t j = lower.size(); j-- > 0;) {
        const auto width = static_cast<std::size_t>(upper[j] - lower[j] + 1);
        c[j] = lower[j] + static_cast<std::int64_t>(index % width);
        index /= width;
    }
    return c;
}

std::optional<std::size_t> PhiGraph::index_of(const std::vector<std::int64_t>& c) const {
    if (c.size() != lower.size()) return std::nullopt;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] < lower[j] || c[j] > upper[j]) return std::nullopt;
        idx = idx * static_cast<std::size_t>(upper[j] - lower[j] + 1) + static_cast<std::size_t>(c[j] - lower[j]);
    }
    return idx;
}

std::optional<std::size_t> PhiGraph::edge(std::size_t from, std::size_t to) const {
    for (auto ei : out.at(from))
        if (edges[ei].to == to) return ei;
    return std::nullopt;
}

PhiGraph build_phi_graph(const ProblemSpec& spec, std::size_t state_budget) {
    if (spec.twist_is_zero()) throw PreconditionError("the carry graph is built only for b != 0");
    const BoxBounds bounds = box(spec);
    if (bounds.cardinality > BigInt(static_cast<unsigned long>(state_budget)))
        throw ResourceError("box has " + bounds.cardinality.get_str() + " states, budget " + std::to_string(state_budget));
    PhiGraph g;
    g.p = spec.p();
    g.f = spec.f();
    g.q = spec.q();
    g.lower = bounds.lower;
    g.upper = bounds.upper;
    g.state_count = bounds.cardinality.get_ui();
    g.out.assign(g.state_count, {});
    const DigitWeightTable table(spec);
    const std::size_t m = spec.m();
    const auto& b = spec.twist();

    std::vector<std::int64_t> lo(m), hi(m), cp(m), target(m);
    for (std::size_t from = 0; from < g.state_count; ++from) {
        const auto c = g.state(from);
        bool empty = false;
        for (std::size_t j = 0; j < m; ++j) {
            lo[j] = std::max(g.lower[j], ceil_div(c[j] + b[j] + table.lower()[j], g.q));
            hi[j] = std::min(g.upper[j], floor_div(c[j] + b[j] + table.upper()[j], g.q));
            empty = empty || lo[j] > hi[j];
        }
        if (empty) continue;
        cp = lo;
        while (true) {
            for (std::size_t j = 0; j < m; ++j) target[j] = g.q * cp[j] - c[j] - b[j];
            if (auto w = table.weight(target)) {
                const std::size_t to = *g.index_of(cp);
                g.out[from].push_back(g.edges.size());
                g.edges.push_back(PhiEdge{from, to, *w, table.witness(target)});
            }
            std::size_t j = m;
            while (j > 0 && cp[j - 1] == hi[j - 1]) {
                cp[j - 1] = lo[j - 1];
                --j;
            }
            if (j == 0) break;
            ++cp[j - 1];
        }
    }
    return g;
}

std::size_t cyclic_state_count(const PhiGraph& graph) {
    const auto comp = strongly_connected(graph);
    std::size_t count = 0;
    for (auto id : comp.id) count += comp.cyclic[id] ? 1 : 0;
    return count;
}

std::optional<MeanCycle> min_mean_cycle(const PhiGraph& g) {
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    const auto comp = strongly_connected(g);
    std::optional<Frac> best;
    std::vector<std::size_t> local(g.state_count, none);
    for (std::size_t k = 0; k < comp.count; ++k) {
        if (!comp.cyclic[k]) continue;
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < g.state_count; ++v)
            if (comp.id[v] == k) {
                local[v] = members.size();
                members.push_back(v);
            }
        const Frac mean = karp(g, members, local);
        for (auto v : members) local[v] = none;
        if (!best || less(mean, *best)) best = mean;
    }
    if (!best) return std::nullopt;

    Rational lambda(best->num, best->den);
    lambda.canonicalize();
    const std::int64_t num = lambda.get_num().get_si();
    const std::int64_t den = lambda.get_den().get_si();

    // Potentials for w' = w den - num (no negative cycles); min-mean cycles
    // are exactly the cycles made of tight edges.
    std::vector<std::int64_t> h(g.state_count, 0);
    for (std::size_t round = 0; round <= g.state_count; ++round) {
        bool changed = false;
        for (const auto& e : g.edges) {
            const std::int64_t cand = h[e.from] + static_cast<std::int64_t>(e.weight) * den - num;
            if (cand < h[e.to]) {
                h[e.to] = cand;
                changed = true;
            }
        }
        if (!changed) break;
        if (round == g.state_count) throw std::logic_error("negative cycle after mean shift");
    }
    std::vector<bool> tight(g.edges.size(), false);
    std::vector<std::vector<std::size_t>> in(g.state_count);
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        tight[ei] = h[e.to] == h[e.from] + static_cast<std::int64_t>(e.weight) * den - num;
        if (tight[ei]) in[e.to].push_back(ei);
    }

    // Distances to s in the tight subgraph restricted to states >= s.
    auto distances_to = [&](std::size_t s) {
        std::vector<std::size_t> dist(g.state_count, none);
        std::vector<std::size_t> queue{s};
        dist[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            for (auto ei : in[v]) {
                const std::size_t u = g.edges[ei].from;
                if (u < s || dist[u] != none) continue;
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
        return dist;
    };
    std::size_t best_len = none, best_start = none;
    for (std::size_t s = 0; s < g.state_count; ++s) {
        if (!comp.cyclic[comp.id[s]]) continue;
        const auto dist = distances_to(s);
        for (auto ei : g.out[s]) {
            const std::size_t v = g.edges[ei].to;
            if (!tight[ei] || v < s || dist[v] == none) continue;
            if (dist[v] + 1 < best_len) {
                best_len = dist[v] + 1;
                best_start = s;
            }
        }
    }
    if (best_start == none) throw std::logic_error("no tight cycle at the minimum mean");

    const auto dist = distances_to(best_start);
    MeanCycle out;
    out.mean = lambda;
    std::size_t cur = best_start;
    for (std::size_t remaining = best_len; remaining > 0; --remaining) {
        out.states.push_back(cur);
        bool moved = false;
        for (auto ei : g.out[cur]) {
            const std::size_t v = g.edges[ei].to;
            if (!tight[ei] || v < best_start || dist[v] != remaining - 1) continue;
            out.edges.push_back(ei);
            out.weight += g.edges[ei].weight;
            cur = v;
            moved = true;
            break;
        }
        if (!moved) throw std::logic_error("tight cycle reconstruction failed");
    }
    Rational attained(static_cast<unsigned long>(out.weight), static_cast<unsigned long>(best_len));
    attained.canonicalize();
    if (attained != lambda)
        throw std::logic_error("extracted cycle does not attain the minimum mean");
    return out;
}

SolutionVector solution_from_walk(const ProblemSpec& spec, const PhiGraph& graph, const std::vector<std::size_t>& walk) {
    if (walk.empty()) throw RangeError("empty walk");
    for (std::size_t k = 0; k < walk.size(); ++k)
        if (graph.edges.at(walk[k]).to != graph.edges.at(walk[(k + 1) % walk.size()]).from)
            throw DomainError("edge sequence is not a closed walk");
    IntVector u(spec.n(), BigInt(0));
    const BigInt q(static_cast<long>(spec.q()));
    BigInt scale = 1;
    for (auto ei : walk) {
        const auto& digits = graph.edges[ei].digits;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += BigInt(static_cast<unsigned long>(digits[i])) * scale;
        scale *= q;
    }
    return SolutionVector::make(spec, std::move(u), static_cast<int>(walk.size()));
}

std::optional<DensityCertificate> density(const ProblemSpec& spec, std::size_t state_budget) {
    DensityCertificate cert;
    cert.bound_used = box(spec).cardinality;
    if (spec.twist_is_zero()) {
        cert.density = 0;
        cert.level = 1;
        cert.witness = SolutionVector::make(spec, IntVector(spec.n(), BigInt(0)), 1);
        return cert;
    }
    const PhiGraph g = build_phi_graph(spec, state_budget);
    const auto cycle = min_mean_cycle(g);
    if (!cycle) return std::nullopt;
    cert.level = static_cast<int>(cycle->states.size());
    cert.density = cycle->mean / Rational(spec.f() * (spec.p() - 1));
    cert.density.canonicalize();
    cert.witness = solution_from_walk(spec, g, cycle->edges);
    if (cert.witness.p_weight != cycle->weight) throw std::logic_error("witness weight differs from cycle weight");
    for (auto s : cycle->states) cert.cycle.push_back(g.state(s));
    cert.cyclic_states = cyclic_state_count(g);
    return cert;
}

LevelMinimum sigma_min_graph(const ProblemSpec& spec, const PhiGraph& g, int level) {
    if (level < 1) throw RangeError("level must be at least 1");
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    const auto comp = strongly_connected(g);
    const auto steps = static_cast<std::size_t>(level);
    LevelMinimum out;
    std::vector<std::size_t> best_walk;
    for (std::size_t s = 0; s < g.state_count; ++s) {
        if (!comp.cyclic[comp.id[s]]) continue;
        const std::size_t cid = comp.id[s];
        std::vector<std::int64_t> cur(g.state_count, kInf64), next(g.state_count);
        std::vector<std::vector<std::size_t>> pred(steps, std::vector<std::size_t>(g.state_count, none));
        cur[s] = 0;
        for (std::size_t k = 0; k < steps; ++k) {
            std::fill(next.begin(), next.end(), kInf64);
            for (std::size_t v = 0; v < g.state_count; ++v) {
                if (cur[v] >= kInf64) continue;
                for (auto ei : g.out[v]) {
                    const auto& e = g.edges[ei];
                    if (comp.id[e.to] != cid) continue;
                    const std::int64_t cand = cur[v] + static_cast<std::int64_t>(e.weight);
                    if (cand < next[e.to]) {
                        next[e.to] = cand;
                        pred[k][e.to] = ei;
                    }
                }
            }
            std::swap(cur, next);
        }
        if (cur[s] >= kInf64) continue;
        if (out.sigma && static_cast<std::uint64_t>(cur[s]) >= *out.sigma) continue;
        out.sigma = static_cast<std::uint64_t>(cur[s]);
        best_walk.assign(steps, none);
        std::size_t v = s;
        for (std::size_t k = steps; k-- > 0;) {
            best_walk[k] = pred[k][v];
            v = g.edges[best_walk[k]].from;
        }
    }
    if (out.sigma) {
        out.witness = solution_from_walk(spec, g, best_walk);
        if (out.witness->p_weight != *out.sigma) throw std::logic_error("walk witness weight mismatch");
    }
    return out;
}

LevelMinimum sigma_min_graph(const ProblemSpec& spec, int level, std::size_t state_budget) {
    if (spec.twist_is_zero()) {
        LevelMinimum out;
        out.sigma = 0;
        out.witness = SolutionVector::make(spec, IntVector(spec.n(), BigInt(0)), level);
        return out;
    }
    return sigma_min_graph(spec, build_phi_graph(spec, state_budget), level);
}

LowerBound practical_lower_bound(const ProblemSpec& spec) {
    const auto p = static_cast<std::uint64_t>(spec.p());
    const std::int64_t fp = spec.f() * (spec.p() - 1);
    std::int64_t sigma_b = 0;
    for (auto b : spec.twist()) sigma_b += static_cast<std::int64_t>(digit_sum(static_cast<std::uint64_t>(b), p));
    std::int64_t widest = 0;
    bool positive_scalar = spec.m() == 1;
    for (const auto& row : spec.exponents()) {
        std::int64_t w = 0;
        for (auto d : row) {
            w += static_cast<std::int64_t>(digit_sum(static_cast<std::uint64_t>(d < 0 ? -d : d), p));
            positive_scalar = positive_scalar && d > 0;
        }
        widest = std::max(widest, w);
    }
    if (widest == 0) throw DomainError("lower bound needs a non-zero exponent vector");
    LowerBound out;
    out.bound = Rational(fp - sigma_b, fp * widest);
    out.bound.canonicalize();
    out.heuristic = !positive_scalar;
    return out;
}

}  // namespace pdensity
