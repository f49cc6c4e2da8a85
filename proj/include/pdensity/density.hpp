#pragma once

// sigma(D, q^l, b_l) and the p-density s_p(D, b).
//
// States are the integer vectors c in the box prod_j [D_j^-, D_j^+]. An edge
// c -> c' carries one base-q digit column a in {0..q-1}^n with
//   q c' - c - b = sum_i a_i d_i,
// weighted by the least sum_i sigma_p(a_i). Closed walks of length l are the
// members of L(D, q^l, b_l): the walk s_0 -> ... -> s_{l-1} -> s_0 with
// digit columns a^(k) gives u_i = sum_k a_i^(k) q^k and s_k = Phi_u(l - k).
// The density is the minimum cycle mean divided by f(p - 1).

#include "pdensity/arith.hpp"
#include "pdensity/exponent_system.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pdensity {

struct BruteForceMinimum {
    std::optional<std::uint64_t> sigma;
    /// Every member attaining sigma, in odometer order (u_0 fastest).
    std::vector<IntVector> minimizers;
};

/// Exhaustive scan of [0, q^l - 1]^n. Throws ResourceError when (q^l)^n
/// exceeds `budget`.
BruteForceMinimum sigma_min_bruteforce(const ProblemSpec& spec, int level, std::uint64_t budget = 100'000'000);

/// min { sum_i sigma_p(a_i) : a in {0..q-1}^n, sum_i a_i d_i = target },
/// tabulated once over the whole reachable target range.
class DigitWeightTable {
public:
    explicit DigitWeightTable(const ProblemSpec& spec, std::uint64_t entry_budget = 50'000'000);

    std::optional<std::uint64_t> weight(const std::vector<std::int64_t>& target) const;
    /// Lexicographically least minimiser; throws DomainError if unreachable.
    std::vector<std::uint64_t> witness(const std::vector<std::int64_t>& target) const;

    const std::vector<std::int64_t>& lower() const { return lo_; }
    const std::vector<std::int64_t>& upper() const { return hi_; }

private:
    std::optional<std::size_t> index(const std::vector<std::int64_t>& target) const;

    std::size_t n_ = 0;
    std::uint64_t q_ = 0;
    std::vector<std::vector<std::int64_t>> rows_;
    std::vector<std::int64_t> lo_, hi_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 0;
    std::vector<std::uint32_t> digit_weight_;
    // suffix_[k][s]: least weight of items k..n-1 summing to s.
    std::vector<std::vector<std::uint32_t>> suffix_;
};

struct PhiEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::uint64_t weight = 0;
    std::vector<std::uint64_t> digits;
};

struct PhiGraph {
    std::int64_t p = 0;
    int f = 0;
    std::int64_t q = 0;
    std::vector<std::int64_t> lower, upper;
    std::size_t state_count = 0;
    std::vector<PhiEdge> edges;
    /// Outgoing edge indices per state, ordered by target state.
    std::vector<std::vector<std::size_t>> out;

    /// States are ordered lexicographically (coordinate 0 most significant).
    std::vector<std::int64_t> state(std::size_t index) const;
    std::optional<std::size_t> index_of(const std::vector<std::int64_t>& c) const;
    /// Edge index c -> c', if present.
    std::optional<std::size_t> edge(std::size_t from, std::size_t to) const;
};

/// Throws PreconditionError for b = 0, ResourceError past `state_budget`.
PhiGraph build_phi_graph(const ProblemSpec& spec, std::size_t state_budget = 10'000);

struct MeanCycle {
    Rational mean;
    std::uint64_t weight = 0;
    std::vector<std::size_t> states;
    std::vector<std::size_t> edges;
};

/// Least cycle mean, ties broken by (length, state sequence) with the
/// sequence rotated to start at its least state. Absent iff acyclic.
std::optional<MeanCycle> min_mean_cycle(const PhiGraph& graph);

/// Number of states lying on at least one cycle.
std::size_t cyclic_state_count(const PhiGraph& graph);

/// Reassembles u from a closed walk given as edge indices.
SolutionVector solution_from_walk(const ProblemSpec& spec, const PhiGraph& graph, const std::vector<std::size_t>& walk);

struct DensityCertificate {
    Rational density;
    int level = 0;
    SolutionVector witness;
    std::vector<std::vector<std::int64_t>> cycle;
    /// Box cardinality, the a priori bound on level.
    BigInt bound_used;
    std::size_t cyclic_states = 0;
};

/// Absent iff Lambda(D, b) is empty. b = 0 gives density 0 with u = 0 at l = 1.
std::optional<DensityCertificate> density(const ProblemSpec& spec, std::size_t state_budget = 10'000);

struct LevelMinimum {
    std::optional<std::uint64_t> sigma;
    std::optional<SolutionVector> witness;
};

/// sigma(D, q^l, b_l) from closed walks of length l in the graph.
LevelMinimum sigma_min_graph(const ProblemSpec& spec, const PhiGraph& graph, int level);
LevelMinimum sigma_min_graph(const ProblemSpec& spec, int level, std::size_t state_budget = 10'000);

struct LowerBound {
    Rational bound;
    /// Set unless m = 1 with positive exponents, where the bound is proven.
    bool heuristic = true;
};

/// (f(p-1) - sigma_p(b)) / (f(p-1) max_i sum_j sigma_p(|d_ij|)).
LowerBound practical_lower_bound(const ProblemSpec& spec);

}  // namespace pdensity
