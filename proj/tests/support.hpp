#pragma once

// Shared helpers for the test suites: a deterministic RNG, random program and
// formula generators, and small structural utilities.

#include <algorithm>
#include <random>
#include <tuple>
#include <vector>

#include "ropit/formula.hpp"
#include "ropit/roabp.hpp"
#include "ropit/sparse.hpp"

namespace ropit::testsupport {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t u64() { return eng(); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : u64() % n; }
    bool chance(double prob) { return std::uniform_real_distribution<double>(0.0, 1.0)(eng) < prob; }
};

inline Scalar random_scalar(Rng& rng, const PrimeField& field) {
    return field.make(rng.u64() % field.modulus());
}

inline std::vector<Scalar> random_point(Rng& rng, const PrimeField& field, std::uint32_t n) {
    std::vector<Scalar> p;
    p.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) p.push_back(random_scalar(rng, field));
    return p;
}

inline EdgeLabel random_const_label(Rng& rng, const PrimeField& field) {
    const std::uint64_t r = rng.below(10);
    if (r < 3) return EdgeLabel::constant(field.one());
    if (r < 5) return EdgeLabel::constant(field.make_signed(-1));
    if (r == 5) return EdgeLabel::constant(field.zero());
    return EdgeLabel::constant(field.make(rng.u64() % field.modulus()));
}

/// Random layered program; roughly half compute zero (disconnection or
/// cancellation), the rest are generic.
inline Roabp random_program(Rng& rng, const PrimeField& field, std::uint32_t n,
                            std::uint32_t max_width = 3, std::uint32_t max_interior = 4,
                            double var_prob = 0.75) {
    std::vector<std::vector<std::uint32_t>> levels;
    std::uint32_t id = 0;
    levels.push_back({id++});
    const std::uint32_t interior = 1 + static_cast<std::uint32_t>(rng.below(max_interior));
    for (std::uint32_t l = 0; l < interior; ++l) {
        std::vector<std::uint32_t> level;
        const std::uint32_t width = 1 + static_cast<std::uint32_t>(rng.below(max_width));
        for (std::uint32_t w = 0; w < width; ++w) level.push_back(id++);
        levels.push_back(std::move(level));
    }
    levels.push_back({id++});

    std::vector<Edge> edges;
    for (std::size_t l = 0; l + 1 < levels.size(); ++l)
        for (std::uint32_t u : levels[l])
            for (std::uint32_t v : levels[l + 1])
                if (rng.chance(0.55)) edges.push_back({u, v, random_const_label(rng, field)});
    for (std::uint32_t i = 1; i <= n; ++i) {
        if (!rng.chance(var_prob)) continue;
        const std::size_t l = rng.below(levels.size() - 1);
        const std::uint32_t u = levels[l][rng.below(levels[l].size())];
        const std::uint32_t v = levels[l + 1][rng.below(levels[l + 1].size())];
        edges.push_back({u, v, EdgeLabel::variable(i)});
    }
    return Roabp(field, n, std::move(levels), std::move(edges));
}

inline Roabp random_nonzero_program(Rng& rng, const PrimeField& field, std::uint32_t n) {
    for (int tries = 0; tries < 1000; ++tries) {
        Roabp a = random_program(rng, field, n);
        if (!from_roabp(a).is_zero()) return a;
    }
    throw Error("random_nonzero_program: generator starved");
}

/// The program multiplied by -1 (one extra funnel level).
inline Roabp negated(const Roabp& a) {
    auto levels = a.levels();
    auto edges = a.edges();
    std::uint32_t max_id = 0;
    for (const auto& level : levels)
        for (std::uint32_t v : level) max_id = std::max(max_id, v);
    const std::uint32_t fresh = max_id + 1;
    edges.push_back({a.sink(), fresh, EdgeLabel::constant(a.field().make_signed(-1))});
    levels.push_back({fresh});
    return Roabp(a.field(), a.num_vars(), std::move(levels), std::move(edges));
}

/// P_n = x_1 x_2 ... x_n as a single path of variable edges.
inline Roabp product_program(const PrimeField& field, std::uint32_t n) {
    std::vector<std::vector<std::uint32_t>> levels;
    for (std::uint32_t i = 0; i <= n; ++i) levels.push_back({i});
    std::vector<Edge> edges;
    for (std::uint32_t i = 1; i <= n; ++i) edges.push_back({i - 1, i, EdgeLabel::variable(i)});
    return Roabp(field, n, std::move(levels), std::move(edges));
}

/// prod_i (x_i + c_i) as a chain of two-edge layers.
inline Roabp product_of_binomials(const PrimeField& field, std::span<const Scalar> constants) {
    const std::uint32_t n = static_cast<std::uint32_t>(constants.size());
    std::vector<std::vector<std::uint32_t>> levels;
    for (std::uint32_t i = 0; i <= n; ++i) levels.push_back({i});
    std::vector<Edge> edges;
    for (std::uint32_t i = 1; i <= n; ++i) {
        edges.push_back({i - 1, i, EdgeLabel::variable(i)});
        edges.push_back({i - 1, i, EdgeLabel::constant(constants[i - 1])});
    }
    return Roabp(field, n, std::move(levels), std::move(edges));
}

/// prod_{i<n-1} (x_i + c_i) times (x_{n-1} x_n + alpha x_{n-1} + e x_n +
/// e*alpha + gamma). With nonzero c_i, alpha, e and gamma != 0 the polynomial
/// is pre-aligned with every second partial nonzero, yet restricting
/// x_n := -alpha - gamma/e strips x_{n-1} of every witness pair.
inline Roabp alignment_break_gadget(const PrimeField& field, std::uint32_t n,
                                    std::span<const Scalar> prefix, const Scalar& alpha,
                                    const Scalar& e, const Scalar& gamma) {
    if (n < 2 || prefix.size() != n - 2) throw ValidationError("gadget needs n >= 2 and n-2 prefix constants");
    std::vector<std::vector<std::uint32_t>> levels;
    std::vector<Edge> edges;
    std::uint32_t id = 0;
    levels.push_back({id++});
    for (std::uint32_t i = 1; i + 2 <= n; ++i) {
        levels.push_back({id});
        edges.push_back({id - 1, id, EdgeLabel::variable(i)});
        edges.push_back({id - 1, id, EdgeLabel::constant(prefix[i - 1])});
        ++id;
    }
    const std::uint32_t u = id - 1;
    const std::uint32_t v1 = id++, v2 = id++;
    levels.push_back({v1, v2});
    const std::uint32_t w1 = id++, w2 = id++, w3 = id++;
    levels.push_back({w1, w2, w3});
    const std::uint32_t t = id++;
    levels.push_back({t});
    const EdgeLabel one = EdgeLabel::constant(field.one());
    edges.push_back({u, v1, EdgeLabel::variable(n - 1)});
    edges.push_back({u, v1, EdgeLabel::constant(e)});
    edges.push_back({u, v2, one});
    edges.push_back({v1, w1, EdgeLabel::variable(n)});
    edges.push_back({v1, w2, EdgeLabel::constant(alpha)});
    edges.push_back({v2, w3, EdgeLabel::constant(gamma)});
    edges.push_back({w1, t, one});
    edges.push_back({w2, t, one});
    edges.push_back({w3, t, one});
    return Roabp(field, n, std::move(levels), std::move(edges));
}

inline FormulaNode random_formula(Rng& rng, const PrimeField& field, std::vector<std::uint32_t>& pool,
                                  int depth) {
    if (depth <= 0 || pool.empty() || rng.chance(0.30)) {
        if (!pool.empty() && rng.chance(0.7)) {
            const std::size_t at = rng.below(pool.size());
            const std::uint32_t var = pool[at];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
            return FormulaNode::var(var);
        }
        return FormulaNode::constant(field.make(rng.below(7)));
    }
    const std::size_t arity = 2 + rng.below(2);
    std::vector<FormulaNode> children;
    for (std::size_t i = 0; i < arity; ++i) children.push_back(random_formula(rng, field, pool, depth - 1));
    return rng.chance(0.5) ? FormulaNode::add(std::move(children)) : FormulaNode::mul(std::move(children));
}

struct SigEdge {
    std::size_t from_level, from_pos, to_pos;
    bool is_var;
    std::uint64_t payload;
    auto operator<=>(const SigEdge&) const = default;
};

inline std::vector<SigEdge> signature(const Roabp& a) {
    std::vector<SigEdge> sig;
    for (const Edge& e : a.edges())
        sig.push_back({a.node_level(e.from), a.node_position(e.from), a.node_position(e.to),
                       e.label.is_variable(),
                       e.label.is_variable() ? e.label.var_index() : e.label.const_value().value()});
    std::sort(sig.begin(), sig.end());
    return sig;
}

/// Equality up to node renaming.
inline bool structurally_equal(const Roabp& a, const Roabp& b) {
    if (a.num_levels() != b.num_levels() || a.num_vars() != b.num_vars()) return false;
    for (std::size_t l = 0; l < a.num_levels(); ++l)
        if (a.levels()[l].size() != b.levels()[l].size()) return false;
    return signature(a) == signature(b);
}

} // namespace ropit::testsupport
