#include "ropit/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>

namespace ropit {

FormulaNode FormulaNode::var(std::uint32_t index) {
    FormulaNode n;
    n.kind = Kind::variable;
    n.var_index = index;
    return n;
}

FormulaNode FormulaNode::constant(const Scalar& v) {
    FormulaNode n;
    n.kind = Kind::constant;
    n.value = v;
    return n;
}

FormulaNode FormulaNode::add(std::vector<FormulaNode> children) {
    FormulaNode n;
    n.kind = Kind::add;
    n.children = std::move(children);
    return n;
}

FormulaNode FormulaNode::mul(std::vector<FormulaNode> children) {
    FormulaNode n;
    n.kind = Kind::mul;
    n.children = std::move(children);
    return n;
}

std::uint32_t FormulaNode::max_var() const {
    if (kind == Kind::variable) return var_index;
    std::uint32_t m = 0;
    for (const FormulaNode& c : children) m = std::max(m, c.max_var());
    return m;
}

Scalar FormulaNode::evaluate(std::span<const Scalar> point) const {
    switch (kind) {
        case Kind::variable:
            if (var_index > point.size()) throw ValidationError("evaluation point has wrong dimension");
            return point[var_index - 1];
        case Kind::constant: return *value;
        case Kind::add: {
            Scalar acc = children.front().evaluate(point);
            for (std::size_t i = 1; i < children.size(); ++i) acc += children[i].evaluate(point);
            return acc;
        }
        case Kind::mul: {
            Scalar acc = children.front().evaluate(point);
            for (std::size_t i = 1; i < children.size(); ++i) acc *= children[i].evaluate(point);
            return acc;
        }
    }
    throw Error("corrupt formula node");
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const PrimeField& field;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek_is(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool eat(char c) {
        if (peek_is(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    std::uint64_t parse_integer() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ParseError("expected an integer", pos);
        unsigned __int128 v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + static_cast<unsigned>(text[pos] - '0');
            if (v > (static_cast<unsigned __int128>(1) << 63)) throw ParseError("integer literal too large", pos);
            ++pos;
        }
        return static_cast<std::uint64_t>(v);
    }

    FormulaNode parse_factor() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("expected a factor", pos);
        const char c = text[pos];
        if (c == 'x') {
            ++pos;
            const std::size_t at = pos;
            std::uint64_t idx = parse_integer();
            if (idx < 1 || idx > 0xffffffffull) throw ParseError("variable index out of range", at);
            return FormulaNode::var(static_cast<std::uint32_t>(idx));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return FormulaNode::constant(field.make(parse_integer()));
        if (eat('(')) {
            FormulaNode inner = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos);
            return inner;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    FormulaNode parse_term() {
        std::vector<FormulaNode> factors;
        factors.push_back(parse_factor());
        while (eat('*')) factors.push_back(parse_factor());
        if (factors.size() == 1) return std::move(factors.front());
        return FormulaNode::mul(std::move(factors));
    }

    FormulaNode parse_expr() {
        std::vector<FormulaNode> terms;
        terms.push_back(parse_term());
        for (;;) {
            if (eat('+')) {
                terms.push_back(parse_term());
            } else if (eat('-')) {
                std::vector<FormulaNode> negated;
                negated.push_back(FormulaNode::constant(field.make_signed(-1)));
                negated.push_back(parse_term());
                terms.push_back(FormulaNode::mul(std::move(negated)));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return std::move(terms.front());
        return FormulaNode::add(std::move(terms));
    }
};

void collect_vars(const FormulaNode& n, std::set<std::uint32_t>& seen) {
    if (n.kind == FormulaNode::Kind::variable) {
        if (!seen.insert(n.var_index).second)
            throw ParseError("read-once violation: x" + std::to_string(n.var_index) +
                             " appears more than once");
        return;
    }
    for (const FormulaNode& c : n.children) collect_vars(c, seen);
}

} // namespace

FormulaNode parse_formula(std::string_view text, const PrimeField& field) {
    Parser p{text, 0, field};
    FormulaNode root = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("unexpected trailing input", p.pos);
    std::set<std::uint32_t> seen;
    collect_vars(root, seen);
    return root;
}

namespace {

// Compilation fragment with contiguous local node ids; the first and last
// levels are always singletons (source and sink).
struct Fragment {
    std::vector<std::vector<std::uint32_t>> levels;
    std::vector<Edge> edges;

    std::uint32_t node_count() const {
        std::uint32_t c = 0;
        for (const auto& l : levels) c += static_cast<std::uint32_t>(l.size());
        return c;
    }
    std::uint32_t source() const { return levels.front().front(); }
    std::uint32_t sink() const { return levels.back().front(); }
    std::size_t depth() const { return levels.size() - 1; }
};

Fragment leaf_fragment(const EdgeLabel& label) {
    Fragment f;
    f.levels = {{0}, {1}};
    f.edges = {{0, 1, label}};
    return f;
}

Fragment series(Fragment a, const Fragment& b) {
    const std::uint32_t base = a.node_count();
    std::vector<std::uint32_t> bmap(b.node_count(), 0);
    bmap[b.source()] = a.sink();
    std::uint32_t next = base;
    for (std::size_t l = 1; l < b.levels.size(); ++l)
        for (std::uint32_t id : b.levels[l]) bmap[id] = next++;
    for (std::size_t l = 1; l < b.levels.size(); ++l) {
        a.levels.emplace_back();
        for (std::uint32_t id : b.levels[l]) a.levels.back().push_back(bmap[id]);
    }
    for (const Edge& e : b.edges) a.edges.push_back({bmap[e.from], bmap[e.to], e.label});
    return a;
}

Fragment pad_to_depth(Fragment f, std::size_t depth, const PrimeField& field) {
    while (f.depth() < depth) {
        const std::uint32_t id = f.node_count();
        const std::uint32_t old_sink = f.sink();
        f.levels.push_back({id});
        f.edges.push_back({old_sink, id, EdgeLabel::constant(field.one())});
    }
    return f;
}

Fragment parallel(std::vector<Fragment> parts, const PrimeField& field) {
    std::size_t depth = 0;
    for (const Fragment& f : parts) depth = std::max(depth, f.depth());
    for (Fragment& f : parts) f = pad_to_depth(std::move(f), depth, field);

    Fragment out;
    out.levels.assign(depth + 1, {});
    out.levels[0] = {0};
    std::uint32_t next = 1;
    std::vector<std::vector<std::uint32_t>> maps;
    for (const Fragment& f : parts) {
        std::vector<std::uint32_t> m(f.node_count(), 0);
        m[f.source()] = 0;
        for (std::size_t l = 1; l < depth; ++l)
            for (std::uint32_t id : f.levels[l]) {
                m[id] = next++;
                out.levels[l].push_back(m[id]);
            }
        maps.push_back(std::move(m));
    }
    const std::uint32_t sink = next++;
    out.levels[depth] = {sink};
    for (std::size_t i = 0; i < parts.size(); ++i) {
        maps[i][parts[i].sink()] = sink;
        for (const Edge& e : parts[i].edges) out.edges.push_back({maps[i][e.from], maps[i][e.to], e.label});
    }
    return out;
}

Fragment compile(const FormulaNode& n, const PrimeField& field) {
    switch (n.kind) {
        case FormulaNode::Kind::variable: return leaf_fragment(EdgeLabel::variable(n.var_index));
        case FormulaNode::Kind::constant: return leaf_fragment(EdgeLabel::constant(*n.value));
        case FormulaNode::Kind::mul: {
            Fragment f = compile(n.children.front(), field);
            for (std::size_t i = 1; i < n.children.size(); ++i)
                f = series(std::move(f), compile(n.children[i], field));
            return f;
        }
        case FormulaNode::Kind::add: {
            std::vector<Fragment> parts;
            parts.reserve(n.children.size());
            for (const FormulaNode& c : n.children) parts.push_back(compile(c, field));
            return parallel(std::move(parts), field);
        }
    }
    throw Error("corrupt formula node");
}

} // namespace

Roabp to_roabp(const FormulaNode& tree, const PrimeField& field, std::uint32_t num_vars) {
    if (num_vars < tree.max_var()) throw ValidationError("num_vars below the largest referenced index");
    Fragment f = compile(tree, field);
    return Roabp(field, num_vars, std::move(f.levels), std::move(f.edges));
}

Roabp to_roabp(const FormulaNode& tree, const PrimeField& field) {
    return to_roabp(tree, field, tree.max_var());
}

Roabp build_fn(const PrimeField& field, std::uint32_t n) {
    if (n < 1) throw ValidationError("family parameter must be at least 1");
    std::vector<std::vector<std::uint32_t>> levels(4);
    levels[0] = {0};
    for (std::uint32_t i = 1; i <= n; ++i) levels[1].push_back(i);
    for (std::uint32_t j = 1; j <= n; ++j) levels[2].push_back(n + j);
    levels[3] = {2 * n + 1};
    std::vector<Edge> edges;
    const EdgeLabel one = EdgeLabel::constant(field.one());
    for (std::uint32_t i = 1; i <= n; ++i) edges.push_back({0, i, EdgeLabel::variable(2 * i - 1)});
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j) edges.push_back({i, n + j, one});
    for (std::uint32_t j = 1; j <= n; ++j) edges.push_back({n + j, 2 * n + 1, EdgeLabel::variable(2 * j)});
    return Roabp(field, 2 * n, std::move(levels), std::move(edges));
}

Roabp build_chain(const PrimeField& field, std::uint32_t n) {
    if (n < 1) throw ValidationError("family parameter must be at least 1");
    const EdgeLabel one = EdgeLabel::constant(field.one());
    std::uint32_t next_id = 0;
    std::vector<std::vector<std::uint32_t>> levels;
    std::vector<Edge> edges;
    auto fresh = [&] { return next_id++; };

    const std::uint32_t s = fresh();
    levels.push_back({s});
    std::uint32_t skip = s;                       // track not having read an odd variable yet
    std::vector<std::uint32_t> pending(n + 1, 0); // pending[m]: waiting to read x_{2m}
    std::vector<bool> pending_live(n + 1, false);

    // Phase 1: read x_1, x_3, ..., x_{2n-1}; each read sub-layer is followed
    // by a constant routing sub-layer so both pending choices share one
    // variable edge.
    for (std::uint32_t step = 1; step <= n; ++step) {
        levels.emplace_back();
        const std::uint32_t picked = fresh();
        levels.back().push_back(picked);
        edges.push_back({skip, picked, EdgeLabel::variable(2 * step - 1)});
        std::uint32_t skip_mid = 0;
        const bool keep_skip = step < n;
        if (keep_skip) {
            skip_mid = fresh();
            levels.back().push_back(skip_mid);
            edges.push_back({skip, skip_mid, one});
        }
        std::vector<std::uint32_t> pend_mid(n + 1, 0);
        for (std::uint32_t m = 1; m <= n; ++m) {
            if (!pending_live[m]) continue;
            pend_mid[m] = fresh();
            levels.back().push_back(pend_mid[m]);
            edges.push_back({pending[m], pend_mid[m], one});
        }

        levels.emplace_back();
        std::vector<std::uint32_t> pend_new(n + 1, 0);
        std::vector<bool> live_new(n + 1, false);
        for (std::uint32_t m = 1; m <= step; ++m) {
            pend_new[m] = fresh();
            live_new[m] = true;
            levels.back().push_back(pend_new[m]);
        }
        if (step >= 2) edges.push_back({picked, pend_new[step - 1], one});
        edges.push_back({picked, pend_new[step], one});
        for (std::uint32_t m = 1; m <= n; ++m)
            if (pending_live[m]) edges.push_back({pend_mid[m], pend_new[m], one});
        if (keep_skip) {
            const std::uint32_t skip_new = fresh();
            levels.back().push_back(skip_new);
            edges.push_back({skip_mid, skip_new, one});
            skip = skip_new;
        }
        pending = std::move(pend_new);
        pending_live = std::move(live_new);
    }

    // Phase 2: read x_2, x_4, ..., x_{2n}; pending_j resolves on x_{2j}.
    std::uint32_t done = 0;
    bool done_live = false;
    for (std::uint32_t step = 1; step <= n; ++step) {
        levels.emplace_back();
        const std::uint32_t done_new = fresh();
        levels.back().push_back(done_new);
        edges.push_back({pending[step], done_new, EdgeLabel::variable(2 * step)});
        if (done_live) edges.push_back({done, done_new, one});
        std::vector<std::uint32_t> pend_new(n + 1, 0);
        for (std::uint32_t m = step + 1; m <= n; ++m) {
            pend_new[m] = fresh();
            levels.back().push_back(pend_new[m]);
            edges.push_back({pending[m], pend_new[m], one});
        }
        pending = std::move(pend_new);
        done = done_new;
        done_live = true;
    }
    return Roabp(field, 2 * n, std::move(levels), std::move(edges));
}

std::uint32_t max_path3_free(std::uint32_t n) {
    if (n < 1 || n > 4) throw ValidationError("brute force bounded to 1 <= n <= 4");
    const std::uint32_t e = n * n; // edge (a,b) of K_{n,n} at bit a*n+b
    std::vector<std::uint32_t> patterns;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t c = 0; c < n; ++c) {
            if (a == c) continue;
            for (std::uint32_t b = 0; b < n; ++b)
                for (std::uint32_t d = 0; d < n; ++d) {
                    if (b == d) continue;
                    patterns.push_back((1u << (a * n + b)) | (1u << (c * n + b)) | (1u << (c * n + d)));
                }
        }
    std::uint32_t best = 0;
    for (std::uint32_t s = 0; s < (1u << e); ++s) {
        const std::uint32_t size = static_cast<std::uint32_t>(std::popcount(s));
        if (size <= best) continue;
        bool free3 = true;
        for (std::uint32_t m : patterns)
            if ((s & m) == m) {
                free3 = false;
                break;
            }
        if (free3) best = size;
    }
    return best;
}

} // namespace ropit
