#include "ropit/roabp.hpp"

#include <algorithm>

#include "ropit/kernels.hpp"

namespace ropit {

PointBlock PointBlock::from_rows(const PrimeField& field,
                                 const std::vector<std::vector<std::uint64_t>>& row_points,
                                 std::size_t dimension) {
    PointBlock b;
    b.modulus = field.modulus();
    b.rows = row_points.size();
    b.cols.assign(dimension, std::vector<std::uint64_t>(row_points.size(), 0));
    for (std::size_t r = 0; r < row_points.size(); ++r) {
        if (row_points[r].size() != dimension) throw ValidationError("point block row dimension mismatch");
        for (std::size_t i = 0; i < dimension; ++i) b.cols[i][r] = row_points[r][i] % field.modulus();
    }
    return b;
}

Roabp::Roabp(PrimeField field, std::uint32_t num_vars,
             std::vector<std::vector<std::uint32_t>> levels, std::vector<Edge> edges)
    : field_(field), num_vars_(num_vars), levels_(std::move(levels)), edges_(std::move(edges)) {
    if (levels_.size() < 2) throw ValidationError("program needs at least two levels");
    if (levels_.front().size() != 1) throw ValidationError("level 0 must hold exactly the source");
    if (levels_.back().size() != 1) throw ValidationError("last level must hold exactly the sink");
    for (std::size_t l = 0; l < levels_.size(); ++l) {
        if (levels_[l].empty()) throw ValidationError("level " + std::to_string(l) + " is empty");
        for (std::size_t q = 0; q < levels_[l].size(); ++q) {
            std::uint32_t id = levels_[l][q];
            auto [it, inserted] = nodes_.try_emplace(
                id, NodeInfo{static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(q), {}});
            if (!inserted) throw ValidationError("duplicate node id " + std::to_string(id));
            ++num_nodes_;
        }
    }
    for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
        const Edge& e = edges_[ei];
        auto fi = nodes_.find(e.from);
        auto ti = nodes_.find(e.to);
        if (fi == nodes_.end() || ti == nodes_.end())
            throw ValidationError("edge references unknown node");
        if (ti->second.level != fi->second.level + 1)
            throw ValidationError("edge from level " + std::to_string(fi->second.level) + " to level " +
                                  std::to_string(ti->second.level) + " skips or reverses levels");
        if (e.label.is_variable()) {
            std::uint32_t v = e.label.var_index();
            if (v < 1 || v > num_vars_)
                throw ValidationError("variable index x" + std::to_string(v) + " out of range");
            auto [vit, fresh] = var_edges_.try_emplace(v, ei);
            if (!fresh)
                throw ValidationError("read-once violation: x" + std::to_string(v) +
                                      " labels more than one edge");
        } else if (e.label.const_value().modulus() != field_.modulus()) {
            throw FieldMismatchError("edge constant from a different field");
        }
        ti->second.incoming.push_back(static_cast<std::uint32_t>(ei));
    }
}

Roabp Roabp::zero(const PrimeField& field, std::uint32_t num_vars) {
    return Roabp(field, num_vars, {{0}, {1}}, {});
}

const Roabp::NodeInfo& Roabp::info(std::uint32_t node) const {
    auto it = nodes_.find(node);
    if (it == nodes_.end()) throw ValidationError("unknown node id " + std::to_string(node));
    return it->second;
}

std::size_t Roabp::node_level(std::uint32_t node) const { return info(node).level; }
std::size_t Roabp::node_position(std::uint32_t node) const { return info(node).position; }
const std::vector<std::uint32_t>& Roabp::incoming_edges(std::uint32_t node) const {
    return info(node).incoming;
}

std::optional<std::size_t> Roabp::var_edge(std::uint32_t var) const {
    auto it = var_edges_.find(var);
    if (it == var_edges_.end()) return std::nullopt;
    return it->second;
}

Scalar Roabp::evaluate(std::span<const Scalar> point) const {
    if (point.size() != num_vars_) throw ValidationError("evaluation point has wrong dimension");
    for (const Scalar& s : point)
        if (s.modulus() != field_.modulus()) throw FieldMismatchError("evaluation point from a different field");
    std::vector<Scalar> prev(levels_[0].size(), field_.one());
    for (std::size_t l = 1; l < levels_.size(); ++l) {
        std::vector<Scalar> cur(levels_[l].size(), field_.zero());
        for (std::size_t q = 0; q < levels_[l].size(); ++q) {
            for (std::uint32_t ei : info(levels_[l][q]).incoming) {
                const Edge& e = edges_[ei];
                const Scalar w = e.label.is_variable() ? point[e.label.var_index() - 1]
                                                       : e.label.const_value();
                cur[q] += prev[info(e.from).position] * w;
            }
        }
        prev = std::move(cur);
    }
    return prev.front();
}

std::vector<std::uint64_t> Roabp::evaluate_block(const PointBlock& block) const {
    if (block.modulus != field_.modulus()) throw FieldMismatchError("point block from a different field");
    if (block.cols.size() != num_vars_) throw ValidationError("point block has wrong dimension");
    const std::uint64_t p = field_.modulus();
    const std::size_t rows = block.rows;
    std::vector<std::vector<std::uint64_t>> prev(levels_[0].size(),
                                                 std::vector<std::uint64_t>(rows, 1));
    for (std::size_t l = 1; l < levels_.size(); ++l) {
        std::vector<std::vector<std::uint64_t>> cur(levels_[l].size(),
                                                    std::vector<std::uint64_t>(rows, 0));
        for (std::size_t q = 0; q < levels_[l].size(); ++q) {
            for (std::uint32_t ei : info(levels_[l][q]).incoming) {
                const Edge& e = edges_[ei];
                const std::vector<std::uint64_t>& src = prev[info(e.from).position];
                if (e.label.is_variable()) {
                    kernels::mul_acc(cur[q].data(), src.data(),
                                     block.cols[e.label.var_index() - 1].data(), rows, p);
                } else {
                    kernels::mul_acc_const(cur[q].data(), src.data(), e.label.const_value().value(),
                                           rows, p);
                }
            }
        }
        prev = std::move(cur);
    }
    return prev.front();
}

Roabp Roabp::normalized() const {
    const EdgeLabel one = EdgeLabel::constant(field_.one());
    std::uint32_t next_id = 0;
    std::vector<std::vector<std::uint32_t>> out_levels;
    std::vector<Edge> out_edges;

    std::unordered_map<std::uint32_t, std::uint32_t> cur; // old id -> new id, current boundary
    out_levels.emplace_back();
    for (std::uint32_t old : levels_[0]) {
        cur[old] = next_id;
        out_levels.back().push_back(next_id++);
    }

    std::vector<std::vector<std::uint32_t>> by_layer(levels_.size() - 1);
    for (std::size_t ei = 0; ei < edges_.size(); ++ei)
        by_layer[info(edges_[ei].from).level].push_back(static_cast<std::uint32_t>(ei));

    for (std::size_t l = 0; l + 1 < levels_.size(); ++l) {
        std::vector<std::uint32_t> var_es, const_es;
        for (std::uint32_t ei : by_layer[l])
            (edges_[ei].label.is_variable() ? var_es : const_es).push_back(ei);

        if (var_es.size() <= 1) {
            std::unordered_map<std::uint32_t, std::uint32_t> next;
            out_levels.emplace_back();
            for (std::uint32_t old : levels_[l + 1]) {
                next[old] = next_id;
                out_levels.back().push_back(next_id++);
            }
            for (std::uint32_t ei : by_layer[l])
                out_edges.push_back({cur[edges_[ei].from], next[edges_[ei].to], edges_[ei].label});
            cur = std::move(next);
            continue;
        }

        // Split a layer carrying t variable edges into t sub-layers: one
        // accumulator node per target, plus pass-through nodes keeping the
        // sources of not-yet-routed variable edges alive.
        const std::size_t t = var_es.size();
        auto pending_after = [&](std::size_t k) {
            std::vector<std::uint32_t> srcs;
            for (std::size_t j = k; j < t; ++j) {
                std::uint32_t s = edges_[var_es[j]].from;
                if (std::find(srcs.begin(), srcs.end(), s) == srcs.end()) srcs.push_back(s);
            }
            return srcs;
        };

        std::unordered_map<std::uint32_t, std::uint32_t> acc_prev, pass_prev;
        for (std::size_t k = 1; k <= t - 1; ++k) {
            out_levels.emplace_back();
            std::unordered_map<std::uint32_t, std::uint32_t> acc_cur, pass_cur;
            for (std::uint32_t v : levels_[l + 1]) {
                acc_cur[v] = next_id;
                out_levels.back().push_back(next_id++);
            }
            const std::vector<std::uint32_t> pend = pending_after(k);
            for (std::uint32_t u : pend) {
                pass_cur[u] = next_id;
                out_levels.back().push_back(next_id++);
            }
            if (k == 1) {
                for (std::uint32_t ei : const_es)
                    out_edges.push_back({cur[edges_[ei].from], acc_cur[edges_[ei].to], edges_[ei].label});
                const Edge& e1 = edges_[var_es[0]];
                out_edges.push_back({cur[e1.from], acc_cur[e1.to], e1.label});
                for (std::uint32_t u : pend) out_edges.push_back({cur[u], pass_cur[u], one});
            } else {
                for (std::uint32_t v : levels_[l + 1]) out_edges.push_back({acc_prev[v], acc_cur[v], one});
                const Edge& ek = edges_[var_es[k - 1]];
                out_edges.push_back({pass_prev[ek.from], acc_cur[ek.to], ek.label});
                for (std::uint32_t u : pend) out_edges.push_back({pass_prev[u], pass_cur[u], one});
            }
            acc_prev = std::move(acc_cur);
            pass_prev = std::move(pass_cur);
        }

        std::unordered_map<std::uint32_t, std::uint32_t> next;
        out_levels.emplace_back();
        for (std::uint32_t v : levels_[l + 1]) {
            next[v] = next_id;
            out_levels.back().push_back(next_id++);
        }
        for (std::uint32_t v : levels_[l + 1]) out_edges.push_back({acc_prev[v], next[v], one});
        const Edge& et = edges_[var_es[t - 1]];
        out_edges.push_back({pass_prev[et.from], next[et.to], et.label});
        cur = std::move(next);
    }
    return Roabp(field_, num_vars_, std::move(out_levels), std::move(out_edges));
}

Roabp Roabp::derivative(std::uint32_t var) const {
    if (var < 1 || var > num_vars_)
        throw ValidationError("variable index x" + std::to_string(var) + " out of range");
    Roabp norm = normalized();
    auto ve = norm.var_edge(var);
    if (!ve) return zero(field_, num_vars_);
    const std::size_t layer = norm.info(norm.edges_[*ve].from).level;
    std::vector<Edge> out_edges;
    for (std::size_t ei = 0; ei < norm.edges_.size(); ++ei) {
        const Edge& e = norm.edges_[ei];
        if (norm.info(e.from).level != layer) {
            out_edges.push_back(e);
        } else if (ei == *ve) {
            out_edges.push_back({e.from, e.to, EdgeLabel::constant(field_.one())});
        }
        // other edges in the x_var layer are dropped
    }
    return Roabp(field_, num_vars_, norm.levels_, std::move(out_edges));
}

Roabp Roabp::restricted(std::uint32_t var, const Scalar& value) const {
    if (var < 1 || var > num_vars_)
        throw ValidationError("variable index x" + std::to_string(var) + " out of range");
    if (value.modulus() != field_.modulus()) throw FieldMismatchError("restriction value from a different field");
    auto ve = var_edge(var);
    if (!ve) return *this;
    std::vector<Edge> out_edges = edges_;
    out_edges[*ve].label = EdgeLabel::constant(value);
    return Roabp(field_, num_vars_, levels_, std::move(out_edges));
}

Scalar Roabp::constant_path_sum(std::uint32_t u, std::uint32_t v) const {
    const NodeInfo& iu = info(u);
    const NodeInfo& iv = info(v);
    if (iu.level > iv.level) return field_.zero();
    if (iu.level == iv.level) return u == v ? field_.one() : field_.zero();
    std::vector<Scalar> prev(levels_[iu.level].size(), field_.zero());
    prev[iu.position] = field_.one();
    for (std::size_t l = iu.level + 1; l <= iv.level; ++l) {
        std::vector<Scalar> curv(levels_[l].size(), field_.zero());
        for (std::size_t q = 0; q < levels_[l].size(); ++q) {
            for (std::uint32_t ei : info(levels_[l][q]).incoming) {
                const Edge& e = edges_[ei];
                if (e.label.is_variable()) continue;
                curv[q] += prev[info(e.from).position] * e.label.const_value();
            }
        }
        prev = std::move(curv);
    }
    return prev[iv.position];
}

std::vector<std::uint32_t> Roabp::present_vars() const {
    std::vector<std::uint32_t> vars;
    vars.reserve(var_edges_.size());
    for (const auto& [v, ei] : var_edges_) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    return vars;
}

} // namespace ropit
