#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ropit/field.hpp"

namespace ropit {

/// Edge weight: a single variable x_i (1-based index) or a field constant.
class EdgeLabel {
public:
    static EdgeLabel variable(std::uint32_t index) {
        EdgeLabel l;
        l.var_ = index;
        return l;
    }
    static EdgeLabel constant(const Scalar& value) {
        EdgeLabel l;
        l.const_ = value;
        return l;
    }

    bool is_variable() const noexcept { return var_ != 0; }
    bool is_constant() const noexcept { return var_ == 0; }
    std::uint32_t var_index() const { return var_; }
    const Scalar& const_value() const { return *const_; }

private:
    EdgeLabel() = default;
    std::uint32_t var_ = 0;
    std::optional<Scalar> const_;
};

struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    EdgeLabel label;
};

/// A batch of evaluation points in coordinate-major layout: cols[i] holds the
/// value of x_{i+1} for every row, as canonical residues.
struct PointBlock {
    std::uint64_t modulus = 0;
    std::size_t rows = 0;
    std::vector<std::vector<std::uint64_t>> cols;

    static PointBlock from_rows(const PrimeField& field,
                                const std::vector<std::vector<std::uint64_t>>& row_points,
                                std::size_t dimension);
};

/// Read-once algebraic branching program: a layered edge-labeled DAG with a
/// single source and sink, edges only between consecutive levels, parallel
/// edges permitted, and each variable labeling at most one edge. Computes the
/// sum over source-sink paths of the product of edge labels. Immutable after
/// construction; construction validates every invariant.
class Roabp {
public:
    Roabp(PrimeField field, std::uint32_t num_vars,
          std::vector<std::vector<std::uint32_t>> levels, std::vector<Edge> edges);

    /// Canonical zero program: two levels, one node each, no edges.
    static Roabp zero(const PrimeField& field, std::uint32_t num_vars);

    const PrimeField& field() const noexcept { return field_; }
    std::uint32_t num_vars() const noexcept { return num_vars_; }
    const std::vector<std::vector<std::uint32_t>>& levels() const noexcept { return levels_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t num_nodes() const noexcept { return num_nodes_; }
    std::size_t num_levels() const noexcept { return levels_.size(); }
    std::uint32_t source() const noexcept { return levels_.front().front(); }
    std::uint32_t sink() const noexcept { return levels_.back().front(); }

    std::size_t node_level(std::uint32_t node) const;
    std::size_t node_position(std::uint32_t node) const;
    const std::vector<std::uint32_t>& incoming_edges(std::uint32_t node) const;

    /// Single-point evaluation by dynamic programming over levels. Reference
    /// path; evaluate_block is the kernel-backed equivalent.
    Scalar evaluate(std::span<const Scalar> point) const;

    /// Evaluates every row of the block; returns one residue per row.
    std::vector<std::uint64_t> evaluate_block(const PointBlock& block) const;

    /// Equivalent program with at most one variable-labeled edge per layer.
    Roabp normalized() const;

    /// Program computing f|_{x_var=1} - f|_{x_var=0}; the zero program when
    /// x_var is absent. Normalizes internally first.
    Roabp derivative(std::uint32_t var) const;

    /// Program with the edge labeled x_var (if any) relabeled to the constant.
    Roabp restricted(std::uint32_t var, const Scalar& value) const;

    /// Sum over all u->v paths using only constant-labeled edges of the
    /// product of their labels; zero when no such path, one when u == v.
    Scalar constant_path_sum(std::uint32_t u, std::uint32_t v) const;

    /// Indices labeling some edge, ascending.
    std::vector<std::uint32_t> present_vars() const;

    /// Edge index of the (unique) edge labeled x_var, if present.
    std::optional<std::size_t> var_edge(std::uint32_t var) const;

private:
    struct NodeInfo {
        std::uint32_t level;
        std::uint32_t position;
        std::vector<std::uint32_t> incoming; // edge indices
    };

    const NodeInfo& info(std::uint32_t node) const;

    PrimeField field_;
    std::uint32_t num_vars_;
    std::vector<std::vector<std::uint32_t>> levels_;
    std::vector<Edge> edges_;
    std::size_t num_nodes_ = 0;
    std::unordered_map<std::uint32_t, NodeInfo> nodes_;
    std::unordered_map<std::uint32_t, std::size_t> var_edges_; // var -> edge index
};

} // namespace ropit
