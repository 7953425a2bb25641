#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ropit/field.hpp"

namespace ropit {

/// The k-th order generator map F^{2k} -> F^n with components
/// G^i(y, z) = sum_j u_i(y_j) * z_j over the Lagrange basis of the anchors.
class SVGenerator {
public:
    SVGenerator(AnchorSet anchors, std::uint32_t order);

    std::uint32_t order() const noexcept { return order_; }
    std::uint32_t dimension() const noexcept { return static_cast<std::uint32_t>(anchors_.size()); }
    const PrimeField& field() const noexcept { return anchors_.field(); }
    const AnchorSet& anchors() const noexcept { return anchors_; }

    /// Component i (1-based) via the Lagrange basis; reference path.
    Scalar eval_component(std::size_t i, std::span<const Scalar> y, std::span<const Scalar> z) const;
    std::vector<Scalar> eval_map(std::span<const Scalar> y, std::span<const Scalar> z) const;

    /// Fast path over canonical residues; prefix/suffix basis products.
    void eval_map_raw(std::span<const std::uint64_t> y, std::span<const std::uint64_t> z,
                      std::span<std::uint64_t> out) const;

private:
    AnchorSet anchors_;
    std::uint32_t order_;
    std::vector<std::uint64_t> anchor_raw_;
    std::vector<std::uint64_t> inv_denom_raw_;
};

/// Single-consumer cursor over a deterministic point enumeration.
class PointCursor {
public:
    virtual ~PointCursor() = default;
    /// Writes the next point into out (dimension many residues); false when done.
    virtual bool next(std::span<std::uint64_t> out) = 0;
};

/// Lazily enumerated point set in F^n with a deterministic order. Sets are
/// never materialized; sweeps iterate with early exit, the CLI emits rows.
class PointSet {
public:
    enum class Provenance { low_weight, generator_image, sum_set, grid };

    /// All 0/1 vectors of weight <= max_weight, in weight-then-lex order.
    static PointSet low_weight(const PrimeField& field, std::uint32_t n, std::uint32_t max_weight);

    /// The image G(V^{2m}) in odometer order (first tuple coordinate fastest).
    static PointSet generator_image(const SVGenerator& gen, std::vector<Scalar> values);

    /// All pairwise sums p + q, outer cursor over p, inner over q.
    static PointSet sum(const PointSet& p, const PointSet& q);

    /// Product grid S_1 x ... x S_t with S_i = {0, 1, ..., bounds[i]};
    /// guarantees a nonzero point for any nonzero polynomial within the
    /// per-variable degree bounds. Requires p > max bound.
    static PointSet grid(const PrimeField& field, std::vector<std::uint64_t> degree_bounds);

    std::uint32_t dimension() const noexcept { return dimension_; }
    Provenance provenance() const noexcept { return provenance_; }
    const PrimeField& field() const noexcept { return field_; }
    const char* provenance_name() const noexcept;

    bool count_exceeds(std::uint64_t cap) const noexcept { return count_ > cap; }
    std::uint64_t count_clamped() const noexcept;

    std::unique_ptr<PointCursor> cursor() const { return make_cursor_(); }

private:
    PointSet(const PrimeField& field, std::uint32_t dimension, Provenance provenance,
             unsigned __int128 count, std::function<std::unique_ptr<PointCursor>()> make_cursor)
        : field_(field), dimension_(dimension), provenance_(provenance), count_(count),
          make_cursor_(std::move(make_cursor)) {}

    PrimeField field_;
    std::uint32_t dimension_;
    Provenance provenance_;
    unsigned __int128 count_;
    std::function<std::unique_ptr<PointCursor>()> make_cursor_;
};

/// Binomial-sum size of the low-weight set, saturating at 2^63.
std::uint64_t low_weight_count(std::uint32_t n, std::uint32_t max_weight);

} // namespace ropit
