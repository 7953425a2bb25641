#pragma once

#include <functional>
#include <memory>

#include "ropit/roabp.hpp"

namespace ropit {

/// Deterministic point-query access to a polynomial. Derived views (pinning,
/// translation, second partials) are query rewriters sharing the root query
/// counter, so a second-partial probe costs exactly 4 base queries.
class BlackBox {
public:
    using BlockFn = std::function<std::vector<std::uint64_t>(const PointBlock&)>;

    static BlackBox from_program(Roabp program);
    static BlackBox sum_of_programs(std::vector<Roabp> programs);
    static BlackBox from_scalar_fn(const PrimeField& field, std::uint32_t dimension,
                                   std::function<Scalar(std::span<const Scalar>)> fn);

    const PrimeField& field() const noexcept { return field_; }
    std::uint32_t dimension() const noexcept { return dimension_; }
    std::uint64_t base_queries() const noexcept { return *counter_; }

    std::vector<std::uint64_t> query_block(const PointBlock& block) const;
    Scalar query(std::span<const Scalar> point) const;

    BlackBox restricted(std::uint32_t var, const Scalar& value) const;
    BlackBox shifted(std::vector<Scalar> v) const;
    BlackBox second_partial(std::uint32_t a, std::uint32_t b) const;

private:
    BlackBox(const PrimeField& field, std::uint32_t dimension, BlockFn fn,
             std::shared_ptr<std::uint64_t> counter)
        : field_(field), dimension_(dimension), fn_(std::move(fn)), counter_(std::move(counter)) {}

    PrimeField field_;
    std::uint32_t dimension_;
    BlockFn fn_;
    std::shared_ptr<std::uint64_t> counter_;
};

} // namespace ropit
