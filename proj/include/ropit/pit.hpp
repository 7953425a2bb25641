#pragma once

#include <map>
#include <memory>
#include <optional>
#include <tuple>

#include "ropit/blackbox.hpp"
#include "ropit/roabp.hpp"
#include "ropit/svgen.hpp"

namespace ropit {

struct PitStats {
    std::uint64_t box_queries = 0;
    std::uint64_t program_evals = 0;
    std::uint64_t pit_calls = 0;
    std::uint64_t points_enumerated = 0;
};

/// Verdict of an identity test. When the polynomial is nonzero, a witness
/// point is present and re-evaluates to a nonzero scalar.
struct PitReport {
    bool is_zero = true;
    std::optional<std::vector<Scalar>> witness;
    PitStats stats;
};

struct Caps {
    std::uint64_t max_points = 10'000'000; // --cap-points
    std::uint64_t max_terms = std::uint64_t{1} << 20; // --cap-terms
};

/// Reachability test on the constant-term digraph: one vertex per variable in
/// layer order, edges wherever the constant path sum between the surrounding
/// endpoints is nonzero, plus a direct source-sink edge for a nonzero constant
/// term. Zero iff the sink is unreachable. O(n^2 * size).
PitReport pit_single_structural(const Roabp& program);

/// Grid sweep of f composed with the order-(m+1) generator, m = ceil(log2
/// max(var_bound, 2)). Degree bounds: var_bound*(n-1) per y, var_bound per z.
/// Zero on the whole grid iff f is zero, given the read-once promise.
PitReport pit_single_blackbox(const BlackBox& box, std::uint32_t var_bound, const Caps& caps = {});

/// One tester per summand: answers whether a (partially restricted) second
/// partial of its polynomial is identically zero.
class AlignmentHandle {
public:
    virtual ~AlignmentHandle() = default;
    virtual std::uint32_t num_vars() const = 0;
    virtual bool restricted_second_partial_is_zero(std::uint32_t a, std::uint32_t b,
                                                   const std::map<std::uint32_t, Scalar>& fixed) = 0;
    virtual std::uint64_t pit_calls() const = 0;
};

/// Program-surgery tester: derivatives and restrictions as program rewrites,
/// identity tests via pit_single_structural.
class StructuralAlignmentHandle final : public AlignmentHandle {
public:
    explicit StructuralAlignmentHandle(Roabp program);
    std::uint32_t num_vars() const override { return base_.num_vars(); }
    bool restricted_second_partial_is_zero(std::uint32_t a, std::uint32_t b,
                                           const std::map<std::uint32_t, Scalar>& fixed) override;
    std::uint64_t pit_calls() const override { return pit_calls_; }

private:
    Roabp base_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Roabp> second_partials_;
    std::uint64_t pit_calls_ = 0;
};

/// Query-rewriting tester for the (semi-)black-box settings; identity tests
/// via pit_single_blackbox with the promise bound shrunk per restriction.
class QueryAlignmentHandle final : public AlignmentHandle {
public:
    QueryAlignmentHandle(BlackBox box, Caps caps = {});
    std::uint32_t num_vars() const override { return box_.dimension(); }
    bool restricted_second_partial_is_zero(std::uint32_t a, std::uint32_t b,
                                           const std::map<std::uint32_t, Scalar>& fixed) override;
    std::uint64_t pit_calls() const override { return pit_calls_; }
    std::uint64_t base_queries() const { return box_.base_queries(); }

private:
    BlackBox box_;
    Caps caps_;
    std::uint64_t pit_calls_ = 0;
};

struct CoordinateChoice {
    std::uint32_t var = 0;
    Scalar value;
    std::uint32_t candidates_tried = 0;
};

/// Simultaneous alignment shift: the surviving nonzero second partials and the
/// per-coordinate smallest surviving candidate value.
struct AlignmentResult {
    std::vector<Scalar> shift;
    std::vector<std::tuple<std::size_t, std::uint32_t, std::uint32_t>> constraints; // (handle, a, b)
    std::vector<CoordinateChoice> per_coordinate;
    std::uint64_t pit_calls = 0;
};

/// Alignment finding: fills the constraint list with the nonzero second
/// partials of every handle, then per coordinate picks the smallest candidate
/// keeping every constraint nonzero under the accumulated restrictions.
AlignmentResult find_alignment(std::span<AlignmentHandle* const> handles, std::uint32_t n,
                               std::span<const Scalar> candidates);

/// The first kn^2 + 1 canonical field elements (requires p > kn^2).
std::vector<Scalar> alignment_candidates(const PrimeField& field, std::uint32_t k, std::uint32_t n);

PitReport sum_pit_nonblackbox(std::span<const Roabp> programs, const Caps& caps = {});
PitReport sum_pit_semiblackbox(std::span<const BlackBox> boxes, const Caps& caps = {});
PitReport sum_pit_blackbox(const BlackBox& box, std::uint32_t k, const Caps& caps = {});

} // namespace ropit
