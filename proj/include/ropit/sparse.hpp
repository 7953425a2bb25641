#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ropit/field.hpp"
#include "ropit/roabp.hpp"
#include "ropit/varset.hpp"

namespace ropit {

inline constexpr std::uint64_t kDefaultTermCap = std::uint64_t{1} << 20;
inline constexpr std::uint32_t kDefaultAlignVarCap = 12;

/// Multilinear polynomial as a finite map from variable subsets to nonzero
/// coefficients. Exact ground truth for every other representation in the
/// toolkit; desk-scale only, and the term caps fail loudly rather than
/// truncate.
class SparseMultilinear {
public:
    SparseMultilinear(const PrimeField& field, std::uint32_t num_vars);

    static SparseMultilinear constant(const PrimeField& field, std::uint32_t num_vars, const Scalar& c);
    static SparseMultilinear monomial(const PrimeField& field, std::uint32_t num_vars, VarSet vars,
                                      const Scalar& coeff);

    const PrimeField& field() const noexcept { return field_; }
    std::uint32_t num_vars() const noexcept { return num_vars_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    const std::map<std::uint64_t, std::uint64_t>& terms() const noexcept { return terms_; }

    Scalar coefficient(VarSet term) const;
    void add_term(VarSet term, const Scalar& coeff); // accumulates; drops zero results

    Scalar evaluate(std::span<const Scalar> point) const;
    SparseMultilinear operator+(const SparseMultilinear& o) const;
    SparseMultilinear operator-(const SparseMultilinear& o) const;
    SparseMultilinear scaled(const Scalar& c) const;
    SparseMultilinear restricted(std::uint32_t var, const Scalar& value) const;
    SparseMultilinear derivative(std::uint32_t var) const;
    /// Multiplication by x_var; no existing term may contain it (read-once use).
    SparseMultilinear times_var(std::uint32_t var) const;
    /// f(x_1 + v_1, ..., x_n + v_n), guarded by the term cap.
    SparseMultilinear shifted(std::span<const Scalar> v, std::uint64_t term_cap = kDefaultTermCap) const;

    bool is_zero() const noexcept { return terms_.empty(); }
    bool equals(const SparseMultilinear& o) const;
    bool operator==(const SparseMultilinear& o) const { return equals(o); }

    VarSet dependent_vars() const;

private:
    void check_compatible(const SparseMultilinear& o) const;

    PrimeField field_;
    std::uint32_t num_vars_;
    std::map<std::uint64_t, std::uint64_t> terms_; // term mask -> coefficient in [1, p)
};

/// Exact expansion of the program polynomial by level-by-level symbolic replay.
SparseMultilinear from_roabp(const Roabp& program, std::uint64_t term_cap = kDefaultTermCap);

/// Terms as (ascending index list, coefficient), sorted lexicographically by
/// the index lists — the order of the expansion dump format.
std::vector<std::pair<std::vector<std::uint32_t>, Scalar>> sorted_terms(const SparseMultilinear& f);

/// True iff every variable pair with a nonvanishing second partial also
/// appears as a quadratic monomial with nonzero coefficient.
bool is_decent(const SparseMultilinear& f);

/// Certificate for one checked variable: either the witnessing pair (x_j, x_k)
/// with the recovered (beta, alpha, c) of the factorization
/// d2f/dx_j dx_k = g * (beta*x_i - alpha), or the exhaustive failed-pair list.
struct PairCertificate {
    std::uint32_t var = 0;
    bool witnessed = false;
    bool trivial_base = false; // |Var(f)| <= 2 case, no pair recorded
    std::uint32_t j = 0, k = 0;
    std::optional<Scalar> beta, alpha, c;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> failed_pairs;
};

struct AlignmentVerdict {
    bool holds = false;
    std::vector<PairCertificate> certificates;
};

/// Pre-alignment check of f on the variables in s, with pairs drawn from the
/// ambient variable set (all of [n] in the two-argument form). Precondition:
/// f arises from a read-once program, so the cofactor g of any witnessing
/// factorization is itself program-computable; the checker does not (and
/// cannot) verify that clause.
AlignmentVerdict is_prealigned_on(const SparseMultilinear& f, VarSet s, VarSet ambient);
AlignmentVerdict is_prealigned_on(const SparseMultilinear& f, VarSet s);
bool is_prealigned(const SparseMultilinear& f);

struct AlignConfig {
    std::uint32_t max_vars = kDefaultAlignVarCap;
};

/// Recursive alignment check (pre-alignment plus alignment of every
/// zero-restriction), memoized on the zeroed-variable set.
bool is_aligned(const SparseMultilinear& f, VarSet ambient, AlignConfig cfg = {});
bool is_aligned(const SparseMultilinear& f, AlignConfig cfg = {});

} // namespace ropit
