#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ropit/errors.hpp"

namespace ropit {

class Scalar;

/// Prime field F_p with a runtime modulus. Construction runs a deterministic
/// Miller-Rabin check; 5 <= p < 2^62 is required so that products fit the
/// 128-bit scalar path and sums never overflow.
class PrimeField {
public:
    static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;
    static constexpr std::uint64_t kDefaultModulus = 2147483647; // 2^31 - 1

    explicit PrimeField(std::uint64_t modulus);

    std::uint64_t modulus() const noexcept { return p_; }

    Scalar make(std::uint64_t value) const;   // reduces mod p
    Scalar make_signed(std::int64_t value) const;
    Scalar zero() const;
    Scalar one() const;

    bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }
    bool operator!=(const PrimeField& o) const noexcept { return p_ != o.p_; }

private:
    std::uint64_t p_;
};

/// Deterministic primality test for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

/// Immutable element of F_p holding the canonical representative in [0, p).
/// Operations between scalars of different moduli throw FieldMismatchError.
class Scalar {
public:
    std::uint64_t value() const noexcept { return v_; }
    std::uint64_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return v_ == 0; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const; // throws Error on zero
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const noexcept { return v_ == o.v_ && p_ == o.p_; }
    bool operator!=(const Scalar& o) const noexcept { return !(*this == o); }

private:
    friend class PrimeField;
    Scalar(std::uint64_t v, std::uint64_t p) : v_(v), p_(p) {}
    void check_same(const Scalar& o) const;

    std::uint64_t v_;
    std::uint64_t p_;
};

/// Ordered set of pairwise distinct interpolation points a_1..a_n.
class AnchorSet {
public:
    explicit AnchorSet(std::vector<Scalar> points);

    /// The canonical anchors {0, 1, ..., n-1}; requires p > n.
    static AnchorSet canonical(const PrimeField& field, std::size_t n);

    std::size_t size() const noexcept { return points_.size(); }
    const Scalar& at(std::size_t index0) const { return points_.at(index0); }
    const std::vector<Scalar>& points() const noexcept { return points_; }
    const PrimeField& field() const noexcept { return field_; }

private:
    PrimeField field_;
    std::vector<Scalar> points_;
};

/// Evaluates the i-th Lagrange basis polynomial on A at w:
/// u_i(w) = prod_{j != i} (w - a_j) / (a_i - a_j). Index i is 1-based.
Scalar lagrange_basis(const AnchorSet& anchors, std::size_t i, const Scalar& w);

} // namespace ropit
