#include "ropit/field.hpp"

namespace ropit {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, p);
        base = mulmod_u64(base, base, p);
        exp >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for all 64-bit integers.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t modulus) : p_(modulus) {
    if (modulus < 5)
        throw PreconditionError("modulus must be at least 5, got " + std::to_string(modulus));
    if (modulus >= kMaxModulus)
        throw PreconditionError("modulus must be below 2^62, got " + std::to_string(modulus));
    if (!is_prime_u64(modulus))
        throw PreconditionError("modulus " + std::to_string(modulus) + " is not prime");
}

Scalar PrimeField::make(std::uint64_t value) const { return Scalar(value % p_, p_); }

Scalar PrimeField::make_signed(std::int64_t value) const {
    if (value >= 0) return make(static_cast<std::uint64_t>(value));
    std::uint64_t mag = static_cast<std::uint64_t>(-(value + 1)) + 1; // avoids INT64_MIN overflow
    std::uint64_t r = mag % p_;
    return Scalar(r == 0 ? 0 : p_ - r, p_);
}

Scalar PrimeField::zero() const { return Scalar(0, p_); }
Scalar PrimeField::one() const { return Scalar(1, p_); }

void Scalar::check_same(const Scalar& o) const {
    if (p_ != o.p_)
        throw FieldMismatchError("scalar arithmetic across moduli " + std::to_string(p_) + " and " +
                                 std::to_string(o.p_));
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    std::uint64_t s = v_ + o.v_;
    if (s >= p_) s -= p_;
    return Scalar(s, p_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same(o);
    std::uint64_t s = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return Scalar(s, p_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    return Scalar(mulmod_u64(v_, o.v_, p_), p_);
}

Scalar Scalar::operator-() const { return Scalar(v_ == 0 ? 0 : p_ - v_, p_); }

Scalar Scalar::inverse() const {
    if (v_ == 0) throw Error("inverse of zero");
    // Extended Euclid; coefficients tracked in 128-bit to be safe near 2^62.
    __int128 t = 0, new_t = 1;
    __int128 r = static_cast<__int128>(p_), new_r = static_cast<__int128>(v_);
    while (new_r != 0) {
        __int128 q = r / new_r;
        __int128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += static_cast<__int128>(p_);
    return Scalar(static_cast<std::uint64_t>(t), p_);
}

AnchorSet::AnchorSet(std::vector<Scalar> points)
    : field_(points.empty() ? PrimeField::kDefaultModulus : points.front().modulus()), points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("anchor set must be nonempty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].modulus() != field_.modulus())
            throw FieldMismatchError("anchor set mixes moduli");
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            if (points_[i].value() == points_[j].value())
                throw ValidationError("anchor points must be pairwise distinct");
        }
    }
}

AnchorSet AnchorSet::canonical(const PrimeField& field, std::size_t n) {
    if (n == 0) throw ValidationError("anchor set must be nonempty");
    if (field.modulus() <= n)
        throw PreconditionError("canonical anchors need p > n (p = " + std::to_string(field.modulus()) +
                                ", n = " + std::to_string(n) + ")");
    std::vector<Scalar> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(field.make(i));
    return AnchorSet(std::move(pts));
}

Scalar lagrange_basis(const AnchorSet& anchors, std::size_t i, const Scalar& w) {
    if (i < 1 || i > anchors.size()) throw Error("lagrange basis index out of range");
    const Scalar& ai = anchors.at(i - 1);
    Scalar num = anchors.field().one();
    Scalar den = anchors.field().one();
    for (std::size_t j = 0; j < anchors.size(); ++j) {
        if (j == i - 1) continue;
        num *= w - anchors.at(j);
        den *= ai - anchors.at(j);
    }
    return num * den.inverse();
}

} // namespace ropit
