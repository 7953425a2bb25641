#include "ropit/svgen.hpp"

#include <algorithm>

namespace ropit {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

constexpr unsigned __int128 kCountSaturation = static_cast<unsigned __int128>(1) << 100;

unsigned __int128 saturating_mul(unsigned __int128 a, unsigned __int128 b) {
    if (a == 0 || b == 0) return 0;
    if (a > kCountSaturation / b) return kCountSaturation;
    return a * b;
}

} // namespace

SVGenerator::SVGenerator(AnchorSet anchors, std::uint32_t order)
    : anchors_(std::move(anchors)), order_(order) {
    if (order_ < 1) throw ValidationError("generator order must be at least 1");
    const std::size_t n = anchors_.size();
    anchor_raw_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) anchor_raw_.push_back(anchors_.at(i).value());
    inv_denom_raw_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Scalar d = field().one();
        for (std::size_t l = 0; l < n; ++l) {
            if (l == i) continue;
            d *= anchors_.at(i) - anchors_.at(l);
        }
        inv_denom_raw_.push_back(d.inverse().value());
    }
}

Scalar SVGenerator::eval_component(std::size_t i, std::span<const Scalar> y,
                                   std::span<const Scalar> z) const {
    if (y.size() != order_ || z.size() != order_)
        throw ValidationError("generator input must have k y-values and k z-values");
    Scalar acc = field().zero();
    for (std::size_t j = 0; j < order_; ++j) acc += lagrange_basis(anchors_, i, y[j]) * z[j];
    return acc;
}

std::vector<Scalar> SVGenerator::eval_map(std::span<const Scalar> y, std::span<const Scalar> z) const {
    std::vector<Scalar> out;
    out.reserve(dimension());
    for (std::size_t i = 1; i <= dimension(); ++i) out.push_back(eval_component(i, y, z));
    return out;
}

void SVGenerator::eval_map_raw(std::span<const std::uint64_t> y, std::span<const std::uint64_t> z,
                               std::span<std::uint64_t> out) const {
    const std::uint64_t p = field().modulus();
    const std::size_t n = anchors_.size();
    if (y.size() != order_ || z.size() != order_ || out.size() != n)
        throw ValidationError("generator input/output dimension mismatch");
    std::fill(out.begin(), out.end(), 0);
    std::vector<std::uint64_t> diff(n), pre(n), suf(n);
    for (std::size_t j = 0; j < order_; ++j) {
        const std::uint64_t w = y[j];
        for (std::size_t l = 0; l < n; ++l)
            diff[l] = w >= anchor_raw_[l] ? w - anchor_raw_[l] : w + p - anchor_raw_[l];
        pre[0] = 1;
        for (std::size_t l = 1; l < n; ++l) pre[l] = mulmod(pre[l - 1], diff[l - 1], p);
        suf[n - 1] = 1;
        for (std::size_t l = n - 1; l > 0; --l) suf[l - 1] = mulmod(suf[l], diff[l], p);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t u = mulmod(mulmod(pre[i], suf[i], p), inv_denom_raw_[i], p);
            std::uint64_t s = out[i] + mulmod(u, z[j], p);
            out[i] = s >= p ? s - p : s;
        }
    }
}

const char* PointSet::provenance_name() const noexcept {
    switch (provenance_) {
        case Provenance::low_weight: return "low-weight";
        case Provenance::generator_image: return "generator-image";
        case Provenance::sum_set: return "sum-set";
        case Provenance::grid: return "grid";
    }
    return "?";
}

std::uint64_t PointSet::count_clamped() const noexcept {
    const unsigned __int128 cap = ~std::uint64_t{0};
    return count_ > cap ? ~std::uint64_t{0} : static_cast<std::uint64_t>(count_);
}

std::uint64_t low_weight_count(std::uint32_t n, std::uint32_t max_weight) {
    unsigned __int128 total = 0;
    unsigned __int128 binom = 1;
    for (std::uint32_t i = 0; i <= max_weight; ++i) {
        total += binom;
        if (total >= (static_cast<unsigned __int128>(1) << 63))
            return std::uint64_t{1} << 63;
        binom = binom * (n - i) / (i + 1);
    }
    return static_cast<std::uint64_t>(total);
}

namespace {

class LowWeightCursor final : public PointCursor {
public:
    LowWeightCursor(std::uint32_t n, std::uint32_t w) : n_(n), w_(w) {}

    bool next(std::span<std::uint64_t> out) override {
        if (weight_ > w_) return false;
        if (weight_ == 0) {
            std::fill(out.begin(), out.end(), 0);
            advance_weight();
            return true;
        }
        for (std::uint32_t i = 0; i < n_; ++i) out[i] = (mask_ >> (n_ - 1 - i)) & 1;
        step();
        return true;
    }

private:
    void advance_weight() {
        ++weight_;
        if (weight_ <= w_) mask_ = (std::uint64_t{1} << weight_) - 1;
    }
    void step() {
        // Gosper: next mask with the same popcount, ascending numeric order.
        const std::uint64_t c = mask_ & (~mask_ + 1);
        const std::uint64_t r = mask_ + c;
        std::uint64_t next = (((r ^ mask_) >> 2) / c) | r;
        if (next >= (std::uint64_t{1} << n_))
            advance_weight();
        else
            mask_ = next;
    }

    std::uint32_t n_, w_;
    std::uint32_t weight_ = 0;
    std::uint64_t mask_ = 0;
};

class GridCursor final : public PointCursor {
public:
    explicit GridCursor(std::vector<std::uint64_t> bounds)
        : bounds_(std::move(bounds)), digits_(bounds_.size(), 0) {}

    bool next(std::span<std::uint64_t> out) override {
        if (done_) return false;
        std::copy(digits_.begin(), digits_.end(), out.begin());
        std::size_t i = 0;
        for (; i < digits_.size(); ++i) {
            if (digits_[i] < bounds_[i]) {
                ++digits_[i];
                break;
            }
            digits_[i] = 0;
        }
        if (i == digits_.size()) done_ = true;
        return true;
    }

private:
    std::vector<std::uint64_t> bounds_;
    std::vector<std::uint64_t> digits_;
    bool done_ = false;
};

class ImageCursor final : public PointCursor {
public:
    ImageCursor(SVGenerator gen, std::vector<std::uint64_t> values)
        : gen_(std::move(gen)), values_(std::move(values)),
          digits_(2 * static_cast<std::size_t>(gen_.order()), 0),
          y_(gen_.order()), z_(gen_.order()) {}

    bool next(std::span<std::uint64_t> out) override {
        if (done_) return false;
        const std::size_t m = gen_.order();
        for (std::size_t j = 0; j < m; ++j) {
            y_[j] = values_[digits_[j]];
            z_[j] = values_[digits_[m + j]];
        }
        gen_.eval_map_raw(y_, z_, out);
        std::size_t i = 0;
        for (; i < digits_.size(); ++i) {
            if (digits_[i] + 1 < values_.size()) {
                ++digits_[i];
                break;
            }
            digits_[i] = 0;
        }
        if (i == digits_.size()) done_ = true;
        return true;
    }

private:
    SVGenerator gen_;
    std::vector<std::uint64_t> values_;
    std::vector<std::size_t> digits_;
    std::vector<std::uint64_t> y_, z_;
    bool done_ = false;
};

class SumCursor final : public PointCursor {
public:
    SumCursor(const PointSet& p, const PointSet& q)
        : modulus_(p.field().modulus()), outer_(p.cursor()), q_set_(q), inner_(q.cursor()),
          outer_point_(p.dimension()), inner_point_(p.dimension()) {
        outer_live_ = outer_->next(outer_point_);
    }

    bool next(std::span<std::uint64_t> out) override {
        while (outer_live_) {
            if (inner_->next(inner_point_)) {
                for (std::size_t i = 0; i < out.size(); ++i) {
                    std::uint64_t s = outer_point_[i] + inner_point_[i];
                    out[i] = s >= modulus_ ? s - modulus_ : s;
                }
                return true;
            }
            outer_live_ = outer_->next(outer_point_);
            inner_ = q_set_.cursor();
        }
        return false;
    }

private:
    std::uint64_t modulus_;
    std::unique_ptr<PointCursor> outer_;
    PointSet q_set_;
    std::unique_ptr<PointCursor> inner_;
    std::vector<std::uint64_t> outer_point_, inner_point_;
    bool outer_live_ = false;
};

} // namespace

PointSet PointSet::low_weight(const PrimeField& field, std::uint32_t n, std::uint32_t max_weight) {
    if (n > 63) throw PreconditionError("low-weight enumeration supports n <= 63");
    if (max_weight > n) throw ValidationError("weight bound exceeds dimension");
    const std::uint32_t w = max_weight;
    return PointSet(field, n, Provenance::low_weight, low_weight_count(n, w),
                    [n, w] { return std::make_unique<LowWeightCursor>(n, w); });
}

PointSet PointSet::generator_image(const SVGenerator& gen, std::vector<Scalar> values) {
    if (values.empty()) throw ValidationError("generator image needs at least one value");
    std::vector<std::uint64_t> raw;
    raw.reserve(values.size());
    for (const Scalar& v : values) {
        if (v.modulus() != gen.field().modulus()) throw FieldMismatchError("image values from a different field");
        raw.push_back(v.value());
    }
    unsigned __int128 count = 1;
    for (std::uint32_t i = 0; i < 2 * gen.order(); ++i) count = saturating_mul(count, raw.size());
    return PointSet(gen.field(), gen.dimension(), Provenance::generator_image, count,
                    [gen, raw] { return std::make_unique<ImageCursor>(gen, raw); });
}

PointSet PointSet::sum(const PointSet& p, const PointSet& q) {
    if (p.dimension() != q.dimension()) throw ValidationError("sum of point sets of different dimension");
    if (p.field().modulus() != q.field().modulus())
        throw FieldMismatchError("sum of point sets over different fields");
    return PointSet(p.field(), p.dimension(), Provenance::sum_set,
                    saturating_mul(p.count_, q.count_),
                    [p, q] { return std::make_unique<SumCursor>(p, q); });
}

PointSet PointSet::grid(const PrimeField& field, std::vector<std::uint64_t> degree_bounds) {
    unsigned __int128 count = 1;
    for (std::uint64_t r : degree_bounds) {
        if (r + 1 > field.modulus())
            throw PreconditionError("field too small: grid needs " + std::to_string(r + 1) +
                                    " distinct elements, modulus is " + std::to_string(field.modulus()));
        count = saturating_mul(count, r + 1);
    }
    const std::uint32_t dim = static_cast<std::uint32_t>(degree_bounds.size());
    return PointSet(field, dim, Provenance::grid, count,
                    [degree_bounds = std::move(degree_bounds)] {
                        return std::make_unique<GridCursor>(degree_bounds);
                    });
}

} // namespace ropit
