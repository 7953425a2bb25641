#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace ropit {

/// Set of variable indices (1-based, at most 64) as a bit mask.
class VarSet {
public:
    static constexpr std::uint32_t kMaxVars = 64;

    VarSet() = default;
    static VarSet from_bits(std::uint64_t bits) {
        VarSet s;
        s.bits_ = bits;
        return s;
    }
    static VarSet all(std::uint32_t n) {
        return from_bits(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }
    static VarSet single(std::uint32_t i) { return from_bits(std::uint64_t{1} << (i - 1)); }

    bool contains(std::uint32_t i) const { return (bits_ >> (i - 1)) & 1; }
    VarSet with(std::uint32_t i) const { return from_bits(bits_ | (std::uint64_t{1} << (i - 1))); }
    VarSet without(std::uint32_t i) const { return from_bits(bits_ & ~(std::uint64_t{1} << (i - 1))); }
    std::uint32_t count() const { return static_cast<std::uint32_t>(std::popcount(bits_)); }
    bool empty() const { return bits_ == 0; }
    std::uint64_t bits() const { return bits_; }
    bool is_subset_of(VarSet o) const { return (bits_ & ~o.bits_) == 0; }

    VarSet operator|(VarSet o) const { return from_bits(bits_ | o.bits_); }
    VarSet operator&(VarSet o) const { return from_bits(bits_ & o.bits_); }
    VarSet minus(VarSet o) const { return from_bits(bits_ & ~o.bits_); }
    bool operator==(const VarSet&) const = default;

    std::vector<std::uint32_t> to_vector() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i : *this) out.push_back(i);
        return out;
    }

    class iterator {
    public:
        explicit iterator(std::uint64_t rest) : rest_(rest) {}
        std::uint32_t operator*() const { return static_cast<std::uint32_t>(std::countr_zero(rest_)) + 1; }
        iterator& operator++() {
            rest_ &= rest_ - 1;
            return *this;
        }
        bool operator!=(const iterator& o) const { return rest_ != o.rest_; }

    private:
        std::uint64_t rest_;
    };
    iterator begin() const { return iterator(bits_); }
    iterator end() const { return iterator(0); }

private:
    std::uint64_t bits_ = 0;
};

} // namespace ropit
