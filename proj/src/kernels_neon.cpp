#include "ropit/kernels.hpp"

#if defined(ROPIT_HAVE_NEON)

#include <arm_neon.h>

namespace ropit::kernels::detail {

namespace {

// Same R = 2^32 Montgomery scheme as the AVX2 variant, on 2x64-bit lanes.
struct Mont32 {
    std::uint64_t p;
    std::uint32_t pinv;
    std::uint64_t r2;

    explicit Mont32(std::uint64_t p_) : p(p_) {
        std::uint32_t inv = static_cast<std::uint32_t>(p);
        for (int i = 0; i < 5; ++i) inv *= 2u - static_cast<std::uint32_t>(p) * inv;
        pinv = ~inv + 1u;
        r2 = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % p);
    }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b_mont) const {
        std::uint64_t t = a * b_mont;
        std::uint64_t m = static_cast<std::uint32_t>(t) * static_cast<std::uint64_t>(pinv) & 0xffffffffu;
        std::uint64_t u = (t + m * p) >> 32;
        return u >= p ? u - p : u;
    }

    std::uint64_t to_mont(std::uint64_t x) const { return mul(x, r2); }
};

inline uint64x2_t redc(uint64x2_t t, uint64x2_t vp, uint32x2_t p32, uint32x2_t pinv32) {
    uint32x2_t m = vmul_u32(vmovn_u64(t), pinv32);
    uint64x2_t u = vshrq_n_u64(vaddq_u64(t, vmull_u32(m, p32)), 32);
    return vsubq_u64(u, vandq_u64(vcgeq_u64(u, vp), vp));
}

inline uint64x2_t add_mod(uint64x2_t x, uint64x2_t y, uint64x2_t vp) {
    uint64x2_t s = vaddq_u64(x, y);
    return vsubq_u64(s, vandq_u64(vcgeq_u64(s, vp), vp));
}

} // namespace

void mul_acc_const_neon(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                        std::size_t len, std::uint64_t p) {
    Mont32 mont(p);
    const std::uint64_t cm = mont.to_mont(c % p);
    const uint32x2_t vc = vdup_n_u32(static_cast<std::uint32_t>(cm));
    const uint64x2_t vp = vdupq_n_u64(p);
    const uint32x2_t p32 = vdup_n_u32(static_cast<std::uint32_t>(p));
    const uint32x2_t pinv32 = vdup_n_u32(mont.pinv);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        uint32x2_t a32 = vmovn_u64(vld1q_u64(a + i));
        uint64x2_t u = redc(vmull_u32(a32, vc), vp, p32, pinv32);
        uint64x2_t s = add_mod(vld1q_u64(acc + i), u, vp);
        vst1q_u64(acc + i, s);
    }
    for (; i < len; ++i) {
        std::uint64_t s = acc[i] + mont.mul(a[i], cm);
        acc[i] = s >= p ? s - p : s;
    }
}

void mul_acc_neon(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t len, std::uint64_t p) {
    Mont32 mont(p);
    const uint32x2_t r2_32 = vdup_n_u32(static_cast<std::uint32_t>(mont.r2));
    const uint64x2_t vp = vdupq_n_u64(p);
    const uint32x2_t p32 = vdup_n_u32(static_cast<std::uint32_t>(p));
    const uint32x2_t pinv32 = vdup_n_u32(mont.pinv);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        uint32x2_t a32 = vmovn_u64(vld1q_u64(a + i));
        uint32x2_t b32 = vmovn_u64(vld1q_u64(b + i));
        uint64x2_t bm = redc(vmull_u32(b32, r2_32), vp, p32, pinv32);
        uint64x2_t u = redc(vmull_u32(a32, vmovn_u64(bm)), vp, p32, pinv32);
        uint64x2_t s = add_mod(vld1q_u64(acc + i), u, vp);
        vst1q_u64(acc + i, s);
    }
    for (; i < len; ++i) {
        std::uint64_t s = acc[i] + mont.mul(a[i], mont.to_mont(b[i]));
        acc[i] = s >= p ? s - p : s;
    }
}

} // namespace ropit::kernels::detail

#endif // ROPIT_HAVE_NEON
