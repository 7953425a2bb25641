#include "ropit/kernels.hpp"

#if defined(ROPIT_HAVE_AVX2)

#include <immintrin.h>

namespace ropit::kernels::detail {

namespace {

// Montgomery context with R = 2^32, valid for odd p < 2^31. Plain residues in,
// plain residues out: one side of each product is pre-lifted by R so the
// REDC step cancels the factor again.
struct Mont32 {
    std::uint64_t p;
    std::uint32_t pinv; // -p^{-1} mod 2^32
    std::uint64_t r2;   // 2^64 mod p

    explicit Mont32(std::uint64_t p_) : p(p_) {
        std::uint32_t inv = static_cast<std::uint32_t>(p);
        for (int i = 0; i < 5; ++i) inv *= 2u - static_cast<std::uint32_t>(p) * inv;
        pinv = ~inv + 1u;
        r2 = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % p);
    }

    // (a * b_mont) / R mod p, result < p. Requires a < p, b_mont < p.
    std::uint64_t mul(std::uint64_t a, std::uint64_t b_mont) const {
        std::uint64_t t = a * b_mont; // < 2^62
        std::uint64_t m = static_cast<std::uint32_t>(t) * static_cast<std::uint64_t>(pinv) & 0xffffffffu;
        std::uint64_t u = (t + m * p) >> 32;
        return u >= p ? u - p : u;
    }

    std::uint64_t to_mont(std::uint64_t x) const { return mul(x, r2); }
};

inline __m256i redc(__m256i t, __m256i vp, __m256i vpinv, __m256i lo32) {
    __m256i m = _mm256_and_si256(_mm256_mul_epu32(t, vpinv), lo32);
    __m256i u = _mm256_srli_epi64(_mm256_add_epi64(t, _mm256_mul_epu32(m, vp)), 32);
    // subtract p where u >= p (operands < 2^33, signed compare is fine)
    return _mm256_sub_epi64(u, _mm256_andnot_si256(_mm256_cmpgt_epi64(vp, u), vp));
}

inline __m256i add_mod(__m256i x, __m256i y, __m256i vp) {
    __m256i s = _mm256_add_epi64(x, y);
    return _mm256_sub_epi64(s, _mm256_andnot_si256(_mm256_cmpgt_epi64(vp, s), vp));
}

} // namespace

bool cpu_has_avx2() noexcept {
    static const bool has = __builtin_cpu_supports("avx2");
    return has;
}

void mul_acc_const_avx2(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                        std::size_t len, std::uint64_t p) {
    Mont32 mont(p);
    const std::uint64_t cm = mont.to_mont(c % p);
    const __m256i vc = _mm256_set1_epi64x(static_cast<long long>(cm));
    const __m256i vp = _mm256_set1_epi64x(static_cast<long long>(p));
    const __m256i vpinv = _mm256_set1_epi64x(static_cast<long long>(mont.pinv));
    const __m256i lo32 = _mm256_set1_epi64x(0xffffffffLL);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i u = redc(_mm256_mul_epu32(va, vc), vp, vpinv, lo32);
        __m256i s = add_mod(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i)), u, vp);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), s);
    }
    for (; i < len; ++i) {
        std::uint64_t s = acc[i] + mont.mul(a[i], cm);
        acc[i] = s >= p ? s - p : s;
    }
}

void mul_acc_avx2(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t len, std::uint64_t p) {
    Mont32 mont(p);
    const __m256i vr2 = _mm256_set1_epi64x(static_cast<long long>(mont.r2));
    const __m256i vp = _mm256_set1_epi64x(static_cast<long long>(p));
    const __m256i vpinv = _mm256_set1_epi64x(static_cast<long long>(mont.pinv));
    const __m256i lo32 = _mm256_set1_epi64x(0xffffffffLL);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i bm = redc(_mm256_mul_epu32(vb, vr2), vp, vpinv, lo32);
        __m256i u = redc(_mm256_mul_epu32(va, bm), vp, vpinv, lo32);
        __m256i s = add_mod(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i)), u, vp);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), s);
    }
    for (; i < len; ++i) {
        std::uint64_t s = acc[i] + mont.mul(a[i], mont.to_mont(b[i]));
        acc[i] = s >= p ? s - p : s;
    }
}

} // namespace ropit::kernels::detail

#endif // ROPIT_HAVE_AVX2
