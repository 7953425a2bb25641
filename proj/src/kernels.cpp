#include "ropit/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace ropit::kernels {

namespace {

constexpr std::uint64_t kSimdModulusLimit = std::uint64_t{1} << 31;
constexpr std::size_t kSimdLengthThreshold = 8;

std::atomic<bool> g_scalar_only{false};

bool env_forces_scalar() {
    static const bool forced = [] {
        const char* v = std::getenv("ROPIT_KERNELS");
        return v != nullptr && v[0] == 's';
    }();
    return forced;
}

} // namespace

const char* backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

void set_scalar_only(bool scalar_only) noexcept { g_scalar_only.store(scalar_only); }
bool scalar_only() noexcept { return g_scalar_only.load() || env_forces_scalar(); }

Backend active_backend(std::uint64_t p, std::size_t len) noexcept {
    if (scalar_only() || p >= kSimdModulusLimit || len < kSimdLengthThreshold)
        return Backend::scalar;
#if defined(ROPIT_HAVE_AVX2)
    if (detail::cpu_has_avx2()) return Backend::avx2;
#endif
#if defined(ROPIT_HAVE_NEON)
    return Backend::neon;
#endif
    return Backend::scalar;
}

namespace detail {

void mul_acc_const_scalar(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                          std::size_t len, std::uint64_t p) {
    for (std::size_t i = 0; i < len; ++i) {
        std::uint64_t prod = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a[i]) * c % p);
        std::uint64_t s = acc[i] + prod;
        acc[i] = s >= p ? s - p : s;
    }
}

void mul_acc_scalar(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
                    std::size_t len, std::uint64_t p) {
    for (std::size_t i = 0; i < len; ++i) {
        std::uint64_t prod = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a[i]) * b[i] % p);
        std::uint64_t s = acc[i] + prod;
        acc[i] = s >= p ? s - p : s;
    }
}

} // namespace detail

void mul_acc_const(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                   std::size_t len, std::uint64_t p) {
    switch (active_backend(p, len)) {
#if defined(ROPIT_HAVE_AVX2)
        case Backend::avx2: detail::mul_acc_const_avx2(acc, a, c, len, p); return;
#endif
#if defined(ROPIT_HAVE_NEON)
        case Backend::neon: detail::mul_acc_const_neon(acc, a, c, len, p); return;
#endif
        default: detail::mul_acc_const_scalar(acc, a, c, len, p); return;
    }
}

void mul_acc(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
             std::size_t len, std::uint64_t p) {
    switch (active_backend(p, len)) {
#if defined(ROPIT_HAVE_AVX2)
        case Backend::avx2: detail::mul_acc_avx2(acc, a, b, len, p); return;
#endif
#if defined(ROPIT_HAVE_NEON)
        case Backend::neon: detail::mul_acc_neon(acc, a, b, len, p); return;
#endif
        default: detail::mul_acc_scalar(acc, a, b, len, p); return;
    }
}

} // namespace ropit::kernels
