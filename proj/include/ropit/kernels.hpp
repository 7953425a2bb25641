#pragma once

#include <cstddef>
#include <cstdint>

// Batched modular multiply-accumulate over canonical residues. These are the
// inner loops of every point sweep (program evaluation blocks, generator
// images, hitting-set scans). A portable scalar kernel is the reference;
// AVX2/NEON variants using 32x32->64 products with Montgomery reduction are
// selected at runtime when the modulus fits 31 bits. All inputs must already
// be reduced mod p; p must be an odd prime.

namespace ropit::kernels {

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b) noexcept;

/// Backend the dispatcher would pick for this modulus and length.
Backend active_backend(std::uint64_t p, std::size_t len) noexcept;

/// Forces the scalar kernels everywhere (tests, ROPIT_KERNELS=scalar).
void set_scalar_only(bool scalar_only) noexcept;
bool scalar_only() noexcept;

/// acc[i] <- (acc[i] + a[i] * c) mod p
void mul_acc_const(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                   std::size_t len, std::uint64_t p);

/// acc[i] <- (acc[i] + a[i] * b[i]) mod p
void mul_acc(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
             std::size_t len, std::uint64_t p);

namespace detail {

void mul_acc_const_scalar(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                          std::size_t len, std::uint64_t p);
void mul_acc_scalar(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
                    std::size_t len, std::uint64_t p);

#if defined(ROPIT_HAVE_AVX2)
void mul_acc_const_avx2(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                        std::size_t len, std::uint64_t p);
void mul_acc_avx2(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t len, std::uint64_t p);
bool cpu_has_avx2() noexcept;
#endif

#if defined(ROPIT_HAVE_NEON)
void mul_acc_const_neon(std::uint64_t* acc, const std::uint64_t* a, std::uint64_t c,
                        std::size_t len, std::uint64_t p);
void mul_acc_neon(std::uint64_t* acc, const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t len, std::uint64_t p);
#endif

} // namespace detail

} // namespace ropit::kernels
