#pragma once

// Data-parallel residue kernels. Every kernel has a scalar reference
// implementation; an AVX2+FMA variant is picked at runtime when the CPU
// supports it. Both variants return identical results for all inputs.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace facteq::simd {

enum class Isa { Scalar, Avx2 };

/// Best instruction set supported by this CPU and this build.
Isa detected_isa();

/// detected_isa() unless overridden by force_isa() or FACTEQ_ISA=scalar|avx2.
Isa active_isa();

/// Pins the dispatch target; nullopt restores automatic selection. Forcing an
/// ISA the CPU lacks falls back to Scalar.
void force_isa(std::optional<Isa> isa);

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

// The vector paths do modular arithmetic in doubles; moduli at or above this
// limit take the scalar path inside the vector kernels.
inline constexpr std::uint64_t kVectorModulusLimit = std::uint64_t{1} << 25;

/// Smallest x in [0, q) with sum coeffs[i] x^i == 0 (mod q). Coefficients are
/// ascending and already reduced into [0, q). Requires 1 < q < 2^63.
std::optional<std::uint64_t> first_root_mod(std::span<const std::uint64_t> coeffs,
                                            std::uint64_t q, Isa isa = active_isa());

/// out[i] = (first * (first+step) * ... * last') mod moduli[i], where last' is
/// the largest term <= last. An empty product (first > last) is 1 mod m.
void stride_product_mod(std::uint64_t first, std::uint64_t last, std::uint64_t step,
                        std::span<const std::uint64_t> moduli, std::span<std::uint64_t> out,
                        Isa isa = active_isa());

namespace scalar {
std::optional<std::uint64_t> first_root_mod(std::span<const std::uint64_t> coeffs, std::uint64_t q);
void stride_product_mod(std::uint64_t first, std::uint64_t last, std::uint64_t step,
                        std::span<const std::uint64_t> moduli, std::span<std::uint64_t> out);
}  // namespace scalar

#if defined(FACTEQ_HAVE_AVX2)
namespace avx2 {
std::optional<std::uint64_t> first_root_mod(std::span<const std::uint64_t> coeffs, std::uint64_t q);
void stride_product_mod(std::uint64_t first, std::uint64_t last, std::uint64_t step,
                        std::span<const std::uint64_t> moduli, std::span<std::uint64_t> out);
}  // namespace avx2
#endif

}  // namespace facteq::simd
