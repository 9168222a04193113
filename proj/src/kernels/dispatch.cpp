#include <atomic>
#include <cstdlib>
#include <string>

#include "facteq/kernels.hpp"

namespace facteq::simd {

namespace {

// -1: automatic, otherwise static_cast<int>(Isa).
std::atomic<int> g_forced{-1};

bool cpu_has_avx2() {
#if defined(FACTEQ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa env_or_detected() {
  static const Isa chosen = [] {
    const Isa best = detected_isa();
    if (const char* env = std::getenv("FACTEQ_ISA")) {
      if (auto parsed = parse_isa(env)) {
        return *parsed == Isa::Avx2 && best != Isa::Avx2 ? Isa::Scalar : *parsed;
      }
    }
    return best;
  }();
  return chosen;
}

}  // namespace

Isa detected_isa() {
  static const Isa best = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return best;
}

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  return env_or_detected();
}

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    g_forced.store(-1);
    return;
  }
  const Isa usable = (*isa == Isa::Avx2 && detected_isa() != Isa::Avx2) ? Isa::Scalar : *isa;
  g_forced.store(static_cast<int>(usable));
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  return std::nullopt;
}

std::optional<std::uint64_t> first_root_mod(std::span<const std::uint64_t> coeffs, std::uint64_t q, Isa isa) {
#if defined(FACTEQ_HAVE_AVX2)
  if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2) return avx2::first_root_mod(coeffs, q);
#endif
  (void)isa;
  return scalar::first_root_mod(coeffs, q);
}

void stride_product_mod(std::uint64_t first, std::uint64_t last, std::uint64_t step,
                        std::span<const std::uint64_t> moduli, std::span<std::uint64_t> out, Isa isa) {
#if defined(FACTEQ_HAVE_AVX2)
  if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2) {
    avx2::stride_product_mod(first, last, step, moduli, out);
    return;
  }
#endif
  (void)isa;
  scalar::stride_product_mod(first, last, step, moduli, out);
}

}  // namespace facteq::simd
