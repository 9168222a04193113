#include <stdexcept>

#include "facteq/kernels.hpp"

namespace facteq::simd::scalar {

namespace {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  if (m <= (std::uint64_t{1} << 32)) return a * b % m;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

}  // namespace

std::optional<std::uint64_t> first_root_mod(std::span<const std::uint64_t> coeffs, std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("first_root_mod: modulus must be >= 2");
  if (coeffs.empty()) return 0;
  const std::size_t top = coeffs.size() - 1;
  for (std::uint64_t x = 0; x < q; ++x) {
    std::uint64_t acc = coeffs[top];
    for (std::size_t i = top; i-- > 0;) {
      acc = mul_mod(acc, x, q) + coeffs[i];
      if (acc >= q) acc -= q;
    }
    if (acc == 0) return x;
  }
  return std::nullopt;
}

void stride_product_mod(std::uint64_t first, std::uint64_t last, std::uint64_t step,
                        std::span<const std::uint64_t> moduli, std::span<std::uint64_t> out) {
  if (step == 0) throw std::invalid_argument("stride_product_mod: step must be positive");
  if (out.size() < moduli.size()) throw std::invalid_argument("stride_product_mod: output too small");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const std::uint64_t m = moduli[i];
    std::uint64_t r = 1 % m;
    for (std::uint64_t k = first; k <= last && r != 0; k += step) {
      r = mul_mod(r, k % m, m);
      if (last - k < step) break;
    }
    out[i] = r;
  }
}

}  // namespace facteq::simd::scalar
