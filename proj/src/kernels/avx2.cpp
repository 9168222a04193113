// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <stdexcept>

#include "facteq/kernels.hpp"

namespace facteq::simd::avx2 {

namespace {

// r = t mod q for 0 <= t < 2^52, given qinv ~= 1/q. The floor may be off by
// one in either direction; one correction step each way restores [0, q).
inline __m256d reduce(__m256d t, __m256d q, __m256d qinv) {
  const __m256d k = _mm256_floor_pd(_mm256_mul_pd(t, qinv));
  __m256d r = _mm256_fnmadd_pd(k, q, t);
  r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ), q));
  r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, q, _CMP_GE_OQ), q));
  return r;
}

}  // namespace

std::optional<std::uint64_t> first_root_mod(std::span<const std::uint64_t> coeffs, std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("first_root_mod: modulus must be >= 2");
  if (q >= kVectorModulusLimit || coeffs.empty()) return scalar::first_root_mod(coeffs, q);

  const std::size_t top = coeffs.size() - 1;
  const __m256d qv = _mm256_set1_pd(static_cast<double>(q));
  const __m256d qinv = _mm256_set1_pd(1.0 / static_cast<double>(q));
  const __m256d zero = _mm256_setzero_pd();
  const __m256d lead = _mm256_set1_pd(static_cast<double>(coeffs[top]));
  const __m256d step = _mm256_set1_pd(8.0);
  const __m256d limit = _mm256_set1_pd(static_cast<double>(q));

  __m256d x0 = _mm256_setr_pd(0, 1, 2, 3);
  __m256d x1 = _mm256_setr_pd(4, 5, 6, 7);
  for (std::uint64_t base = 0; base < q; base += 8) {
    __m256d a0 = lead;
    __m256d a1 = lead;
    for (std::size_t i = top; i-- > 0;) {
      const __m256d c = _mm256_set1_pd(static_cast<double>(coeffs[i]));
      a0 = reduce(_mm256_fmadd_pd(a0, x0, c), qv, qinv);
      a1 = reduce(_mm256_fmadd_pd(a1, x1, c), qv, qinv);
    }
    const __m256d hit0 = _mm256_and_pd(_mm256_cmp_pd(a0, zero, _CMP_EQ_OQ), _mm256_cmp_pd(x0, limit, _CMP_LT_OQ));
    const __m256d hit1 = _mm256_and_pd(_mm256_cmp_pd(a1, zero, _CMP_EQ_OQ), _mm256_cmp_pd(x1, limit, _CMP_LT_OQ));
    const int mask = _mm256_movemask_pd(hit0) | (_mm256_movemask_pd(hit1) << 4);
    if (mask != 0) return base + static_cast<std::uint64_t>(__builtin_ctz(static_cast<unsigned>(mask)));
    x0 = _mm256_add_pd(x0, step);
    x1 = _mm256_add_pd(x1, step);
  }
  return std::nullopt;
}

void stride_product_mod(std::uint64_t first, std::uint64_t last, std::uint64_t step,
                        std::span<const std::uint64_t> moduli, std::span<std::uint64_t> out) {
  if (step == 0) throw std::invalid_argument("stride_product_mod: step must be positive");
  if (out.size() < moduli.size()) throw std::invalid_argument("stride_product_mod: output too small");
  if (first > last) {
    for (std::size_t i = 0; i < moduli.size(); ++i) out[i] = 1 % moduli[i];
    return;
  }
  const std::uint64_t terms = (last - first) / step + 1;

  std::size_t i = 0;
  for (; i + 4 <= moduli.size(); i += 4) {
    const auto block = moduli.subspan(i, 4);
    if (std::any_of(block.begin(), block.end(), [](std::uint64_t m) { return m >= kVectorModulusLimit || m < 2; })) {
      scalar::stride_product_mod(first, last, step, block, out.subspan(i, 4));
      continue;
    }
    alignas(32) std::array<double, 4> qd{}, kd{}, sd{};
    for (int l = 0; l < 4; ++l) {
      qd[l] = static_cast<double>(block[l]);
      kd[l] = static_cast<double>(first % block[l]);
      sd[l] = static_cast<double>(step % block[l]);
    }
    const __m256d qv = _mm256_load_pd(qd.data());
    const __m256d qinv = _mm256_div_pd(_mm256_set1_pd(1.0), qv);
    const __m256d sv = _mm256_load_pd(sd.data());
    __m256d kv = _mm256_load_pd(kd.data());
    __m256d r = _mm256_set1_pd(1.0);
    for (std::uint64_t t = 0; t < terms; ++t) {
      r = reduce(_mm256_mul_pd(r, kv), qv, qinv);
      kv = _mm256_add_pd(kv, sv);
      kv = _mm256_sub_pd(kv, _mm256_and_pd(_mm256_cmp_pd(kv, qv, _CMP_GE_OQ), qv));
    }
    alignas(32) std::array<double, 4> rd{};
    _mm256_store_pd(rd.data(), r);
    for (int l = 0; l < 4; ++l) out[i + l] = static_cast<std::uint64_t>(rd[l]);
  }
  if (i < moduli.size()) {
    scalar::stride_product_mod(first, last, step, moduli.subspan(i), out.subspan(i));
  }
}

}  // namespace facteq::simd::avx2
