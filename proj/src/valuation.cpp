#include "facteq/valuation.hpp"

#include <algorithm>
#include <limits>

#include "facteq/arith.hpp"

namespace facteq {

namespace {

bool fits_u64(const mpz_class& v) { return v >= 0 && mpz_fits_ulong_p(v.get_mpz_t()); }

std::uint64_t as_u64(const mpz_class& v) { return mpz_get_ui(v.get_mpz_t()); }

mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::uint64_t mod_i64(std::int64_t a, std::uint64_t m) {
  const auto r = static_cast<__int128>(a) % static_cast<__int128>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

// Gaps beyond this make (m+1)...n exceed 41! > 2^63 >= |B|, so A R + B != 0.
constexpr std::uint64_t kExactZeroGap = 40;

}  // namespace

std::uint64_t legendre_valuation(std::uint64_t n, std::uint64_t p) {
  if (p < 2) throw InputError("legendre_valuation: p must be prime");
  std::uint64_t total = 0;
  while (n >= p) {
    n /= p;
    total += n;
  }
  return total;
}

std::uint64_t legendre_valuation(std::uint64_t n, const mpz_class& p) {
  if (!fits_u64(p)) return 0;
  return legendre_valuation(n, as_u64(p));
}

std::uint64_t double_factorial_valuation(std::uint64_t n, std::uint64_t p) {
  if (p < 2) throw InputError("double_factorial_valuation: p must be prime");
  const std::uint64_t k = n / 2;
  const std::uint64_t even_part = (p == 2 ? k : 0) + legendre_valuation(k, p);
  if (n % 2 == 0) return even_part;
  return legendre_valuation(n, p) - even_part;
}

std::uint64_t double_factorial_valuation(std::uint64_t n, const mpz_class& p) {
  if (!fits_u64(p)) return 0;
  return double_factorial_valuation(n, as_u64(p));
}

std::uint64_t factorial_spec_valuation(const FactorialSpec& spec, const mpz_class& p) {
  return spec.kind == FactorialKind::Factorial ? legendre_valuation(spec.n, p)
                                               : double_factorial_valuation(spec.n, p);
}

std::uint64_t rising_product_mod(std::uint64_t m, std::uint64_t n, std::uint64_t modulus) {
  if (modulus == 0) throw InputError("rising_product_mod: modulus must be positive");
  std::uint64_t r = 1 % modulus;
  for (std::uint64_t k = m + 1; k <= n && r != 0; ++k) r = mulmod(r, k % modulus, modulus);
  return r;
}

mpz_class rising_product_mod(std::uint64_t m, std::uint64_t n, const mpz_class& modulus) {
  if (modulus <= 0) throw InputError("rising_product_mod: modulus must be positive");
  if (fits_u64(modulus)) return mpz_class(static_cast<unsigned long>(rising_product_mod(m, n, as_u64(modulus))));
  mpz_class r = 1;
  for (std::uint64_t k = m + 1; k <= n && r != 0; ++k) {
    r *= static_cast<unsigned long>(k);
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  }
  return r;
}

ValuationResult combined_valuation(std::int64_t A, std::int64_t B, std::uint64_t n, std::uint64_t m,
                                   const mpz_class& q, const ValuationOptions& opts) {
  if (A == 0 || B == 0) throw InputError("combined_valuation: A and B must be nonzero");
  if (n <= m) throw InputError("combined_valuation: requires n > m");
  if (q < 2) throw InputError("combined_valuation: q must be prime");

  ValuationResult out;
  out.prime = q;
  const std::uint64_t vm = legendre_valuation(m, q);
  const mpz_class Az(static_cast<long>(A));
  const mpz_class Bz(static_cast<long>(B));

  if (n - m <= kExactZeroGap) {
    mpz_class R = 1;
    for (std::uint64_t k = m + 1; k <= n; ++k) R *= static_cast<unsigned long>(k);
    if (Az * R + Bz == 0) {
      out.zero_cofactor = true;
      return out;
    }
  }

  // First power: the common case, kept in machine words when q allows it.
  if (fits_u64(q)) {
    const std::uint64_t qq = as_u64(q);
    const std::uint64_t r = rising_product_mod(m, n, qq);
    const auto c = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(mulmod(mod_i64(A, qq), r, qq)) + mod_i64(B, qq)) % qq);
    if (c != 0) {
      out.value = vm;
      return out;
    }
  } else {
    const mpz_class c = mod_floor(Az * rising_product_mod(m, n, q) + Bz, q);
    if (c != 0) {
      out.value = vm;
      return out;
    }
  }

  const std::uint64_t cap = std::max<std::uint64_t>(2, opts.lift_cap + vm);
  for (std::uint64_t k = 2;; k = std::min(cap, 2 * k)) {
    mpz_class modulus;
    mpz_pow_ui(modulus.get_mpz_t(), q.get_mpz_t(), k);
    const mpz_class c = mod_floor(Az * rising_product_mod(m, n, modulus) + Bz, modulus);
    if (c != 0) {
      out.value = vm + valuation_of(c, q);
      return out;
    }
    if (k >= cap) {
      out.exact = false;
      out.value = vm + k;
      return out;
    }
  }
}

std::uint64_t product_valuation(std::int64_t b, std::span<const FactorialSpec> specs, const mpz_class& q) {
  if (b == 0) throw InputError("product_valuation: b must be nonzero");
  if (specs.empty()) throw InputError("product_valuation: empty factorial list");
  if (q < 2) throw InputError("product_valuation: q must be prime");
  std::uint64_t total = valuation_of(mpz_class(static_cast<long>(b)), q);
  for (const auto& s : specs) total += factorial_spec_valuation(s, q);
  return total;
}

mpz_class factorial_value(const FactorialSpec& spec) {
  mpz_class out;
  if (spec.kind == FactorialKind::Factorial) {
    mpz_fac_ui(out.get_mpz_t(), spec.n);
  } else {
    mpz_2fac_ui(out.get_mpz_t(), spec.n);
  }
  return out;
}

mpz_class sum_value(std::int64_t A, std::int64_t B, std::uint64_t n, std::uint64_t m) {
  return mpz_class(static_cast<long>(A)) * factorial_value({FactorialKind::Factorial, n}) +
         mpz_class(static_cast<long>(B)) * factorial_value({FactorialKind::Factorial, m});
}

}  // namespace facteq
