#include "facteq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace facteq {

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
    : limit_(limit), primes_(std::move(primes)) {}

bool PrimeTable::contains(std::uint64_t n) const {
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

std::span<const std::uint64_t> PrimeTable::range(std::uint64_t lo, std::uint64_t hi) const {
  auto first = std::lower_bound(primes_.begin(), primes_.end(), lo);
  auto last = std::upper_bound(first, primes_.end(), hi);
  return {first, last};
}

namespace {

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t isqrt64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

PrimeTable sieve(std::uint64_t limit, std::uint64_t memory_budget_bytes) {
  if (limit < 2) throw InputError("sieve limit must be >= 2");
  const long double ln = std::log(static_cast<long double>(std::max<std::uint64_t>(limit, 3)));
  const long double estimate =
      8.0L * 1.26L * static_cast<long double>(limit) / ln + (1u << 18);
  if (estimate > static_cast<long double>(memory_budget_bytes)) {
    throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds memory budget");
  }

  const std::uint64_t root = isqrt64(limit);
  const std::vector<std::uint64_t> base = simple_sieve(root);
  std::vector<std::uint64_t> primes;
  primes.reserve(static_cast<std::size_t>(1.26L * limit / ln) + 16);
  primes.push_back(2);

  // Segment index i stands for the odd number lo + 2i.
  constexpr std::uint64_t kSegment = 1u << 18;
  std::vector<unsigned char> marks(kSegment);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegment) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSegment - 1);
    const std::uint64_t count = (hi - lo) / 2 + 1;
    std::fill(marks.begin(), marks.begin() + count, 0);
    for (std::uint64_t p : base) {
      if (p == 2) continue;
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = start; j <= hi; j += 2 * p) marks[(j - lo) / 2] = 1;
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!marks[i]) primes.push_back(lo + 2 * i);
    }
  }
  return PrimeTable(limit, std::move(primes));
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  if (count == 0) return {};
  std::uint64_t bound = 16;
  if (count >= 6) {
    const double n = static_cast<double>(count);
    bound = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 16;
  }
  auto table = sieve(bound);
  std::vector<std::uint64_t> out(table.primes().begin(), table.primes().begin() + count);
  return out;
}

const PrimeTable& small_primes() {
  static const PrimeTable table = sieve(1u << 20);
  return table;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a proven witness set below 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_probable_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(mpz_get_ui(n.get_mpz_t()));
  return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

int legendre_symbol(const mpz_class& a, const mpz_class& p) {
  mpz_class r = a % p;
  if (r < 0) r += p;
  return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

int kronecker_symbol(const mpz_class& a, const mpz_class& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::uint32_t FactorizationSketch::exponent(const mpz_class& p) const {
  auto it = factors.find(p);
  return it == factors.end() ? 0 : it->second;
}

void FactorizationSketch::multiply(const mpz_class& p, std::uint32_t e) {
  if (e == 0) return;
  factors[p] += e;
}

void FactorizationSketch::merge(const FactorizationSketch& other) {
  sign *= other.sign;
  for (const auto& [p, e] : other.factors) multiply(p, e);
  unfactored *= other.unfactored;
}

mpz_class FactorizationSketch::reconstruct() const {
  mpz_class out = unfactored;
  for (const auto& [p, e] : factors) {
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    out *= pe;
  }
  return sign < 0 ? mpz_class(-out) : out;
}

std::string FactorizationSketch::to_string() const {
  std::ostringstream os;
  if (sign < 0) os << "-";
  bool first = true;
  for (const auto& [p, e] : factors) {
    if (!first) os << "*";
    first = false;
    os << p.get_str();
    if (e > 1) os << "^" << e;
  }
  if (!complete()) os << (first ? "" : "*") << "[" << unfactored.get_str() << "]";
  if (first && complete()) os << "1";
  return os.str();
}

namespace {

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Brent's cycle finding; returns a nontrivial factor of composite n.
std::uint64_t rho64(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min<std::uint64_t>(128, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd64(q, n);
        k += 128;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

std::optional<mpz_class> rho_big(const mpz_class& n, std::uint64_t iterations, int attempts) {
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const unsigned long c = 1 + 2 * static_cast<unsigned long>(attempt);
    mpz_class y = 2, x = 2, ys = 2, q = 1, g = 1, diff;
    auto f = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    std::uint64_t r = 1, used = 0;
    while (g == 1 && used < iterations) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) f(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t batch = std::min<std::uint64_t>(128, r - k);
        for (std::uint64_t i = 0; i < batch; ++i) {
          f(y);
          diff = x - y;
          q *= diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += batch;
        used += batch;
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        f(ys);
        diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != 1 && g != n) return g;
  }
  return std::nullopt;
}

void split(const mpz_class& n, const FactorOptions& opts, FactorizationSketch& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out.multiply(n, 1);
    return;
  }
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    const std::uint64_t d = rho64(mpz_get_ui(n.get_mpz_t()));
    split(mpz_class(static_cast<unsigned long>(d)), opts, out);
    split(n / mpz_class(static_cast<unsigned long>(d)), opts, out);
    return;
  }
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned long k = 2; k < mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
      mpz_class root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
        FactorizationSketch inner;
        split(root, opts, inner);
        for (const auto& [p, e] : inner.factors) out.multiply(p, e * static_cast<std::uint32_t>(k));
        mpz_class rest;
        mpz_pow_ui(rest.get_mpz_t(), inner.unfactored.get_mpz_t(), k);
        out.unfactored *= rest;
        return;
      }
    }
  }
  auto d = rho_big(n, opts.rho_iterations, opts.rho_attempts);
  if (!d) {
    out.unfactored *= n;
    return;
  }
  split(*d, opts, out);
  split(n / *d, opts, out);
}

}  // namespace

FactorizationSketch factor(const mpz_class& a, const FactorOptions& opts) {
  if (a == 0) throw InputError("factor: input must be nonzero");
  FactorizationSketch out;
  out.sign = a < 0 ? -1 : 1;
  mpz_class n = abs(a);
  for (std::uint64_t p : small_primes().primes()) {
    if (p > opts.trial_bound) break;
    const mpz_class pz(static_cast<unsigned long>(p));
    if (pz * pz > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      const auto e = static_cast<std::uint32_t>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
      out.multiply(pz, e);
    }
  }
  split(n, opts, out);
  // A sub-split may have been left unfactored; keep the map prime-only.
  return out;
}

FactorizationSketch factor(std::int64_t a) { return factor(mpz_class(static_cast<long>(a))); }

mpz_class radical(const mpz_class& a) {
  if (a == 0) throw InputError("radical: input must be nonzero");
  const auto sk = factor(a);
  if (!sk.complete()) throw ResourceError("radical: could not fully factor " + a.get_str());
  mpz_class out = 1;
  for (const auto& [p, e] : sk.factors) out *= p;
  return out;
}

mpz_class primorial(std::uint64_t a) {
  mpz_class out;
  mpz_primorial_ui(out.get_mpz_t(), a);
  return out;
}

std::vector<PrimorialCheck> primorial_bound_check(std::uint64_t limit) {
  if (limit < 2) throw InputError("primorial_bound_check: limit must be >= 2");
  const auto table = sieve(limit);
  const long double log4 = std::log(4.0L);
  std::vector<PrimorialCheck> out;
  out.reserve(limit - 1);
  long double acc = 0;
  auto next = table.primes().begin();
  for (std::uint64_t a = 2; a <= limit; ++a) {
    while (next != table.primes().end() && *next <= a) acc += std::log(static_cast<long double>(*next++));
    const long double bound = static_cast<long double>(a) * log4;
    out.push_back({a, acc, bound, acc < bound});
  }
  return out;
}

long double chebyshev_theta(std::uint64_t x) {
  if (x < 2) return 0;
  long double acc = 0;
  const PrimeTable table = x < small_primes().limit() ? PrimeTable() : sieve(x);
  const auto primes = x < small_primes().limit() ? small_primes().range(2, x) : table.primes();
  for (std::uint64_t p : primes) acc += std::log(static_cast<long double>(p));
  return acc;
}

mpz_class isqrt(const mpz_class& n) {
  if (n < 0) throw InputError("isqrt of negative value");
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

std::uint64_t valuation_of(const mpz_class& a, const mpz_class& p) {
  if (a == 0) throw InputError("valuation of zero");
  mpz_class t = a;
  return mpz_remove(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
}

std::string to_string(const mpz_class& v) { return v.get_str(); }

}  // namespace facteq
