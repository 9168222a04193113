#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "facteq/errors.hpp"

namespace facteq {

inline constexpr std::uint64_t kDefaultSieveBudgetBytes = std::uint64_t{1} << 30;

/// Immutable ascending list of every prime up to `limit()`.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  bool contains(std::uint64_t n) const;

  /// Primes p with lo <= p <= hi (hi clipped to limit()).
  std::span<const std::uint64_t> range(std::uint64_t lo, std::uint64_t hi) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

/// Segmented odd-only sieve of Eratosthenes. Throws ResourceError when the
/// estimated footprint exceeds `memory_budget_bytes`, InputError when limit < 2.
PrimeTable sieve(std::uint64_t limit,
                 std::uint64_t memory_budget_bytes = kDefaultSieveBudgetBytes);

/// The first `count` primes.
std::vector<std::uint64_t> first_primes(std::size_t count);

/// Shared table of primes below 2^20, built once.
const PrimeTable& small_primes();

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin for the whole 64-bit range.
bool is_prime(std::uint64_t n);

/// Deterministic below 2^64, strong probable-prime test (32 rounds) above.
bool is_probable_prime(const mpz_class& n);

/// Legendre symbol (a/p) for an odd prime p: -1, 0 or 1.
int legendre_symbol(const mpz_class& a, const mpz_class& p);

/// Kronecker symbol (a/n).
int kronecker_symbol(const mpz_class& a, const mpz_class& n);

/// Exact factored form of a nonzero integer. When the Pollard-rho budget runs
/// out before a composite cofactor splits, that cofactor is kept in
/// `unfactored` and complete() is false.
struct FactorizationSketch {
  int sign = 1;
  std::map<mpz_class, std::uint32_t> factors;
  mpz_class unfactored = 1;

  bool complete() const { return unfactored == 1; }
  std::uint32_t exponent(const mpz_class& p) const;
  void multiply(const mpz_class& p, std::uint32_t e);
  void merge(const FactorizationSketch& other);
  mpz_class reconstruct() const;
  std::string to_string() const;
};

struct FactorOptions {
  std::uint64_t trial_bound = 1u << 16;
  // Brent iterations per attempt on cofactors above 64 bits.
  std::uint64_t rho_iterations = 200000;
  int rho_attempts = 4;
};

FactorizationSketch factor(const mpz_class& a, const FactorOptions& opts = {});
FactorizationSketch factor(std::int64_t a);

/// Product of the distinct primes dividing |a|; radical(+-1) = 1.
/// Throws ResourceError when |a| cannot be fully factored within budget.
mpz_class radical(const mpz_class& a);

/// Product of all primes <= a.
mpz_class primorial(std::uint64_t a);

struct PrimorialCheck {
  std::uint64_t a;
  long double log_primorial;
  long double log_bound;  // a * log 4
  bool holds;
};

/// For every 2 <= a <= limit checks prod_{p<=a} p < 4^a by accumulating logs.
std::vector<PrimorialCheck> primorial_bound_check(std::uint64_t limit);

/// Chebyshev theta(x) = sum of log p over primes p <= x.
long double chebyshev_theta(std::uint64_t x);

/// floor(sqrt(n)) and exact-square test.
mpz_class isqrt(const mpz_class& n);
bool is_square(const mpz_class& n);

/// nu_p(a) for a != 0.
std::uint64_t valuation_of(const mpz_class& a, const mpz_class& p);

std::string to_string(const mpz_class& v);

}  // namespace facteq
