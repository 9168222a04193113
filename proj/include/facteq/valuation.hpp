#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>

#include "facteq/errors.hpp"

namespace facteq {

enum class FactorialKind { Factorial, DoubleFactorial };

struct FactorialSpec {
  FactorialKind kind = FactorialKind::DoubleFactorial;
  std::uint64_t n = 0;
};

struct ValuationResult {
  mpz_class prime;
  std::uint64_t value = 0;
  // false: lifting hit the cap, `value` is only a lower bound.
  bool exact = true;
  // The cofactor A*(m+1)...n + B is literally 0, so the left side is 0.
  bool zero_cofactor = false;
};

struct ValuationOptions {
  // Cofactor lifting stops at q^(lift_cap + nu_q(m!)).
  std::uint64_t lift_cap = 64;
};

/// nu_p(n!) = sum_{i>=1} floor(n / p^i).
std::uint64_t legendre_valuation(std::uint64_t n, std::uint64_t p);
std::uint64_t legendre_valuation(std::uint64_t n, const mpz_class& p);

/// nu_p(n!!), via n!! = 2^k k! (n = 2k) or (2k+1)!/(2^k k!) (n = 2k+1).
std::uint64_t double_factorial_valuation(std::uint64_t n, std::uint64_t p);
std::uint64_t double_factorial_valuation(std::uint64_t n, const mpz_class& p);

std::uint64_t factorial_spec_valuation(const FactorialSpec& spec, const mpz_class& p);

/// prod_{k=m+1}^{n} k mod modulus.
std::uint64_t rising_product_mod(std::uint64_t m, std::uint64_t n, std::uint64_t modulus);
mpz_class rising_product_mod(std::uint64_t m, std::uint64_t n, const mpz_class& modulus);

/// Exact nu_q(A n! + B m!) for n > m, computed as nu_q(m!) + nu_q(A R + B)
/// with R = (m+1)...n, lifting the cofactor modulo growing powers of q.
ValuationResult combined_valuation(std::int64_t A, std::int64_t B, std::uint64_t n, std::uint64_t m,
                                   const mpz_class& q, const ValuationOptions& opts = {});

/// nu_q(b) + sum nu_q(spec_i). Always exact.
std::uint64_t product_valuation(std::int64_t b, std::span<const FactorialSpec> specs, const mpz_class& q);

/// n! or n!! as a big integer; 0! = 0!! = 1!! = 1.
mpz_class factorial_value(const FactorialSpec& spec);

/// A n! + B m! as a big integer.
mpz_class sum_value(std::int64_t A, std::int64_t B, std::uint64_t n, std::uint64_t m);

}  // namespace facteq
