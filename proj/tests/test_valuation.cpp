#include <doctest.h>

#include "facteq/arith.hpp"
#include "facteq/valuation.hpp"

using namespace facteq;

namespace {

mpz_class fact(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class dfact(unsigned long n) {
  mpz_class r = 1;
  for (unsigned long k = n; k >= 2; k -= 2) r *= k;
  return r;
}

std::uint64_t remove_count(const mpz_class& v, unsigned long p) {
  mpz_class rest;
  const mpz_class pz = p;
  return mpz_remove(rest.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());
}

}  // namespace

TEST_CASE("Legendre formula against factoring n!") {
  for (unsigned long n = 0; n <= 120; ++n) {
    const mpz_class f = fact(n);
    for (std::uint64_t p : small_primes().range(2, 130)) CHECK(legendre_valuation(n, p) == remove_count(f, p));
  }
  CHECK(legendre_valuation(100, mpz_class(7)) == 16);
}

TEST_CASE("double factorial valuation against direct products") {
  for (unsigned long n = 0; n <= 80; ++n) {
    const mpz_class f = dfact(n);
    for (std::uint64_t p : small_primes().range(2, 90)) CHECK(double_factorial_valuation(n, p) == remove_count(f, p));
  }
}

TEST_CASE("factorial_value and the split identities") {
  for (unsigned long n = 0; n <= 30; ++n) {
    CHECK(factorial_value({FactorialKind::Factorial, n}) == fact(n));
    const mpz_class d = factorial_value({FactorialKind::DoubleFactorial, n});
    CHECK(d == dfact(n));
    const unsigned long m = n / 2;
    mpz_class two_m;
    mpz_ui_pow_ui(two_m.get_mpz_t(), 2, m);
    if (n % 2 == 0) CHECK(d == two_m * fact(m));
    else CHECK(d * two_m * fact(m) == fact(2 * m + 1));
  }
}

TEST_CASE("rising_product_mod") {
  CHECK(rising_product_mod(3, 6, 1000) == 120);  // 4*5*6
  CHECK(rising_product_mod(5, 5, 7) == 1);
  CHECK(rising_product_mod(0, 20, mpz_class("100000000000000000000")) == fact(20) % mpz_class("100000000000000000000"));
}

TEST_CASE("combined_valuation against big-integer factor-and-divide") {
  for (std::int64_t A : {1, -1, 2, -2, 3, 5}) {
    for (std::int64_t B : {1, -1, 2, -2, 3, 7}) {
      for (unsigned long n = 1; n <= 22; ++n) {
        for (unsigned long m = 0; m < n; ++m) {
          const mpz_class v = A * fact(n) + B * fact(m);
          if (v == 0) {
            CHECK(combined_valuation(A, B, n, m, 2).zero_cofactor);
            continue;
          }
          CHECK(sum_value(A, B, n, m) == v);
          for (std::uint64_t p : small_primes().range(2, 60)) {
            const auto r = combined_valuation(A, B, n, m, mpz_class(static_cast<unsigned long>(p)));
            CHECK(r.exact);
            CHECK(r.value == remove_count(v, p));
          }
        }
      }
    }
  }
}

TEST_CASE("combined_valuation with large primes and lifting") {
  // 1*n! - 1*m! with huge cancellation at q.
  const auto r = combined_valuation(1, 1, 40, 39, mpz_class(41));
  CHECK(r.value == remove_count(fact(40) + fact(39), 41));
  const auto big = combined_valuation(1, -1, 200, 100, mpz_class(101));
  CHECK(big.value == remove_count(fact(200) - fact(100), 101));
  ValuationOptions capped;
  capped.lift_cap = 0;
  // 5! + 4! = 144 = 2^4 3^2: nu_2(4!) = 3, cofactor 6 has one more 2; with
  // no lifting room the result is only a lower bound.
  const auto lb = combined_valuation(1, 1, 5, 4, mpz_class(2), capped);
  CHECK(lb.value <= 4);
}

TEST_CASE("product_valuation") {
  const std::vector<FactorialSpec> specs = {{FactorialKind::DoubleFactorial, 9}, {FactorialKind::Factorial, 6}};
  const mpz_class v = 12 * dfact(9) * fact(6);
  for (std::uint64_t p : small_primes().range(2, 13))
    CHECK(product_valuation(12, specs, mpz_class(static_cast<unsigned long>(p))) == remove_count(v, p));
}
