#include <doctest.h>

#include <cmath>
#include <random>

#include "facteq/arith.hpp"

using namespace facteq;

namespace {

bool naive_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("sieve agrees with trial division") {
  const auto t = sieve(20000);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t n = 0; n <= 20000; ++n)
    if (naive_prime(n)) expect.push_back(n);
  REQUIRE(t.size() == expect.size());
  CHECK(std::equal(expect.begin(), expect.end(), t.primes().begin()));
  CHECK(t.contains(19997));
  CHECK_FALSE(t.contains(19999));
  const auto r = t.range(100, 113);
  CHECK(std::vector<std::uint64_t>(r.begin(), r.end()) == std::vector<std::uint64_t>{101, 103, 107, 109, 113});
}

TEST_CASE("sieve budget and bad limits") {
  CHECK_THROWS_AS(sieve(1), InputError);
  CHECK_THROWS_AS(sieve(std::uint64_t{1} << 40, 1 << 20), ResourceError);
  CHECK(first_primes(6) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("mulmod and powmod against 128-bit arithmetic") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t m = (rng() >> 1) | 1;
    const std::uint64_t a = rng() % m, b = rng() % m;
    CHECK(mulmod(a, b, m) == static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m));
  }
  // Fermat on a 61-bit prime.
  const std::uint64_t p = (std::uint64_t{1} << 61) - 1;
  CHECK(powmod(3, p - 1, p) == 1);
}

TEST_CASE("is_prime: small range exact, known large values") {
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime(n) == naive_prime(n));
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to 2,3,5,7
  CHECK(is_probable_prime(mpz_class("170141183460469231731687303715884105727")));
  CHECK_FALSE(is_probable_prime(mpz_class("170141183460469231731687303715884105729")));
}

TEST_CASE("legendre symbol matches Euler's criterion") {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 101ULL, 65537ULL}) {
    for (std::uint64_t a = 0; a < std::min<std::uint64_t>(p, 300); ++a) {
      const std::uint64_t e = powmod(a, (p - 1) / 2, p);
      const int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
      CHECK(legendre_symbol(mpz_class(static_cast<unsigned long>(a)), mpz_class(static_cast<unsigned long>(p))) == expect);
    }
  }
  CHECK(kronecker_symbol(2, 7) == 1);
  CHECK(kronecker_symbol(2, 3) == -1);
}

TEST_CASE("factor reconstructs its input") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    mpz_class a = static_cast<unsigned long>(rng() >> 8);
    if (a == 0) a = 1;
    if (i % 2) a = -a;
    const auto sk = factor(a);
    CHECK(sk.complete());
    CHECK(sk.reconstruct() == a);
    for (const auto& [p, e] : sk.factors) CHECK(is_probable_prime(p));
  }
  // 70-bit semiprime: rho on a cofactor above 64 bits.
  const mpz_class p1("1000003"), p2("1125899906842597");
  const auto sk = factor(p1 * p2);
  CHECK(sk.complete());
  CHECK(sk.exponent(p1) == 1);
  CHECK(sk.exponent(p2) == 1);
}

TEST_CASE("factor with trial division only keeps the cofactor") {
  FactorOptions o;
  o.rho_attempts = 0;
  const mpz_class n = mpz_class("1099511627791") * mpz_class("1099511628401") * 12;
  const auto sk = factor(n, o);
  CHECK(sk.exponent(2) == 2);
  CHECK(sk.exponent(3) == 1);
  CHECK_FALSE(sk.complete());
  CHECK(sk.reconstruct() == n);
  CHECK(sk.to_string() == "2^2*3*[1208925820318316616492191]");
}

TEST_CASE("radical and primorial") {
  CHECK(radical(720) == 30);
  CHECK(radical(-1) == 1);
  CHECK(primorial(10) == 210);
  CHECK(primorial(1) == 1);
}

TEST_CASE("chebyshev theta by direct log sum") {
  long double expect = 0;
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19}) expect += std::log(static_cast<long double>(p));
  CHECK(std::fabs(chebyshev_theta(21) - expect) < 1e-12L);
  CHECK(std::fabs(chebyshev_theta(21) - 16.0876L) < 1e-3L);
  CHECK(chebyshev_theta(1) == 0);
}

TEST_CASE("primorial below 4^a up to 2000") {
  const auto rows = primorial_bound_check(2000);
  REQUIRE(rows.size() == 1999);
  for (const auto& r : rows) CHECK(r.holds);
  // exact check at a small point: 2*3*5*7 = 210 < 4^7
  CHECK(std::fabs(rows[5].log_primorial - std::log(210.0L)) < 1e-12L);
}

TEST_CASE("isqrt and is_square") {
  CHECK(isqrt(mpz_class("1000000000000000000000000")) == mpz_class("1000000000000"));
  CHECK(isqrt(99) == 9);
  CHECK(is_square(144));
  CHECK_FALSE(is_square(-4));
  CHECK_FALSE(is_square(145));
  CHECK_THROWS_AS(isqrt(-1), InputError);
  CHECK(valuation_of(mpz_class(96), 2) == 5);
}
