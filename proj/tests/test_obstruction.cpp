#include <doctest.h>

#include "facteq/arith.hpp"
#include "facteq/obstruction.hpp"

using namespace facteq;

namespace {

bool brute_root(const std::vector<long>& desc, std::uint64_t q) {
  for (std::uint64_t x = 0; x < q; ++x) {
    long long acc = 0;
    for (long c : desc) acc = ((acc * static_cast<long long>(x) + c) % static_cast<long long>(q) + q) % q;
    if (acc == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("has_root_mod against brute force, both paths") {
  const std::vector<std::vector<long>> polys = {{1, 0, 1}, {1, 0, 0, -2}, {1, 1, 1}, {1, 0, 1, 1}, {3, -1, 4, 1, -5}};
  for (const auto& p : polys) {
    std::vector<mpz_class> desc(p.begin(), p.end());
    for (std::uint64_t q : small_primes().range(2, 400)) {
      CHECK(has_root_mod(desc, q) == brute_root(p, q));
      ObstructionOptions frob;
      frob.root_scan_limit = 1;  // forces the gcd(x^q - x, f) path
      CHECK(has_root_mod(desc, q, frob) == brute_root(p, q));
    }
  }
}

TEST_CASE("x^2 + y^2: eligible exactly at q = 3 mod 4 (Euler criterion oracle)") {
  const BinaryForm f({1, 0, 1});
  for (std::uint64_t q : small_primes().range(2, 5000)) {
    const bool minus_one_is_square = q == 2 || powmod(q - 1, (q - 1) / 2, q) == 1;
    const auto p = is_obstruction_prime(f, q);
    CHECK(p.eligible == !minus_one_is_square);
    if (p.eligible) {
      CHECK(p.forced_exponent == 2);
      CHECK(p.reason == ObstructionReason::NoRootModQ);
    }
  }
  CHECK(is_obstruction_prime(f, 2).excluded == Exclusion::DividesInvariants);
  CHECK(is_obstruction_prime(f, 13).excluded == Exclusion::HasRoot);
}

TEST_CASE("x^2 + xy + y^2: eligible exactly at q = 2 mod 3") {
  const BinaryForm f({1, 1, 1});
  for (std::uint64_t q : small_primes().range(2, 3000)) {
    // q = 2: x^2 + x + 1 is odd for every x. Odd q: -3 must be a nonresidue.
    const bool expect = q == 2 || (q > 3 && powmod((q - 3) % q, (q - 1) / 2, q) == q - 1);
    CHECK(obstruction_profile(f, q).eligible == expect);
  }
}

TEST_CASE("reducible forms use the gcd of degrees and multiplicities") {
  // (x^2 + y^2)^2: at q = 3 mod 4 the forced exponent is 4.
  const BinaryForm sq({1, 0, 2, 0, 1});
  const auto p7 = obstruction_profile_reducible(sq, 7);
  CHECK(p7.eligible);
  CHECK(p7.forced_exponent == 4);
  // x^2 - y^2 splits everywhere.
  CHECK_FALSE(obstruction_profile(BinaryForm({1, 0, -1}), 7).eligible);
  // (x - y)^2 (x^2 + y^2): a linear factor with multiplicity 2 has a root,
  // gcd(4, 2) = 2 at q = 3 mod 4.
  const BinaryForm mixed({1, -2, 2, -2, 1});
  const auto pm = obstruction_profile(mixed, 7);
  CHECK(pm.excluded != Exclusion::HypothesisFails);
  CHECK(verify_profile(mixed, pm));
}

TEST_CASE("univariate targets") {
  // x^2: root 0 with multiplicity 2, E = 2 at every prime.
  const UnivariatePoly sq = UnivariatePoly::from_descending({1, 0, 0});
  for (std::uint64_t q : small_primes().range(2, 50)) {
    const auto p = obstruction_profile(sq, q);
    CHECK(p.eligible);
    CHECK(p.forced_exponent == 2);
  }
  // x^2 + 1 has no root mod 3: 3 never divides a value.
  const auto p = obstruction_profile(UnivariatePoly::from_descending({1, 0, 1}), 3);
  CHECK(p.eligible);
  CHECK(p.never_divides);
  CHECK(verify_forced_exponent(UnivariatePoly::from_descending({1, 0, 1}), 3, 0, true));
}

TEST_CASE("exclusions") {
  // 2 divides the leading coefficient of 2x^2 + 3y^2.
  CHECK(obstruction_profile(BinaryForm({2, 0, 3}), 2).excluded == Exclusion::DividesLeading);
  CHECK(obstruction_profile(BinaryForm({2, 0, 3}), 3).excluded != Exclusion::None);
  CHECK_THROWS_AS(obstruction_profile(BinaryForm({1, 0, 1}), 9), InputError);
}

TEST_CASE("exhaustive forced exponent checks on the bundled forms, q <= 60") {
  for (const auto& nf : bundled_forms()) {
    const ProfileEngine engine(nf.form);
    for (std::uint64_t q : small_primes().range(2, 60)) {
      const auto p = engine.profile(q);
      CHECK_MESSAGE(verify_profile(nf.form, p), nf.name, " q=", q);
    }
  }
  for (const auto& f : bundled_polys()) {
    for (std::uint64_t q : small_primes().range(2, 60)) CHECK(verify_profile(f, obstruction_profile(f, q)));
  }
}

TEST_CASE("the exhaustive checker detects false claims") {
  // x^2 + y^2 at 5 is not an obstruction: 5 = 1^2 + 2^2.
  CHECK_FALSE(verify_forced_exponent(BinaryForm({1, 0, 1}), 5, 2, true));
  CHECK(verify_forced_exponent(BinaryForm({1, 0, 1}), 7));
  CHECK_FALSE(verify_forced_exponent(UnivariatePoly::from_descending({1, 0, -1}), 3, 2, false));
}

TEST_CASE("scan density and determinism across worker counts") {
  const RightSide f = BinaryForm({1, 0, 1});
  const auto a = scan_obstruction_primes(f, 3, 20000, 1);
  const auto b = scan_obstruction_primes(f, 3, 20000, 4);
  REQUIRE(a.eligible.size() == b.eligible.size());
  for (std::size_t i = 0; i < a.eligible.size(); ++i) CHECK(a.eligible[i].prime == b.eligible[i].prime);
  CHECK(a.density > 0.48);
  CHECK(a.density < 0.52);
  const auto small = scan_obstruction_primes(f, 3, 100, 2);
  CHECK(small.eligible.size() == 13);
}
