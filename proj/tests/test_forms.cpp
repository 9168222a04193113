#include <doctest.h>

#include <cmath>
#include <random>

#include "facteq/forms.hpp"
#include "facteq/polynomial.hpp"

using namespace facteq;

namespace {

// Descending convolution.
std::vector<mpz_class> conv(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  std::vector<mpz_class> out(a.size() + b.size() - 1, mpz_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<mpz_class> expand(const FactorList& fl) {
  std::vector<mpz_class> acc = {fl.unit};
  for (const auto& e : fl.entries)
    for (std::uint32_t k = 0; k < e.multiplicity; ++k) acc = conv(acc, e.coeffs);
  return acc;
}

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

}  // namespace

TEST_CASE("binary form basics") {
  BinaryForm f({2, 0, 4});
  CHECK(f.degree() == 2);
  CHECK(f.content() == 2);
  CHECK(f(3, -1) == 22);
  CHECK(evaluate(f, 1, 1) == 6);
  CHECK_THROWS_AS(BinaryForm({0, 0, 0}), InputError);
  CHECK_THROWS_AS(BinaryForm({5}), InputError);
  CHECK(BinaryForm({1, 0, 1}).to_string() == "x^2 + y^2");
}

TEST_CASE("discriminants of known polynomials") {
  CHECK(discriminant(UnivariatePoly::from_descending({1, 0, 1})) == -4);
  CHECK(discriminant(UnivariatePoly::from_descending({1, 0, 1, 1})) == -31);
  CHECK(discriminant(UnivariatePoly::from_descending({2, 3, -5})) == 49);
  CHECK(discriminant(UnivariatePoly::from_descending({1, 0, 0, -2})) == -108);
  // Quadratic forms: b^2 - 4ac up to sign convention.
  CHECK(abs(modified_discriminant(BinaryForm({1, 1, 1}))) == 3);
}

TEST_CASE("resultant of coprime and common-factor forms") {
  const std::vector<mpz_class> a = {1, -1}, b = {1, 1}, c = {1, 0, -1};
  CHECK(abs(form_resultant(a, b)) == 2);
  CHECK(form_resultant(a, c) == 0);
}

TEST_CASE("clear_denominators") {
  const std::vector<mpq_class> q = {mpq_class(1, 2), 0, mpq_class(-1, 3)};
  const auto r = clear_denominators(q);
  CHECK(r.multiplier == 6);
  CHECK(r.coeffs == std::vector<mpz_class>{3, 0, -2});
}

TEST_CASE("depression maps f to a monic Q without z^(d-1) term") {
  for (const auto& f : bundled_polys()) {
    if (f.degree() < 2) continue;
    const auto dep = depress(f);
    const int d = f.degree();
    REQUIRE(dep.Q.degree() == d);
    CHECK(dep.Q.leading() == 1);
    CHECK(dep.Q.coeff(static_cast<std::size_t>(d - 1)) == 0);
    CHECK(dep.multiplier == pow_mpz(d, d) * pow_mpz(f.leading(), d - 1));
    for (long x = -30; x <= 30; ++x) CHECK(dep.multiplier * f(x) == dep.Q(dep.z_of(x)));
  }
  const auto dep = depress(UnivariatePoly::from_descending({1, 0, -1}));
  CHECK(dep.Q.same_coefficients(UnivariatePoly::from_descending({1, 0, -4})));
  CHECK(dep.remainder().same_coefficients(UnivariatePoly::from_descending({-4})));
}

TEST_CASE("monomial after depression") {
  CHECK(is_monomial_after_depression(UnivariatePoly::from_descending({1, -2, 1})));  // (x-1)^2
  CHECK_FALSE(is_monomial_after_depression(UnivariatePoly::from_descending({1, 0, -1})));
  CHECK(distinct_root_count(UnivariatePoly::from_descending({1, -2, 1})) == 1);
  CHECK(distinct_root_count(UnivariatePoly::from_descending({1, 0, -2, 0})) == 3);
}

TEST_CASE("sandwich threshold holds for sampled z, every bundled polynomial") {
  std::mt19937_64 rng(3);
  for (const auto& f : bundled_polys()) {
    if (f.degree() < 2) continue;
    const auto Q = depress(f).Q;
    const mpz_class z0 = sandwich_threshold(Q);
    const int d = Q.degree();
    for (int i = 0; i < 1000; ++i) {
      mpz_class z = z0 + static_cast<unsigned long>(rng() % (i < 500 ? 50 : 1000000));
      if (i % 2) z = -z;
      const mpz_class zd = pow_mpz(abs(z), static_cast<unsigned long>(d));
      const mpz_class q = abs(Q(z));
      CHECK(2 * q > zd);
      CHECK(q < 2 * zd);
    }
  }
}

TEST_CASE("univariate factorization multiplies back") {
  for (const auto& f : bundled_polys()) {
    const auto fl = factor_univariate(f);
    CHECK(expand(fl) == f.descending());
    CHECK(verify_factor_list(f, fl));
    CHECK(fl.total_degree() == static_cast<std::uint32_t>(f.degree()));
  }
  const auto fl = factor_univariate(UnivariatePoly::from_descending({1, -2, 1}));
  REQUIRE(fl.entries.size() == 1);
  CHECK(fl.entries[0].multiplicity == 2);
  CHECK_FALSE(factor_univariate(UnivariatePoly::from_descending({1, 0, 0, -2})).entries.size() != 1);
  CHECK(factor_univariate(UnivariatePoly::from_descending({1, 0, 0, 0, 4})).entries.size() == 2);  // Sophie Germain
}

TEST_CASE("form factorization, bundled set") {
  for (const auto& nf : bundled_forms()) {
    const auto fl = factor_form(nf.form);
    std::vector<mpz_class> c(nf.form.coeffs().begin(), nf.form.coeffs().end());
    CHECK_MESSAGE(expand(fl) == c, nf.name);
    CHECK(verify_factor_list(nf.form, fl));
  }
  CHECK(is_irreducible(BinaryForm({1, 0, 1})));
  CHECK_FALSE(is_irreducible(BinaryForm({1, 0, -1})));
  // x^2 y + y^3: the y factor comes from the missing top degree of f(x, 1).
  const auto fl = factor_form(BinaryForm({0, 1, 0, 1}));
  CHECK(fl.total_degree() == 3);
  CHECK(expand(fl) == std::vector<mpz_class>{0, 1, 0, 1});
}

TEST_CASE("declared factor lists are checked by evaluation") {
  BinaryForm f({1, -2, 2, -2, 1});
  FactorList good;
  good.entries = {{{1, -1}, 2}, {{1, 0, 1}, 1}};
  CHECK(verify_factor_list(f, good));
  FactorList bad = good;
  bad.entries[0].multiplicity = 1;
  CHECK_FALSE(verify_factor_list(f, bad));
  FactorList wrong;
  wrong.entries = {{{1, 1}, 2}, {{1, 0, 1}, 1}};
  CHECK_FALSE(verify_factor_list(f, wrong));
}

TEST_CASE("positive definite forms and the unit-circle minimum") {
  CHECK(is_positive_definite(BinaryForm({1, 0, 1})));
  CHECK(is_positive_definite(BinaryForm({1, 1, 1})));
  CHECK_FALSE(is_positive_definite(BinaryForm({1, 0, -2})));
  CHECK_FALSE(is_positive_definite(BinaryForm({1, 0, 0, 1})));
  for (const auto& c : std::vector<std::vector<mpz_class>>{{1, 0, 1}, {1, 1, 1}, {2, 0, 3}, {5, 4, 1}}) {
    BinaryForm f(c);
    long double lo = 1e30L;
    const long double a = c[0].get_d(), b = c[1].get_d(), cc = c[2].get_d();
    for (int i = 0; i < 20000; ++i) {
      const long double t = 2 * M_PI * i / 20000.0L;
      const long double x = std::cos(t), y = std::sin(t);
      lo = std::min(lo, a * x * x + b * x * y + cc * y * y);
    }
    CHECK(std::fabs(min_on_unit_circle(f) - lo) < 1e-6L);
  }
}

TEST_CASE("polynomial helpers") {
  using namespace facteq::poly;
  const QPoly p = {mpq_class(-1), 0, 1};  // x^2 - 1
  const QPoly q = {mpq_class(1), 1};      // x + 1
  const auto [quo, rem] = divmod(p, q);
  CHECK(rem.empty());
  CHECK(quo == QPoly{-1, 1});
  CHECK(gcd(p, q) == QPoly{1, 1});
  CHECK(taylor_shift(QPoly{0, 0, 1}, 1) == QPoly{1, 2, 1});
  const auto chain = sturm_chain(QPoly{-2, 0, 1});
  CHECK(sign_variations(chain, -2) - sign_variations(chain, 2) == 2);
  CHECK(determinant({{2, 1}, {1, 3}}) == 5);
}
