#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facteq/errors.hpp"

namespace facteq {

/// One factor of a factor list. Coefficients are descending; for a binary
/// form they are the homogeneous factor c_k x^k + ... + c_0 y^k, for a
/// univariate target the polynomial c_k x^k + ... + c_0.
struct FactorEntry {
  std::vector<mpz_class> coeffs;
  std::uint32_t multiplicity = 1;

  std::uint32_t degree() const { return coeffs.empty() ? 0 : static_cast<std::uint32_t>(coeffs.size() - 1); }
};

/// f = unit * prod entries[i]^multiplicity.
struct FactorList {
  mpz_class unit = 1;
  std::vector<FactorEntry> entries;
  // true when supplied by the user rather than computed.
  bool declared = false;

  std::uint32_t total_degree() const;
  bool irreducible() const { return entries.size() == 1 && entries[0].multiplicity == 1; }
};

class UnivariatePoly {
 public:
  UnivariatePoly() = default;
  /// Ascending coefficients; trailing zeros are dropped.
  explicit UnivariatePoly(std::vector<mpz_class> ascending);
  static UnivariatePoly from_descending(std::vector<mpz_class> descending);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const mpz_class> coeffs() const { return c_; }
  /// Coefficient of x^i (zero past the degree).
  mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  const mpz_class& leading() const;
  mpz_class content() const;
  std::vector<mpz_class> descending() const;

  mpz_class operator()(const mpz_class& x) const;
  UnivariatePoly derivative() const;

  const std::optional<FactorList>& factor_list() const { return factors_; }
  void set_factor_list(FactorList fl) { factors_ = std::move(fl); }

  std::string to_string(char var = 'x') const;
  bool same_coefficients(const UnivariatePoly& o) const { return c_ == o.c_; }

 private:
  std::vector<mpz_class> c_;
  std::optional<FactorList> factors_;
};

class BinaryForm {
 public:
  BinaryForm() = default;
  /// Descending coefficients a_d .. a_0; requires a_d != 0 or a_0 != 0.
  explicit BinaryForm(std::vector<mpz_class> descending);

  std::uint32_t degree() const { return static_cast<std::uint32_t>(c_.size() - 1); }
  std::span<const mpz_class> coeffs() const { return c_; }
  const mpz_class& leading() const { return c_.front(); }
  const mpz_class& trailing() const { return c_.back(); }
  const mpz_class& content() const { return content_; }

  /// f(x, 1).
  UnivariatePoly dehomogenize() const;
  mpz_class operator()(const mpz_class& x, const mpz_class& y) const;

  const std::optional<FactorList>& factor_list() const { return factors_; }
  void set_factor_list(FactorList fl) { factors_ = std::move(fl); }

  std::string to_string() const;
  bool same_coefficients(const BinaryForm& o) const { return c_ == o.c_; }

 private:
  std::vector<mpz_class> c_;
  mpz_class content_;
  std::optional<FactorList> factors_;
};

struct ClearedCoefficients {
  std::vector<mpz_class> coeffs;  // same order as the input
  mpz_class multiplier;           // positive; coeffs = multiplier * input
};

/// Scales rational coefficients by the lcm of their denominators.
ClearedCoefficients clear_denominators(std::span<const mpq_class> coeffs);

mpz_class evaluate(const BinaryForm& f, const mpz_class& x, const mpz_class& y);

/// (-1)^(d(d-1)/2) Res(p, p') / lead(p); 1 for linear p.
mpz_class discriminant(const UnivariatePoly& p);

/// disc(f(x,1)) / content^(2k-2) with k = deg f(x,1). Throws DataError when
/// the quotient is not an integer.
mpz_class modified_discriminant(const BinaryForm& f);

/// Resultant of two binary forms (descending coefficient lists).
mpz_class form_resultant(std::span<const mpz_class> f_desc, std::span<const mpz_class> g_desc);

/// multiplier * f(x) = Q(z) with z = x_scale * x + shift, Q monic with no
/// z^(d-1) term. multiplier = d^d a^(d-1), x_scale = a d, a = lead(f).
struct DepressedForm {
  UnivariatePoly Q;
  mpz_class multiplier;
  mpz_class x_scale;
  mpq_class shift;
  /// Q(z) - z^d.
  UnivariatePoly remainder() const;
  mpz_class z_of(const mpz_class& x) const;
};

DepressedForm depress(const UnivariatePoly& f);

bool is_monomial_after_depression(const UnivariatePoly& f);
int distinct_root_count(const UnivariatePoly& f);

/// Z0 with |z|^d/2 < |Q(z)| < 2|z|^d for all |z| >= Z0 (Q monic, depressed).
mpz_class sandwich_threshold(const UnivariatePoly& Q);

/// Factorization over Q for degree <= 4; throws InputError above that.
FactorList factor_univariate(const UnivariatePoly& p);
FactorList factor_form(const BinaryForm& f);

/// The declared factor list when present, otherwise the computed one.
FactorList factors_of(const BinaryForm& f);
FactorList factors_of(const UnivariatePoly& p);

bool is_irreducible(const BinaryForm& f);

/// Compares both sides at 20 pseudo-random points.
bool verify_factor_list(const BinaryForm& f, const FactorList& fl, std::uint64_t seed = 0x5eed);
bool verify_factor_list(const UnivariatePoly& p, const FactorList& fl, std::uint64_t seed = 0x5eed);

/// Quadratic forms: a > 0 and b^2 - 4ac < 0.
bool is_positive_definite(const BinaryForm& f);

/// Minimum of a positive definite quadratic form on the unit circle.
long double min_on_unit_circle(const BinaryForm& f);

struct NamedForm {
  std::string name;
  BinaryForm form;
};

/// Small fixed set of forms (irreducible and reducible) used by scans and tests.
std::vector<NamedForm> bundled_forms();

/// Univariate targets used by tests and bound scans.
std::vector<UnivariatePoly> bundled_polys();

}  // namespace facteq
