#include "facteq/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "facteq/arith.hpp"
#include "facteq/polynomial.hpp"

namespace facteq {

namespace {

using poly::QPoly;
using poly::ZPoly;

mpz_class homogeneous_eval(std::span<const mpz_class> desc, const mpz_class& x, const mpz_class& y) {
  if (desc.empty()) return 0;
  mpz_class acc = desc[0];
  mpz_class ypow = 1;
  for (std::size_t j = 1; j < desc.size(); ++j) {
    ypow *= y;
    acc *= x;
    acc += desc[j] * ypow;
  }
  return acc;
}

mpz_class horner_desc(std::span<const mpz_class> desc, const mpz_class& x) {
  mpz_class acc = 0;
  for (const auto& c : desc) {
    acc *= x;
    acc += c;
  }
  return acc;
}

std::vector<mpz_class> positive_divisors(const mpz_class& v) {
  const mpz_class a = abs(v);
  auto sk = factor(a);
  if (!sk.complete()) throw ResourceError("cannot factor coefficient " + to_string(a) + " for rational root search");
  std::vector<mpz_class> out{1};
  for (const auto& [p, e] : sk.factors) {
    const std::size_t n = out.size();
    mpz_class pk = 1;
    for (std::uint32_t k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<ZPoly> exact_div(const ZPoly& a, const ZPoly& b) {
  auto [q, r] = poly::divmod(poly::to_rational(a), poly::to_rational(b));
  if (!r.empty()) return std::nullopt;
  ZPoly out;
  for (const auto& c : q) {
    if (c.get_den() != 1) return std::nullopt;
    out.push_back(c.get_num());
  }
  return out;
}

// Primitive, positive leading coefficient.
ZPoly normalize(ZPoly p) {
  mpz_class g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (p.back() < 0) g = -g;
  for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return p;
}

std::optional<ZPoly> find_linear_factor(const ZPoly& p) {
  for (const auto& s : positive_divisors(p.back())) {
    for (const auto& r0 : positive_divisors(p.front())) {
      for (int sign : {1, -1}) {
        const mpz_class r = sign * r0;
        if (gcd(r, s) != 1) continue;
        if (poly::eval(poly::to_rational(p), mpq_class(r, s)) == 0) return ZPoly{-r, s};
      }
    }
  }
  return std::nullopt;
}

// Quartic without rational roots: a quadratic factor g has g(0) | p(0),
// g(1) | p(1), g(-1) | p(-1); g(0) > 0 without loss of generality.
std::optional<std::pair<ZPoly, ZPoly>> find_quadratic_split(const ZPoly& p) {
  const mpz_class v1 = poly::eval(p, mpz_class(1));
  const mpz_class vm = poly::eval(p, mpz_class(-1));
  const auto d0s = positive_divisors(p.front());
  const auto d1s = positive_divisors(v1);
  const auto dms = positive_divisors(vm);
  for (const auto& c : d0s) {
    for (const auto& u1 : d1s) {
      for (int s1 : {1, -1}) {
        const mpz_class d1 = s1 * u1;
        for (const auto& um : dms) {
          for (int sm : {1, -1}) {
            const mpz_class dm = sm * um;
            const mpz_class sum = d1 + dm;
            if (mpz_odd_p(sum.get_mpz_t())) continue;
            const mpz_class a = sum / 2 - c;
            if (a == 0) continue;
            if (p.back() % a != 0) continue;
            const mpz_class b = (d1 - dm) / 2;
            ZPoly g = normalize(ZPoly{c, b, a});
            if (auto h = exact_div(p, g)) return std::make_pair(g, *h);
          }
        }
      }
    }
  }
  return std::nullopt;
}

FactorList assemble(const mpz_class& unit, const std::vector<ZPoly>& factors) {
  FactorList fl;
  fl.unit = unit;
  for (const auto& f : factors) {
    std::vector<mpz_class> desc(f.rbegin(), f.rend());
    auto it = std::find_if(fl.entries.begin(), fl.entries.end(),
                           [&](const FactorEntry& e) { return e.coeffs == desc; });
    if (it != fl.entries.end()) {
      ++it->multiplicity;
    } else {
      fl.entries.push_back({std::move(desc), 1});
    }
  }
  return fl;
}

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

std::string term_coeff(const mpz_class& c, bool first, bool bare) {
  std::string out;
  if (c < 0) {
    out = first ? "-" : " - ";
  } else if (!first) {
    out = " + ";
  }
  const mpz_class a = abs(c);
  if (a != 1 || bare) out += a.get_str();
  return out;
}

}  // namespace

std::uint32_t FactorList::total_degree() const {
  std::uint32_t t = 0;
  for (const auto& e : entries) t += e.degree() * e.multiplicity;
  return t;
}

UnivariatePoly::UnivariatePoly(std::vector<mpz_class> ascending) : c_(std::move(ascending)) {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UnivariatePoly UnivariatePoly::from_descending(std::vector<mpz_class> descending) {
  std::reverse(descending.begin(), descending.end());
  return UnivariatePoly(std::move(descending));
}

const mpz_class& UnivariatePoly::leading() const {
  if (c_.empty()) throw InputError("leading coefficient of the zero polynomial");
  return c_.back();
}

mpz_class UnivariatePoly::content() const {
  mpz_class g = 0;
  for (const auto& c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

std::vector<mpz_class> UnivariatePoly::descending() const { return {c_.rbegin(), c_.rend()}; }

mpz_class UnivariatePoly::operator()(const mpz_class& x) const { return poly::eval(c_, x); }

UnivariatePoly UnivariatePoly::derivative() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
  return UnivariatePoly(std::move(d));
}

std::string UnivariatePoly::to_string(char var) const {
  if (c_.empty()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    out += term_coeff(c_[i], first, i == 0);
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
    first = false;
  }
  return out;
}

BinaryForm::BinaryForm(std::vector<mpz_class> descending) : c_(std::move(descending)) {
  if (c_.size() < 2) throw InputError("binary form needs degree >= 1");
  if (c_.front() == 0 && c_.back() == 0) throw InputError("binary form needs a_d != 0 or a_0 != 0");
  content_ = 0;
  for (const auto& c : c_) mpz_gcd(content_.get_mpz_t(), content_.get_mpz_t(), c.get_mpz_t());
}

UnivariatePoly BinaryForm::dehomogenize() const { return UnivariatePoly::from_descending(c_); }

mpz_class BinaryForm::operator()(const mpz_class& x, const mpz_class& y) const { return homogeneous_eval(c_, x, y); }

std::string BinaryForm::to_string() const {
  std::string out;
  bool first = true;
  const std::size_t d = c_.size() - 1;
  for (std::size_t j = 0; j <= d; ++j) {
    if (c_[j] == 0) continue;
    out += term_coeff(c_[j], first, false);
    const std::size_t ex = d - j;
    const std::size_t ey = j;
    if (abs(c_[j]) != 1) out += "*";
    if (ex > 0) out += ex == 1 ? "x" : "x^" + std::to_string(ex);
    if (ex > 0 && ey > 0) out += "*";
    if (ey > 0) out += ey == 1 ? "y" : "y^" + std::to_string(ey);
    first = false;
  }
  return out;
}

ClearedCoefficients clear_denominators(std::span<const mpq_class> coeffs) {
  bool nonzero = false;
  mpz_class lcm = 1;
  for (const auto& c : coeffs) {
    if (c != 0) nonzero = true;
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  if (!nonzero) throw InputError("clear_denominators: zero polynomial");
  ClearedCoefficients out;
  out.multiplier = lcm;
  for (const auto& c : coeffs) out.coeffs.push_back(c.get_num() * (lcm / c.get_den()));
  return out;
}

mpz_class evaluate(const BinaryForm& f, const mpz_class& x, const mpz_class& y) { return f(x, y); }

mpz_class discriminant(const UnivariatePoly& p) {
  const int d = p.degree();
  if (d < 1) throw InputError("discriminant needs degree >= 1");
  if (d == 1) return 1;
  const auto pd = p.descending();
  const auto dd = p.derivative().descending();
  mpz_class res = poly::sylvester_resultant(pd, dd);
  if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1) res = -res;
  mpz_divexact(res.get_mpz_t(), res.get_mpz_t(), p.leading().get_mpz_t());
  return res;
}

mpz_class modified_discriminant(const BinaryForm& f) {
  const UnivariatePoly p = f.dehomogenize();
  const int k = p.degree();
  if (k < 1) throw InputError("modified discriminant needs deg f(x,1) >= 1");
  const mpz_class disc = discriminant(p);
  const mpz_class g = pow_mpz(f.content(), static_cast<unsigned long>(2 * k - 2));
  if (disc % g != 0) throw DataError("modified discriminant is not an integer for " + f.to_string());
  return disc / g;
}

mpz_class form_resultant(std::span<const mpz_class> f_desc, std::span<const mpz_class> g_desc) {
  return poly::sylvester_resultant(f_desc, g_desc);
}

UnivariatePoly DepressedForm::remainder() const {
  std::vector<mpz_class> c(Q.coeffs().begin(), Q.coeffs().end());
  if (!c.empty()) c.back() -= 1;
  return UnivariatePoly(std::move(c));
}

mpz_class DepressedForm::z_of(const mpz_class& x) const {
  // shift is an integer for this scaling (see depress).
  return x_scale * x + shift.get_num() / shift.get_den();
}

DepressedForm depress(const UnivariatePoly& f) {
  const int d = f.degree();
  if (d < 2) throw InputError("depress needs degree >= 2");
  const mpz_class& a = f.leading();
  const auto ud = static_cast<unsigned long>(d);
  DepressedForm out;
  out.multiplier = pow_mpz(mpz_class(ud), ud) * pow_mpz(a, ud - 1);
  out.x_scale = a * static_cast<unsigned long>(d);

  // P(y) = sum b_i y^(d-i), b_0 = 1, b_i = d^i a_i a^(i-1), a_i = coeff of x^(d-i).
  QPoly P(static_cast<std::size_t>(d) + 1);
  P[ud] = 1;
  for (unsigned long i = 1; i <= ud; ++i) {
    P[ud - i] = pow_mpz(mpz_class(ud), i) * f.coeff(ud - i) * pow_mpz(a, i - 1);
  }
  out.shift = P[ud - 1] / mpq_class(static_cast<long>(d));
  const QPoly Qq = poly::taylor_shift(P, -out.shift);
  std::vector<mpz_class> qc;
  for (const auto& c : Qq) {
    if (c.get_den() != 1) throw DataError("depression produced a non-integer coefficient");
    qc.push_back(c.get_num());
  }
  out.Q = UnivariatePoly(std::move(qc));
  if (out.Q.coeff(ud - 1) != 0 || out.Q.leading() != 1) throw DataError("depression invariant violated");
  return out;
}

bool is_monomial_after_depression(const UnivariatePoly& f) { return depress(f).remainder().is_zero(); }

int distinct_root_count(const UnivariatePoly& f) {
  if (f.degree() < 1) return 0;
  return poly::degree(poly::squarefree_part(poly::to_rational(f.coeffs())));
}

mpz_class sandwich_threshold(const UnivariatePoly& Q) {
  const int d = Q.degree();
  if (d < 1) throw InputError("sandwich_threshold needs degree >= 1");
  if (Q.leading() != 1) throw InputError("sandwich_threshold needs a monic polynomial");
  mpz_class S = 0;
  for (int i = 0; i < d; ++i) S += abs(Q.coeff(static_cast<std::size_t>(i)));
  // |Q(z) - z^d| <= S |z|^(d-2) for |z| >= 1 when the z^(d-1) term vanishes.
  if (d >= 2 && Q.coeff(static_cast<std::size_t>(d - 1)) == 0) return isqrt(2 * S) + 1;
  return 2 * S + 1;
}

FactorList factor_univariate(const UnivariatePoly& p) {
  const int d = p.degree();
  if (d < 1) throw InputError("factorization needs degree >= 1");
  if (d > 4) throw InputError("native factorization supports degree <= 4; supply a factor list");
  mpz_class unit = p.content();
  if (p.leading() < 0) unit = -unit;
  ZPoly rem(p.coeffs().begin(), p.coeffs().end());
  for (auto& c : rem) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), unit.get_mpz_t());

  std::vector<ZPoly> factors;
  while (rem.front() == 0) {
    rem.erase(rem.begin());
    factors.push_back(ZPoly{0, 1});
  }
  while (poly::degree(rem) >= 1) {
    if (poly::degree(rem) == 1) {
      factors.push_back(rem);
      break;
    }
    if (auto lin = find_linear_factor(rem)) {
      rem = *exact_div(rem, *lin);
      factors.push_back(*lin);
      continue;
    }
    if (poly::degree(rem) == 4) {
      if (auto split = find_quadratic_split(rem)) {
        factors.push_back(split->first);
        factors.push_back(split->second);
        break;
      }
    }
    factors.push_back(rem);
    break;
  }
  return assemble(unit, factors);
}

FactorList factor_form(const BinaryForm& f) {
  if (f.degree() > 4) throw InputError("native factorization supports degree <= 4; supply a factor list");
  const UnivariatePoly p = f.dehomogenize();
  FactorList fl;
  if (p.degree() <= 0) {
    fl.unit = f.trailing();
  } else {
    fl = factor_univariate(p);
  }
  const auto missing = f.degree() - static_cast<std::uint32_t>(std::max(0, p.degree()));
  if (missing > 0) fl.entries.push_back({{mpz_class(0), mpz_class(1)}, missing});
  return fl;
}

FactorList factors_of(const BinaryForm& f) { return f.factor_list() ? *f.factor_list() : factor_form(f); }

FactorList factors_of(const UnivariatePoly& p) { return p.factor_list() ? *p.factor_list() : factor_univariate(p); }

bool is_irreducible(const BinaryForm& f) { return factors_of(f).irreducible(); }

bool verify_factor_list(const BinaryForm& f, const FactorList& fl, std::uint64_t seed) {
  if (fl.total_degree() != f.degree() || fl.unit == 0) return false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  for (int i = 0; i < 20; ++i) {
    const mpz_class x(dist(rng)), y(dist(rng));
    mpz_class rhs = fl.unit;
    for (const auto& e : fl.entries) rhs *= pow_mpz(homogeneous_eval(e.coeffs, x, y), e.multiplicity);
    if (rhs != f(x, y)) return false;
  }
  return true;
}

bool verify_factor_list(const UnivariatePoly& p, const FactorList& fl, std::uint64_t seed) {
  if (static_cast<int>(fl.total_degree()) != p.degree() || fl.unit == 0) return false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  for (int i = 0; i < 20; ++i) {
    const mpz_class x(dist(rng));
    mpz_class rhs = fl.unit;
    for (const auto& e : fl.entries) rhs *= pow_mpz(horner_desc(e.coeffs, x), e.multiplicity);
    if (rhs != p(x)) return false;
  }
  return true;
}

bool is_positive_definite(const BinaryForm& f) {
  if (f.degree() != 2) return false;
  const auto c = f.coeffs();
  return c[0] > 0 && c[1] * c[1] - 4 * c[0] * c[2] < 0;
}

long double min_on_unit_circle(const BinaryForm& f) {
  if (f.degree() != 2) throw InputError("min_on_unit_circle needs a quadratic form");
  const auto c = f.coeffs();
  const long double a = c[0].get_d();
  const long double b = c[1].get_d();
  const long double cc = c[2].get_d();
  return (a + cc) / 2 - std::sqrt((a - cc) * (a - cc) / 4 + b * b / 4);
}

std::vector<NamedForm> bundled_forms() {
  auto F = [](std::string name, std::initializer_list<long> c) {
    std::vector<mpz_class> v;
    for (long x : c) v.emplace_back(x);
    return NamedForm{std::move(name), BinaryForm(std::move(v))};
  };
  return {
      F("x2+y2", {1, 0, 1}),
      F("x2+xy+y2", {1, 1, 1}),
      F("x2+2y2", {1, 0, 2}),
      F("x2-2y2", {1, 0, -2}),
      F("2x2+3y2", {2, 0, 3}),
      F("x3+2y3", {1, 0, 0, 2}),
      F("x3-3xy2+y3", {1, 0, -3, 1}),
      F("x4+y4", {1, 0, 0, 0, 1}),
      F("x4+x3y+x2y2+xy3+y4", {1, 1, 1, 1, 1}),
      F("(x2+y2)^2", {1, 0, 2, 0, 1}),
      F("(x-y)^2(x2+y2)", {1, -2, 2, -2, 1}),
      F("x2-y2", {1, 0, -1}),
  };
}

std::vector<UnivariatePoly> bundled_polys() {
  auto P = [](std::initializer_list<long> desc) {
    std::vector<mpz_class> v;
    for (long x : desc) v.emplace_back(x);
    return UnivariatePoly::from_descending(std::move(v));
  };
  return {P({1, 0, 0}),   P({1, 0, -1}),    P({1, 1, 0}),      P({1, 0, 0, 0}), P({1, 0, 0, -2}),
          P({1, 0, 1}),   P({1, -2, 1}),    P({1, 0, 0, 0, -2}), P({2, 3, -5}),  P({1, 0, 1, 1}),
          P({3, -1, 4, 1, -5})};
}

}  // namespace facteq
