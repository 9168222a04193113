#include "facteq/polynomial.hpp"

#include <stdexcept>

namespace facteq::poly {

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }
int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly to_rational(std::span<const mpz_class> p) {
  QPoly out(p.begin(), p.end());
  trim(out);
  return out;
}

ZPoly to_primitive_integer(const QPoly& p) {
  mpz_class lcm = 1;
  for (const auto& c : p) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  ZPoly out;
  out.reserve(p.size());
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_class v = c.get_num() * (lcm / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    out.push_back(std::move(v));
  }
  if (g > 1) {
    for (auto& c : out) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
  trim(out);
  return out;
}

QPoly derivative(const QPoly& p) {
  QPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<unsigned long>(i));
  trim(out);
  return out;
}

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  QPoly rem = a;
  trim(rem);
  if (rem.size() < b.size()) return {QPoly{}, rem};
  QPoly quot(rem.size() - b.size() + 1);
  const mpq_class& lead = b.back();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const mpq_class c = rem[k + b.size() - 1] / lead;
    quot[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) rem[k + j] -= c * b[j];
  }
  trim(quot);
  trim(rem);
  return {quot, rem};
}

QPoly gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const mpq_class lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

QPoly squarefree_part(const QPoly& p) {
  if (degree(p) < 1) return p;
  const QPoly g = gcd(p, derivative(p));
  return divmod(p, g).first;
}

QPoly taylor_shift(const QPoly& p, const mpq_class& s) {
  // Horner in the ring Q[x]: result = (...(c_d (x+s) + c_{d-1})(x+s) + ...).
  QPoly out;
  const QPoly lin{s, mpq_class(1)};
  for (std::size_t i = p.size(); i-- > 0;) {
    out = mul(out, lin);
    if (out.empty()) out.resize(1);
    out[0] += p[i];
    trim(out);
  }
  return out;
}

mpq_class eval(const QPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

mpz_class eval(const ZPoly& p, const mpz_class& x) {
  mpz_class acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) {
    acc *= x;
    acc += p[i];
  }
  return acc;
}

int sign_at(const ZPoly& p, const mpz_class& x) { return sgn(eval(p, x)); }

std::vector<ZPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain;
  chain.push_back(p);
  trim(chain.back());
  chain.push_back(derivative(chain.back()));
  while (!chain.back().empty()) {
    auto r = divmod(chain[chain.size() - 2], chain.back()).second;
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    // Positive rescaling keeps the sign pattern and the coefficients small.
    chain.push_back(to_rational(to_primitive_integer(r)));
  }
  if (chain.back().empty()) chain.pop_back();
  std::vector<ZPoly> out;
  out.reserve(chain.size());
  for (const auto& q : chain) out.push_back(to_primitive_integer(q));
  return out;
}

int sign_variations(const std::vector<ZPoly>& chain, const mpz_class& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

mpz_class determinant(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(v);
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpz_class sylvester_resultant(std::span<const mpz_class> f_desc, std::span<const mpz_class> g_desc) {
  if (f_desc.empty() || g_desc.empty()) throw std::invalid_argument("resultant of empty coefficient list");
  const std::size_t a = f_desc.size() - 1;
  const std::size_t b = g_desc.size() - 1;
  const std::size_t n = a + b;
  if (n == 0) return 1;
  std::vector<std::vector<mpz_class>> s(n, std::vector<mpz_class>(n, 0));
  for (std::size_t r = 0; r < b; ++r)
    for (std::size_t j = 0; j <= a; ++j) s[r][r + j] = f_desc[j];
  for (std::size_t r = 0; r < a; ++r)
    for (std::size_t j = 0; j <= b; ++j) s[b + r][r + j] = g_desc[j];
  return determinant(std::move(s));
}

}  // namespace facteq::poly
