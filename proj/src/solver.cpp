#include "facteq/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "facteq/io.hpp"
#include "facteq/polynomial.hpp"

namespace facteq {

namespace {

using poly::ZPoly;

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

__int128 isqrt128(__int128 v) {
  if (v < 0) return -1;
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

bool fits_small(const mpz_class& v, int bits) { return mpz_sizeinbase(v.get_mpz_t(), 2) <= static_cast<std::size_t>(bits); }

std::vector<mpz_class> sturm_integer_roots(const ZPoly& g) {
  const auto h = poly::to_primitive_integer(poly::squarefree_part(poly::to_rational(g)));
  const auto chain = poly::sturm_chain(poly::to_rational(h));
  // Cauchy: every root has |r| < 1 + max |h_i / h_d|.
  mpz_class mx = 0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) mx = std::max(mx, mpz_class(abs(h[i])));
  mpz_class lead = abs(h.back());
  mpz_class B;
  mpz_cdiv_q(B.get_mpz_t(), mx.get_mpz_t(), lead.get_mpz_t());
  B += 1;

  struct Span {
    mpz_class a, b;
    int va, vb;
  };
  std::vector<mpz_class> roots;
  std::vector<Span> stack;
  const mpz_class a0 = -B - 1;
  stack.push_back({a0, B, poly::sign_variations(chain, a0), poly::sign_variations(chain, B)});
  // V(a) - V(b) = number of distinct real roots in (a, b].
  while (!stack.empty()) {
    Span s = std::move(stack.back());
    stack.pop_back();
    if (s.va - s.vb <= 0) continue;
    if (s.b - s.a == 1) {
      if (poly::sign_at(h, s.b) == 0) roots.push_back(s.b);
      continue;
    }
    mpz_class mid;
    mpz_class width = s.b - s.a;
    mpz_fdiv_q_2exp(mid.get_mpz_t(), width.get_mpz_t(), 1);
    mid += s.a;
    const int vm = poly::sign_variations(chain, mid);
    stack.push_back({mid, s.b, vm, s.vb});
    stack.push_back({std::move(s.a), mid, s.va, vm});
  }
  return roots;
}

std::string digits_note(const mpz_class& v) { return std::to_string(mpz_sizeinbase(v.get_mpz_t(), 10)); }

std::vector<std::uint64_t> primes_above(std::uint64_t n, std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : small_primes().range(std::max<std::uint64_t>(n + 1, 3), small_primes().limit())) {
    out.push_back(p);
    if (out.size() == count) break;
  }
  return out;
}

// Left side factorization: the factorial parts exactly, the sum cofactor by
// trial division (cheap) or with rho (deep).
FactorizationSketch left_sketch(const Equation& eq, std::span<const std::uint64_t> cell, const FactorOptions& fopts) {
  FactorizationSketch sk;
  if (eq.is_sum()) {
    const std::uint64_t n = cell[0], m = cell[1];
    mpz_class R = 1;
    for (std::uint64_t k = m + 1; k <= n; ++k) R *= static_cast<unsigned long>(k);
    const mpz_class C = R * eq.A + eq.B;
    sk = factor(C, fopts);
    for (std::uint64_t p : small_primes().range(2, m)) {
      const auto e = legendre_valuation(m, p);
      if (e > 0) sk.multiply(mpz_class(static_cast<unsigned long>(p)), static_cast<std::uint32_t>(e));
    }
    if (m >= small_primes().limit()) throw ResourceError("left_sketch: m beyond the small prime table");
  } else {
    std::uint64_t nmax = 0;
    for (auto n : cell) nmax = std::max(nmax, n);
    if (nmax >= small_primes().limit()) throw ResourceError("left_sketch: n beyond the small prime table");
    sk = factor(mpz_class(static_cast<long>(eq.b)));
    for (std::uint64_t p : small_primes().range(2, nmax)) {
      std::uint64_t e = 0;
      for (auto n : cell) e += factorial_spec_valuation({eq.kind, n}, mpz_class(static_cast<unsigned long>(p)));
      if (e > 0) sk.multiply(mpz_class(static_cast<unsigned long>(p)), static_cast<std::uint32_t>(e));
    }
  }
  if (eq.scaling != 1) sk.merge(factor(eq.scaling));
  // Keep the unfactored part coprime to the listed primes.
  for (const auto& [p, e] : std::map<mpz_class, std::uint32_t>(sk.factors)) {
    if (sk.unfactored == 1) break;
    mpz_class rest;
    const auto k = mpz_remove(rest.get_mpz_t(), sk.unfactored.get_mpz_t(), p.get_mpz_t());
    if (k > 0) {
      sk.unfactored = rest;
      sk.multiply(p, static_cast<std::uint32_t>(k));
    }
  }
  return sk;
}

FactorOptions trial_only(const FactorOptions& base) {
  FactorOptions o = base;
  o.rho_attempts = 0;
  o.rho_iterations = 0;
  return o;
}

bool is_sum_of_two_squares_form(const BinaryForm& f) {
  const auto c = f.coeffs();
  return f.degree() == 2 && c[0] == 1 && c[1] == 0 && c[2] == 1;
}

void set_solution(CellRecord& rec, std::vector<mpz_class> w, std::string note) {
  rec.status = CellStatus::Solution;
  rec.witness = std::move(w);
  rec.note = std::move(note);
}

void set_exhausted(CellRecord& rec, std::string note) {
  rec.status = CellStatus::Exhausted;
  rec.note = std::move(note);
}

mpz_class pick_root(std::vector<mpz_class> roots) {
  std::sort(roots.begin(), roots.end(), [](const mpz_class& a, const mpz_class& b) {
    const int c = cmp(abs(a), abs(b));
    return c != 0 ? c < 0 : a > b;
  });
  return roots.front();
}

void solve_univariate(const SearchTask& task, CellRecord& rec, const Equation& eq, std::span<const std::uint64_t> cell,
                      const mpz_class& N) {
  const auto& f = std::get<UnivariatePoly>(eq.rhs);
  if (f.degree() == 2) {
    // 4a f(x) = (2ax + b)^2 - D, so a root needs 4aN + D to be a square.
    const mpz_class a = f.coeff(2), b = f.coeff(1), c = f.coeff(0);
    std::uint64_t top = 0;
    for (auto n : cell) top = std::max(top, n);
    const auto ps = primes_above(top, 20);
    if (square_filter(eq, cell, 4 * a, b * b - 4 * a * c, ps, task.certify.isa)) {
      set_exhausted(rec, "residue filter: 4aN + D is a non-residue modulo a prime");
      return;
    }
  }
  auto roots = integer_root(f, N);
  if (!roots.empty()) {
    set_solution(rec, {pick_root(std::move(roots))}, "integer root");
    return;
  }
  set_exhausted(rec, "complete integer root search: none");
}

bool try_factor_certificate(const SearchTask& task, const ProfileEngine& engine, CellRecord& rec, const Equation& eq,
                            std::span<const std::uint64_t> cell) {
  for (const auto& [p, e] : rec.left.factors) {
    if (!mpz_fits_ulong_p(p.get_mpz_t())) continue;
    if (auto cert = certify_at_prime(eq, cell, mpz_get_ui(p.get_mpz_t()), engine, task.certify)) {
      rec.status = CellStatus::Certified;
      rec.certificate = std::move(cert);
      rec.note = "prime found by factoring the left side";
      return true;
    }
  }
  return false;
}

void solve_two_squares(const SearchTask& task, const ProfileEngine& engine, CellRecord& rec, const Equation& eq,
                       std::span<const std::uint64_t> cell, const mpz_class& N) {
  const BinaryForm& f = std::get<BinaryForm>(eq.rhs);
  rec.left = left_sketch(eq, cell, task.factoring);
  const auto& sk = rec.left;
  for (const auto& [p, e] : sk.factors) {
    if (e % 2 == 0 || mpz_fdiv_ui(p.get_mpz_t(), 4) != 3) continue;
    if (try_factor_certificate(task, engine, rec, eq, cell)) return;
    set_exhausted(rec, "prime " + p.get_str() + " = 3 mod 4 divides N to an odd power");
    return;
  }
  auto build = [&](const FactorizationSketch& full) {
    auto pt = two_squares(full);
    if (!pt) return false;
    if (f(pt->first, pt->second) != N) throw std::logic_error("two-squares construction does not evaluate to N");
    set_solution(rec, {pt->first, pt->second}, "sum of two squares from the factorization");
    return true;
  };
  if (sk.complete()) {
    if (!build(sk)) throw std::logic_error("complete factorization without odd 3 mod 4 prime must be representable");
    return;
  }
  const mpz_class& U = sk.unfactored;
  if (mpz_fdiv_ui(U.get_mpz_t(), 4) == 3) {
    set_exhausted(rec, "unfactored cofactor = 3 mod 4: some prime = 3 mod 4 divides N to an odd power");
    return;
  }
  if (is_probable_prime(U)) {
    FactorizationSketch full = sk;
    full.unfactored = 1;
    full.multiply(U, 1);
    if (build(full)) return;
  }
  if (try_factor_certificate(task, engine, rec, eq, cell)) return;
  rec.status = CellStatus::Unknown;
  rec.note = "cofactor with " + digits_note(U) + " digits not factored";
}

void solve_binary(const SearchTask& task, const ProfileEngine& engine, CellRecord& rec, const Equation& eq,
                  std::span<const std::uint64_t> cell, const mpz_class& N) {
  const BinaryForm& f = std::get<BinaryForm>(eq.rhs);
  if (is_positive_definite(f)) {
    if (N < 0) {
      set_exhausted(rec, "positive definite form, negative value");
      return;
    }
    const long double range = std::ceil(std::sqrt(N.get_d() / min_on_unit_circle(f))) + 1;
    if (range <= static_cast<long double>(task.max_x_range)) {
      if (auto pt = represent_definite_quadratic(f, N, task.max_x_range)) {
        set_solution(rec, {pt->first, pt->second}, "enumeration");
      } else {
        set_exhausted(rec, "exhaustive enumeration of the definite form: none");
      }
      return;
    }
    if (is_sum_of_two_squares_form(f)) {
      solve_two_squares(task, engine, rec, eq, cell, N);
      return;
    }
  }
  const auto r = represent_general_form(f, N, task.ball);
  if (r.status == RepStatus::Found) {
    set_solution(rec, {r.point->first, r.point->second}, "bounded search");
    return;
  }
  if (r.status == RepStatus::LocallyImpossible) {
    set_exhausted(rec, "no solution modulo " + std::to_string(r.obstruction_modulus));
    return;
  }
  rec.left = left_sketch(eq, cell, task.factoring);
  if (try_factor_certificate(task, engine, rec, eq, cell)) return;
  rec.status = CellStatus::Unknown;
  rec.note = std::string("bounded search: ") + std::string(to_string(r.status));
}

// A certified cell must not have a solution; checked where a complete
// method is cheap.
void cross_check(const SearchTask& task, const Equation& eq, std::span<const std::uint64_t> cell) {
  const mpz_class N = left_value(eq, cell);
  if (const auto* p = std::get_if<UnivariatePoly>(&eq.rhs)) {
    if (mpz_sizeinbase(N.get_mpz_t(), 2) > 4096) return;
    if (!integer_root(*p, N).empty()) throw std::logic_error("certified cell has an integer solution");
    return;
  }
  const auto& f = std::get<BinaryForm>(eq.rhs);
  if (!is_positive_definite(f) || N < 0) return;
  const long double range = std::ceil(std::sqrt(N.get_d() / min_on_unit_circle(f))) + 1;
  if (range > 1'000'000.0L) return;
  if (represent_definite_quadratic(f, N, task.max_x_range)) throw std::logic_error("certified cell is represented");
}

CellRecord classify_plain(const SearchTask& task, const ProfileEngine& engine, const Equation& eq,
                          std::span<const std::uint64_t> cell) {
  CellRecord rec;
  rec.cell.assign(cell.begin(), cell.end());
  const auto out = certify_cell(eq, cell, engine, task.certify);
  if (out.zero_left_side) {
    rec.status = CellStatus::Degenerate;
    rec.note = "left side is zero";
    return rec;
  }
  rec.left = left_sketch(eq, cell, trial_only(task.factoring));
  if (out.certificate) {
    if (task.cross_check) cross_check(task, eq, cell);
    rec.status = CellStatus::Certified;
    rec.certificate = out.certificate;
    return rec;
  }
  const mpz_class N = left_value(eq, cell);
  if (std::holds_alternative<UnivariatePoly>(eq.rhs)) {
    solve_univariate(task, rec, eq, cell, N);
  } else {
    solve_binary(task, engine, rec, eq, cell, N);
  }
  return rec;
}

}  // namespace

std::optional<IntPoint> represent_definite_quadratic(const BinaryForm& f, const mpz_class& N, std::uint64_t max_x_range) {
  if (!is_positive_definite(f)) throw InputError("represent_definite_quadratic needs a positive definite quadratic form");
  if (N < 0) return std::nullopt;
  const auto c = f.coeffs();
  const mpz_class &a = c[0], &b = c[1], &cc = c[2];
  const long double lam = min_on_unit_circle(f);
  const long double xr = std::ceil(std::sqrt(N.get_d() / lam)) + 1;
  if (xr > static_cast<long double>(max_x_range)) throw ResourceError("definite form enumeration range too large");
  const auto X = static_cast<long>(xr);

  if (fits_small(N, 60) && fits_small(a, 20) && fits_small(b, 20) && fits_small(cc, 20)) {
    const __int128 A = a.get_si(), Bq = b.get_si(), C = cc.get_si(), NN = N.get_si();
    for (long x = X; x >= -X; --x) {
      const __int128 disc = (Bq * x) * (Bq * x) - 4 * C * (A * x * x - NN);
      if (disc < 0) continue;
      const __int128 s = isqrt128(disc);
      if (s * s != disc) continue;
      for (const __int128 num : {-Bq * x + s, -Bq * x - s}) {
        if (num % (2 * C) == 0)
          return IntPoint{mpz_class(x), mpz_class(static_cast<long>(num / (2 * C)))};
      }
    }
    return std::nullopt;
  }
  for (long x = X; x >= -X; --x) {
    const mpz_class xz(x);
    const mpz_class disc = (b * xz) * (b * xz) - 4 * cc * (a * xz * xz - N);
    if (disc < 0 || !is_square(disc)) continue;
    const mpz_class s = isqrt(disc);
    for (const mpz_class& num : {mpz_class(-b * xz + s), mpz_class(-b * xz - s)}) {
      if (num % (2 * cc) == 0) return IntPoint{xz, mpz_class(num / (2 * cc))};
    }
  }
  return std::nullopt;
}

std::string_view to_string(RepStatus s) {
  switch (s) {
    case RepStatus::Found: return "FOUND";
    case RepStatus::NoneInBall: return "NONE_IN_BALL";
    case RepStatus::UnknownBeyondBall: return "UNKNOWN_BEYOND_BALL";
    case RepStatus::LocallyImpossible: return "LOCALLY_IMPOSSIBLE";
  }
  return "?";
}

std::uint64_t local_obstruction(const BinaryForm& f, const mpz_class& N) {
  for (std::uint64_t p : small_primes().range(2, 47)) {
    const std::uint64_t target = mpz_fdiv_ui(N.get_mpz_t(), p);
    std::vector<std::uint64_t> c;
    for (const auto& v : f.coeffs()) c.push_back(mpz_fdiv_ui(v.get_mpz_t(), p));
    bool hit = false;
    for (std::uint64_t x = 0; x < p && !hit; ++x) {
      for (std::uint64_t y = 0; y < p && !hit; ++y) {
        std::uint64_t acc = c[0], ypow = 1;
        for (std::size_t j = 1; j < c.size(); ++j) {
          ypow = ypow * y % p;
          acc = (acc * x + c[j] * ypow) % p;
        }
        hit = acc == target;
      }
    }
    if (!hit) return p;
  }
  return 0;
}

RepResult represent_general_form(const BinaryForm& f, const mpz_class& N, std::uint64_t ball) {
  if (ball == 0) throw InputError("ball must be positive");
  RepResult out;
  if (N == 0) {
    out.status = RepStatus::Found;
    out.point = IntPoint{0, 0};
    return out;
  }
  if (const auto p = local_obstruction(f, N)) {
    out.status = RepStatus::LocallyImpossible;
    out.obstruction_modulus = p;
    return out;
  }
  const auto c = f.coeffs();
  const std::size_t d = f.degree();
  for (std::uint64_t k = 0; k <= 2 * ball; ++k) {
    // 0, 1, -1, 2, -2, ...
    const mpz_class x = k == 0 ? mpz_class(0)
                               : (k % 2 == 1 ? mpz_class(static_cast<unsigned long>((k + 1) / 2))
                                             : -mpz_class(static_cast<unsigned long>(k / 2)));
    std::vector<mpz_class> asc(d + 1);
    for (std::size_t j = 0; j <= d; ++j) asc[j] = c[j] * pow_mpz(x, d - j);
    asc[0] -= N;
    bool all_zero = std::all_of(asc.begin(), asc.end(), [](const mpz_class& v) { return v == 0; });
    if (all_zero) {
      out.status = RepStatus::Found;
      out.point = IntPoint{x, 0};
      return out;
    }
    bool constant = std::all_of(asc.begin() + 1, asc.end(), [](const mpz_class& v) { return v == 0; });
    if (constant) continue;
    auto roots = integer_roots(asc);
    if (!roots.empty()) {
      out.status = RepStatus::Found;
      out.point = IntPoint{x, pick_root(std::move(roots))};
      return out;
    }
  }
  const mpz_class reach = pow_mpz(mpz_class(static_cast<unsigned long>(ball)), d);
  out.status = reach >= abs(N) ? RepStatus::NoneInBall : RepStatus::UnknownBeyondBall;
  return out;
}

std::vector<mpz_class> integer_roots(std::span<const mpz_class> ascending) {
  ZPoly g(ascending.begin(), ascending.end());
  poly::trim(g);
  if (g.empty()) throw InputError("integer_roots of the zero polynomial");
  std::vector<mpz_class> roots;
  if (g.front() == 0) {
    roots.push_back(0);
    while (g.front() == 0) g.erase(g.begin());
  }
  const int d = poly::degree(g);
  if (d == 1) {
    if (g[0] % g[1] == 0) roots.push_back(-g[0] / g[1]);
  } else if (d == 2) {
    const mpz_class disc = g[1] * g[1] - 4 * g[2] * g[0];
    if (disc >= 0 && is_square(disc)) {
      const mpz_class s = isqrt(disc);
      for (const mpz_class& num : {mpz_class(-g[1] + s), mpz_class(-g[1] - s)}) {
        if (num % (2 * g[2]) == 0) roots.push_back(num / (2 * g[2]));
      }
    }
  } else if (d >= 3) {
    auto more = sturm_integer_roots(g);
    roots.insert(roots.end(), more.begin(), more.end());
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<mpz_class> integer_root(const UnivariatePoly& f, const mpz_class& N) {
  if (f.degree() < 1) throw InputError("integer_root needs degree >= 1");
  std::vector<mpz_class> asc(f.coeffs().begin(), f.coeffs().end());
  asc[0] -= N;
  return integer_roots(asc);
}

IntPoint cornacchia_prime(const mpz_class& p) {
  if (p == 2) return {1, 1};
  if (mpz_fdiv_ui(p.get_mpz_t(), 4) != 1) throw InputError("cornacchia_prime needs p = 1 mod 4");
  mpz_class c = 2;
  while (legendre_symbol(c, p) != -1) ++c;
  mpz_class r;
  const mpz_class e = (p - 1) / 4;
  mpz_powm(r.get_mpz_t(), c.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  if (2 * r > p) r = p - r;
  mpz_class a = p, b = r;
  while (b * b > p) {
    mpz_class t = a % b;
    a = b;
    b = t;
  }
  const mpz_class y = isqrt(p - b * b);
  if (b * b + y * y != p) throw std::logic_error("cornacchia failed for " + p.get_str());
  return {b, y};
}

std::optional<IntPoint> two_squares(const FactorizationSketch& sk) {
  if (!sk.complete() || sk.sign < 0) return std::nullopt;
  mpz_class X = 1, Y = 0;
  auto mul = [&](const mpz_class& a, const mpz_class& b) {
    const mpz_class nx = X * a - Y * b;
    const mpz_class ny = X * b + Y * a;
    X = nx;
    Y = ny;
  };
  for (const auto& [p, e] : sk.factors) {
    const auto r = mpz_fdiv_ui(p.get_mpz_t(), 4);
    if (p == 2) {
      for (std::uint32_t i = 0; i < e; ++i) mul(1, 1);
    } else if (r == 3) {
      if (e % 2 == 1) return std::nullopt;
      const mpz_class s = pow_mpz(p, e / 2);
      X *= s;
      Y *= s;
    } else {
      const auto [a, b] = cornacchia_prime(p);
      for (std::uint32_t i = 0; i < e; ++i) mul(a, b);
    }
  }
  return IntPoint{abs(X), abs(Y)};
}

bool square_filter(const Equation& eq, std::span<const std::uint64_t> cell, const mpz_class& alpha,
                   const mpz_class& beta, std::span<const std::uint64_t> primes, simd::Isa isa) {
  std::vector<std::uint64_t> ps;
  for (auto p : primes)
    if (p > 2) ps.push_back(p);
  if (ps.empty()) return false;
  const std::size_t k = ps.size();
  std::vector<std::uint64_t> L(k), tmp(k);
  auto reduce_mpz = [](const mpz_class& v, std::uint64_t p) { return mpz_fdiv_ui(v.get_mpz_t(), p); };
  auto mod_i64 = [](std::int64_t a, std::uint64_t p) {
    const auto r = static_cast<__int128>(a) % static_cast<__int128>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + p : r);
  };
  if (eq.is_sum()) {
    std::vector<std::uint64_t> fn(k), fm(k);
    simd::stride_product_mod(1, cell[0], 1, ps, fn, isa);
    simd::stride_product_mod(1, cell[1], 1, ps, fm, isa);
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t p = ps[i];
      L[i] = (mulmod(mod_i64(eq.A, p), fn[i], p) + mulmod(mod_i64(eq.B, p), fm[i], p)) % p;
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) L[i] = mod_i64(eq.b, ps[i]);
    for (auto n : cell) {
      if (eq.kind == FactorialKind::Factorial) {
        simd::stride_product_mod(1, n, 1, ps, tmp, isa);
      } else {
        simd::stride_product_mod(n % 2 == 0 ? 2 : 1, n, 2, ps, tmp, isa);
      }
      for (std::size_t i = 0; i < k; ++i) L[i] = mulmod(L[i], tmp[i], ps[i]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t p = ps[i];
    const std::uint64_t lhs = mulmod(reduce_mpz(eq.scaling, p), L[i], p);
    const std::uint64_t t = (mulmod(reduce_mpz(alpha, p), lhs, p) + reduce_mpz(beta, p)) % p;
    if (t != 0 && powmod(t, (p - 1) / 2, p) == p - 1) return true;
  }
  return false;
}

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Solution: return "SOLUTION";
    case CellStatus::Certified: return "CERTIFIED";
    case CellStatus::Degenerate: return "DEGENERATE";
    case CellStatus::Exhausted: return "EXHAUSTED";
    case CellStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::optional<CellStatus> parse_cell_status(std::string_view s) {
  for (auto c : {CellStatus::Solution, CellStatus::Certified, CellStatus::Degenerate, CellStatus::Exhausted,
                 CellStatus::Unknown})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

void SearchTask::validate() const {
  equation.validate();
  if (n_max < n_min) throw InputError("n_max must be >= n_min");
  if (n_max >= small_primes().limit()) throw InputError("n_max too large for this tool");
  if (equation.is_sum() && n_max <= m_min && !include_diagonal) throw InputError("empty range: need n_max > m_min");
  if (!equation.is_sum() && arity == 0) throw InputError("arity must be >= 1");
  if (ball == 0 || certify.prime_budget == 0 || checkpoint_interval == 0) throw InputError("budgets must be positive");
  if (!equation.is_sum() && !equation.is_binary()) {
    const auto d = std::get<UnivariatePoly>(equation.rhs).degree();
    if (arity >= 2 && d <= static_cast<int>(arity) && !allow_infinite)
      throw InputError("product with r >= 2 factors and deg f <= r may have infinitely many solutions; "
                       "pass an explicit range override");
  }
}

std::vector<std::vector<std::uint64_t>> enumerate_cells(const SearchTask& task) {
  std::vector<std::vector<std::uint64_t>> cells;
  if (task.equation.is_sum()) {
    for (std::uint64_t n = std::max(task.n_min, task.m_min); n <= task.n_max; ++n) {
      for (std::uint64_t m = task.m_min; m < n; ++m) cells.push_back({n, m});
      if (task.include_diagonal) cells.push_back({n, n});
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
      return a[0] + a[1] != b[0] + b[1] ? a[0] + a[1] < b[0] + b[1] : a[0] < b[0];
    });
  } else {
    std::vector<std::uint64_t> cur(task.arity, task.n_min);
    while (true) {
      cells.push_back(cur);
      // Next nondecreasing tuple.
      std::size_t i = task.arity;
      while (i > 0 && cur[i - 1] == task.n_max) --i;
      if (i == 0) break;
      const std::uint64_t v = cur[i - 1] + 1;
      for (std::size_t j = i - 1; j < task.arity; ++j) cur[j] = v;
    }
    std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
      std::uint64_t sa = 0, sb = 0;
      for (auto v : a) sa += v;
      for (auto v : b) sb += v;
      return sa != sb ? sa < sb : a < b;
    });
  }
  return cells;
}

CellRecord classify_cell(const SearchTask& task, const ProfileEngine& engine, std::span<const std::uint64_t> cell) {
  const Equation& eq = task.equation;
  if (eq.is_sum() && cell.size() == 2 && cell[0] == cell[1]) {
    CellRecord rec;
    rec.cell.assign(cell.begin(), cell.end());
    const __int128 s = static_cast<__int128>(eq.A) + eq.B;
    if (s == 0) {
      rec.status = CellStatus::Degenerate;
      rec.note = "A + B = 0: left side vanishes for every n";
      return rec;
    }
    Equation reduced = eq;
    reduced.family = eq.is_binary() ? Family::ProdDfactBinary : Family::ProdDfactUni;
    reduced.kind = FactorialKind::Factorial;
    reduced.b = static_cast<std::int64_t>(s);
    const std::uint64_t n1[] = {cell[0]};
    CellRecord inner = classify_plain(task, engine, reduced, n1);
    inner.cell = rec.cell;
    inner.note = inner.note.empty() ? "n = m: (A+B) n!" : "n = m: (A+B) n!; " + inner.note;
    return inner;
  }
  CellRecord rec = classify_plain(task, engine, eq, cell);
  if (eq.is_sum()) rec.in_hypothesis_region = cell[1] > 2 * static_cast<std::uint64_t>(std::max(std::abs(eq.A), std::abs(eq.B)));
  return rec;
}

SearchTotals tally(const std::vector<CellRecord>& records) {
  SearchTotals t;
  for (const auto& r : records) {
    ++t.cells;
    switch (r.status) {
      case CellStatus::Solution: ++t.solution; break;
      case CellStatus::Certified: ++t.certified; break;
      case CellStatus::Degenerate: ++t.degenerate; break;
      case CellStatus::Exhausted: ++t.exhausted; break;
      case CellStatus::Unknown: ++t.unknown; break;
    }
  }
  return t;
}

SearchReport run_search(const SearchTask& task) {
  task.validate();
  SearchReport report;
  report.task_hash = io::task_hash(task);
  const auto cells = enumerate_cells(task);
  const ProfileEngine engine(task.equation.rhs, {}, task.certify.isa);

  std::vector<CellRecord> records;
  const bool checkpointing = !task.checkpoint_path.empty();
  if (checkpointing && std::filesystem::exists(task.checkpoint_path)) {
    auto cp = io::load_checkpoint(task.checkpoint_path);
    if (cp.task_hash != report.task_hash) throw InputError("checkpoint belongs to a different task");
    if (cp.records.size() > cells.size()) throw DataError("checkpoint has more cells than the task");
    for (std::size_t i = 0; i < cp.records.size(); ++i)
      if (cp.records[i].cell != cells[i]) throw DataError("checkpoint frontier does not match the cell order");
    records = std::move(cp.records);
    report.resumed_cells = records.size();
  }

  std::uint64_t processed = 0;
  const unsigned workers = std::max(1u, task.workers);
  while (records.size() < cells.size()) {
    const std::size_t begin = records.size();
    const std::size_t end = std::min(cells.size(), begin + task.checkpoint_interval);
    std::vector<CellRecord> chunk(end - begin);
    std::atomic<std::size_t> next{begin};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
      for (std::size_t i = next++; i < end; i = next++) {
        try {
          chunk[i - begin] = classify_cell(task, engine, cells[i]);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    for (auto& r : chunk) {
      if (r.status == CellStatus::Solution && r.certificate)
        throw std::logic_error("cell is both certified and solved");
      records.push_back(std::move(r));
    }
    processed += end - begin;
    if (checkpointing) io::write_atomic(task.checkpoint_path, io::checkpoint_json(report.task_hash, records).dump(1));
    if (task.stop_after && processed >= *task.stop_after && records.size() < cells.size())
      throw SearchInterrupted("search interrupted after " + std::to_string(records.size()) + " cells");
  }
  report.records = std::move(records);
  report.totals = tally(report.records);
  return report;
}

}  // namespace facteq
