#include "facteq/bounds.hpp"

#include <cfloat>
#include <cmath>

#include "facteq/arith.hpp"

namespace facteq {

namespace {

const long double kLn2 = std::log(2.0L);
const long double kLn4 = std::log(4.0L);

long double xlogx(long double x) { return x > 0 ? x * std::log(x) : 0.0L; }

// Conservative "holds": rounding can only widen the admissible set.
long double slack(long double lhs, long double rhs) {
  return 64 * LDBL_EPSILON * (std::fabs(lhs) + std::fabs(rhs) + 1);
}

// d/dm of stirling_lhs_log.
long double lhs_derivative(long double m) { return std::log((2 * m + 1) * (2 * m + 1) / m) + 1; }

struct Convex1D {
  long double slope, offset;  // g(m) = lhs(m) - slope m - offset

  long double lhs(std::uint64_t m) const { return stirling_lhs_log(m); }
  long double rhs(std::uint64_t m) const { return slope * static_cast<long double>(m) + offset; }
  bool holds(std::uint64_t m) const {
    const long double l = lhs(m), r = rhs(m);
    return l - r < slack(l, r);
  }
  // Smallest m >= 1 with g'(m) >= 0.
  std::optional<std::uint64_t> turn() const {
    if (lhs_derivative(kStirlingScanCap) < slope) return std::nullopt;
    std::uint64_t lo = 1, hi = kStirlingScanCap;
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (lhs_derivative(static_cast<long double>(mid)) >= slope) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }
  // Largest m >= from with holds(m), given holds(from) and g increasing
  // from there on. nullopt if it still holds at the cap.
  std::optional<std::uint64_t> last_holding(std::uint64_t from) const {
    if (holds(kStirlingScanCap)) return std::nullopt;
    std::uint64_t lo = from, hi = kStirlingScanCap;
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (holds(mid)) lo = mid;
      else hi = mid;
    }
    return lo;
  }
};

std::string poly_string(const std::vector<mpz_class>& asc, char var) {
  return UnivariatePoly(asc).to_string(var);
}

long double log_abs(const mpz_class& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(static_cast<long double>(mant))) + static_cast<long double>(exp) * kLn2;
}

}  // namespace

void StirlingInequality::validate() const {
  if (!(E > 0)) throw InputError("stirling: E' must be positive");
  if (A < 0 || B < 0 || C < 0) throw InputError("stirling: coefficients must be nonnegative");
  if (side == StirlingSide::Single && !(slope() > 0)) throw InputError("stirling: need A' > 0 or B' > 0");
  if (side == StirlingSide::Double && !(A > 0 && B > 0)) throw InputError("stirling: double case needs A*, B* > 0");
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C) || !std::isfinite(E))
    throw InputError("stirling: coefficients must be finite");
}

long double stirling_lhs_log(std::uint64_t m) {
  const auto x = static_cast<long double>(m);
  return xlogx(2 * x + 1) - xlogx(x);
}

StirlingResult stirling_bound(const StirlingInequality& ineq) {
  ineq.validate();
  if (ineq.side != StirlingSide::Single) throw InputError("stirling_bound handles the single case");
  const Convex1D g{ineq.slope(), ineq.C + std::log(ineq.E)};
  const auto turn = g.turn();
  if (!turn) throw InputError("stirling: inequality does not turn within 10^9 (coefficients inconsistent?)");
  StirlingResult out;
  out.monotone_from = *turn;
  if (!g.holds(*turn)) {
    // g decreases up to the turn, so nothing below it holds either.
    out.margin = std::fabs(g.lhs(*turn) - g.rhs(*turn));
    return out;
  }
  const auto last = g.last_holding(*turn);
  if (!last) throw InputError("stirling: inequality never fails within 10^9 (coefficients inconsistent?)");
  out.m_max = *last;
  out.margin = std::min(std::fabs(g.lhs(*last) - g.rhs(*last)), std::fabs(g.lhs(*last + 1) - g.rhs(*last + 1)));
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> stirling_frontier(const StirlingInequality& ineq) {
  ineq.validate();
  if (ineq.side != StirlingSide::Double) throw InputError("stirling_frontier handles the double case");
  const long double budget = ineq.C + std::log(ineq.E);
  // lhs(n1) - A n1 + lhs(m1) - B m1 < budget. Each side is convex in its variable.
  const Convex1D gn{ineq.A, 0}, gm{ineq.B, 0};
  const auto tn = gn.turn(), tm = gm.turn();
  if (!tn || !tm) throw InputError("stirling: inequality does not turn within 10^9");
  const long double hmin = gm.lhs(*tm) - gm.rhs(*tm);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t n1 = 1;; ++n1) {
    const long double gv = gn.lhs(n1) - gn.rhs(n1);
    if (n1 >= *tn && gv + hmin >= budget + slack(gv, budget)) break;
    if (n1 > 10'000'000) throw InputError("stirling: double frontier exceeds 10^7 rows");
    const Convex1D row{ineq.B, budget - gv};
    if (!row.holds(*tm)) continue;
    const auto last = row.last_holding(*tm);
    if (!last) throw InputError("stirling: inequality never fails within 10^9");
    out.emplace_back(n1, *last);
  }
  return out;
}

RadicalBound radical_bound_factorial(std::uint64_t m) {
  if (m < 1) throw InputError("radical_bound_factorial needs m >= 1");
  RadicalBound r;
  r.m = m;
  r.log_radical = chebyshev_theta(2 * m + 1);
  r.log_bound = static_cast<long double>(2 * m + 1) * kLn4;
  r.holds = r.log_radical < r.log_bound;
  return r;
}

const BoundConstant& BoundReport::constant(const std::string& name) const {
  for (const auto& c : constants)
    if (c.name == name) return c;
  throw InputError("no constant named " + name);
}

BoundReport conditional_bound_pipeline(const UnivariatePoly& f, const AbcParams& params) {
  const int d = f.degree();
  if (d < 2) throw InputError("bound pipeline needs degree >= 2");
  if (params.b == 0) throw InputError("bound pipeline needs b != 0");
  if (!(params.K > 0) || !std::isfinite(params.K)) throw InputError("K(epsilon) must be positive");
  BoundReport rep;
  rep.poly = f.to_string('x');
  rep.degree = static_cast<std::uint32_t>(d);
  rep.epsilon = params.epsilon ? *params.epsilon : mpq_class(1, 2 * d);
  rep.epsilon.canonicalize();
  if (rep.epsilon <= 0) throw InputError("epsilon must be positive");
  rep.K = params.K;
  rep.monomial_original = [&] {
    int nz = 0;
    for (const auto& c : f.coeffs()) nz += c != 0;
    return nz == 1;
  }();
  rep.monomial_depressed = is_monomial_after_depression(f);
  rep.distinct_roots = distinct_root_count(f);

  const DepressedForm dep = depress(f);
  rep.depressed = dep.Q.to_string('z');
  const UnivariatePoly R = dep.remainder();
  if (R.is_zero()) throw InputError("Q(z) = z^d after depression: R = 0, use the certifier instead");
  rep.c = dep.multiplier * params.b;

  std::vector<mpz_class> r(R.coeffs().begin(), R.coeffs().end());
  std::size_t low = 0;
  while (r[low] == 0) ++low;
  rep.j = static_cast<std::uint32_t>(d - static_cast<int>(low));
  const std::vector<mpz_class> r1(r.begin() + static_cast<std::ptrdiff_t>(low), r.end());
  rep.r1 = poly_string(r1, 'z');

  const long double eps = static_cast<long double>(rep.epsilon.get_d());
  rep.exponent = 1 + eps - eps * rep.j;
  if (!(rep.exponent > 0)) throw InputError("epsilon too large: need 1 + eps - eps j > 0");

  auto add = [&](std::string name, long double v, bool cond, std::string prov) {
    rep.constants.push_back({std::move(name), v, cond, std::move(prov)});
    return v;
  };

  const long double C1 = add("C1", kLn2 + log_abs(rep.c), false, "log 2 + log|c|, from the sandwich |z|^d/2 < |Q(z)| < 2|z|^d");
  const mpz_class z0 = sandwich_threshold(dep.Q);
  const long double C2 = add("C2", z0.get_d(), false, "sandwich threshold of Q");
  mpz_class s1 = 1, mx = 0;
  for (const auto& v : r1) {
    s1 += abs(v);
    mx = std::max(mx, mpz_class(abs(v)));
  }
  const long double C3 = add("C3", s1.get_d(), false, "1 + sum |coefficients of R_1|");
  mpz_class cauchy;
  const mpz_class lead_r1 = abs(r1.back());
  mpz_cdiv_q(cauchy.get_mpz_t(), mx.get_mpz_t(), lead_r1.get_mpz_t());
  cauchy += 1;
  const long double C4 = add("C4", std::max(C2, static_cast<long double>(cauchy.get_d()) + 1), false, "max(C2, Cauchy root bound of R_1 + 1)");
  const long double C5 = add("C5", params.K, true, "K(epsilon), hypothesis input");
  const long double C6 = add("C6", radical(rep.c).get_d(), false, "rad(c); rad((2m+1)!) < 4^(2m+1)");
  const long double logC7 = std::log(C5) + (1 + eps) * std::log(C3 * C6);
  add("C7", std::exp(logC7), true, "C5 (C3 C6)^(1+eps)");
  add("C8", std::exp(logC7), true, "C7, after D >= 1");
  const long double C9 = add("C9", (1 + eps) * kLn4 / rep.exponent, true, "(1+eps) log 4 / (1 + eps - eps j)");
  const long double C10 = add("C10", logC7 / rep.exponent, true, "log C8 / (1 + eps - eps j)");
  const long double C11 = add("C11", 2 * d * C9, true, "2 d C9");
  const long double C12 = add("C12", d * (C9 + C10), true, "d (C9 + C10)");
  const long double C13 = add("C13", C1 + C12, true, "C1 + C12");

  // (2m+1)!/(2^m m!) > ((2m+1)/e)^(2m+1) / (2^m m^m) turns log N < C11 m + C13
  // into the single Stirling inequality with slope C11 + 2 + log 2.
  StirlingInequality st;
  st.A = C11;
  st.B = C11 + 2 + kLn2;
  st.C = C13 + 1;
  st.E = 1;
  const auto sres = stirling_bound(st);
  std::uint64_t m_max = sres.m_max.value_or(0);

  // |z| <= C4: N = Q(z)/c is bounded directly.
  long double qsum = 0;
  for (const auto& v : dep.Q.coeffs()) qsum += std::fabs(static_cast<long double>(v.get_d()));
  const long double log_n_small = std::log(qsum) + d * std::log(std::max(C4, 1.0L)) - log_abs(rep.c);
  long double acc = 0;  // log((2m+1)!!)
  std::uint64_t m_small = 0;
  for (std::uint64_t m = 1;; ++m) {
    acc += std::log(static_cast<long double>(2 * m + 1));
    if (acc > log_n_small + slack(acc, log_n_small)) break;
    m_small = m;
  }
  rep.m_max = std::max(m_max, m_small);
  add("m_max", static_cast<long double>(rep.m_max), true, "largest m allowed (n = 2m + 1)");
  rep.log_z_max = std::max(std::log(std::max(C4, 1.0L)), C9 * static_cast<long double>(2 * rep.m_max + 1) + C10);
  add("log_C15", rep.log_z_max, true, "log of the |z| bound");

  rep.radical_checks.push_back(radical_bound_factorial(1));
  if (rep.m_max > 1) rep.radical_checks.push_back(radical_bound_factorial(rep.m_max));
  return rep;
}

}  // namespace facteq
