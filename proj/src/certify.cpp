#include "facteq/certify.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "facteq/arith.hpp"

namespace facteq {

namespace {

std::uint64_t mod_i64(std::int64_t a, std::uint64_t m) {
  const auto r = static_cast<__int128>(a) % static_cast<__int128>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

std::optional<Rule> decide(std::uint64_t v, const ObstructionProfile& p) {
  if (!p.eligible || v == 0) return std::nullopt;
  if (p.never_divides) return Rule::NotDivisible;
  if (v % p.forced_exponent == 0) return std::nullopt;
  return v < p.forced_exponent ? Rule::VLessThanE : Rule::VNotMultiple;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  if (hi < small_primes().limit()) {
    const auto r = small_primes().range(lo, hi);
    return {r.begin(), r.end()};
  }
  const PrimeTable table = sieve(hi);
  const auto r = table.range(lo, hi);
  return {r.begin(), r.end()};
}

std::span<const std::uint64_t> budget_primes(std::size_t budget, std::vector<std::uint64_t>& storage) {
  const auto all = small_primes().primes();
  if (budget <= all.size()) return all.first(budget);
  storage = first_primes(budget);
  return storage;
}

Certificate make_certificate(const Equation& eq, std::span<const std::uint64_t> cell, std::uint64_t q,
                             std::uint64_t v, const ObstructionProfile& p, Rule rule) {
  Certificate c;
  c.equation = eq;
  c.cell.assign(cell.begin(), cell.end());
  c.prime = q;
  c.valuation = v;
  c.forced_exponent = p.forced_exponent;
  c.reason = p.reason;
  c.rule = rule;
  if (const auto* f = std::get_if<BinaryForm>(&eq.rhs); f && f->factor_list() && f->factor_list()->declared)
    c.notes = "factor list declared by user";
  if (const auto* f = std::get_if<UnivariatePoly>(&eq.rhs); f && f->factor_list() && f->factor_list()->declared)
    c.notes = "factor list declared by user";
  return c;
}

CertifyOutcome certify_sum(const Equation& eq, std::uint64_t n, std::uint64_t m, const ProfileEngine& engine,
                           const CertifyOptions& opts) {
  CertifyOutcome out;
  if (n - m <= 40) {
    mpz_class R = 1;
    for (std::uint64_t k = m + 1; k <= n; ++k) R *= static_cast<unsigned long>(k);
    if (mpz_class(static_cast<long>(eq.A)) * R + eq.B == 0) {
      out.zero_left_side = true;
      return out;
    }
  }

  std::vector<std::uint64_t> order;
  std::unordered_set<std::uint64_t> seen;
  if (m >= 2) {
    const auto window = primes_between(m / 2 + 1, m);
    for (auto it = window.rbegin(); it != window.rend(); ++it)
      if (seen.insert(*it).second) order.push_back(*it);
  }
  std::vector<std::uint64_t> storage;
  for (std::uint64_t q : budget_primes(opts.prime_budget, storage))
    if (seen.insert(q).second) order.push_back(q);

  constexpr std::size_t kBlock = 512;
  std::vector<std::uint64_t> qs, residues;
  std::vector<ObstructionProfile> profs;
  for (std::size_t start = 0; start < order.size(); start += kBlock) {
    const std::size_t stop = std::min(order.size(), start + kBlock);
    qs.clear();
    profs.clear();
    for (std::size_t i = start; i < stop; ++i) {
      auto p = engine.profile(order[i]);
      if (p.eligible) {
        qs.push_back(order[i]);
        profs.push_back(p);
      }
    }
    out.primes_tried += stop - start;
    residues.assign(qs.size(), 0);
    simd::stride_product_mod(m + 1, n, 1, qs, residues, opts.isa);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::uint64_t q = qs[i];
      const mpz_class qz(static_cast<unsigned long>(q));
      std::uint64_t v = eq.scaling == 1 ? 0 : valuation_of(eq.scaling, qz);
      const auto c = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(mulmod(mod_i64(eq.A, q), residues[i], q)) + mod_i64(eq.B, q)) % q);
      if (c != 0) {
        v += legendre_valuation(m, q);
      } else {
        const auto r = combined_valuation(eq.A, eq.B, n, m, qz, opts.valuation);
        if (!r.exact) {
          out.notes.push_back("q=" + std::to_string(q) + " skipped: valuation above lift cap");
          continue;
        }
        v += r.value;
      }
      if (auto rule = decide(v, profs[i])) {
        out.certificate = make_certificate(eq, std::vector<std::uint64_t>{n, m}, q, v, profs[i], *rule);
        return out;
      }
    }
  }
  return out;
}

CertifyOutcome certify_product(const Equation& eq, std::span<const std::uint64_t> cell, const ProfileEngine& engine,
                               const CertifyOptions& opts) {
  CertifyOutcome out;
  std::vector<FactorialSpec> specs;
  std::uint64_t nmax = 0;
  for (auto n : cell) {
    specs.push_back({eq.kind, n});
    nmax = std::max(nmax, n);
  }
  std::vector<std::uint64_t> order;
  if (nmax >= 2) {
    order = primes_between(2, nmax);
  }
  // Primes of b * scaling beyond nmax also divide the left side.
  const auto extra = factor(mpz_class(static_cast<long>(eq.b)) * eq.scaling);
  for (const auto& [p, e] : extra.factors) {
    if (p > nmax && mpz_fits_ulong_p(p.get_mpz_t())) order.push_back(mpz_get_ui(p.get_mpz_t()));
  }
  if (!extra.complete()) out.notes.push_back("b * scaling not fully factored; some primes not tried");
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  if (order.size() > opts.prime_budget) order.resize(opts.prime_budget);

  for (std::uint64_t q : order) {
    ++out.primes_tried;
    const auto p = engine.profile(q);
    if (!p.eligible) continue;
    const mpz_class qz(static_cast<unsigned long>(q));
    const std::uint64_t v = product_valuation(eq.b, specs, qz) + valuation_of(eq.scaling, qz);
    if (auto rule = decide(v, p)) {
      out.certificate = make_certificate(eq, cell, q, v, p, *rule);
      return out;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::SumFactBinary: return "SUM_FACT_BINARY";
    case Family::SumFactUni: return "SUM_FACT_UNI";
    case Family::ProdDfactBinary: return "PROD_DFACT_BINARY";
    case Family::ProdDfactUni: return "PROD_DFACT_UNI";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view s) {
  for (auto f : {Family::SumFactBinary, Family::SumFactUni, Family::ProdDfactBinary, Family::ProdDfactUni})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::NotDivisible: return "NOT_DIVISIBLE";
    case Rule::VLessThanE: return "V_LESS_THAN_E";
    case Rule::VNotMultiple: return "V_NOT_MULTIPLE";
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view s) {
  for (auto r : {Rule::NotDivisible, Rule::VLessThanE, Rule::VNotMultiple})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

void Equation::validate() const {
  if (is_sum() && (A == 0 || B == 0)) throw InputError("A and B must be nonzero");
  if (!is_sum() && b == 0) throw InputError("b must be nonzero");
  if (scaling <= 0) throw InputError("scaling must be positive");
  if (is_binary() != std::holds_alternative<BinaryForm>(rhs))
    throw InputError("family " + std::string(to_string(family)) + " does not match the right side type");
}

void Equation::validate_cell(std::span<const std::uint64_t> cell) const {
  if (is_sum()) {
    if (cell.size() != 2) throw InputError("sum family cell is (n, m)");
    if (cell[0] <= cell[1]) throw InputError("sum family cell needs n > m (n = m reduces to (A+B) n!)");
  } else if (cell.empty()) {
    throw InputError("product family cell needs at least one argument");
  }
}

mpz_class left_value(const Equation& eq, std::span<const std::uint64_t> cell) {
  eq.validate_cell(cell);
  if (eq.is_sum()) return eq.scaling * sum_value(eq.A, eq.B, cell[0], cell[1]);
  mpz_class v = eq.scaling * eq.b;
  for (auto n : cell) v *= factorial_value({eq.kind, n});
  return v;
}

CertifyOutcome certify_cell(const Equation& eq, std::span<const std::uint64_t> cell, const ProfileEngine& engine,
                            const CertifyOptions& opts) {
  eq.validate();
  eq.validate_cell(cell);
  if (eq.is_sum()) return certify_sum(eq, cell[0], cell[1], engine, opts);
  return certify_product(eq, cell, engine, opts);
}

CertifyOutcome certify_cell(const Equation& eq, std::span<const std::uint64_t> cell, const CertifyOptions& opts) {
  const ProfileEngine engine(eq.rhs, {}, opts.isa);
  return certify_cell(eq, cell, engine, opts);
}

std::optional<Certificate> certify_at_prime(const Equation& eq, std::span<const std::uint64_t> cell, std::uint64_t q,
                                            const ProfileEngine& engine, const CertifyOptions& opts) {
  eq.validate();
  eq.validate_cell(cell);
  const auto p = engine.profile(q);
  if (!p.eligible) return std::nullopt;
  const mpz_class qz(static_cast<unsigned long>(q));
  std::uint64_t v = valuation_of(eq.scaling, qz);
  if (eq.is_sum()) {
    const auto r = combined_valuation(eq.A, eq.B, cell[0], cell[1], qz, opts.valuation);
    if (!r.exact || r.zero_cofactor) return std::nullopt;
    v += r.value;
  } else {
    std::vector<FactorialSpec> specs;
    for (auto n : cell) specs.push_back({eq.kind, n});
    v += product_valuation(eq.b, specs, qz);
  }
  const auto rule = decide(v, p);
  if (!rule) return std::nullopt;
  return make_certificate(eq, cell, q, v, p, *rule);
}

RecheckResult recheck(const Certificate& cert) {
  RecheckResult res;
  auto fail = [&](std::string why) {
    res.ok = false;
    res.reason = std::move(why);
    return res;
  };
  const Equation& eq = cert.equation;
  if (cert.checker_version != kCheckerVersion) return fail("unknown checker version " + cert.checker_version);
  try {
    eq.validate();
    eq.validate_cell(cert.cell);
  } catch (const InputError& e) {
    return fail(std::string("malformed equation: ") + e.what());
  }
  if (cert.prime < 2 || !is_prime(cert.prime)) return fail("q is not prime");
  if (cert.valuation == 0) return fail("valuation must be positive");

  // Left valuation from the integer itself.
  std::uint64_t total = 0;
  for (auto n : cert.cell) total += n;
  const mpz_class qz(static_cast<unsigned long>(cert.prime));
  if (total <= 20000) {
    const mpz_class lhs = left_value(eq, cert.cell);
    if (lhs == 0) return fail("left side is zero");
    mpz_class rest;
    const auto v = mpz_remove(rest.get_mpz_t(), lhs.get_mpz_t(), qz.get_mpz_t());
    if (v != cert.valuation) return fail("valuation mismatch: recomputed " + std::to_string(v));
    res.big_integer_valuation = true;
  } else if (eq.is_sum()) {
    const auto r = combined_valuation(eq.A, eq.B, cert.cell[0], cert.cell[1], qz);
    if (!r.exact || r.zero_cofactor || r.value + valuation_of(eq.scaling, qz) != cert.valuation)
      return fail("valuation mismatch");
  } else {
    std::vector<FactorialSpec> specs;
    for (auto n : cert.cell) specs.push_back({eq.kind, n});
    if (product_valuation(eq.b, specs, qz) + valuation_of(eq.scaling, qz) != cert.valuation)
      return fail("valuation mismatch");
  }

  // Fresh profile on the reference kernels.
  ProfileEngine engine(eq.rhs, {}, simd::Isa::Scalar);
  const auto p = engine.profile(cert.prime);
  if (!p.eligible) return fail("q is not an obstruction prime: " + std::string(to_string(p.excluded)));
  if (p.forced_exponent != cert.forced_exponent) return fail("forced exponent mismatch");
  switch (cert.rule) {
    case Rule::NotDivisible:
      if (!p.never_divides) return fail("rule NOT_DIVISIBLE but q divides some value");
      break;
    case Rule::VLessThanE:
      if (p.never_divides || cert.valuation >= cert.forced_exponent) return fail("rule V_LESS_THAN_E does not hold");
      break;
    case Rule::VNotMultiple:
      if (p.never_divides || cert.valuation % cert.forced_exponent == 0) return fail("rule V_NOT_MULTIPLE does not hold");
      break;
  }

  if (cert.prime <= kExhaustivePrimeLimit) {
    if (!verify_profile(eq.rhs, p)) return fail("exhaustive forced exponent check failed");
    res.exhaustive_profile = true;
  }
  // Direct root enumeration for polynomial targets with a never-divides claim.
  if (p.never_divides && cert.prime <= 1'000'000) {
    const auto& f = std::get<UnivariatePoly>(eq.rhs);
    for (std::uint64_t x = 0; x < cert.prime; ++x)
      if (mpz_divisible_ui_p(f(mpz_class(static_cast<unsigned long>(x))).get_mpz_t(), cert.prime))
        return fail("root found mod q");
  }
  res.ok = true;
  return res;
}

WindowReport window_prime_report(const ProfileEngine& engine, std::uint64_t m) {
  if (m < 10) throw InputError("window_prime_report needs m >= 10");
  WindowReport r;
  r.m = m;
  const long double lm = std::log(static_cast<long double>(m));
  r.claim_lo = static_cast<long double>(m) / 2;
  r.claim_hi = r.claim_lo + static_cast<long double>(m) / (12 * lm);
  r.below_asymptotic = static_cast<long double>(m) / (12 * lm) < lm;
  for (std::uint64_t q : primes_between(m / 2 + 1, m)) {
    if (!engine.profile(q).eligible) continue;
    r.relaxed_primes.push_back(q);
    const auto lq = static_cast<long double>(q);
    if (lq > r.claim_lo && lq < r.claim_hi) r.claim_primes.push_back(q);
  }
  r.claim_window_empty = r.claim_primes.empty();
  return r;
}

}  // namespace facteq
