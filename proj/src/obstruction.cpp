#include "facteq/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "facteq/arith.hpp"

namespace facteq {

namespace {

using U64Poly = std::vector<std::uint64_t>;  // ascending, mod q

bool divisible(const mpz_class& v, std::uint64_t q) {
  return mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(q)) != 0;
}

void trim(U64Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_monic(U64Poly& p, std::uint64_t q) {
  const std::uint64_t inv = powmod(p.back(), q - 2, q);
  for (auto& c : p) c = mulmod(c, inv, q);
}

// a mod f, f monic.
U64Poly reduce(U64Poly a, const U64Poly& f, std::uint64_t q) {
  const std::size_t df = f.size() - 1;
  while (a.size() > df && !a.empty()) {
    const std::uint64_t c = a.back();
    const std::size_t shift = a.size() - 1 - df;
    if (c != 0) {
      for (std::size_t j = 0; j < df; ++j) {
        const std::uint64_t t = mulmod(c, f[j], q);
        a[shift + j] = a[shift + j] >= t ? a[shift + j] - t : a[shift + j] + (q - t);
      }
    }
    a.pop_back();
  }
  trim(a);
  return a;
}

U64Poly mulmod_poly(const U64Poly& a, const U64Poly& b, const U64Poly& f, std::uint64_t q) {
  if (a.empty() || b.empty()) return {};
  U64Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::uint64_t t = mulmod(a[i], b[j], q);
      out[i + j] = out[i + j] >= q - t ? out[i + j] - (q - t) : out[i + j] + t;
    }
  }
  return reduce(std::move(out), f, q);
}

// deg gcd(x^q - x, f) > 0 over F_q.
bool frobenius_has_root(U64Poly f, std::uint64_t q) {
  make_monic(f, q);
  U64Poly result{1};
  U64Poly base = reduce(U64Poly{0, 1}, f, q);
  for (std::uint64_t e = q; e > 0; e >>= 1) {
    if (e & 1) result = mulmod_poly(result, base, f, q);
    base = mulmod_poly(base, base, f, q);
  }
  if (result.size() < 2) result.resize(2, 0);
  result[1] = result[1] >= 1 ? result[1] - 1 : q - 1;
  trim(result);
  U64Poly a = f, b = result;
  while (!b.empty()) {
    make_monic(b, q);
    U64Poly r = reduce(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return a.size() >= 2;
}

template <typename Int>
Int to_int(const mpz_class& v);

template <>
__int128 to_int<__int128>(const mpz_class& v) {
  return static_cast<__int128>(mpz_get_si(v.get_mpz_t()));
}

template <>
mpz_class to_int<mpz_class>(const mpz_class& v) {
  return v;
}

template <typename Int>
Int eval_desc_homog(const std::vector<Int>& c, const Int& x, const Int& y) {
  Int acc = c[0];
  Int ypow = 1;
  for (std::size_t j = 1; j < c.size(); ++j) {
    ypow *= y;
    acc = acc * x + c[j] * ypow;
  }
  return acc;
}

bool exponent_ok(std::uint32_t nu, std::uint32_t E, bool require_multiple) {
  if (E == 0) return false;
  return require_multiple ? nu % E == 0 : nu >= E;
}

template <typename Int>
bool box_check_binary(std::span<const mpz_class> coeffs, std::uint64_t q, std::uint32_t E, bool multiple) {
  std::vector<Int> c;
  for (const auto& v : coeffs) c.push_back(to_int<Int>(v));
  const Int qi = static_cast<long>(q);
  for (std::uint64_t x0 = 0; x0 < q; ++x0) {
    for (std::uint64_t y0 = 0; y0 < q; ++y0) {
      if (eval_desc_homog<Int>(c, Int(static_cast<long>(x0)), Int(static_cast<long>(y0))) % qi != 0) continue;
      for (std::uint64_t i = 0; i < q; ++i) {
        const Int x = Int(static_cast<long>(x0 + q * i));
        for (std::uint64_t j = 0; j < q; ++j) {
          const Int y = Int(static_cast<long>(y0 + q * j));
          Int v = eval_desc_homog<Int>(c, x, y);
          if (v == 0) continue;
          std::uint32_t nu = 0;
          while (v % qi == 0) {
            v /= qi;
            ++nu;
          }
          if (!exponent_ok(nu, E, multiple)) return false;
        }
      }
    }
  }
  return true;
}

void check_exhaustive_prime(std::uint64_t q) {
  if (!is_prime(q)) throw InputError("verify_forced_exponent: q must be prime");
  if (q > kExhaustivePrimeLimit) throw InputError("verify_forced_exponent: q above exhaustive limit 200");
}

}  // namespace

std::string describe(const RightSide& rhs) {
  return std::visit([](const auto& f) { return f.to_string(); }, rhs);
}

std::uint32_t degree_of(const RightSide& rhs) {
  if (const auto* f = std::get_if<BinaryForm>(&rhs)) return f->degree();
  return static_cast<std::uint32_t>(std::max(0, std::get<UnivariatePoly>(rhs).degree()));
}

std::string_view to_string(ObstructionReason r) {
  switch (r) {
    case ObstructionReason::NoRootModQ: return "NO_ROOT_MOD_Q";
    case ObstructionReason::LinearFactorMultiplicity: return "LINEAR_FACTOR_MULTIPLICITY";
    default: return "NONE";
  }
}

std::string_view to_string(Exclusion e) {
  switch (e) {
    case Exclusion::DividesLeading: return "DIVIDES_LEADING";
    case Exclusion::DividesInvariants: return "DIVIDES_INVARIANTS";
    case Exclusion::ResultantVanishes: return "RESULTANT_VANISHES";
    case Exclusion::HasRoot: return "HAS_ROOT";
    case Exclusion::HypothesisFails: return "HYPOTHESIS_FAILS";
    default: return "NONE";
  }
}

bool has_root_mod(std::span<const mpz_class> desc, std::uint64_t q, const ObstructionOptions& opts, simd::Isa isa) {
  U64Poly asc;
  asc.reserve(desc.size());
  for (auto it = desc.rbegin(); it != desc.rend(); ++it) asc.push_back(mpz_fdiv_ui(it->get_mpz_t(), q));
  trim(asc);
  if (asc.empty()) return true;
  if (asc.size() == 1) return false;
  if (q <= opts.root_scan_limit) return simd::first_root_mod(asc, q, isa).has_value();
  return frobenius_has_root(std::move(asc), q);
}

ProfileEngine::ProfileEngine(RightSide rhs, ObstructionOptions opts, simd::Isa isa)
    : rhs_(std::move(rhs)), opts_(opts), isa_(isa) {
  degree_ = degree_of(rhs_);
  if (const auto* f = std::get_if<BinaryForm>(&rhs_)) {
    factors_ = factors_of(*f);
    if (factors_.declared && !verify_factor_list(*f, factors_))
      throw InputError("declared factor list does not multiply out to " + f->to_string());
    invariant_ = f->trailing() * f->content() * factors_.unit;
    if (factors_.irreducible()) {
      invariant_ *= modified_discriminant(*f);
    } else {
      for (const auto& e : factors_.entries)
        if (e.degree() >= 2) factor_discs_.push_back(discriminant(UnivariatePoly::from_descending(e.coeffs)));
    }
    for (const auto& e : factors_.entries)
      if (e.degree() * e.multiplicity <= 1) hypothesis_fails_ = true;
  } else {
    const auto& p = std::get<UnivariatePoly>(rhs_);
    if (p.degree() < 1) throw InputError("right side polynomial must have degree >= 1");
    factors_ = factors_of(p);
    if (factors_.declared && !verify_factor_list(p, factors_))
      throw InputError("declared factor list does not multiply out to " + p.to_string());
    invariant_ = factors_.unit;
  }
  for (std::size_t i = 0; i < factors_.entries.size(); ++i)
    for (std::size_t j = i + 1; j < factors_.entries.size(); ++j)
      resultants_.push_back(form_resultant(factors_.entries[i].coeffs, factors_.entries[j].coeffs));
}

ObstructionProfile ProfileEngine::profile(std::uint64_t q) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(q); it != cache_.end()) return it->second;
  }
  ObstructionProfile p = compute(q);
  std::lock_guard lock(mu_);
  cache_.emplace(q, p);
  return p;
}

ObstructionProfile ProfileEngine::compute(std::uint64_t q) const {
  if (q < 2 || !is_prime(q)) throw InputError("obstruction profile needs a prime, got " + std::to_string(q));
  ObstructionProfile p;
  p.prime = q;
  auto exclude = [&](Exclusion e) {
    p.excluded = e;
    return p;
  };
  const bool bin = binary();
  if (bin) {
    if (hypothesis_fails_) return exclude(Exclusion::HypothesisFails);
    if (divisible(std::get<BinaryForm>(rhs_).leading(), q)) return exclude(Exclusion::DividesLeading);
  }
  if (divisible(invariant_, q)) return exclude(Exclusion::DividesInvariants);
  for (const auto& d : factor_discs_)
    if (divisible(d, q)) return exclude(Exclusion::DividesInvariants);
  for (const auto& r : resultants_)
    if (divisible(r, q)) return exclude(Exclusion::ResultantVanishes);

  // At most one factor can vanish mod q at a point (pairwise resultants are
  // units), so nu_q of a value is d*k + e_i*t for a rooted factor i.
  std::uint32_t E = bin ? degree_ : 0;
  bool any_root = false;
  for (const auto& e : factors_.entries) {
    if (has_root_mod(e.coeffs, q, opts_, isa_)) {
      any_root = true;
      E = std::gcd(E, e.multiplicity);
    }
  }
  if (!bin && !any_root) {
    p.eligible = true;
    p.never_divides = true;
    p.reason = ObstructionReason::NoRootModQ;
    return p;
  }
  if (E < 2) return exclude(Exclusion::HasRoot);
  p.eligible = true;
  p.forced_exponent = E;
  p.reason = any_root ? ObstructionReason::LinearFactorMultiplicity : ObstructionReason::NoRootModQ;
  return p;
}

ObstructionProfile is_obstruction_prime(const BinaryForm& f, std::uint64_t q) {
  if (!is_irreducible(f)) throw InputError("is_obstruction_prime needs an irreducible form; " + f.to_string() + " factors");
  return ProfileEngine(f).profile(q);
}

ObstructionProfile obstruction_profile_reducible(const BinaryForm& f, std::uint64_t q) {
  if (!f.factor_list() && f.degree() > 4) throw InputError("degree > 4 form needs a declared factor list");
  return ProfileEngine(f).profile(q);
}

ObstructionProfile obstruction_profile(const RightSide& rhs, std::uint64_t q) { return ProfileEngine(rhs).profile(q); }

ObstructionScan scan_obstruction_primes(const RightSide& rhs, std::uint64_t lo, std::uint64_t hi, unsigned workers) {
  const ProfileEngine engine(rhs);
  return scan_obstruction_primes(engine, lo, hi, workers);
}

ObstructionScan scan_obstruction_primes(const ProfileEngine& engine, std::uint64_t lo, std::uint64_t hi,
                                        unsigned workers) {
  if (lo >= hi) throw InputError("scan range needs lo < hi");
  const PrimeTable table = hi < small_primes().limit() ? PrimeTable{} : sieve(hi);
  const auto primes = (hi < small_primes().limit() ? small_primes() : table).range(lo, hi);
  workers = std::max(1u, workers);
  std::vector<std::vector<ObstructionProfile>> parts(workers);
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < primes.size(); i += workers) {
      auto p = engine.profile(primes[i]);
      if (p.eligible) parts[w].push_back(p);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  ObstructionScan out;
  for (auto& part : parts) out.eligible.insert(out.eligible.end(), part.begin(), part.end());
  std::sort(out.eligible.begin(), out.eligible.end(),
            [](const auto& a, const auto& b) { return a.prime < b.prime; });
  out.primes_in_range = primes.size();
  out.density = primes.empty() ? 0.0 : static_cast<double>(out.eligible.size()) / static_cast<double>(primes.size());
  return out;
}

bool verify_forced_exponent(const BinaryForm& f, std::uint64_t q, std::uint32_t E, bool require_multiple) {
  check_exhaustive_prime(q);
  // |f| <= sum|c| (q^2)^d on the box; stay in 128 bits when that fits.
  mpz_class sum = 0;
  for (const auto& c : f.coeffs()) sum += abs(c);
  const double bits = std::log2(sum.get_d() + 1) + 2.0 * f.degree() * std::log2(static_cast<double>(q)) + 2;
  bool small = bits < 120;
  for (const auto& c : f.coeffs()) small = small && mpz_fits_slong_p(c.get_mpz_t());
  if (small) return box_check_binary<__int128>(f.coeffs(), q, E, require_multiple);
  return box_check_binary<mpz_class>(f.coeffs(), q, E, require_multiple);
}

bool verify_forced_exponent(const UnivariatePoly& f, std::uint64_t q, std::uint32_t E, bool require_multiple) {
  check_exhaustive_prime(q);
  const mpz_class qz(static_cast<unsigned long>(q));
  for (std::uint64_t x = 0; x < q * q; ++x) {
    const mpz_class v = f(mpz_class(static_cast<unsigned long>(x)));
    if (v == 0 || !divisible(v, q)) continue;
    const auto nu = static_cast<std::uint32_t>(valuation_of(v, qz));
    if (!exponent_ok(nu, E, require_multiple)) return false;
  }
  return true;
}

bool verify_forced_exponent(const BinaryForm& f, std::uint64_t q) {
  return verify_forced_exponent(f, q, f.degree(), false);
}

bool verify_profile(const RightSide& rhs, const ObstructionProfile& profile) {
  if (!profile.eligible) return true;
  if (const auto* f = std::get_if<BinaryForm>(&rhs))
    return verify_forced_exponent(*f, profile.prime, profile.forced_exponent, true);
  return verify_forced_exponent(std::get<UnivariatePoly>(rhs), profile.prime,
                                profile.never_divides ? 0 : profile.forced_exponent, true);
}

}  // namespace facteq
