#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facteq/obstruction.hpp"
#include "facteq/valuation.hpp"

namespace facteq {

enum class Family { SumFactBinary, SumFactUni, ProdDfactBinary, ProdDfactUni };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view s);

/// Sum families:     scaling * (A n! + B m!) = rhs, cell = {n, m}, n > m >= 0.
/// Product families: scaling * b * prod n_i!! = rhs, cell = {n_1, ..., n_r}.
/// `kind` switches the product to single factorials (Brocard-type runs).
/// `scaling` is the positive multiplier that cleared rhs denominators.
struct Equation {
  Family family = Family::SumFactBinary;
  std::int64_t A = 1;
  std::int64_t B = 1;
  std::int64_t b = 1;
  FactorialKind kind = FactorialKind::DoubleFactorial;
  RightSide rhs;
  mpz_class scaling = 1;

  bool is_sum() const { return family == Family::SumFactBinary || family == Family::SumFactUni; }
  bool is_binary() const { return family == Family::SumFactBinary || family == Family::ProdDfactBinary; }
  /// Throws InputError on inconsistent fields.
  void validate() const;
  void validate_cell(std::span<const std::uint64_t> cell) const;
};

/// Exact left side as a big integer.
mpz_class left_value(const Equation& eq, std::span<const std::uint64_t> cell);

enum class Rule { NotDivisible, VLessThanE, VNotMultiple };

std::string_view to_string(Rule r);
std::optional<Rule> parse_rule(std::string_view s);

inline constexpr std::string_view kCheckerVersion = "facteq-check/1";

struct Certificate {
  Equation equation;
  std::vector<std::uint64_t> cell;
  std::uint64_t prime = 0;
  std::uint64_t valuation = 0;
  std::uint32_t forced_exponent = 0;
  ObstructionReason reason = ObstructionReason::None;
  Rule rule = Rule::VLessThanE;
  std::string checker_version{kCheckerVersion};
  std::string notes;
};

struct CertifyOptions {
  std::size_t prime_budget = 10'000;
  ValuationOptions valuation;
  simd::Isa isa = simd::active_isa();
};

struct CertifyOutcome {
  std::optional<Certificate> certificate;
  bool zero_left_side = false;
  std::uint64_t primes_tried = 0;
  std::vector<std::string> notes;
};

/// Scans candidate primes for one whose exact left valuation is impossible
/// for the right side. Sum families try the primes in (m/2, m] descending,
/// then the first `prime_budget` primes ascending. Product families try
/// every prime that can divide the left side, ascending.
CertifyOutcome certify_cell(const Equation& eq, std::span<const std::uint64_t> cell, const ProfileEngine& engine,
                            const CertifyOptions& opts = {});
CertifyOutcome certify_cell(const Equation& eq, std::span<const std::uint64_t> cell, const CertifyOptions& opts = {});

/// Tries a single prime, e.g. one found by factoring the left side.
std::optional<Certificate> certify_at_prime(const Equation& eq, std::span<const std::uint64_t> cell, std::uint64_t q,
                                            const ProfileEngine& engine, const CertifyOptions& opts = {});

struct RecheckResult {
  bool ok = false;
  std::string reason;
  bool exhaustive_profile = false;  // q <= 200 box check was run
  bool big_integer_valuation = false;
};

/// Recomputes the certificate through separate code paths: a big-integer
/// valuation, a fresh scalar-kernel profile, and the exhaustive forced
/// exponent check when q is small.
RecheckResult recheck(const Certificate& cert);

struct WindowReport {
  std::uint64_t m = 0;
  long double claim_lo = 0;
  long double claim_hi = 0;
  std::vector<std::uint64_t> claim_primes;    // eligible, in (m/2, m/2 + m/(12 log m))
  std::vector<std::uint64_t> relaxed_primes;  // eligible, in (m/2, m]
  bool claim_window_empty = true;
  bool below_asymptotic = false;
};

/// Requires m >= 10.
WindowReport window_prime_report(const ProfileEngine& engine, std::uint64_t m);

}  // namespace facteq
