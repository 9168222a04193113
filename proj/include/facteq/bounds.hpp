#pragma once

// Numeric versions of the growth bounds behind the finiteness arguments.
// Everything conditional on the ABC conjecture is labelled as such; nothing
// here asserts it.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facteq/forms.hpp"

namespace facteq {

inline constexpr std::uint64_t kStirlingScanCap = 1'000'000'000;

enum class StirlingSide { Single, Double };

/// Single: (2m+1)^(2m+1) / m^m < E' e^(slope m + C')
/// Double: same left side in n1 times the one in m1 < E' e^(A' n1 + B' m1 + C')
/// For Single the slope is B' when B' > 0, else A' (B' = A' + 2 + ln 2 is
/// the already-expanded exponent).
struct StirlingInequality {
  long double A = 0, B = 0, C = 0, E = 1;
  StirlingSide side = StirlingSide::Single;

  void validate() const;
  long double slope() const { return B > 0 ? B : A; }
};

/// log((2m+1)^(2m+1) / m^m), with 0 log 0 = 0.
long double stirling_lhs_log(std::uint64_t m);

struct StirlingResult {
  // Largest m >= 1 satisfying the inequality; nullopt when none does.
  std::optional<std::uint64_t> m_max;
  // From here on the log difference is increasing (convex, derivative >= 0).
  std::uint64_t monotone_from = 1;
  // Smallest |lhs - rhs| seen at the crossing, for the caller's slack check.
  long double margin = 0;
};

/// Throws InputError when the inequality still holds at kStirlingScanCap.
StirlingResult stirling_bound(const StirlingInequality& ineq);

/// Double case: for each n1 >= 1 with some admissible m1 >= 1, the largest
/// such m1. Finite; a staircase once n1 is past the turning point.
std::vector<std::pair<std::uint64_t, std::uint64_t>> stirling_frontier(const StirlingInequality& ineq);

struct RadicalBound {
  std::uint64_t m = 0;
  long double log_radical = 0;  // theta(2m+1) = log rad((2m+1)!)
  long double log_bound = 0;    // (2m+1) log 4
  bool holds = false;
};

RadicalBound radical_bound_factorial(std::uint64_t m);

struct AbcParams {
  std::optional<mpq_class> epsilon;  // default 1/(2d)
  long double K = 1;                 // K(epsilon), a hypothesis
  std::int64_t b = 1;                // equation b n!! = f(x)
};

struct BoundConstant {
  std::string name;
  long double value = 0;
  bool conditional = false;
  std::string provenance;
};

struct BoundReport {
  std::string poly;
  std::uint32_t degree = 0;
  mpq_class epsilon;
  long double K = 1;
  std::string depressed;  // Q(z)
  mpz_class c;            // b d^d a^(d-1)
  std::uint32_t j = 0;
  std::string r1;         // R_1(z)
  long double exponent = 0;  // 1 + eps - eps j
  std::vector<BoundConstant> constants;
  // m bound for n = 2m + 1, and log |z| bound. Both conditional.
  std::uint64_t m_max = 0;
  long double log_z_max = 0;
  // Hypothesis of the two-factor theorem, read on f and on Q.
  bool monomial_original = false;
  bool monomial_depressed = false;
  int distinct_roots = 0;
  std::vector<RadicalBound> radical_checks;  // unconditional

  const BoundConstant& constant(const std::string& name) const;
};

/// Requires deg f >= 2 and Q(z) != z^d after depression (otherwise the
/// certifier handles the equation and InputError is thrown).
BoundReport conditional_bound_pipeline(const UnivariatePoly& f, const AbcParams& params);

}  // namespace facteq
