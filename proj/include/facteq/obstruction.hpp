#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "facteq/forms.hpp"
#include "facteq/kernels.hpp"

namespace facteq {

using RightSide = std::variant<BinaryForm, UnivariatePoly>;

std::string describe(const RightSide& rhs);
std::uint32_t degree_of(const RightSide& rhs);

enum class ObstructionReason { None, NoRootModQ, LinearFactorMultiplicity };

enum class Exclusion {
  None,
  DividesLeading,     // q | a_d
  DividesInvariants,  // q | a_d a_0 disc_mod content (or a factor discriminant / the unit)
  ResultantVanishes,  // two factors share a root mod q
  HasRoot,            // forced exponent would be 1
  HypothesisFails,    // some factor has d_i e_i = 1
};

std::string_view to_string(ObstructionReason r);
std::string_view to_string(Exclusion e);

/// Meaning of an eligible profile: for every integer point with a nonzero
/// value N, q | N implies nu_q(N) is a positive multiple of forced_exponent.
/// When never_divides is set (univariate targets only) q divides no value at
/// all and forced_exponent is 0.
struct ObstructionProfile {
  std::uint64_t prime = 0;
  bool eligible = false;
  std::uint32_t forced_exponent = 0;
  bool never_divides = false;
  ObstructionReason reason = ObstructionReason::None;
  Exclusion excluded = Exclusion::None;
};

struct ObstructionOptions {
  // Exhaustive residue scan up to here, x^q - x gcd above.
  std::uint64_t root_scan_limit = 1'000'000;
};

/// Does sum desc[j] x^(k-j) have a root modulo the prime q?
bool has_root_mod(std::span<const mpz_class> desc, std::uint64_t q, const ObstructionOptions& opts = {},
                  simd::Isa isa = simd::active_isa());

/// Precomputes the factor data of one right side and memoizes profiles by
/// prime. Safe to share between threads.
class ProfileEngine {
 public:
  explicit ProfileEngine(RightSide rhs, ObstructionOptions opts = {}, simd::Isa isa = simd::active_isa());

  const RightSide& rhs() const { return rhs_; }
  const FactorList& factors() const { return factors_; }
  bool binary() const { return std::holds_alternative<BinaryForm>(rhs_); }

  ObstructionProfile profile(std::uint64_t q) const;

 private:
  ObstructionProfile compute(std::uint64_t q) const;

  RightSide rhs_;
  ObstructionOptions opts_;
  simd::Isa isa_;
  FactorList factors_;
  std::uint32_t degree_ = 0;
  mpz_class invariant_;  // product that q must not divide
  std::vector<mpz_class> factor_discs_;
  std::vector<mpz_class> resultants_;
  bool hypothesis_fails_ = false;

  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, ObstructionProfile> cache_;
};

/// Irreducible binary forms (native check d <= 4, declared otherwise).
ObstructionProfile is_obstruction_prime(const BinaryForm& f, std::uint64_t q);

/// Forms with a factor list (declared, or computed for d <= 4).
ObstructionProfile obstruction_profile_reducible(const BinaryForm& f, std::uint64_t q);

ObstructionProfile obstruction_profile(const RightSide& rhs, std::uint64_t q);

struct ObstructionScan {
  std::vector<ObstructionProfile> eligible;  // ascending by prime
  std::uint64_t primes_in_range = 0;
  double density = 0.0;
};

/// Eligible primes in [lo, hi] and their share of all primes there.
ObstructionScan scan_obstruction_primes(const RightSide& rhs, std::uint64_t lo, std::uint64_t hi,
                                        unsigned workers = 1);
ObstructionScan scan_obstruction_primes(const ProfileEngine& engine, std::uint64_t lo, std::uint64_t hi,
                                        unsigned workers = 1);

inline constexpr std::uint64_t kExhaustivePrimeLimit = 200;

/// Brute force over (x, y) in [0, q^2)^2 (x in [0, q^2) for polynomials):
/// every nonzero value divisible by q has nu_q >= E, or nu_q a multiple of E
/// when require_multiple. E = 0 asserts that q divides no nonzero value.
/// Requires q prime and q <= kExhaustivePrimeLimit.
bool verify_forced_exponent(const BinaryForm& f, std::uint64_t q, std::uint32_t E, bool require_multiple);
bool verify_forced_exponent(const UnivariatePoly& f, std::uint64_t q, std::uint32_t E, bool require_multiple);

/// The plain statement with E = deg f.
bool verify_forced_exponent(const BinaryForm& f, std::uint64_t q);

/// Checks an eligible profile's claim exhaustively; ineligible profiles claim
/// nothing and pass.
bool verify_profile(const RightSide& rhs, const ObstructionProfile& profile);

}  // namespace facteq
