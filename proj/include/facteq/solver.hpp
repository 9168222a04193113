#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facteq/arith.hpp"
#include "facteq/certify.hpp"

namespace facteq {

using IntPoint = std::pair<mpz_class, mpz_class>;

/// Exhaustive for positive definite quadratics: x runs over
/// |x| <= ceil(sqrt(N / lambda_min)) + 1 and y is solved exactly. nullopt is a
/// proof that N is not represented. Throws ResourceError when the x range
/// exceeds max_x_range.
std::optional<IntPoint> represent_definite_quadratic(const BinaryForm& f, const mpz_class& N,
                                                     std::uint64_t max_x_range = 50'000'000);

enum class RepStatus { Found, NoneInBall, UnknownBeyondBall, LocallyImpossible };
std::string_view to_string(RepStatus s);

struct RepResult {
  RepStatus status = RepStatus::UnknownBeyondBall;
  std::optional<IntPoint> point;
  std::uint64_t obstruction_modulus = 0;  // set for LocallyImpossible
};

/// Bounded search over |x| <= ball (each x solved exactly for y). A local
/// obstruction modulo a small prime proves there is no solution at all.
/// NoneInBall when ball >= |N|^(1/d), UnknownBeyondBall otherwise.
RepResult represent_general_form(const BinaryForm& f, const mpz_class& N, std::uint64_t ball);

/// Prime p <= 47 with f(x, y) != N (mod p) for all x, y, or 0.
std::uint64_t local_obstruction(const BinaryForm& f, const mpz_class& N);

/// All integer x with f(x) = N, ascending. Complete.
std::vector<mpz_class> integer_root(const UnivariatePoly& f, const mpz_class& N);

/// Integer roots of a nonzero integer polynomial (ascending coefficients).
std::vector<mpz_class> integer_roots(std::span<const mpz_class> ascending);

/// Sum of two squares from a complete factorization; nullopt if impossible.
std::optional<IntPoint> two_squares(const FactorizationSketch& sk);

/// a^2 + b^2 = p for a prime p = 1 mod 4.
IntPoint cornacchia_prime(const mpz_class& p);

/// true = rejected: alpha * L + beta is a non-residue modulo some p in primes,
/// where L is the equation's left side at `cell` (computed from residues of
/// the factorials only). Never rejects an actual square.
bool square_filter(const Equation& eq, std::span<const std::uint64_t> cell, const mpz_class& alpha,
                   const mpz_class& beta, std::span<const std::uint64_t> primes, simd::Isa isa = simd::active_isa());

enum class CellStatus { Solution, Certified, Degenerate, Exhausted, Unknown };
std::string_view to_string(CellStatus s);
std::optional<CellStatus> parse_cell_status(std::string_view s);

struct CellRecord {
  std::vector<std::uint64_t> cell;
  CellStatus status = CellStatus::Unknown;
  std::vector<mpz_class> witness;  // x (and y for binary forms)
  std::optional<Certificate> certificate;
  std::string note;
  bool in_hypothesis_region = false;
  FactorizationSketch left;  // left side, possibly with an unfactored part
};

struct SearchTask {
  Equation equation;
  std::uint64_t n_min = 1;
  std::uint64_t n_max = 0;
  std::uint64_t m_min = 1;           // sum families: m_min <= m < n
  std::uint32_t arity = 1;           // product families: cells are n_1 <= ... <= n_r
  bool include_diagonal = false;     // sum families: also n = m, i.e. (A+B) n!
  bool allow_infinite = false;       // product, polynomial target, deg <= r
  CertifyOptions certify;
  std::uint64_t ball = 200;          // general form search radius
  std::uint64_t max_x_range = 50'000'000;
  FactorOptions factoring;
  bool cross_check = true;

  unsigned workers = 1;
  std::string checkpoint_path;       // empty: no checkpoints
  std::uint64_t checkpoint_interval = 64;
  std::optional<std::uint64_t> stop_after;  // test hook: interrupt after this many new cells

  void validate() const;
};

struct SearchTotals {
  std::uint64_t cells = 0, solution = 0, certified = 0, degenerate = 0, exhausted = 0, unknown = 0;
  double unknown_fraction() const { return cells ? static_cast<double>(unknown) / static_cast<double>(cells) : 0.0; }
};

struct SearchReport {
  std::string task_hash;
  std::vector<CellRecord> records;  // in evaluation order
  SearchTotals totals;
  std::uint64_t resumed_cells = 0;
};

class SearchInterrupted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cells in evaluation order: ascending sum of arguments, then lexicographic.
std::vector<std::vector<std::uint64_t>> enumerate_cells(const SearchTask& task);

/// Classifies one cell. Diagonal sum cells (n = m) are handled as (A+B) n!.
CellRecord classify_cell(const SearchTask& task, const ProfileEngine& engine, std::span<const std::uint64_t> cell);

/// Runs or resumes a search. Throws SearchInterrupted when stop_after fires
/// (after writing a checkpoint) and std::logic_error on a cell that is both
/// certified and solved.
SearchReport run_search(const SearchTask& task);

SearchTotals tally(const std::vector<CellRecord>& records);

}  // namespace facteq
