#pragma once

// Input mini-grammar for right sides.
//   compressed:  x2+y2, 3x2y - xy2, x^3 - 2, 1/2x2 + 1/2y2
//   list:        [1, 0, 1] or 1,0,1 (descending; integers or p/q)
//   factors:     [1,0,1]^2*[1,-1] with an optional leading integer unit 3*...

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "facteq/obstruction.hpp"

namespace facteq {

enum class TargetKind { Form, Poly };

struct ParsedTarget {
  RightSide rhs;
  // Positive multiplier that cleared rational coefficients; the equation is
  // scaled by it so the left side becomes scaling * (...).
  mpz_class scaling = 1;
};

/// Compressed grammar. Degree >= 5 is rejected (use a coefficient list).
ParsedTarget parse_target(std::string_view text, TargetKind kind);
ParsedTarget parse_target_coeffs(std::string_view list, TargetKind kind);

std::vector<mpq_class> parse_rational_list(std::string_view list);
FactorList parse_factor_list(std::string_view text);

/// Comma separated unsigned integers.
std::vector<std::uint64_t> parse_u64_list(std::string_view list);

}  // namespace facteq
