#pragma once

// Dense polynomial algebra over Q and Z used by the forms, obstruction and
// solver modules. Coefficient vectors are ascending (index = power) unless a
// name says otherwise; the zero polynomial is the empty vector.

#include <gmpxx.h>

#include <span>
#include <utility>
#include <vector>

namespace facteq::poly {

using QPoly = std::vector<mpq_class>;
using ZPoly = std::vector<mpz_class>;

void trim(QPoly& p);
void trim(ZPoly& p);
int degree(const QPoly& p);
int degree(const ZPoly& p);

QPoly to_rational(std::span<const mpz_class> p);

/// Multiplies by a positive rational so the result is a primitive integer
/// polynomial; signs are preserved.
ZPoly to_primitive_integer(const QPoly& p);

QPoly derivative(const QPoly& p);
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);

/// Monic gcd.
QPoly gcd(QPoly a, QPoly b);

/// p / gcd(p, p'): same roots, all simple.
QPoly squarefree_part(const QPoly& p);

/// p(x + s).
QPoly taylor_shift(const QPoly& p, const mpq_class& s);

mpq_class eval(const QPoly& p, const mpq_class& x);
mpz_class eval(const ZPoly& p, const mpz_class& x);
int sign_at(const ZPoly& p, const mpz_class& x);

/// Sturm chain of a squarefree polynomial, each member scaled to a primitive
/// integer polynomial by a positive factor.
std::vector<ZPoly> sturm_chain(const QPoly& p);

/// Number of sign changes of the chain at x (zeros skipped).
int sign_variations(const std::vector<ZPoly>& chain, const mpz_class& x);

/// Fraction-free (Bareiss) determinant.
mpz_class determinant(std::vector<std::vector<mpz_class>> m);

/// Sylvester resultant of two coefficient lists given in DESCENDING order; the
/// formal degrees are size()-1, so this is also the resultant of the binary
/// forms with those coefficients.
mpz_class sylvester_resultant(std::span<const mpz_class> f_desc, std::span<const mpz_class> g_desc);

}  // namespace facteq::poly
