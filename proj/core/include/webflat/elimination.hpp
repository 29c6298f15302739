// Resultants, discriminants, gcds and squarefree parts of multivariate
// polynomials over Q(i).
#pragma once

#include <string_view>
#include <vector>

#include "webflat/mpoly.hpp"

namespace webflat::poly {

/// Classical (Sylvester) resultant eliminating `var`, by the subresultant
/// PRS. Res(f, g) = (-1)^(deg f * deg g) Res(g, f). Throws
/// std::invalid_argument if `var` occurs in neither input; zero inputs give 0.
MPoly resultant(const MPoly& f, const MPoly& g, std::string_view var);

/// (-1)^(n(n-1)/2) Res(f, f') / lc(f), the standard normalization, so the
/// quadratic ax^2+bx+c has discriminant b^2-4ac. Throws if f is constant in var.
MPoly discriminant_in(const MPoly& f, std::string_view var);

/// Monic (graded-lex leading coefficient 1) greatest common divisor; the gcd
/// of two constants is 1 and gcd(0, 0) = 0.
MPoly gcd(const MPoly& f, const MPoly& g);

/// Gcd of the coefficients of f viewed as a polynomial in `var`.
MPoly content_in(const MPoly& f, int var);
MPoly primitive_part_in(const MPoly& f, int var);

/// f / gcd(f, all partial derivatives): the product of the distinct
/// irreducible factors of f, keeping f's leading coefficient.
MPoly squarefree(const MPoly& f);
/// f / gcd(f, df/dvar): the squarefree product of the factors of f that
/// involve `var` (factors free of `var` divide the derivative and drop out).
MPoly squarefree_in(const MPoly& f, std::string_view var);

/// Pseudo-remainder of a by b in `var` (lc(b)^(deg a - deg b + 1) a = q b + r).
MPoly pseudo_remainder(const MPoly& a, const MPoly& b, int var);

}  // namespace webflat::poly
