#pragma once

#include "fermi/laurent_poly.hpp"

namespace fermi {

/// gcd of the coefficients of p viewed as a polynomial in `var`, normalized monic.
LaurentPoly content(const LaurentPoly& p, int var);
LaurentPoly primitive_part(const LaurentPoly& p, int var);

/// Scales p so its lex-leading coefficient is 1.
LaurentPoly normalize_monic(const LaurentPoly& p);

/// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in `var`.
LaurentPoly pseudo_remainder(const LaurentPoly& a, const LaurentPoly& b, int var);

/**
 * Multivariate gcd over Q(i) by recursive subresultant remainder sequences.
 * Inputs must be polynomials. The result is normalized monic (unique up to unit).
 */
LaurentPoly subresultant_gcd(const LaurentPoly& a, const LaurentPoly& b);

/// Sylvester resultant eliminating `var`: lc(a)^deg b * prod_{a(r)=0} b(r).
LaurentPoly resultant(const LaurentPoly& a, const LaurentPoly& b, int var);

/// gcd(p, dp/dz_j) constant for every variable p depends on.
bool squarefree_test(const LaurentPoly& p);

} // namespace fermi
