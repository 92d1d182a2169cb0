#pragma once

#include "fermi/laurent_poly.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fermi {

/// Coefficients of a univariate polynomial in `var`, constant term first.
/// Throws unless p is a polynomial in `var` alone with rational coefficients.
std::vector<mpq_class> univariate_coefficients(const LaurentPoly& p, int var);

/**
 * Rabin's test: f mod p irreducible of the same degree as f.
 * Throws PreconditionError if p divides a denominator or the leading
 * numerator, or if f mod p is not square-free.
 */
bool irreducible_mod_p(std::span<const mpq_class> f, std::uint64_t p);
bool irreducible_mod_p(const LaurentPoly& f, int var, std::uint64_t p);

/// Degrees of the irreducible factors of f mod p (distinct-degree factorization), ascending.
/// Same preconditions as irreducible_mod_p.
std::vector<int> factor_degrees_mod_p(std::span<const mpq_class> f, std::uint64_t p);

/// Whether p is usable for f: no denominator collision, no degree drop, square-free reduction.
bool good_prime(std::span<const mpq_class> f, std::uint64_t p);

struct RationalIrreducibility {
    bool irreducible = false;
    std::string method;
    std::vector<std::uint64_t> primes;
    std::vector<std::vector<int>> patterns;
};

/// Sufficient test for irreducibility over Q. `irreducible == false` means "not shown".
RationalIrreducibility rational_irreducibility(std::span<const mpq_class> f, int max_primes = 40);

bool is_rational_square(const mpq_class& x);

} // namespace fermi
