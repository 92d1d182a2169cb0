#pragma once

#include "fermi/gaussian_rational.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fermi {

inline constexpr int kMaxVars = 8;

/// Exponent vector; entries beyond the ring's variable count stay zero.
using Exponents = std::array<std::int32_t, kMaxVars>;

using VarNames = std::vector<std::string>;
using VarsPtr = std::shared_ptr<const VarNames>;

VarsPtr make_vars(std::vector<std::string> names);
/// z1, ..., zd followed by "lambda".
VarsPtr floquet_vars(int d);
bool same_vars(const VarsPtr& a, const VarsPtr& b);

/**
 * Sparse Laurent polynomial over Q(i) in an ordered variable list.
 *
 * Terms are kept sorted by ascending lexicographic exponent order with no
 * zero coefficients, so every value has exactly one representation. The
 * monomial shift z^shift and the polynomial core (see shift()/core()) are
 * derived views of that representation.
 */
class LaurentPoly {
public:
    struct Term {
        Exponents exp{};
        GaussianRational coef;
    };

    LaurentPoly() = default;
    explicit LaurentPoly(VarsPtr vars) : vars_(std::move(vars)) {}

    static LaurentPoly constant(VarsPtr vars, const GaussianRational& c);
    static LaurentPoly variable(VarsPtr vars, int var, int power = 1);
    static LaurentPoly monomial(VarsPtr vars, const Exponents& exp, const GaussianRational& c);
    /// Sums duplicate exponents and drops zeros.
    static LaurentPoly from_terms(VarsPtr vars, std::vector<Term> terms);

    const VarsPtr& vars() const { return vars_; }
    int nvars() const { return vars_ ? static_cast<int>(vars_->size()) : 0; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    /// All exponents non-negative.
    bool is_polynomial() const;
    bool is_real() const;
    bool depends_on(int var) const;
    GaussianRational constant_term() const;

    /// Largest / smallest exponent of `var`; 0 for the zero polynomial.
    int degree(int var) const;
    int min_degree(int var) const;
    /// max over terms of sum_j weights[j] * exp[j].
    int weighted_degree(std::span<const int> weights) const;
    int total_degree() const;

    /// Per-variable minimum exponent: the monomial factor z^shift.
    Exponents shift() const;
    /// The polynomial with the monomial factor removed.
    LaurentPoly core() const;

    const Term& leading_term() const { return terms_.back(); }

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    LaurentPoly& operator*=(const GaussianRational& c);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(LaurentPoly a, const GaussianRational& c) { return a *= c; }
    friend LaurentPoly operator*(const GaussianRational& c, LaurentPoly a) { return a *= c; }
    LaurentPoly operator-() const;

    LaurentPoly pow(unsigned n) const;
    LaurentPoly mul_monomial(const Exponents& exp) const;
    LaurentPoly derivative(int var) const;

    /// Replaces `var` by `value`. Negative powers require `value` to be a monomial.
    LaurentPoly substitute(int var, const LaurentPoly& value) const;
    /// Sets `var` to a constant; the variable list is unchanged.
    LaurentPoly specialize(int var, const GaussianRational& value) const;
    /// z_j -> z_j^{factors[j]} for every listed variable (factor 1 elsewhere).
    LaurentPoly scale_exponents(std::span<const int> factors) const;

    /// Coefficient of var^power, as a polynomial not involving var.
    LaurentPoly coefficient(int var, int power) const;
    /// Coefficients indexed by power 0..degree(var); requires min_degree(var) >= 0.
    std::vector<LaurentPoly> coefficients_in(int var) const;

    /// Moves into another variable list: old variable i becomes new variable mapping[i].
    LaurentPoly remap(VarsPtr new_vars, std::span<const int> mapping) const;

    GaussianRational evaluate(std::span<const GaussianRational> point) const;
    std::complex<double> evaluate(std::span<const std::complex<double>> point) const;

    /// Terms in ascending lex order, e.g. "z1 + z1^2*z2 - 3/2*lambda".
    std::string to_string() const;
    /// Unicode display form (superscripts, subscripted z, λ).
    std::string pretty() const;

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

private:
    void check_compatible(const LaurentPoly& o) const;

    VarsPtr vars_;
    std::vector<Term> terms_;
};

/// Reads the canonical text form produced by to_string().
LaurentPoly parse_poly(VarsPtr vars, std::string_view text);

/// Exact quotient a / b; throws if b does not divide a.
LaurentPoly exact_divide(const LaurentPoly& a, const LaurentPoly& b);
std::optional<LaurentPoly> try_divide(const LaurentPoly& a, const LaurentPoly& b);

/// Every z_j replaced by z_j^{q_j}.
LaurentPoly pushforward(const LaurentPoly& p, std::span<const int> exponents);
/// Inverse of pushforward; throws naming the first term whose exponent is not divisible.
LaurentPoly exponent_division(const LaurentPoly& p, std::span<const int> divisors);

/**
 * Lowest-degree homogeneous component in relabeled variables.
 *
 * signs[j] = +1 keeps z_j, -1 uses w_j = 1/z_j, 0 excludes the variable from
 * the degree count (it is treated as a coefficient). Throws if p is not a
 * polynomial in the relabeled variables.
 */
LaurentPoly weighted_lowest_component(const LaurentPoly& p, std::span<const int> signs);

} // namespace fermi
