#pragma once

#include "fermi/floquet.hpp"
#include "fermi/lattice.hpp"
#include "fermi/laurent_poly.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fermi {

enum class DetMethod { Bareiss, Cofactor };

/// Square matrix of Laurent polynomials, row-major.
struct PolyMatrix {
    int n = 0;
    std::vector<LaurentPoly> e;
    const LaurentPoly& at(int i, int j) const { return e[static_cast<std::size_t>(i * n + j)]; }
    LaurentPoly& at(int i, int j) { return e[static_cast<std::size_t>(i * n + j)]; }
};

/// Exact determinant. Rows are cleared of negative powers first and the monomial is divided back out.
LaurentPoly determinant(const PolyMatrix& m, DetMethod method = DetMethod::Bareiss);
/// Scalar determinant over Q(i) by fraction-based elimination.
GaussianRational scalar_determinant(std::vector<GaussianRational> a, int n);

/// D(z) - lambda I.
PolyMatrix characteristic_matrix(const FloquetMatrixSymbolic& d);

struct CharPolyBundle {
    LatticeSpec lattice;
    VarsPtr vars;
    LaurentPoly p;       // det(D(z) - lambda I)
    LaurentPoly p1;      // (-1)^Q z^{Q/q} p, a polynomial
    LaurentPoly ptilde;  // p(z1^q1, ..., zd^qd, lambda)
};

/**
 * P, P1 and P~ for V. The determinant is checked against scalar determinants at
 * `checks` random exact points (seeded); a mismatch throws InternalCheckError.
 */
CharPolyBundle charpoly_exact(const PeriodicPotential& V, DetMethod method = DetMethod::Bareiss, int checks = 3,
                              std::uint64_t seed = 1);

struct FactCheck {
    std::string name;
    bool ok = false;
    std::string detail;
    /// Reported but not part of the verdict.
    bool informational = false;
};

struct FactsReport {
    bool ok = true;
    std::vector<FactCheck> facts;
};

FactsReport check_facts(const CharPolyBundle& bundle);

/// Fast complex evaluation of P(k, lambda) = p(e^{2 pi i k}, lambda) and its k-derivatives.
class CharPolyEvaluator {
public:
    explicit CharPolyEvaluator(const LaurentPoly& p);

    int dim() const { return d_; }
    std::complex<double> value(std::span<const std::complex<double>> k, std::complex<double> lambda) const;
    std::vector<std::complex<double>> gradient(std::span<const std::complex<double>> k,
                                               std::complex<double> lambda) const;
    /// Row-major d x d matrix of second k-derivatives.
    std::vector<std::complex<double>> hessian(std::span<const std::complex<double>> k,
                                              std::complex<double> lambda) const;

    /// P at many real k with a fixed lambda; k is row-major (count x d). Uses the SIMD kernel when available.
    std::vector<std::complex<double>> value_batch(std::span<const double> k, std::size_t count, double lambda) const;

    /// Terms of the polynomial in z with lambda folded in at the given level.
    struct Folded {
        std::vector<std::int32_t> exps;  // count x d
        std::vector<double> re, im;
    };
    Folded fold_lambda(std::complex<double> lambda) const;

private:
    int d_;
    std::vector<std::int32_t> exps_;  // term-major, d z-exponents then the lambda exponent
    std::vector<std::complex<double>> coef_;
};

std::complex<double> evaluate_P(const CharPolyBundle& b, std::span<const std::complex<double>> k,
                                std::complex<double> lambda);
std::vector<std::complex<double>> gradient_P(const CharPolyBundle& b, std::span<const std::complex<double>> k,
                                             std::complex<double> lambda);

} // namespace fermi
