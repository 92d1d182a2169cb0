#pragma once

#include "fermi/charpoly.hpp"
#include "fermi/lattice.hpp"
#include "fermi/laurent_poly.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace fermi {

enum class RootsForm { H1, H2 };

struct RootsProductSpec {
    LatticeSpec lattice;
    RootsForm kind = RootsForm::H1;
};

struct HTilde {
    LaurentPoly htilde;    // in floquet_vars(d); lambda absent
    LaurentPoly pushdown;  // h1 or h2
    bool sign_flipped = false;
};

/// h~1 (polynomial in z) or h~2 (polynomial in z1..z_{d-1}, 1/z_d) by iterated resultants against t^q - 1.
HTilde htilde(const RootsProductSpec& spec);

/// prod over t_j^{q_j} = 1 of g, where g lives in `vars` and t_j is variable t_index[j]. The t's are eliminated.
LaurentPoly roots_of_unity_product(const LaurentPoly& g, const std::vector<int>& t_index, const std::vector<int>& periods);

struct LowestComponentReport {
    bool ok = false;
    GaussianRational lambda;
    LaurentPoly phi_lowest, h1;
    LaurentPoly psi_lowest, h2;
    bool h1_match = false;
    bool h2_match = false;
};

LowestComponentReport lowest_component_check(const PeriodicPotential& V, const GaussianRational& lambda);
LowestComponentReport lowest_component_check(const CharPolyBundle& b, const GaussianRational& lambda);

struct DegreeBoundReport {
    bool ok = false;
    int degree = 0;
    int bound = 0;
    bool attained = false;
    std::string bound_name;
};

/// Total z-degree of Phi = (-1)^Q (z1...zd)^Q P~; lambda symbolic when absent.
DegreeBoundReport degree_bound_check(const PeriodicPotential& V, const std::optional<GaussianRational>& lambda = {});
DegreeBoundReport degree_bound_check(const CharPolyBundle& b, const std::optional<GaussianRational>& lambda = {});

enum class Verdict { Irreducible, Reducible, Inconclusive };
std::string to_string(Verdict v);

struct Evidence {
    std::string step;
    std::string detail;
    bool passed = false;
};

struct IrreducibilityCertificate {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Evidence> evidence;
    std::vector<LaurentPoly> factors;
};

struct CertifyOptions {
    std::vector<long> schedule{2, 3, 5, -2, 7, -3, 11, -5, 13, 4, -7, 17};
    int max_attempts = 12;
    int max_primes = 40;
    /// Tried by exact division before any criterion; a proper divisor yields Reducible.
    std::vector<LaurentPoly> candidate_factors;
};

/// Sufficient-criterion certificate for absolute irreducibility over C (monomial factors are units).
IrreducibilityCertificate certify_irreducible(const LaurentPoly& p, const CertifyOptions& options = {});

/// Lattice-length gcd of the Newton polygon edges of a bivariate polynomial in variables x, y.
long newton_edge_gcd(const LaurentPoly& p, int x, int y);

/// P1(., lambda) with the h1 / Pi2 pushdowns as candidate factors.
IrreducibilityCertificate certify_fermi_irreducible(const PeriodicPotential& V, const GaussianRational& lambda,
                                                    const CertifyOptions& options = {});

struct FactorAtAverageReport {
    Verdict verdict = Verdict::Inconclusive;  // Reducible or Irreducible (at [V])
    GaussianRational average;
    LaurentPoly lhs;        // (-1)^Q (z1 z2)^Q P~(z, [V])
    LaurentPoly pi1, pi2;   // the two root products
    std::optional<GaussianRational> K;
    bool identity_holds = false;
    std::vector<LaurentPoly> lhs_factors;  // pi1 and K pi2
    std::vector<LaurentPoly> p1_factors;   // their pushdowns, factors of P1(., [V])
    IrreducibilityCertificate p1_certificate;
};

FactorAtAverageReport factor_at_average(const PeriodicPotential& V);

bool squarefree_check(const PeriodicPotential& V, const GaussianRational& lambda);

struct AllLambdaSquarefree {
    bool all_lambda = false;   // square-free at every lambda
    LaurentPoly gcd_in_lambda;  // G(lambda); constant when all_lambda
    std::vector<std::complex<double>> exceptional;  // numeric roots of G
};

/// d = 2: certificate that P1(., lambda) is square-free for every lambda outside the roots of G.
AllLambdaSquarefree squarefree_all_lambda(const CharPolyBundle& b);
/// Square-freeness at a floating level via the all-lambda certificate.
bool squarefree_at_level(const AllLambdaSquarefree& cert, double lambda, double tol = 1e-6);

struct SingularPoint {
    std::vector<double> k;
    double residual_p = 0.0;
    double residual_grad = 0.0;
};

struct SingularPointReport {
    GaussianRational lambda_star;
    double lambda_value = 0.0;
    std::vector<SingularPoint> points;
    int count = 0;
    int bound = 0;
    bool squarefree = false;
    bool ok = false;
};

/// d = 2, exact level: gcd of the two z2-resultants, numeric roots, Newton polishing, torus filter.
SingularPointReport singular_points_d2(const PeriodicPotential& V, const GaussianRational& lambda, double tol = 1e-8);
SingularPointReport singular_points_d2(const CharPolyBundle& b, const GaussianRational& lambda, double tol = 1e-8);
/// d = 2, floating level: resultants kept symbolic in lambda and evaluated at the level.
SingularPointReport singular_points_d2_numeric(const CharPolyBundle& b, double lambda, double tol = 1e-8);

/// Roots of sum_i c[i] x^i by companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c);

} // namespace fermi
