#pragma once

#include "fermi/lattice.hpp"
#include "fermi/laurent_poly.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace fermi {

/// D(z): Laurent entries in z1..zd (the ring also carries lambda, unused here).
class FloquetMatrixSymbolic {
public:
    FloquetMatrixSymbolic(LatticeSpec lattice, VarsPtr vars, std::vector<LaurentPoly> entries);

    const LatticeSpec& lattice() const { return lattice_; }
    const VarsPtr& vars() const { return vars_; }
    int size() const { return n_; }
    const LaurentPoly& at(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }

    /// Entrywise evaluation at z_j = e^{2 pi i k_j}.
    Eigen::MatrixXcd evaluate_at_k(std::span<const double> k) const;

private:
    LatticeSpec lattice_;
    VarsPtr vars_;
    int n_;
    std::vector<LaurentPoly> entries_;
};

enum class FloquetFlavor { D_k, D_tilde_x, H0_tilde_x };

struct FloquetMatrixNumeric {
    LatticeSpec lattice;
    FloquetFlavor flavor;
    Eigen::MatrixXcd m;
};

FloquetMatrixSymbolic assemble_symbolic(const PeriodicPotential& V);

/// D(k), built directly from the hopping rule.
FloquetMatrixNumeric assemble_numeric(const PeriodicPotential& V, std::span<const double> k);
/// dD/dk_j at k.
Eigen::MatrixXcd assemble_numeric_derivative(const LatticeSpec& lattice, std::span<const double> k, int j);
/// D~(x) = D(q1 x1, ..., qd xd).
FloquetMatrixNumeric assemble_dtilde(const PeriodicPotential& V, std::span<const double> x);
/// H~0(x) on the dual grid with convolution by the DFT of V.
FloquetMatrixNumeric assemble_fourier(const PeriodicPotential& V, std::span<const double> x);

/// Eigenvalues sorted by (real, imag); Hermitian solver when the matrix is Hermitian.
std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXcd& m);

struct EquivalenceReport {
    bool ok = true;
    double max_deviation = 0.0;
    std::vector<double> worst_x;
};

/// Compares the spectra of H~0(x) and D~(x).
EquivalenceReport verify_equivalence(const PeriodicPotential& V, std::span<const double> x, double tol);

} // namespace fermi
