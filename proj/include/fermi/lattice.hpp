#pragma once

#include "fermi/gaussian_rational.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace fermi {

using MultiIndex = std::vector<int>;

/// Period lattice q_1 Z + ... + q_d Z.
class LatticeSpec {
public:
    explicit LatticeSpec(std::vector<int> periods);

    int dim() const { return static_cast<int>(periods_.size()); }
    const std::vector<int>& periods() const { return periods_; }
    int period(int j) const { return periods_[static_cast<std::size_t>(j)]; }
    /// Number of sites in the fundamental domain, q_1 * ... * q_d.
    int cell_size() const { return cell_size_; }
    /// gcd(q_1, ..., q_d) == 1.
    bool coprime() const { return coprime_; }

    /// Lexicographic site index with n_1 slowest.
    int site_index(const MultiIndex& n) const;
    MultiIndex site(int index) const;
    /// Reduces any n in Z^d to its representative in the fundamental domain.
    MultiIndex reduce(const MultiIndex& n) const;

    friend bool operator==(const LatticeSpec& a, const LatticeSpec& b) { return a.periods_ == b.periods_; }

private:
    std::vector<int> periods_;
    int cell_size_ = 1;
    bool coprime_ = true;
};

/// Periodic potential with exact values on the fundamental domain.
class PeriodicPotential {
public:
    PeriodicPotential(LatticeSpec lattice, std::vector<GaussianRational> values_in_site_order);

    const LatticeSpec& lattice() const { return lattice_; }
    const std::vector<GaussianRational>& values() const { return values_; }
    const GaussianRational& at(int site) const { return values_[static_cast<std::size_t>(site)]; }
    /// Value at any lattice point (periodic extension).
    const GaussianRational& at(const MultiIndex& n) const;
    /// Exact cell average [V].
    const GaussianRational& average() const { return average_; }
    bool is_real() const;
    bool is_constant() const;

    PeriodicPotential shifted(const GaussianRational& c) const;
    std::vector<std::complex<double>> numeric_values() const;

private:
    LatticeSpec lattice_;
    std::vector<GaussianRational> values_;
    GaussianRational average_;
};

/// Builds a potential from an (index -> value) map that must cover W exactly once.
PeriodicPotential build_potential(const LatticeSpec& lattice,
                                  const std::vector<std::pair<MultiIndex, GaussianRational>>& values);
PeriodicPotential zero_potential(const LatticeSpec& lattice);
PeriodicPotential constant_potential(const LatticeSpec& lattice, const GaussianRational& c);

/// Discrete Fourier coefficients of V on the dual grid, indexed like W (l_j = n_j / q_j).
class DftTable {
public:
    DftTable(LatticeSpec lattice, std::vector<std::complex<double>> entries);

    const LatticeSpec& lattice() const { return lattice_; }
    const std::vector<std::complex<double>>& entries() const { return entries_; }
    /// Periodically extended lookup; `numerators` are the integers m_j with l_j = m_j / q_j.
    std::complex<double> at(const MultiIndex& numerators) const;
    /// V(n) = sum_l Vhat(l) e^{2 pi i l.n}.
    std::vector<std::complex<double>> inverse() const;

private:
    LatticeSpec lattice_;
    std::vector<std::complex<double>> entries_;
};

DftTable dft(const PeriodicPotential& potential);

} // namespace fermi
