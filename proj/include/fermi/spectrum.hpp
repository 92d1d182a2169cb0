#pragma once

#include "fermi/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fermi {

/// Bands are numbered 1..Q throughout (lambda_1 <= ... <= lambda_Q).
struct BandStructure {
    LatticeSpec lattice{std::vector<int>{1}};
    std::vector<int> grid;            // points per axis over [0,1)
    std::vector<double> eigenvalues;  // point-major, Q per point
    std::vector<std::pair<double, double>> bands;

    int bands_count() const { return lattice.cell_size(); }
    std::size_t points() const;
    std::vector<double> k_of(std::size_t point) const;
    double value(std::size_t point, int m) const;
};

/// Worker count from FERMI_THREADS, else the hardware concurrency.
int thread_count();

BandStructure compute_bands(const PeriodicPotential& V, const std::vector<int>& grid);

/// Sorted eigenvalues of D(k).
std::vector<double> band_values(const PeriodicPotential& V, const std::vector<double>& k);

/// d lambda_m / dk by first-order perturbation; throws DegenerateError when the eigenvalue is not simple.
std::vector<double> hf_gradient(const PeriodicPotential& V, const std::vector<double>& k, int m, double gap = 1e-8);

/// Union of the band intervals as disjoint sorted intervals.
std::vector<std::pair<double, double>> band_union(const BandStructure& bs);

enum class ExtremumKind { Min, Max };

struct Extremum {
    int band = 1;
    std::vector<double> k;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::Min;
    bool refined = false;
};

std::vector<Extremum> find_extrema(const PeriodicPotential& V, int m, const BandStructure& bs, bool refine = true);

struct LevelSetPoint {
    std::vector<double> k;
    double band_value = 0.0;
    double residual_p = 0.0;
    double residual_grad = 0.0;
    bool newton_polished = false;
};

struct LevelSetReport {
    int band = 1;
    double lambda = 0.0;
    ExtremumKind kind = ExtremumKind::Min;
    int seeds = 0;
    std::vector<LevelSetPoint> points;
    double max_residual_p = 0.0;
    double max_residual_grad = 0.0;
    bool ok = false;
};

/// Refuses (PreconditionError) unless lambda is an extremum value of lambda_m within 1e-6.
LevelSetReport level_set_check(const PeriodicPotential& V, int m, double lambda, const BandStructure& bs,
                               double tol = 1e-7);

struct FreeCheck {
    double lambda = 0.0;
    bool interior = false;
    int band = 0;  // a band containing lambda in its open interior, 0 if none
};

struct FreeOperatorReport {
    std::vector<FreeCheck> samples;
    std::optional<FreeCheck> zero;  // present when some period is odd
    bool ok = false;
};

FreeOperatorReport free_operator_checks(const std::vector<int>& periods, const std::vector<int>& grid, int samples = 50,
                                        double margin = 1e-6);

enum class PerturbationProfile { Decay, Bump };

/// v(n) = C e^{-|n|^gamma} (Decay) or C 1{n = 0} (Bump).
struct Perturbation {
    double amplitude = 0.0;
    double gamma = 1.5;
    PerturbationProfile profile = PerturbationProfile::Decay;

    double at(const std::vector<int>& n) const;
};

struct ScanOptions {
    double ipr_threshold = 0.05;
    double margin = 0.1;
    std::vector<std::pair<double, double>> exclusions;
    int band_grid = 64;
    double match_tol = 0.05;  // eigenvalue distance identifying a flag across boxes
};

struct BoxEigen {
    double lambda = 0.0;
    double ipr = 0.0;
    double edge_mass = 0.0;
};

struct BoxResult {
    int N = 0;
    int size = 0;
    int in_band = 0;
    std::vector<BoxEigen> flagged;
    double max_in_band_ipr = 0.0;
    BoxEigen lowest;
    BoxEigen highest;
};

struct BoxSpectrumReport {
    std::vector<std::pair<double, double>> bands;
    std::vector<BoxResult> boxes;
    std::vector<double> persistent;  // eigenvalues flagged in every box
    bool ok = false;
};

BoxSpectrumReport embedded_scan(const PeriodicPotential& V, const Perturbation& v, const std::vector<int>& boxes,
                                const ScanOptions& options = {});

std::string to_string(ExtremumKind k);

} // namespace fermi
