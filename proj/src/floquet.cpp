#include "fermi/floquet.hpp"

#include "fermi/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numbers>

namespace fermi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

// Calls f(from, to, j, wrap) for each of the 2d hops out of every site; wrap is -1, 0 or +1.
template <class F>
void for_each_hop(const LatticeSpec& lat, F&& f) {
    const int Q = lat.cell_size();
    for (int s = 0; s < Q; ++s) {
        MultiIndex n = lat.site(s);
        for (int j = 0; j < lat.dim(); ++j) {
            for (int dir : {+1, -1}) {
                MultiIndex m = n;
                m[uz(j)] += dir;
                int wrap = 0;
                if (m[uz(j)] < 0 || m[uz(j)] >= lat.period(j)) wrap = dir;
                f(s, lat.site_index(lat.reduce(m)), j, wrap);
            }
        }
    }
}

} // namespace

FloquetMatrixSymbolic::FloquetMatrixSymbolic(LatticeSpec lattice, VarsPtr vars, std::vector<LaurentPoly> entries)
    : lattice_(std::move(lattice)), vars_(std::move(vars)), n_(lattice_.cell_size()), entries_(std::move(entries)) {
    if (entries_.size() != uz(n_ * n_)) throw ConstructionError("Floquet matrix needs Q*Q entries");
}

Eigen::MatrixXcd FloquetMatrixSymbolic::evaluate_at_k(std::span<const double> k) const {
    std::vector<std::complex<double>> pt(uz(vars_->size()), 0.0);
    for (int j = 0; j < lattice_.dim(); ++j) pt[uz(j)] = std::polar(1.0, kTwoPi * k[uz(j)]);
    Eigen::MatrixXcd m(n_, n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) m(i, j) = at(i, j).evaluate(pt);
    }
    return m;
}

FloquetMatrixSymbolic assemble_symbolic(const PeriodicPotential& V) {
    const auto& lat = V.lattice();
    const int Q = lat.cell_size();
    VarsPtr vars = floquet_vars(lat.dim());
    std::vector<LaurentPoly> e(uz(Q * Q), LaurentPoly(vars));
    for (int s = 0; s < Q; ++s) e[uz(s * Q + s)] = LaurentPoly::constant(vars, V.at(s));
    for_each_hop(lat, [&](int from, int to, int j, int wrap) {
        Exponents ex{};
        ex[uz(j)] = wrap;
        e[uz(from * Q + to)] -= LaurentPoly::monomial(vars, ex, GaussianRational(1));
    });
    return {lat, vars, std::move(e)};
}

FloquetMatrixNumeric assemble_numeric(const PeriodicPotential& V, std::span<const double> k) {
    const auto& lat = V.lattice();
    const int Q = lat.cell_size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Q, Q);
    auto vals = V.numeric_values();
    for (int s = 0; s < Q; ++s) m(s, s) = vals[uz(s)];
    for_each_hop(lat, [&](int from, int to, int j, int wrap) {
        m(from, to) -= wrap == 0 ? std::complex<double>(1.0) : std::polar(1.0, wrap * kTwoPi * k[uz(j)]);
    });
    return {lat, FloquetFlavor::D_k, std::move(m)};
}

Eigen::MatrixXcd assemble_numeric_derivative(const LatticeSpec& lat, std::span<const double> k, int dir) {
    const int Q = lat.cell_size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Q, Q);
    for_each_hop(lat, [&](int from, int to, int j, int wrap) {
        if (j != dir || wrap == 0) return;
        m(from, to) -= std::complex<double>(0.0, wrap * kTwoPi) * std::polar(1.0, wrap * kTwoPi * k[uz(j)]);
    });
    return m;
}

FloquetMatrixNumeric assemble_dtilde(const PeriodicPotential& V, std::span<const double> x) {
    std::vector<double> k(x.begin(), x.end());
    for (int j = 0; j < V.lattice().dim(); ++j) k[uz(j)] *= V.lattice().period(j);
    auto r = assemble_numeric(V, k);
    r.flavor = FloquetFlavor::D_tilde_x;
    return r;
}

FloquetMatrixNumeric assemble_fourier(const PeriodicPotential& V, std::span<const double> x) {
    const auto& lat = V.lattice();
    const int Q = lat.cell_size();
    DftTable table = dft(V);
    Eigen::MatrixXcd m(Q, Q);
    for (int a = 0; a < Q; ++a) {
        MultiIndex la = lat.site(a);
        for (int b = 0; b < Q; ++b) {
            MultiIndex lb = lat.site(b);
            MultiIndex diff(la.size());
            for (std::size_t j = 0; j < la.size(); ++j) diff[j] = la[j] - lb[j];
            m(a, b) = table.at(diff);
        }
        double diag = 0.0;
        for (int j = 0; j < lat.dim(); ++j) {
            diag -= 2.0 * std::cos(kTwoPi * (static_cast<double>(la[uz(j)]) / lat.period(j) + x[uz(j)]));
        }
        m(a, a) += diag;
    }
    return {lat, FloquetFlavor::H0_tilde_x, std::move(m)};
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXcd& m) {
    std::vector<std::complex<double>> ev;
    if (m.isApprox(m.adjoint(), 1e-13)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        for (int i = 0; i < m.rows(); ++i) ev.emplace_back(es.eigenvalues()[i], 0.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
        for (int i = 0; i < m.rows(); ++i) ev.push_back(es.eigenvalues()[i]);
    }
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

namespace {

// greedy nearest matching; robust to sort-order ties between complex eigenvalues
double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    double worst = 0.0;
    for (auto x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](auto u, auto v) { return std::abs(u - x) < std::abs(v - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

} // namespace

EquivalenceReport verify_equivalence(const PeriodicPotential& V, std::span<const double> x, double tol) {
    auto h = sorted_eigenvalues(assemble_fourier(V, x).m);
    auto d = sorted_eigenvalues(assemble_dtilde(V, x).m);
    EquivalenceReport r;
    r.max_deviation = multiset_distance(h, d);
    r.ok = r.max_deviation <= tol;
    r.worst_x.assign(x.begin(), x.end());
    return r;
}

} // namespace fermi
