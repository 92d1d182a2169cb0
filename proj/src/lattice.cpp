#include "fermi/lattice.hpp"

#include "fermi/error.hpp"

#include <numbers>
#include <numeric>

namespace fermi {

LatticeSpec::LatticeSpec(std::vector<int> periods) : periods_(std::move(periods)) {
    if (periods_.empty()) throw ConstructionError("lattice needs at least one period");
    int g = 0;
    for (int q : periods_) {
        if (q < 1) throw ConstructionError("non-positive period " + std::to_string(q));
        cell_size_ *= q;
        g = std::gcd(g, q);
    }
    coprime_ = g == 1;
}

int LatticeSpec::site_index(const MultiIndex& n) const {
    if (static_cast<int>(n.size()) != dim()) throw ConstructionError("index has wrong dimension");
    int idx = 0;
    for (int j = 0; j < dim(); ++j) {
        int q = period(j);
        if (n[static_cast<std::size_t>(j)] < 0 || n[static_cast<std::size_t>(j)] >= q) {
            throw ConstructionError("index outside the fundamental domain");
        }
        idx = idx * q + n[static_cast<std::size_t>(j)];
    }
    return idx;
}

MultiIndex LatticeSpec::site(int index) const {
    MultiIndex n(periods_.size());
    for (int j = dim() - 1; j >= 0; --j) {
        n[static_cast<std::size_t>(j)] = index % period(j);
        index /= period(j);
    }
    return n;
}

MultiIndex LatticeSpec::reduce(const MultiIndex& n) const {
    MultiIndex r(n.size());
    for (std::size_t j = 0; j < n.size(); ++j) {
        int q = periods_[j];
        r[j] = ((n[j] % q) + q) % q;
    }
    return r;
}

PeriodicPotential::PeriodicPotential(LatticeSpec lattice, std::vector<GaussianRational> values)
    : lattice_(std::move(lattice)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != lattice_.cell_size()) {
        throw ConstructionError("potential needs exactly " + std::to_string(lattice_.cell_size()) + " values, got " +
                                std::to_string(values_.size()));
    }
    GaussianRational sum;
    for (const auto& v : values_) sum += v;
    average_ = sum / GaussianRational(static_cast<long>(lattice_.cell_size()));
}

const GaussianRational& PeriodicPotential::at(const MultiIndex& n) const {
    return values_[static_cast<std::size_t>(lattice_.site_index(lattice_.reduce(n)))];
}

bool PeriodicPotential::is_real() const {
    for (const auto& v : values_) {
        if (!v.is_real()) return false;
    }
    return true;
}

bool PeriodicPotential::is_constant() const {
    for (const auto& v : values_) {
        if (v != values_.front()) return false;
    }
    return true;
}

PeriodicPotential PeriodicPotential::shifted(const GaussianRational& c) const {
    auto vals = values_;
    for (auto& v : vals) v += c;
    return {lattice_, std::move(vals)};
}

std::vector<std::complex<double>> PeriodicPotential::numeric_values() const {
    std::vector<std::complex<double>> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(v.to_complex());
    return out;
}

PeriodicPotential build_potential(const LatticeSpec& lattice,
                                  const std::vector<std::pair<MultiIndex, GaussianRational>>& values) {
    std::vector<GaussianRational> ordered(static_cast<std::size_t>(lattice.cell_size()));
    std::vector<bool> seen(ordered.size(), false);
    for (const auto& [n, v] : values) {
        auto idx = static_cast<std::size_t>(lattice.site_index(n));
        if (seen[idx]) throw ConstructionError("duplicate potential value at site " + std::to_string(idx));
        seen[idx] = true;
        ordered[idx] = v;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) throw ConstructionError("missing potential value at site " + std::to_string(i));
    }
    return {lattice, std::move(ordered)};
}

PeriodicPotential zero_potential(const LatticeSpec& lattice) {
    return {lattice, std::vector<GaussianRational>(static_cast<std::size_t>(lattice.cell_size()))};
}

PeriodicPotential constant_potential(const LatticeSpec& lattice, const GaussianRational& c) {
    return {lattice, std::vector<GaussianRational>(static_cast<std::size_t>(lattice.cell_size()), c)};
}

DftTable::DftTable(LatticeSpec lattice, std::vector<std::complex<double>> entries)
    : lattice_(std::move(lattice)), entries_(std::move(entries)) {}

std::complex<double> DftTable::at(const MultiIndex& numerators) const {
    return entries_[static_cast<std::size_t>(lattice_.site_index(lattice_.reduce(numerators)))];
}

namespace {

double phase(const LatticeSpec& lattice, const MultiIndex& l_num, const MultiIndex& n) {
    double s = 0.0;
    for (int j = 0; j < lattice.dim(); ++j) {
        auto jj = static_cast<std::size_t>(j);
        // reduce l_j * n_j mod q_j before dividing to keep the angle small
        long prod = static_cast<long>(l_num[jj]) * n[jj] % lattice.period(j);
        s += static_cast<double>(prod) / lattice.period(j);
    }
    return 2.0 * std::numbers::pi * s;
}

} // namespace

std::vector<std::complex<double>> DftTable::inverse() const {
    const int Q = lattice_.cell_size();
    std::vector<std::complex<double>> v(static_cast<std::size_t>(Q));
    for (int n = 0; n < Q; ++n) {
        auto ni = lattice_.site(n);
        std::complex<double> acc = 0.0;
        for (int l = 0; l < Q; ++l) {
            acc += entries_[static_cast<std::size_t>(l)] * std::polar(1.0, phase(lattice_, lattice_.site(l), ni));
        }
        v[static_cast<std::size_t>(n)] = acc;
    }
    return v;
}

DftTable dft(const PeriodicPotential& potential) {
    const auto& lat = potential.lattice();
    const int Q = lat.cell_size();
    auto values = potential.numeric_values();
    std::vector<std::complex<double>> out(static_cast<std::size_t>(Q));
    for (int l = 0; l < Q; ++l) {
        auto li = lat.site(l);
        std::complex<double> acc = 0.0;
        for (int n = 0; n < Q; ++n) {
            acc += values[static_cast<std::size_t>(n)] * std::polar(1.0, -phase(lat, li, lat.site(n)));
        }
        out[static_cast<std::size_t>(l)] = acc / static_cast<double>(Q);
    }
    return {lat, std::move(out)};
}

} // namespace fermi
