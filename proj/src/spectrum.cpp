#include "fermi/spectrum.hpp"

#include "fermi/charpoly.hpp"
#include "fermi/error.hpp"
#include "fermi/floquet.hpp"
#include "fermi/kernels/kernels.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

namespace fermi {

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    auto workers = static_cast<std::size_t>(std::max(1, thread_count()));
    workers = std::min(workers, std::max<std::size_t>(1, count / 64));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(16)) < count;) {
                for (std::size_t j = i; j < std::min(count, i + 16); ++j) body(j);
            }
        });
    }
    for (auto& t : pool) t.join();
}

void require_real(const PeriodicPotential& V) {
    if (!V.is_real()) throw PreconditionError("band functions need a real potential (complex spectra are out of scope)");
}

double torus_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::fabs(a[i] - b[i]);
        d -= std::floor(d);
        m = std::max(m, std::min(d, 1.0 - d));
    }
    return m;
}

std::vector<double> wrap(std::vector<double> k) {
    for (auto& x : k) {
        x -= std::floor(x);
        if (x >= 1.0) x = 0.0;
    }
    return k;
}

double band_value(const PeriodicPotential& V, const std::vector<double>& k, int m) {
    return band_values(V, k)[uz(m - 1)];
}

std::vector<std::vector<int>> neighbour_offsets(int d);

// Minimizes sign * lambda_m: BFGS on the first-order gradient, then a pattern search when the band is
// degenerate or BFGS stalls on a crossing ridge.
std::vector<double> refine_extremum(const PeriodicPotential& V, int m, std::vector<double> k, double sign, double h0) {
    const auto d = k.size();
    auto f = [&](const std::vector<double>& x) { return sign * band_value(V, x, m); };
    auto grad = [&](const std::vector<double>& x) {
        auto g = hf_gradient(V, x, m);
        for (auto& v : g) v *= sign;
        return g;
    };
    double fk = f(k);
    bool degenerate = false;
    try {
        auto g = grad(k);
        Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) * 1e-3;
        for (int it = 0; it < 200; ++it) {
            Eigen::Map<Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(d));
            if (gv.norm() < 1e-11) break;
            Eigen::VectorXd p = -Hinv * gv;
            if (p.dot(gv) >= 0) {
                Hinv.setIdentity();
                Hinv *= 1e-3;
                p = -Hinv * gv;
            }
            double alpha = 1.0;
            std::vector<double> kn(d);
            double fn = fk;
            bool moved = false;
            for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
                for (std::size_t j = 0; j < d; ++j) kn[j] = k[j] + alpha * p(static_cast<Eigen::Index>(j));
                fn = f(kn);
                if (fn <= fk + 1e-4 * alpha * p.dot(gv)) {
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
            auto gn = grad(kn);
            Eigen::VectorXd s = alpha * p;
            Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(gn.data(), static_cast<Eigen::Index>(d)) - gv;
            double sy = s.dot(y);
            if (sy > 1e-16) {
                Eigen::MatrixXd I = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
                Hinv = (I - s * y.transpose() / sy) * Hinv * (I - y * s.transpose() / sy) + s * s.transpose() / sy;
            }
            k = kn;
            fk = fn;
            g = gn;
            if (s.norm() < 1e-14) break;
        }
        double gn2 = 0.0;
        for (double v : g) gn2 += v * v;
        degenerate = std::sqrt(gn2) > 1e-8;
    } catch (const DegenerateError&) {
        degenerate = true;
    }
    if (degenerate) {
        std::vector<std::vector<double>> dirs;
        for (const auto& o : neighbour_offsets(static_cast<int>(d))) dirs.emplace_back(o.begin(), o.end());
        double h = h0;
        int evals = 0;
        while (h > 1e-12 && evals < 40000) {
            bool improved = false;
            for (const auto& dir : dirs) {
                auto kn = k;
                for (std::size_t j = 0; j < d; ++j) kn[j] += h * dir[j];
                double fn = f(kn);
                ++evals;
                if (fn < fk) {
                    k = kn;
                    fk = fn;
                    improved = true;
                    break;
                }
            }
            if (!improved) h *= 0.5;
        }
    }
    return wrap(k);
}

// Neighbour offsets {-1,0,1}^d without the origin.
std::vector<std::vector<int>> neighbour_offsets(int d) {
    std::vector<std::vector<int>> out;
    int total = 1;
    for (int j = 0; j < d; ++j) total *= 3;
    for (int c = 0; c < total; ++c) {
        std::vector<int> o(uz(d));
        int r = c;
        bool zero = true;
        for (int j = 0; j < d; ++j) {
            o[uz(j)] = r % 3 - 1;
            r /= 3;
            zero &= o[uz(j)] == 0;
        }
        if (!zero) out.push_back(o);
    }
    return out;
}

std::size_t neighbour_index(const BandStructure& bs, std::size_t point, const std::vector<int>& off) {
    const int d = bs.lattice.dim();
    std::vector<int> idx(uz(d));
    std::size_t r = point;
    for (int j = d - 1; j >= 0; --j) {
        idx[uz(j)] = static_cast<int>(r % uz(bs.grid[uz(j)]));
        r /= uz(bs.grid[uz(j)]);
    }
    std::size_t out = 0;
    for (int j = 0; j < d; ++j) {
        int n = bs.grid[uz(j)];
        out = out * uz(n) + uz(((idx[uz(j)] + off[uz(j)]) % n + n) % n);
    }
    return out;
}

} // namespace

int thread_count() {
    if (const char* env = std::getenv("FERMI_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::size_t BandStructure::points() const {
    std::size_t n = 1;
    for (int g : grid) n *= uz(g);
    return n;
}

std::vector<double> BandStructure::k_of(std::size_t point) const {
    const int d = lattice.dim();
    std::vector<double> k(uz(d));
    for (int j = d - 1; j >= 0; --j) {
        auto n = uz(grid[uz(j)]);
        k[uz(j)] = static_cast<double>(point % n) / static_cast<double>(n);
        point /= n;
    }
    return k;
}

double BandStructure::value(std::size_t point, int m) const {
    return eigenvalues[point * uz(bands_count()) + uz(m - 1)];
}

std::vector<double> band_values(const PeriodicPotential& V, const std::vector<double>& k) {
    auto D = assemble_numeric(V, k).m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

BandStructure compute_bands(const PeriodicPotential& V, const std::vector<int>& grid) {
    require_real(V);
    const auto& lat = V.lattice();
    if (static_cast<int>(grid.size()) != lat.dim()) throw PreconditionError("grid needs one resolution per axis");
    for (int g : grid) {
        if (g < 1) throw PreconditionError("grid resolution must be positive");
    }
    BandStructure bs;
    bs.lattice = lat;
    bs.grid = grid;
    const auto Q = uz(lat.cell_size());
    const std::size_t n = bs.points();
    bs.eigenvalues.resize(n * Q);
    parallel_for(n, [&](std::size_t p) {
        auto ev = band_values(V, bs.k_of(p));
        std::copy(ev.begin(), ev.end(), bs.eigenvalues.begin() + static_cast<std::ptrdiff_t>(p * Q));
    });
    std::vector<double> lo(Q), hi(Q);
    kernels::column_minmax(bs.eigenvalues.data(), n, Q, lo.data(), hi.data());
    for (std::size_t m = 0; m < Q; ++m) bs.bands.emplace_back(lo[m], hi[m]);
    return bs;
}

std::vector<double> hf_gradient(const PeriodicPotential& V, const std::vector<double>& k, int m, double gap) {
    require_real(V);
    const auto& lat = V.lattice();
    if (m < 1 || m > lat.cell_size()) throw PreconditionError("band index out of range");
    auto D = assemble_numeric(V, k).m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D);
    const auto& ev = es.eigenvalues();
    auto i = static_cast<Eigen::Index>(m - 1);
    if ((i > 0 && ev(i) - ev(i - 1) < gap) || (i + 1 < ev.size() && ev(i + 1) - ev(i) < gap)) {
        throw DegenerateError("band " + std::to_string(m) + " is degenerate at this k");
    }
    Eigen::VectorXcd psi = es.eigenvectors().col(i);
    std::vector<double> g(uz(lat.dim()));
    for (int j = 0; j < lat.dim(); ++j) {
        auto dD = assemble_numeric_derivative(lat, k, j);
        g[uz(j)] = psi.dot(dD * psi).real();
    }
    return g;
}

std::vector<std::pair<double, double>> band_union(const BandStructure& bs) {
    auto b = bs.bands;
    std::sort(b.begin(), b.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : b) {
        if (!out.empty() && iv.first <= out.back().second) {
            out.back().second = std::max(out.back().second, iv.second);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

std::string to_string(ExtremumKind k) { return k == ExtremumKind::Min ? "min" : "max"; }

std::vector<Extremum> find_extrema(const PeriodicPotential& V, int m, const BandStructure& bs, bool refine) {
    require_real(V);
    if (m < 1 || m > bs.bands_count()) throw PreconditionError("band index out of range");
    const auto offs = neighbour_offsets(bs.lattice.dim());
    const std::size_t n = bs.points();
    std::vector<Extremum> raw;
    for (std::size_t p = 0; p < n; ++p) {
        double v = bs.value(p, m);
        bool is_min = true, is_max = true;
        for (const auto& o : offs) {
            double w = bs.value(neighbour_index(bs, p, o), m);
            is_min &= v <= w;
            is_max &= v >= w;
        }
        if (is_min && is_max) continue;  // flat neighbourhood
        if (is_min) raw.push_back({m, bs.k_of(p), v, ExtremumKind::Min, false});
        if (is_max) raw.push_back({m, bs.k_of(p), v, ExtremumKind::Max, false});
    }
    if (refine) {
        double h0 = 1.0 / *std::max_element(bs.grid.begin(), bs.grid.end());
        parallel_for(raw.size(), [&](std::size_t i) {
            auto& e = raw[i];
            double sign = e.kind == ExtremumKind::Min ? 1.0 : -1.0;
            auto k = refine_extremum(V, m, e.k, sign, h0);
            double v = band_value(V, k, m);
            // keep the grid point if refinement wandered off to a worse value
            if (sign * v <= sign * e.value) {
                e.k = k;
                e.value = v;
            }
            e.refined = true;
        });
    }
    // Seeds near a band crossing can stall short of the same nonsmooth extremum; within one grid cell only the
    // best of a kind survives.
    const double radius = refine ? 1.5 / *std::min_element(bs.grid.begin(), bs.grid.end()) : 1e-6;
    std::vector<std::size_t> order(raw.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto score = [&](const Extremum& e) { return e.kind == ExtremumKind::Min ? e.value : -e.value; };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score(raw[a]) < score(raw[b]); });
    std::vector<bool> keep(raw.size(), true);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!keep[order[i]]) continue;
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& a = raw[order[i]];
            const auto& b = raw[order[j]];
            if (a.kind == b.kind && torus_distance(a.k, b.k) < radius) keep[order[j]] = false;
        }
    }
    std::vector<Extremum> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (keep[i]) out.push_back(raw[i]);
    }
    return out;
}

LevelSetReport level_set_check(const PeriodicPotential& V, int m, double lambda, const BandStructure& bs, double tol) {
    auto extrema = find_extrema(V, m, bs, true);
    const Extremum* match = nullptr;
    for (const auto& e : extrema) {
        if (std::fabs(e.value - lambda) < 1e-6 && (!match || std::fabs(e.value - lambda) < std::fabs(match->value - lambda))) {
            match = &e;
        }
    }
    if (!match) {
        throw PreconditionError("lambda = " + std::to_string(lambda) + " is not an extremum value of band " +
                                std::to_string(m));
    }
    LevelSetReport r;
    r.band = m;
    r.lambda = lambda;
    r.kind = match->kind;
    const double sign = r.kind == ExtremumKind::Min ? 1.0 : -1.0;
    const int d = bs.lattice.dim();
    const auto offs = neighbour_offsets(d);
    const double h0 = 1.0 / *std::max_element(bs.grid.begin(), bs.grid.end());

    // a grid point is a seed when the level can be reached within its neighbourhood
    std::vector<std::vector<double>> seeds;
    for (std::size_t p = 0; p < bs.points(); ++p) {
        double v = bs.value(p, m);
        double spread = 0.0;
        for (const auto& o : offs) spread = std::max(spread, std::fabs(bs.value(neighbour_index(bs, p, o), m) - v));
        if (std::fabs(v - lambda) <= spread) seeds.push_back(bs.k_of(p));
    }
    for (const auto& e : extrema) {
        if (e.kind == r.kind && std::fabs(e.value - lambda) < 1e-6) seeds.push_back(e.k);
    }
    r.seeds = static_cast<int>(seeds.size());

    std::vector<std::optional<std::vector<double>>> refined(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        auto k = refine_extremum(V, m, seeds[i], sign, h0);
        if (std::fabs(band_value(V, k, m) - lambda) < 1e-6) refined[i] = k;
    });

    auto b = charpoly_exact(V);
    CharPolyEvaluator ev(b.p);
    auto residuals = [&](const std::vector<double>& k) {
        std::vector<std::complex<double>> kc(k.begin(), k.end());
        double rp = std::abs(ev.value(kc, lambda));
        double rg = 0.0;
        for (auto g : ev.gradient(kc, lambda)) rg = std::max(rg, std::abs(g));
        return std::pair{rp, rg};
    };
    for (const auto& kr : refined) {
        if (!kr) continue;
        LevelSetPoint pt;
        pt.k = *kr;
        // Newton on grad_k P = 0 with the exact Hessian
        std::vector<double> k = *kr;
        auto [rp0, rg0] = residuals(k);
        double best = rg0;
        for (int it = 0; it < 50 && best > 1e-14; ++it) {
            std::vector<std::complex<double>> kc(k.begin(), k.end());
            auto g = ev.gradient(kc, lambda);
            auto H = ev.hessian(kc, lambda);
            Eigen::MatrixXd Hm(d, d);
            Eigen::VectorXd gv(d);
            for (int i = 0; i < d; ++i) {
                gv(i) = g[uz(i)].real();
                for (int j = 0; j < d; ++j) Hm(i, j) = H[uz(i * d + j)].real();
            }
            Eigen::VectorXd step = Hm.completeOrthogonalDecomposition().solve(-gv);
            if (!step.allFinite()) break;
            auto kn = k;
            for (int i = 0; i < d; ++i) kn[uz(i)] += step(i);
            auto [rp, rg] = residuals(kn);
            if (rg >= best || torus_distance(kn, *kr) > 1e-4) break;
            k = kn;
            best = rg;
            pt.newton_polished = true;
        }
        pt.k = wrap(k);
        pt.band_value = band_value(V, pt.k, m);
        std::tie(pt.residual_p, pt.residual_grad) = residuals(pt.k);
        bool dup = false;
        for (const auto& q : r.points) {
            if (torus_distance(q.k, pt.k) < 1e-6) dup = true;
        }
        if (!dup) r.points.push_back(pt);
    }
    std::sort(r.points.begin(), r.points.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    for (const auto& p : r.points) {
        r.max_residual_p = std::max(r.max_residual_p, p.residual_p);
        r.max_residual_grad = std::max(r.max_residual_grad, p.residual_grad);
    }
    r.ok = !r.points.empty() && r.max_residual_p < tol && r.max_residual_grad < tol;
    return r;
}

FreeOperatorReport free_operator_checks(const std::vector<int>& periods, const std::vector<int>& grid, int samples,
                                        double margin) {
    LatticeSpec lat(periods);
    auto bs = compute_bands(zero_potential(lat), grid);
    const double edge = 2.0 * lat.dim();
    auto classify = [&](double lambda) {
        FreeCheck c{lambda, false, 0};
        for (int m = 1; m <= bs.bands_count(); ++m) {
            const auto& [a, b] = bs.bands[uz(m - 1)];
            if (a + margin < lambda && lambda < b - margin) {
                c.interior = true;
                c.band = m;
                break;
            }
        }
        return c;
    };
    FreeOperatorReport r;
    r.ok = true;
    for (int i = 0; i < samples; ++i) {
        double lambda = -edge + 2.0 * edge * (i + 0.5) / samples;
        if (lambda == 0.0) continue;
        r.samples.push_back(classify(lambda));
        r.ok &= r.samples.back().interior;
    }
    if (std::any_of(periods.begin(), periods.end(), [](int q) { return q % 2 == 1; })) {
        r.zero = classify(0.0);
        r.ok &= r.zero->interior;
    }
    return r;
}

double Perturbation::at(const std::vector<int>& n) const {
    double r2 = 0.0;
    for (int x : n) r2 += static_cast<double>(x) * x;
    if (profile == PerturbationProfile::Bump) return r2 == 0.0 ? amplitude : 0.0;
    return amplitude * std::exp(-std::pow(std::sqrt(r2), gamma));
}

BoxSpectrumReport embedded_scan(const PeriodicPotential& V, const Perturbation& v, const std::vector<int>& boxes,
                                const ScanOptions& options) {
    require_real(V);
    if (v.profile == PerturbationProfile::Decay && !(v.gamma > 1.0)) throw PreconditionError("gamma must exceed 1");
    const auto& lat = V.lattice();
    const int d = lat.dim();
    int qmax = *std::max_element(lat.periods().begin(), lat.periods().end());
    for (int N : boxes) {
        if (N < 3 * qmax) {
            throw PreconditionError("box N = " + std::to_string(N) + " is below 3 max q = " + std::to_string(3 * qmax));
        }
    }
    BoxSpectrumReport rep;
    rep.bands = compute_bands(V, std::vector<int>(uz(d), options.band_grid)).bands;
    auto in_band = [&](double x) {
        for (const auto& [lo, hi] : options.exclusions) {
            if (lo < x && x < hi) return false;
        }
        for (const auto& [a, b] : rep.bands) {
            if (a + options.margin < x && x < b - options.margin) return true;
        }
        return false;
    };
    auto vals = V.numeric_values();
    for (int N : boxes) {
        const int side = 2 * N + 1;
        std::size_t n = 1;
        for (int j = 0; j < d; ++j) n *= uz(side);
        std::vector<double> H(n * n, 0.0);
        std::vector<std::uint8_t> edge(n, 0);
        std::vector<int> site(uz(d));
        for (std::size_t s = 0; s < n; ++s) {
            std::size_t r = s;
            bool near_edge = false;
            for (int j = d - 1; j >= 0; --j) {
                site[uz(j)] = static_cast<int>(r % uz(side)) - N;
                r /= uz(side);
                near_edge |= std::abs(site[uz(j)]) >= N - 1;
            }
            edge[s] = near_edge ? 1 : 0;
            H[s * n + s] = vals[uz(lat.site_index(lat.reduce(site)))].real() + v.at(site);
            std::size_t stride = 1;
            for (int j = d - 1; j >= 0; --j) {
                if (site[uz(j)] < N) {
                    H[s * n + s + stride] = -1.0;
                    H[(s + stride) * n + s] = -1.0;
                }
                stride *= uz(side);
            }
        }
        std::vector<double> w(n);
        auto info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n), H.data(),
                                   static_cast<lapack_int>(n), w.data());
        if (info != 0) throw Error("eigensolver failed with code " + std::to_string(info));
        std::vector<double> ipr(n), em(n);
        kernels::ipr_edge(H.data(), n, n, edge.data(), ipr.data(), em.data());
        BoxResult br;
        br.N = N;
        br.size = static_cast<int>(n);
        br.lowest = {w.front(), ipr.front(), em.front()};
        br.highest = {w.back(), ipr.back(), em.back()};
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_band(w[i])) continue;
            ++br.in_band;
            br.max_in_band_ipr = std::max(br.max_in_band_ipr, ipr[i]);
            if (ipr[i] > options.ipr_threshold) br.flagged.push_back({w[i], ipr[i], em[i]});
        }
        rep.boxes.push_back(std::move(br));
    }
    if (!rep.boxes.empty()) {
        for (const auto& f : rep.boxes.front().flagged) {
            bool everywhere = true;
            for (std::size_t b = 1; b < rep.boxes.size(); ++b) {
                bool hit = false;
                for (const auto& g : rep.boxes[b].flagged) hit |= std::fabs(g.lambda - f.lambda) < options.match_tol;
                everywhere &= hit;
            }
            if (everywhere) rep.persistent.push_back(f.lambda);
        }
    }
    rep.ok = rep.persistent.empty();
    return rep;
}

} // namespace fermi
