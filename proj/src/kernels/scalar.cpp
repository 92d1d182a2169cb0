#include "fermi/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace fermi::kernels {

namespace {

void exponent_range(const TorusPoly& poly, std::vector<int>& lo, std::vector<int>& hi) {
    lo.assign(static_cast<std::size_t>(poly.dim), 0);
    hi.assign(static_cast<std::size_t>(poly.dim), 0);
    for (std::size_t t = 0; t < poly.terms; ++t) {
        for (int j = 0; j < poly.dim; ++j) {
            int e = poly.exps[t * static_cast<std::size_t>(poly.dim) + static_cast<std::size_t>(j)];
            lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], e);
            hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], e);
        }
    }
}

} // namespace

void torus_eval_scalar(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im) {
    std::vector<int> lo, hi;
    exponent_range(poly, lo, hi);
    const auto d = static_cast<std::size_t>(poly.dim);
    std::vector<std::vector<std::complex<double>>> table(d);
    for (std::size_t p = 0; p < count; ++p) {
        for (std::size_t j = 0; j < d; ++j) {
            // powers by repeated multiplication, same recurrence as the vector kernel
            std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * k[p * d + j]);
            std::complex<double> zi = std::conj(z);
            auto& tb = table[j];
            tb.assign(static_cast<std::size_t>(hi[j] - lo[j] + 1), 0.0);
            std::size_t zero = static_cast<std::size_t>(-lo[j]);
            tb[zero] = 1.0;
            for (int e = 1; e <= hi[j]; ++e) tb[zero + static_cast<std::size_t>(e)] = tb[zero + static_cast<std::size_t>(e) - 1] * z;
            for (int e = 1; e <= -lo[j]; ++e) tb[zero - static_cast<std::size_t>(e)] = tb[zero - static_cast<std::size_t>(e) + 1] * zi;
        }
        double sr = 0.0, si = 0.0;
        for (std::size_t t = 0; t < poly.terms; ++t) {
            double mr = poly.re[t], mi = poly.im[t];
            for (std::size_t j = 0; j < d; ++j) {
                auto w = table[j][static_cast<std::size_t>(poly.exps[t * d + j] - lo[j])];
                double nr = mr * w.real() - mi * w.imag();
                double ni = mr * w.imag() + mi * w.real();
                mr = nr;
                mi = ni;
            }
            sr += mr;
            si += mi;
        }
        out_re[p] = sr;
        out_im[p] = si;
    }
}

void ipr_edge_scalar(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr,
                     double* edge_mass) {
    for (std::size_t c = 0; c < m; ++c) {
        const double* col = u + c * n;
        double s4 = 0.0, se = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v2 = col[i] * col[i];
            s4 += v2 * v2;
            if (edge[i]) se += v2;
        }
        ipr[c] = s4;
        edge_mass[c] = se;
    }
}

void column_minmax_scalar(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi) {
    for (std::size_t c = 0; c < cols; ++c) {
        lo[c] = a[c];
        hi[c] = a[c];
    }
    for (std::size_t r = 1; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            lo[c] = std::min(lo[c], a[r * cols + c]);
            hi[c] = std::max(hi[c], a[r * cols + c]);
        }
    }
}

bool use_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool ok = std::getenv("FERMI_SCALAR") == nullptr && __builtin_cpu_supports("avx2") &&
                           __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

void torus_eval(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im) {
    if (use_avx2()) torus_eval_avx2(poly, k, count, out_re, out_im);
    else torus_eval_scalar(poly, k, count, out_re, out_im);
}

void ipr_edge(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr, double* edge_mass) {
    if (use_avx2()) ipr_edge_avx2(u, n, m, edge, ipr, edge_mass);
    else ipr_edge_scalar(u, n, m, edge, ipr, edge_mass);
}

void column_minmax(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi) {
    if (use_avx2()) column_minmax_avx2(a, rows, cols, lo, hi);
    else column_minmax_scalar(a, rows, cols, lo, hi);
}

} // namespace fermi::kernels
