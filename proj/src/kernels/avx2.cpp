#include "fermi/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace fermi::kernels {

namespace {

// four complex values, split real and imaginary lanes
struct C4 {
    __m256d re, im;
};

inline C4 cmul(C4 a, C4 b) {
    return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)), _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

} // namespace

void torus_eval_avx2(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im) {
    const auto d = static_cast<std::size_t>(poly.dim);
    std::vector<int> lo(d, 0), hi(d, 0);
    for (std::size_t t = 0; t < poly.terms; ++t) {
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], poly.exps[t * d + j]);
            hi[j] = std::max(hi[j], poly.exps[t * d + j]);
        }
    }
    std::vector<std::size_t> offset(d + 1, 0);
    for (std::size_t j = 0; j < d; ++j) offset[j + 1] = offset[j] + static_cast<std::size_t>(hi[j] - lo[j] + 1);
    std::vector<C4> table(offset[d]);

    std::size_t p = 0;
    for (; p + 4 <= count; p += 4) {
        for (std::size_t j = 0; j < d; ++j) {
            alignas(32) double zr[4], zi[4];
            for (std::size_t l = 0; l < 4; ++l) {
                double a = 2.0 * std::numbers::pi * k[(p + l) * d + j];
                zr[l] = std::cos(a);
                zi[l] = std::sin(a);
            }
            C4 z{_mm256_load_pd(zr), _mm256_load_pd(zi)};
            C4 zc{z.re, _mm256_sub_pd(_mm256_setzero_pd(), z.im)};
            C4* tb = table.data() + offset[j];
            std::size_t zero = static_cast<std::size_t>(-lo[j]);
            tb[zero] = {_mm256_set1_pd(1.0), _mm256_setzero_pd()};
            for (int e = 1; e <= hi[j]; ++e) tb[zero + static_cast<std::size_t>(e)] = cmul(tb[zero + static_cast<std::size_t>(e) - 1], z);
            for (int e = 1; e <= -lo[j]; ++e) tb[zero - static_cast<std::size_t>(e)] = cmul(tb[zero - static_cast<std::size_t>(e) + 1], zc);
        }
        __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
        for (std::size_t t = 0; t < poly.terms; ++t) {
            C4 m{_mm256_set1_pd(poly.re[t]), _mm256_set1_pd(poly.im[t])};
            for (std::size_t j = 0; j < d; ++j) {
                m = cmul(m, table[offset[j] + static_cast<std::size_t>(poly.exps[t * d + j] - lo[j])]);
            }
            sr = _mm256_add_pd(sr, m.re);
            si = _mm256_add_pd(si, m.im);
        }
        _mm256_storeu_pd(out_re + p, sr);
        _mm256_storeu_pd(out_im + p, si);
    }
    if (p < count) torus_eval_scalar(poly, k + p * d, count - p, out_re + p, out_im + p);
}

void ipr_edge_avx2(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr,
                   double* edge_mass) {
    std::vector<double> mask(n);
    for (std::size_t i = 0; i < n; ++i) mask[i] = edge[i] ? 1.0 : 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        const double* col = u + c * n;
        __m256d s4 = _mm256_setzero_pd(), se = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d v = _mm256_loadu_pd(col + i);
            __m256d v2 = _mm256_mul_pd(v, v);
            s4 = _mm256_fmadd_pd(v2, v2, s4);
            se = _mm256_fmadd_pd(v2, _mm256_loadu_pd(mask.data() + i), se);
        }
        alignas(32) double a[4], b[4];
        _mm256_store_pd(a, s4);
        _mm256_store_pd(b, se);
        double t4 = (a[0] + a[1]) + (a[2] + a[3]);
        double te = (b[0] + b[1]) + (b[2] + b[3]);
        for (; i < n; ++i) {
            double v2 = col[i] * col[i];
            t4 += v2 * v2;
            te += v2 * mask[i];
        }
        ipr[c] = t4;
        edge_mass[c] = te;
    }
}

void column_minmax_avx2(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi) {
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
        __m256d l = _mm256_loadu_pd(a + c), h = l;
        for (std::size_t r = 1; r < rows; ++r) {
            __m256d v = _mm256_loadu_pd(a + r * cols + c);
            l = _mm256_min_pd(l, v);
            h = _mm256_max_pd(h, v);
        }
        _mm256_storeu_pd(lo + c, l);
        _mm256_storeu_pd(hi + c, h);
    }
    for (; c < cols; ++c) {
        lo[c] = hi[c] = a[c];
        for (std::size_t r = 1; r < rows; ++r) {
            lo[c] = std::min(lo[c], a[r * cols + c]);
            hi[c] = std::max(hi[c], a[r * cols + c]);
        }
    }
}

} // namespace fermi::kernels

#else

namespace fermi::kernels {

void torus_eval_avx2(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im) {
    torus_eval_scalar(poly, k, count, out_re, out_im);
}
void ipr_edge_avx2(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr,
                   double* edge_mass) {
    ipr_edge_scalar(u, n, m, edge, ipr, edge_mass);
}
void column_minmax_avx2(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi) {
    column_minmax_scalar(a, rows, cols, lo, hi);
}

} // namespace fermi::kernels

#endif
