#pragma once

#include <cstddef>
#include <cstdint>

namespace fermi::kernels {

/// Laurent polynomial sum_t c_t z^{e_t} with complex coefficients, evaluated on the real torus.
struct TorusPoly {
    int dim = 0;
    std::size_t terms = 0;
    const std::int32_t* exps = nullptr;  // terms x dim
    const double* re = nullptr;
    const double* im = nullptr;
};

/// out[p] = poly(e^{2 pi i k_p}); k is row-major (count x dim).
void torus_eval_scalar(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im);
void torus_eval_avx2(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im);
void torus_eval(const TorusPoly& poly, const double* k, std::size_t count, double* out_re, double* out_im);

/// Per column of a column-major n x m matrix: sum u^4 and sum of u^2 over rows with edge[i] != 0.
void ipr_edge_scalar(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr,
                     double* edge_mass);
void ipr_edge_avx2(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr,
                   double* edge_mass);
void ipr_edge(const double* u, std::size_t n, std::size_t m, const std::uint8_t* edge, double* ipr, double* edge_mass);

/// Column min and max of a row-major rows x cols array.
void column_minmax_scalar(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi);
void column_minmax_avx2(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi);
void column_minmax(const double* a, std::size_t rows, std::size_t cols, double* lo, double* hi);

/// True when the CPU supports AVX2 and FMA and FERMI_SCALAR is unset.
bool use_avx2();

} // namespace fermi::kernels
