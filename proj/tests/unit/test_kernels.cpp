#include "doctest.h"

#include "fermi/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace fermi::kernels;

TEST_CASE("torus evaluation: vector kernel matches scalar reference") {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> e(-9, 9);
    std::normal_distribution<double> c(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int dim : {1, 2, 3}) {
        for (std::size_t count : {1u, 3u, 4u, 37u, 256u}) {
            std::size_t terms = 57;
            std::vector<std::int32_t> ex(terms * static_cast<std::size_t>(dim));
            for (auto& x : ex) x = e(rng);
            std::vector<double> re(terms), im(terms), k(count * static_cast<std::size_t>(dim));
            double l1 = 0.0;
            for (std::size_t t = 0; t < terms; ++t) {
                re[t] = c(rng);
                im[t] = c(rng);
                l1 += std::hypot(re[t], im[t]);
            }
            for (auto& x : k) x = u(rng);
            TorusPoly p{dim, terms, ex.data(), re.data(), im.data()};
            std::vector<double> ar(count), ai(count), br(count), bi(count);
            torus_eval_scalar(p, k.data(), count, ar.data(), ai.data());
            torus_eval_avx2(p, k.data(), count, br.data(), bi.data());
            for (std::size_t i = 0; i < count; ++i) {
                CHECK(std::abs(ar[i] - br[i]) <= 1e-12 * l1);
                CHECK(std::abs(ai[i] - bi[i]) <= 1e-12 * l1);
            }
            // direct phase sum oracle
            for (std::size_t i = 0; i < std::min<std::size_t>(count, 5); ++i) {
                double sr = 0.0, si = 0.0;
                for (std::size_t t = 0; t < terms; ++t) {
                    double ph = 0.0;
                    for (int j = 0; j < dim; ++j) ph += ex[t * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] * k[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
                    ph *= 2 * M_PI;
                    sr += re[t] * std::cos(ph) - im[t] * std::sin(ph);
                    si += re[t] * std::sin(ph) + im[t] * std::cos(ph);
                }
                CHECK(std::abs(ar[i] - sr) <= 1e-11 * l1);
                CHECK(std::abs(ai[i] - si) <= 1e-11 * l1);
            }
        }
    }
}

TEST_CASE("ipr and edge mass: vector kernel matches scalar reference") {
    std::mt19937 rng(2);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t n : {1u, 5u, 8u, 121u}) {
        std::size_t m = 7;
        std::vector<double> u(n * m);
        for (auto& x : u) x = g(rng);
        std::vector<std::uint8_t> edge(n);
        for (std::size_t i = 0; i < n; ++i) edge[i] = (i % 3 == 0);
        std::vector<double> a(m), b(m), c(m), d(m);
        ipr_edge_scalar(u.data(), n, m, edge.data(), a.data(), b.data());
        ipr_edge_avx2(u.data(), n, m, edge.data(), c.data(), d.data());
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(std::abs(a[i] - c[i]) <= 1e-12 * a[i]);
            CHECK(std::abs(b[i] - d[i]) <= 1e-12 * (b[i] + 1e-300));
        }
    }
    // a unit vector concentrated on one site has IPR 1
    std::vector<double> v{0.0, 1.0, 0.0};
    std::vector<std::uint8_t> e{1, 0, 1};
    double ipr = 0, em = 0;
    ipr_edge(v.data(), 3, 1, e.data(), &ipr, &em);
    CHECK(ipr == 1.0);
    CHECK(em == 0.0);
}

TEST_CASE("column min/max: vector kernel matches scalar reference") {
    std::mt19937 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t cols : {1u, 4u, 6u, 13u}) {
        std::size_t rows = 29;
        std::vector<double> a(rows * cols);
        for (auto& x : a) x = g(rng);
        std::vector<double> l1(cols), h1(cols), l2(cols), h2(cols);
        column_minmax_scalar(a.data(), rows, cols, l1.data(), h1.data());
        column_minmax_avx2(a.data(), rows, cols, l2.data(), h2.data());
        CHECK(l1 == l2);
        CHECK(h1 == h2);
    }
}
