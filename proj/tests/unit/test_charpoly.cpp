#include "doctest.h"

#include "fermi/charpoly.hpp"
#include "fermi/error.hpp"

#include <numbers>
#include <random>

using namespace fermi;

namespace {

PeriodicPotential random_potential(const LatticeSpec& l, std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 4);
    std::vector<GaussianRational> v;
    for (int i = 0; i < l.cell_size(); ++i) v.emplace_back(mpq_class(num(rng), den(rng)));
    return {l, v};
}

std::complex<double> numeric_det(const PeriodicPotential& V, std::span<const double> k, double lambda) {
    auto m = assemble_numeric(V, k).m;
    m -= lambda * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return m.determinant();
}

} // namespace

TEST_CASE("charpoly closed forms") {
    LatticeSpec l11({1, 1});
    auto c = GaussianRational::ratio(3, 7);
    auto b = charpoly_exact(constant_potential(l11, c));
    CHECK(b.p == parse_poly(b.vars, "3/7 - lambda - z1 - z1^-1 - z2 - z2^-1"));
    CHECK(charpoly_exact(zero_potential(l11)).p.pretty() == "−λ − z₁ − z₁⁻¹ − z₂ − z₂⁻¹");

    LatticeSpec l21({2, 1});
    auto b21 = charpoly_exact(zero_potential(l21));
    auto s = parse_poly(b21.vars, "z2 + z2^-1 + lambda");
    CHECK(b21.p == s * s - parse_poly(b21.vars, "2 + z1 + z1^-1"));

    auto b0 = charpoly_exact(zero_potential(l11));
    CHECK(b0.p1 == parse_poly(b0.vars, "z1^2*z2 + z2 + z1*z2^2 + z1 + lambda*z1*z2"));
}

TEST_CASE("facts on the small closed forms") {
    LatticeSpec l21({2, 1});
    auto b = charpoly_exact(zero_potential(l21));
    auto r = check_facts(b);
    CHECK(r.ok);
    CHECK(b.p.degree(0) == 1);
    CHECK(b.p.min_degree(0) == -1);
    CHECK(b.p.degree(1) == 2);
    for (const auto& t : b.ptilde.terms()) CHECK(t.exp[0] % 2 == 0);
    CHECK(b.ptilde.degree(0) == 2);
    CHECK(b.ptilde.min_degree(0) == -2);
}

TEST_CASE("facts on random potentials") {
    std::mt19937 rng(21);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{1, 2, 3}, std::vector<int>{3, 4}}) {
        LatticeSpec l(q);
        for (int it = 0; it < 3; ++it) {
            auto b = charpoly_exact(random_potential(l, rng));
            auto r = check_facts(b);
            CHECK(r.ok);
            CHECK(b.p.degree(static_cast<int>(q.size())) == l.cell_size());
        }
    }
}

TEST_CASE("single-variable inversion holds when the reflection is trivial") {
    std::mt19937 rng(4);
    LatticeSpec l({2, 5});
    auto r = check_facts(charpoly_exact(random_potential(l, rng)));
    for (const auto& f : r.facts) {
        if (f.informational) CHECK(f.ok);
    }
}

TEST_CASE("single-variable inversion can fail for q=(3,3)") {
    // V constant along rows but not reflection-symmetric in n2
    LatticeSpec l({3, 3});
    std::vector<GaussianRational> v;
    for (int i = 0; i < 9; ++i) v.emplace_back(static_cast<long>((i * i * 7 + i) % 5));
    auto b = charpoly_exact(PeriodicPotential(l, v));
    std::vector<int> flip{-1, 1, 1};
    std::vector<int> both{-1, -1, 1};
    CHECK(b.p.scale_exponents(both) == b.p);
    CHECK(b.p.scale_exponents(flip) != b.p);
}

TEST_CASE("determinant engine against scalar determinants") {
    std::mt19937 rng(8);
    LatticeSpec l({2, 3});
    auto V = random_potential(l, rng);
    // charpoly_exact runs the cross-check itself; 20 points here
    CHECK_NOTHROW(charpoly_exact(V, DetMethod::Bareiss, 20, 99));
    auto a = charpoly_exact(V, DetMethod::Bareiss, 0);
    auto c = charpoly_exact(V, DetMethod::Cofactor, 0);
    CHECK(a.p == c.p);
}

TEST_CASE("determinant of small matrices") {
    auto vars = make_vars({"x", "y"});
    PolyMatrix m;
    m.n = 2;
    m.e = {parse_poly(vars, "x"), parse_poly(vars, "y^-1"), parse_poly(vars, "y"), parse_poly(vars, "x^-1")};
    CHECK(determinant(m).is_zero());
    m.e[0] = parse_poly(vars, "x + 1");
    CHECK(determinant(m) == parse_poly(vars, "x^-1"));
    CHECK(determinant(m, DetMethod::Cofactor) == parse_poly(vars, "x^-1"));
    // zero pivot forces a row swap
    m.e = {LaurentPoly(vars), parse_poly(vars, "1"), parse_poly(vars, "1"), parse_poly(vars, "x")};
    CHECK(determinant(m) == parse_poly(vars, "-1"));
    CHECK(scalar_determinant({0, 1, 1, 0}, 2) == GaussianRational(-1));
}

TEST_CASE("potential shift covariance") {
    LatticeSpec l({2, 3});
    auto c = GaussianRational::ratio(-5, 3);
    auto p0 = charpoly_exact(zero_potential(l)).p;
    auto pc = charpoly_exact(constant_potential(l, c)).p;
    auto shifted = p0.substitute(2, parse_poly(p0.vars(), "lambda + 5/3"));
    CHECK(pc == shifted);
}

TEST_CASE("evaluate and gradient of P") {
    LatticeSpec l11({1, 1});
    auto b = charpoly_exact(zero_potential(l11));
    std::vector<std::complex<double>> k0{0.0, 0.0};
    CHECK(std::abs(evaluate_P(b, k0, -4.0)) < 1e-14);
    auto g = gradient_P(b, k0, -4.0);
    CHECK(std::abs(g[0]) < 1e-14);
    CHECK(std::abs(g[1]) < 1e-14);
    std::vector<std::complex<double>> k{0.3, 0.2};
    double want = -2 * std::cos(0.6 * std::numbers::pi) - 2 * std::cos(0.4 * std::numbers::pi) - 0.5;
    CHECK(std::abs(evaluate_P(b, k, 0.5) - want) < 1e-13);
    auto gk = gradient_P(b, k, 0.5);
    CHECK(std::abs(gk[0] - 4 * std::numbers::pi * std::sin(0.6 * std::numbers::pi)) < 1e-12);
}

TEST_CASE("P agrees with the numeric determinant") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0), lam(-5.0, 5.0);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{1, 2, 3}}) {
        LatticeSpec l(q);
        auto V = random_potential(l, rng);
        auto b = charpoly_exact(V);
        CharPolyEvaluator ev(b.p);
        for (int it = 0; it < 20; ++it) {
            std::vector<double> k;
            std::vector<std::complex<double>> kc;
            for (std::size_t j = 0; j < q.size(); ++j) {
                k.push_back(u(rng));
                kc.emplace_back(k.back());
            }
            double L = lam(rng);
            auto det = numeric_det(V, k, L);
            CHECK(std::abs(ev.value(kc, L) - det) <= 1e-10 * (1 + std::abs(det)));
            auto batch = ev.value_batch(k, 1, L);
            CHECK(std::abs(batch[0] - det) <= 1e-10 * (1 + std::abs(det)));
        }
    }
}

TEST_CASE("gradient and hessian against finite differences") {
    std::mt19937 rng(17);
    LatticeSpec l({2, 3});
    auto b = charpoly_exact(random_potential(l, rng));
    CharPolyEvaluator ev(b.p);
    std::vector<std::complex<double>> k{0.23, 0.71};
    const double h = 1e-6;
    auto g = ev.gradient(k, 0.4);
    auto H = ev.hessian(k, 0.4);
    for (int j = 0; j < 2; ++j) {
        auto kp = k, km = k;
        kp[static_cast<std::size_t>(j)] += h;
        km[static_cast<std::size_t>(j)] -= h;
        auto fd = (ev.value(kp, 0.4) - ev.value(km, 0.4)) / (2 * h);
        CHECK(std::abs(fd - g[static_cast<std::size_t>(j)]) < 1e-5 * (1 + std::abs(fd)));
        auto gp = ev.gradient(kp, 0.4), gm = ev.gradient(km, 0.4);
        for (int i = 0; i < 2; ++i) {
            auto fdh = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2 * h);
            CHECK(std::abs(fdh - H[static_cast<std::size_t>(i * 2 + j)]) < 1e-4 * (1 + std::abs(fdh)));
        }
    }
}
