#include "doctest.h"

#include "fermi/floquet.hpp"

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

constexpr double kPi = std::numbers::pi;

} // namespace

TEST_CASE("symbolic assembly examples") {
    LatticeSpec l11({1, 1});
    auto d = assemble_symbolic(zero_potential(l11));
    CHECK(d.size() == 1);
    CHECK(d.at(0, 0) == parse_poly(d.vars(), "-z1 - z1^-1 - z2 - z2^-1"));

    LatticeSpec l21({2, 1});
    PeriodicPotential v(l21, {GaussianRational(3), GaussianRational::ratio(-1, 2)});
    auto m = assemble_symbolic(v);
    CHECK(m.at(0, 0) == parse_poly(m.vars(), "3 - z2 - z2^-1"));
    CHECK(m.at(1, 1) == parse_poly(m.vars(), "-1/2 - z2 - z2^-1"));
    CHECK(m.at(0, 1) == parse_poly(m.vars(), "-1 - z1^-1"));
    CHECK(m.at(1, 0) == parse_poly(m.vars(), "-1 - z1"));
}

TEST_CASE("numeric assembly examples") {
    LatticeSpec l11({1, 1});
    auto z = zero_potential(l11);
    std::vector<double> k0{0.0, 0.0}, kh{0.5, 0.5};
    CHECK(std::abs(assemble_numeric(z, k0).m(0, 0) + 4.0) < 1e-14);
    CHECK(std::abs(assemble_numeric(z, kh).m(0, 0) - 4.0) < 1e-14);

    LatticeSpec l21({2, 1});
    auto z21 = zero_potential(l21);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 10; ++it) {
        std::vector<double> k{u(rng), u(rng)};
        auto ev = sorted_eigenvalues(assemble_numeric(z21, k).m);
        double c = -2.0 * std::cos(2 * kPi * k[1]);
        double r = std::abs(1.0 + std::polar(1.0, 2 * kPi * k[0]));
        CHECK(std::abs(ev[0].real() - (c - r)) < 1e-12);
        CHECK(std::abs(ev[1].real() - (c + r)) < 1e-12);
    }
}

TEST_CASE("symbolic evaluation matches numeric assembly") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto periods : {std::vector<int>{2, 3}, std::vector<int>{1, 2, 3}, std::vector<int>{2, 1}}) {
        LatticeSpec l(periods);
        auto V = random_potential(l, rng);
        auto s = assemble_symbolic(V);
        for (int it = 0; it < 5; ++it) {
            std::vector<double> k;
            for (int j = 0; j < l.dim(); ++j) k.push_back(u(rng));
            auto a = s.evaluate_at_k(k);
            auto b = assemble_numeric(V, k).m;
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("derivative matrix matches finite differences") {
    LatticeSpec l({2, 3});
    std::vector<double> k{0.17, 0.61};
    for (int j = 0; j < 2; ++j) {
        auto kp = k, km = k;
        kp[static_cast<std::size_t>(j)] += 1e-6;
        km[static_cast<std::size_t>(j)] -= 1e-6;
        auto z = zero_potential(l);
        Eigen::MatrixXcd fd = (assemble_numeric(z, kp).m - assemble_numeric(z, km).m) / 2e-6;
        CHECK((fd - assemble_numeric_derivative(l, k, j)).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("fourier form examples") {
    LatticeSpec l11({1, 1});
    std::vector<double> x{0.13, 0.71};
    auto h = assemble_fourier(zero_potential(l11), x);
    CHECK(std::abs(h.m(0, 0) - (-2 * std::cos(2 * kPi * 0.13) - 2 * std::cos(2 * kPi * 0.71))) < 1e-14);

    LatticeSpec l23({2, 3});
    std::vector<double> y{0.3, 0.05};
    auto h0 = assemble_fourier(zero_potential(l23), y).m;
    auto hc = assemble_fourier(constant_potential(l23, GaussianRational::ratio(5, 2)), y).m;
    CHECK((hc - h0 - 2.5 * Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);

    LatticeSpec l21({2, 1});
    PeriodicPotential v(l21, {GaussianRational(0), GaussianRational(1)});
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 10; ++it) {
        std::vector<double> xr{u(rng), u(rng)};
        CHECK(verify_equivalence(v, xr, 1e-10).ok);
    }
}

TEST_CASE("equivalence on complex potentials") {
    LatticeSpec l({2, 3});
    std::vector<GaussianRational> vals;
    for (int i = 0; i < 6; ++i) vals.emplace_back(mpq_class(i - 2, 3), mpq_class(i % 3, 2));
    PeriodicPotential V(l, vals);
    std::vector<double> x{0.21, 0.37};
    auto r = verify_equivalence(V, x, 1e-9);
    CHECK(r.ok);
    CHECK(r.max_deviation < 1e-9);
}
