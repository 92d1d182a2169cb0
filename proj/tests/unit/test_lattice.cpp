#include "doctest.h"

#include "fermi/error.hpp"
#include "fermi/lattice.hpp"

#include <random>

using namespace fermi;

TEST_CASE("build_potential averages") {
    LatticeSpec l11({1, 1});
    CHECK(build_potential(l11, {{{0, 0}, GaussianRational(0)}}).average() == GaussianRational(0));

    LatticeSpec l21({2, 1});
    auto v = build_potential(l21, {{{1, 0}, GaussianRational(1)}, {{0, 0}, GaussianRational(0)}});
    CHECK(v.average() == GaussianRational::ratio(1, 2));
    CHECK(l21.coprime());
    CHECK_FALSE(LatticeSpec({2, 2}).coprime());
}

TEST_CASE("build_potential rejects bad input") {
    CHECK_THROWS_AS(LatticeSpec({0, 1}), ConstructionError);
    CHECK_THROWS_AS(LatticeSpec({}), ConstructionError);
    LatticeSpec l21({2, 1});
    CHECK_THROWS_AS(build_potential(l21, {{{0, 0}, GaussianRational(1)}}), ConstructionError);
    CHECK_THROWS_AS(build_potential(l21, {{{0, 0}, GaussianRational(1)}, {{0, 0}, GaussianRational(2)}}),
                    ConstructionError);
    CHECK_THROWS_AS(PeriodicPotential(l21, {GaussianRational(1)}), ConstructionError);
}

TEST_CASE("site order has n1 slowest") {
    LatticeSpec l({2, 3});
    CHECK(l.site_index({1, 0}) == 3);
    CHECK(l.site(4) == MultiIndex{1, 1});
    CHECK(l.reduce({-1, 7}) == MultiIndex{1, 1});
}

TEST_CASE("dft examples") {
    LatticeSpec l21({2, 1});
    auto v = PeriodicPotential(l21, {GaussianRational(0), GaussianRational(1)});
    auto t = dft(v);
    CHECK(std::abs(t.at({0, 0}) - 0.5) < 1e-14);
    CHECK(std::abs(t.at({1, 0}) + 0.5) < 1e-14);
    CHECK(std::abs(t.at({3, 0}) + 0.5) < 1e-14);

    LatticeSpec l23({2, 3});
    auto c = constant_potential(l23, GaussianRational::ratio(7, 3));
    auto tc = dft(c);
    CHECK(std::abs(tc.at({0, 0}) - 7.0 / 3.0) < 1e-14);
    for (int i = 1; i < 6; ++i) CHECK(std::abs(tc.entries()[static_cast<std::size_t>(i)]) < 1e-14);
}

TEST_CASE("dft inverts on random potentials") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 4);
    for (auto periods : {std::vector<int>{2, 3}, std::vector<int>{3, 4}, std::vector<int>{1, 2, 3}}) {
        LatticeSpec l(periods);
        std::vector<GaussianRational> vals;
        for (int i = 0; i < l.cell_size(); ++i) vals.emplace_back(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
        PeriodicPotential v(l, vals);
        auto back = dft(v).inverse();
        for (int i = 0; i < l.cell_size(); ++i) {
            CHECK(std::abs(back[static_cast<std::size_t>(i)] - vals[static_cast<std::size_t>(i)].to_complex()) < 1e-12);
        }
    }
}

TEST_CASE("average does not depend on supply order") {
    LatticeSpec l({2, 3});
    std::vector<std::pair<MultiIndex, GaussianRational>> a, b;
    for (int i = 0; i < 6; ++i) a.emplace_back(l.site(i), GaussianRational::ratio(i * i - 3, i + 1));
    b.assign(a.rbegin(), a.rend());
    CHECK(build_potential(l, a).average() == build_potential(l, b).average());
}
