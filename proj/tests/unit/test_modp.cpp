#include "doctest.h"

#include "fermi/error.hpp"
#include "fermi/modp.hpp"

#include <numeric>

using namespace fermi;

namespace {

std::vector<mpq_class> Q(std::initializer_list<long> c) {
    std::vector<mpq_class> v;
    for (long x : c) v.emplace_back(x);
    return v;
}

// exhaustive root oracle: a quadratic is irreducible mod p iff it has no root
bool has_root_mod(const std::vector<long>& c, long p) {
    for (long x = 0; x < p; ++x) {
        long acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = ((acc * x + *it) % p + p) % p;
        if (acc == 0) return true;
    }
    return false;
}

} // namespace

TEST_CASE("irreducible_mod_p examples") {
    CHECK_FALSE(has_root_mod({1, 3, 1}, 7));
    CHECK(irreducible_mod_p(Q({1, 3, 1}), 7));
    CHECK_FALSE(irreducible_mod_p(Q({-1, 0, 1}), 7));
    CHECK_THROWS_AS(irreducible_mod_p(Q({1, 0, 1}), 2), PreconditionError);
}

TEST_CASE("irreducible_mod_p rejects bad primes") {
    std::vector<mpq_class> f{mpq_class(1, 7), 0, 1};
    CHECK_THROWS_AS(irreducible_mod_p(f, 7), PreconditionError);
    CHECK_THROWS_AS(irreducible_mod_p(Q({1, 1, 7}), 7), PreconditionError);
    CHECK_THROWS_AS(irreducible_mod_p(Q({1, 1, 1}), 9), PreconditionError);
}

TEST_CASE("quadratics agree with the root oracle") {
    for (long p : {5L, 7L, 11L, 13L}) {
        for (long a = 0; a < p; ++a) {
            for (long b = 1; b < p; ++b) {
                std::vector<mpq_class> f{b, a, 1};
                if (!good_prime(f, static_cast<std::uint64_t>(p))) continue;
                CHECK(irreducible_mod_p(f, static_cast<std::uint64_t>(p)) == !has_root_mod({b, a, 1}, p));
            }
        }
    }
}

TEST_CASE("distinct degree patterns") {
    // (x^2 + 1)(x - 2)(x - 3) mod 7: x^2+1 has no root mod 7
    auto f = Q({6, -5, 7, -5, 1});
    CHECK(factor_degrees_mod_p(f, 7) == std::vector<int>{1, 1, 2});
    // x^4 + 1 splits into quadratics or linears mod every odd prime
    auto g = Q({1, 0, 0, 0, 1});
    auto d = factor_degrees_mod_p(g, 11);
    CHECK(std::accumulate(d.begin(), d.end(), 0) == 4);
    CHECK(d.size() >= 2);
}

TEST_CASE("rational irreducibility") {
    CHECK(rational_irreducibility(Q({1, 3, 1})).irreducible);
    CHECK_FALSE(rational_irreducibility(Q({-1, 0, 1})).irreducible);
    CHECK(rational_irreducibility(Q({-2, 0, 0, 1})).irreducible);
    CHECK(rational_irreducibility(Q({1, 1, 0, 0, 0, 1})).irreducible == false);  // x^5+x+1 = (x^2+x+1)(...)
    CHECK(rational_irreducibility(Q({-1, -1, 0, 0, 0, 1})).irreducible);        // x^5-x-1
    CHECK_FALSE(rational_irreducibility(Q({1, 0, 0, 0, 1})).irreducible);     // never shown by patterns
}
