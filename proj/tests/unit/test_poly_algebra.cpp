#include "doctest.h"

#include "fermi/error.hpp"
#include "fermi/poly_algebra.hpp"

using namespace fermi;

namespace {
VarsPtr sv() { return make_vars({"s", "t"}); }
LaurentPoly S(const std::string& s) { return parse_poly(sv(), s); }
LaurentPoly Z(const std::string& s) { return parse_poly(floquet_vars(2), s); }
} // namespace

TEST_CASE("resultant examples") {
    CHECK(resultant(S("t^2 - 1"), S("s + t"), 1) == S("s^2 - 1"));
    // lc(A)^deg B * prod B(roots of A)
    CHECK(resultant(S("2*t - 2"), S("t^2 + s"), 1) == S("4 + 4*s"));
    CHECK(resultant(S("t^3 - 1"), S("t - s"), 1) == S("-s^3 + 1"));
    CHECK(resultant(S("t - s"), S("t^3 - 1"), 1) == S("s^3 - 1"));
    CHECK(resultant(S("t^2 + 1"), S("3"), 1) == S("9"));
    CHECK_THROWS_AS(resultant(S("s^2"), S("s + 1"), 1), PreconditionError);
}

TEST_CASE("resultant matches product over roots of unity") {
    // prod over t^4 = 1 of (s - t) = s^4 - 1
    CHECK(resultant(S("t^4 - 1"), S("s - t"), 1) == S("s^4 - 1"));
    // prod over t^3 = 1 of (s + t^2) = s^3 + 1
    CHECK(resultant(S("t^3 - 1"), S("s + t^2"), 1) == S("s^3 + 1"));
}

TEST_CASE("gcd examples") {
    auto g = subresultant_gcd(Z("z1^2 - z2^2"), Z("z1 - z2"));
    CHECK((g == Z("z1 - z2") || g == Z("-z1 + z2")));
    CHECK(subresultant_gcd(Z("z1 + 1"), Z("z2 + 1")).is_constant());
    auto a = Z("z1 + z2");
    auto b = Z("1 + z1*z2");
    auto c = Z("z1^2 + lambda*z2 + 3");
    auto g2 = subresultant_gcd(a * b * b, b * c);
    CHECK(g2 == normalize_monic(b));
}

TEST_CASE("content and primitive part") {
    auto p = Z("z1*z2 + z2 + z1^2*z2^2 + z1*z2^2");  // z2 (1 + z1)(1 + ... )?
    auto c = content(p, 0);
    CHECK(c == normalize_monic(Z("z2")));
    CHECK(primitive_part(p, 0) * c == p);
    CHECK(content(Z("2*z1 + 4"), 0).is_constant());
}

TEST_CASE("squarefree examples") {
    auto a = Z("z1 + z2");
    auto b = Z("1 + z1*z2");
    CHECK_FALSE(squarefree_test(a * a * b));
    CHECK(squarefree_test(a * b));
}
