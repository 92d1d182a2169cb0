#include "fermi/poly_algebra.hpp"

#include "fermi/error.hpp"

#include <utility>

namespace fermi {

namespace {

// Dense view in one variable; coefficients do not involve that variable.
struct UPoly {
    int var;
    std::vector<LaurentPoly> c;

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const LaurentPoly& lc() const { return c.back(); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
};

UPoly to_upoly(const LaurentPoly& p, int var) {
    UPoly u{var, p.is_zero() ? std::vector<LaurentPoly>{} : p.coefficients_in(var)};
    u.trim();
    return u;
}

LaurentPoly from_upoly(const UPoly& u, const VarsPtr& vars) {
    LaurentPoly r(vars);
    for (std::size_t i = 0; i < u.c.size(); ++i) {
        if (u.c[i].is_zero()) continue;
        Exponents e{};
        e[static_cast<std::size_t>(u.var)] = static_cast<int>(i);
        r += u.c[i].mul_monomial(e);
    }
    return r;
}

UPoly prem(const UPoly& a, const UPoly& b) {
    UPoly r = a;
    const LaurentPoly& lb = b.lc();
    int e = a.deg() - b.deg() + 1;
    while (!r.is_zero() && r.deg() >= b.deg()) {
        LaurentPoly lr = r.lc();
        int shift = r.deg() - b.deg();
        for (auto& coef : r.c) coef *= lb;
        for (int i = 0; i <= b.deg(); ++i) {
            r.c[static_cast<std::size_t>(i + shift)] -= lr * b.c[static_cast<std::size_t>(i)];
        }
        r.trim();
        --e;
    }
    if (e > 0 && !r.is_zero()) {
        LaurentPoly f = lb.pow(static_cast<unsigned>(e));
        for (auto& coef : r.c) coef *= f;
    }
    return r;
}

UPoly divide_coeffs(const UPoly& a, const LaurentPoly& d) {
    UPoly r = a;
    for (auto& coef : r.c) coef = exact_divide(coef, d);
    return r;
}

int main_variable(const LaurentPoly& a, const LaurentPoly& b) {
    for (int j = a.nvars() - 1; j >= 0; --j) {
        if (a.depends_on(j) || b.depends_on(j)) return j;
    }
    return -1;
}

LaurentPoly one_like(const LaurentPoly& p) { return LaurentPoly::constant(p.vars(), GaussianRational(1)); }

LaurentPoly gcd_impl(const LaurentPoly& a, const LaurentPoly& b);

LaurentPoly content_impl(const UPoly& u, const VarsPtr& vars) {
    LaurentPoly g(vars);
    for (const auto& coef : u.c) {
        if (coef.is_zero()) continue;
        g = g.is_zero() ? normalize_monic(coef) : gcd_impl(g, coef);
        if (g.is_constant()) return LaurentPoly::constant(vars, GaussianRational(1));
    }
    return g;
}

LaurentPoly gcd_impl(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero()) return normalize_monic(b);
    if (b.is_zero()) return normalize_monic(a);
    if (a.is_constant() || b.is_constant()) return one_like(a);
    int x = main_variable(a, b);
    if (!a.depends_on(x)) return gcd_impl(a, content(b, x));
    if (!b.depends_on(x)) return gcd_impl(content(a, x), b);

    UPoly ua = to_upoly(a, x);
    UPoly ub = to_upoly(b, x);
    LaurentPoly ca = content_impl(ua, a.vars());
    LaurentPoly cb = content_impl(ub, b.vars());
    LaurentPoly c = gcd_impl(ca, cb);
    UPoly A = divide_coeffs(ua, ca);
    UPoly B = divide_coeffs(ub, cb);
    if (A.deg() < B.deg()) std::swap(A, B);

    LaurentPoly g = one_like(a);
    LaurentPoly h = one_like(a);
    for (;;) {
        int delta = A.deg() - B.deg();
        UPoly R = prem(A, B);
        if (R.is_zero()) break;
        if (R.deg() == 0) {
            B = UPoly{x, {one_like(a)}};
            break;
        }
        A = std::move(B);
        B = divide_coeffs(R, g * h.pow(static_cast<unsigned>(delta)));
        g = A.lc();
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = exact_divide(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    LaurentPoly pp(a.vars());
    if (B.deg() <= 0) {
        pp = one_like(a);
    } else {
        LaurentPoly cB = content_impl(B, a.vars());
        pp = from_upoly(divide_coeffs(B, cB), a.vars());
    }
    return normalize_monic(c * pp);
}

} // namespace

LaurentPoly normalize_monic(const LaurentPoly& p) {
    if (p.is_zero()) return p;
    return p * p.leading_term().coef.inverse();
}

LaurentPoly content(const LaurentPoly& p, int var) {
    if (!p.is_polynomial()) throw PreconditionError("content needs a polynomial");
    return content_impl(to_upoly(p, var), p.vars());
}

LaurentPoly primitive_part(const LaurentPoly& p, int var) {
    if (p.is_zero()) return p;
    return exact_divide(p, content(p, var));
}

LaurentPoly pseudo_remainder(const LaurentPoly& a, const LaurentPoly& b, int var) {
    if (b.is_zero()) throw Error("pseudo-remainder by zero");
    UPoly ua = to_upoly(a, var);
    UPoly ub = to_upoly(b, var);
    if (ua.deg() < ub.deg()) return a;
    return from_upoly(prem(ua, ub), a.vars());
}

LaurentPoly subresultant_gcd(const LaurentPoly& a, const LaurentPoly& b) {
    if (!a.is_polynomial() || !b.is_polynomial()) throw PreconditionError("gcd needs polynomial operands");
    return gcd_impl(a, b);
}

LaurentPoly resultant(const LaurentPoly& a, const LaurentPoly& b, int var) {
    if (!a.depends_on(var) && !b.depends_on(var)) {
        throw PreconditionError("resultant: variable " + (*a.vars())[static_cast<std::size_t>(var)] +
                                " is absent from both operands");
    }
    if (a.is_zero() || b.is_zero()) return LaurentPoly(a.vars());
    if (!a.is_polynomial() || !b.is_polynomial()) {
        if (a.min_degree(var) < 0 || b.min_degree(var) < 0) {
            throw PreconditionError("resultant needs non-negative powers of the eliminated variable");
        }
    }
    UPoly A = to_upoly(a, var);
    UPoly B = to_upoly(b, var);
    GaussianRational sign(1);
    if (A.deg() < B.deg()) {
        if ((A.deg() % 2 == 1) && (B.deg() % 2 == 1)) sign = -sign;
        std::swap(A, B);
    }
    if (B.deg() == 0) return B.c[0].pow(static_cast<unsigned>(A.deg())) * sign;

    LaurentPoly g = one_like(a);
    LaurentPoly h = one_like(a);
    for (;;) {
        int delta = A.deg() - B.deg();
        if ((A.deg() % 2 == 1) && (B.deg() % 2 == 1)) sign = -sign;
        UPoly R = prem(A, B);
        A = std::move(B);
        if (R.is_zero()) return LaurentPoly(a.vars());
        B = divide_coeffs(R, g * h.pow(static_cast<unsigned>(delta)));
        g = A.lc();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = exact_divide(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
        if (B.deg() == 0) break;
    }
    int da = A.deg();
    LaurentPoly out = B.c[0].pow(static_cast<unsigned>(da));
    if (da > 1) out = exact_divide(out, h.pow(static_cast<unsigned>(da - 1)));
    return out * sign;
}

bool squarefree_test(const LaurentPoly& p) {
    LaurentPoly core = p.core();
    for (int j = 0; j < core.nvars(); ++j) {
        if (!core.depends_on(j)) continue;
        if (!subresultant_gcd(core, core.derivative(j)).is_constant()) return false;
    }
    return true;
}

} // namespace fermi
