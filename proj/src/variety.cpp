#include "fermi/variety.hpp"

#include "fermi/error.hpp"
#include "fermi/modp.hpp"
#include "fermi/poly_algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

namespace fermi {

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

GaussianRational parity_sign(int Q) { return GaussianRational(Q % 2 ? -1 : 1); }

void require_coprime(const LatticeSpec& lat, const char* what) {
    if (!lat.coprime()) throw PreconditionError(std::string(what) + " requires coprime periods");
}

std::complex<double> root_of_unity(int n, int q) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(q));
}

// Visits every tuple (n_1..n_d) with 0 <= n_j < q_j.
void for_each_tuple(const std::vector<int>& periods, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> n(periods.size(), 0);
    for (;;) {
        f(n);
        std::size_t j = 0;
        while (j < n.size() && ++n[j] == periods[j]) n[j++] = 0;
        if (j == n.size()) return;
    }
}

// Probe point away from the origin and the unit torus.
std::vector<std::complex<double>> probe_point(int d) {
    std::vector<std::complex<double>> z;
    for (int j = 0; j < d; ++j) z.push_back(std::polar(1.13 + 0.07 * j, 0.31 + 0.57 * j));
    return z;
}

// Moves a polynomial in z1..zd (variables 0..d-1 of a larger ring) into floquet_vars(d).
LaurentPoly to_floquet(const LaurentPoly& p, int d) {
    std::vector<int> mapping(uz(p.nvars()), -1);
    for (int j = 0; j < d; ++j) mapping[uz(j)] = j;
    return p.remap(floquet_vars(d), mapping);
}

LaurentPoly reduce_mod_cyclic(const LaurentPoly& g, int t, int q) {
    std::vector<LaurentPoly::Term> out = g.terms();
    for (auto& term : out) {
        if (term.exp[uz(t)] < 0) throw PreconditionError("negative power of an auxiliary root variable");
        term.exp[uz(t)] %= q;
    }
    return LaurentPoly::from_terms(g.vars(), std::move(out));
}

// Exact product, then the sign chosen by agreement with the direct floating product at a probe point.
struct CheckedProduct {
    LaurentPoly value;
    bool flipped = false;
};

CheckedProduct checked_product(const LaurentPoly& g, const std::vector<int>& t_index, const std::vector<int>& periods,
                               const std::function<std::complex<double>(const std::vector<std::complex<double>>&)>& direct,
                               int nz) {
    LaurentPoly r = roots_of_unity_product(g, t_index, periods);
    auto z = probe_point(nz);
    std::vector<std::complex<double>> pt(uz(r.nvars()), 1.0);
    for (int j = 0; j < nz; ++j) pt[uz(j)] = z[uz(j)];
    std::complex<double> exact = r.evaluate(std::span<const std::complex<double>>(pt));
    std::complex<double> want = direct(z);
    double scale = std::max(1.0, std::abs(want));
    if (std::abs(exact - want) <= 1e-8 * scale) return {r, false};
    if (std::abs(exact + want) <= 1e-8 * scale) return {-r, true};
    throw InternalCheckError("root-of-unity product disagrees with the direct product: " + std::to_string(exact.real()) +
                             " vs " + std::to_string(want.real()));
}

VarsPtr product_ring(int d) {
    std::vector<std::string> names;
    for (int j = 1; j <= d; ++j) names.push_back("z" + std::to_string(j));
    for (int j = 1; j <= d; ++j) names.push_back("t" + std::to_string(j));
    return make_vars(names);
}

LaurentPoly var(const VarsPtr& vars, int j) { return LaurentPoly::variable(vars, j); }

LaurentPoly phi_of(const CharPolyBundle& b, const std::optional<GaussianRational>& lambda) {
    const int d = b.lattice.dim();
    const int Q = b.lattice.cell_size();
    Exponents e{};
    for (int j = 0; j < d; ++j) e[uz(j)] = Q;
    LaurentPoly pt = lambda ? b.ptilde.specialize(d, *lambda) : b.ptilde;
    return pt.mul_monomial(e) * parity_sign(Q);
}

LaurentPoly psi_of(const CharPolyBundle& b, const GaussianRational& lambda) {
    const int d = b.lattice.dim();
    const int Q = b.lattice.cell_size();
    Exponents e{};
    for (int j = 0; j < d - 1; ++j) e[uz(j)] = Q;
    e[uz(d - 1)] = -Q;
    return b.ptilde.specialize(d, lambda).mul_monomial(e) * parity_sign(Q);
}

std::vector<int> with_lambda(const std::vector<int>& periods) {
    auto v = periods;
    v.push_back(1);
    return v;
}

} // namespace

LaurentPoly roots_of_unity_product(const LaurentPoly& g, const std::vector<int>& t_index, const std::vector<int>& periods) {
    if (t_index.size() != periods.size()) throw PreconditionError("one period per auxiliary variable");
    LaurentPoly r = g;
    for (std::size_t j = 0; j < t_index.size(); ++j) {
        int t = t_index[j];
        int q = periods[j];
        r = reduce_mod_cyclic(r, t, q);
        if (!r.depends_on(t)) {
            r = r.pow(static_cast<unsigned>(q));
            continue;
        }
        Exponents e{};
        e[uz(t)] = q;
        LaurentPoly cyc = LaurentPoly::monomial(r.vars(), e, GaussianRational(1)) -
                          LaurentPoly::constant(r.vars(), GaussianRational(1));
        r = resultant(cyc, r, t);
    }
    return r;
}

HTilde htilde(const RootsProductSpec& spec) {
    const auto& lat = spec.lattice;
    require_coprime(lat, "htilde");
    const int d = lat.dim();
    const int Q = lat.cell_size();
    if (d < 2) throw PreconditionError("htilde needs d >= 2");
    VarsPtr ring = product_ring(d);
    std::vector<int> ts;
    for (int j = 0; j < d; ++j) ts.push_back(d + j);

    // mu is closed under inversion in each coordinate, so 1/rho may be replaced by rho factor by factor.
    LaurentPoly g(ring);
    std::function<std::complex<double>(const std::vector<std::complex<double>>&)> direct;
    if (spec.kind == RootsForm::H1) {
        for (int j = 0; j < d; ++j) {
            LaurentPoly term = var(ring, d + j);
            for (int i = 0; i < d; ++i) {
                if (i != j) term *= var(ring, i);
            }
            g += term;
        }
        direct = [&](const std::vector<std::complex<double>>& z) {
            std::complex<double> acc = 1.0;
            for (int j = 0; j < d; ++j) acc *= std::pow(z[uz(j)], Q);
            for_each_tuple(lat.periods(), [&](const std::vector<int>& n) {
                std::complex<double> s = 0.0;
                for (int j = 0; j < d; ++j) s += 1.0 / (root_of_unity(n[uz(j)], lat.period(j)) * z[uz(j)]);
                acc *= s;
            });
            return acc;
        };
    } else {
        // variable d-1 stands for w = 1/z_d until the end
        LaurentPoly lead = var(ring, 2 * d - 1);
        for (int i = 0; i < d - 1; ++i) lead *= var(ring, i);
        LaurentPoly rest(ring);
        for (int j = 0; j < d - 1; ++j) {
            LaurentPoly term = var(ring, d + j);
            for (int i = 0; i < d - 1; ++i) {
                if (i != j) term *= var(ring, i);
            }
            rest += term;
        }
        g = lead + var(ring, d - 1) * rest;
        direct = [&](const std::vector<std::complex<double>>& zw) {
            auto z = zw;
            z[uz(d - 1)] = 1.0 / zw[uz(d - 1)];
            std::complex<double> acc = std::pow(z[uz(d - 1)], -Q);
            for (int j = 0; j < d - 1; ++j) acc *= std::pow(z[uz(j)], Q);
            for_each_tuple(lat.periods(), [&](const std::vector<int>& n) {
                std::complex<double> s = root_of_unity(n[uz(d - 1)], lat.period(d - 1)) * z[uz(d - 1)];
                for (int j = 0; j < d - 1; ++j) s += 1.0 / (root_of_unity(n[uz(j)], lat.period(j)) * z[uz(j)]);
                acc *= s;
            });
            return acc;
        };
    }
    CheckedProduct prod = checked_product(g, ts, lat.periods(), direct, d);
    LaurentPoly h = to_floquet(prod.value, d);
    if (spec.kind == RootsForm::H2) {
        std::vector<int> flip(uz(d + 1), 1);
        flip[uz(d - 1)] = -1;
        h = h.scale_exponents(flip);
    }
    auto div = with_lambda(lat.periods());
    LaurentPoly down = exponent_division(h, div);
    if (pushforward(down, div) != h) throw InternalCheckError("pushforward of the pushdown does not reproduce htilde");
    return {h, down, prod.flipped};
}

LowestComponentReport lowest_component_check(const PeriodicPotential& V, const GaussianRational& lambda) {
    require_coprime(V.lattice(), "lowest_component_check");
    return lowest_component_check(charpoly_exact(V), lambda);
}

LowestComponentReport lowest_component_check(const CharPolyBundle& b, const GaussianRational& lambda) {
    require_coprime(b.lattice, "lowest_component_check");
    const int d = b.lattice.dim();
    LowestComponentReport r;
    r.lambda = lambda;
    r.h1 = htilde({b.lattice, RootsForm::H1}).htilde;
    r.h2 = htilde({b.lattice, RootsForm::H2}).htilde;
    std::vector<int> signs(uz(d + 1), 1);
    signs[uz(d)] = 0;
    r.phi_lowest = weighted_lowest_component(phi_of(b, lambda), signs);
    signs[uz(d - 1)] = -1;
    r.psi_lowest = weighted_lowest_component(psi_of(b, lambda), signs);
    r.h1_match = r.phi_lowest == r.h1;
    r.h2_match = r.psi_lowest == r.h2;
    r.ok = r.h1_match && r.h2_match;
    return r;
}

DegreeBoundReport degree_bound_check(const PeriodicPotential& V, const std::optional<GaussianRational>& lambda) {
    return degree_bound_check(charpoly_exact(V), lambda);
}

DegreeBoundReport degree_bound_check(const CharPolyBundle& b, const std::optional<GaussianRational>& lambda) {
    const int d = b.lattice.dim();
    const int Q = b.lattice.cell_size();
    LaurentPoly phi = phi_of(b, lambda);
    if (!phi.is_polynomial()) throw InternalCheckError("Phi is not a polynomial");
    std::vector<int> w(uz(d + 1), 1);
    w[uz(d)] = 0;
    DegreeBoundReport r;
    r.degree = phi.weighted_degree(w);
    if (d == 2) {
        r.bound = 3 * Q;
        r.bound_name = "3 q1 q2";
    } else {
        r.bound = (d + 1) * Q;
        r.bound_name = "(d+1) Q";
    }
    r.attained = r.degree == r.bound;
    r.ok = r.degree <= r.bound;
    if (!r.ok) {
        throw InternalCheckError("degree of Phi is " + std::to_string(r.degree) + ", above the bound " +
                                 std::to_string(r.bound));
    }
    return r;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Irreducible: return "irreducible";
    case Verdict::Reducible: return "reducible";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

long newton_edge_gcd(const LaurentPoly& p, int x, int y) {
    using Pt = std::pair<long, long>;
    std::vector<Pt> pts;
    for (const auto& t : p.terms()) pts.emplace_back(t.exp[uz(x)], t.exp[uz(y)]);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0;
    auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<Pt> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p0 : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p0) <= 0) --k;
        hull[k++] = p0;
    }
    for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
        while (k >= lo && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    long g = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        g = std::gcd(g, std::gcd(std::labs(b.first - a.first), std::labs(b.second - a.second)));
    }
    return g;
}

namespace {

std::string var_name(const LaurentPoly& p, int j) { return (*p.vars())[uz(j)]; }

struct Certifier {
    const CertifyOptions& opt;
    std::vector<Evidence>& ev;

    void note(std::string step, std::string detail, bool passed) {
        ev.push_back({std::move(step), std::move(detail), passed});
    }

    std::vector<int> support_vars(const LaurentPoly& f) const {
        std::vector<int> v;
        for (int j = 0; j < f.nvars(); ++j) {
            if (f.depends_on(j)) v.push_back(j);
        }
        return v;
    }

    // f has no monomial factor and is not constant.
    Verdict run(const LaurentPoly& f, std::vector<LaurentPoly>& factors, const std::string& prefix) {
        auto vs = support_vars(f);
        if (vs.size() == 1) {
            int deg = f.degree(vs[0]);
            note(prefix + "univariate", "degree " + std::to_string(deg) + " in " + var_name(f, vs[0]), deg == 1);
            return deg == 1 ? Verdict::Irreducible : Verdict::Inconclusive;
        }
        for (int v : vs) {
            LaurentPoly c = content(f, v);
            if (!c.is_constant()) {
                LaurentPoly rest = exact_divide(f, c);
                if (c * rest != f) throw InternalCheckError("content factor does not reproduce the input");
                note(prefix + "content in " + var_name(f, v), c.to_string(), false);
                factors = {c, rest};
                return Verdict::Reducible;
            }
            note(prefix + "content in " + var_name(f, v), "1", true);
        }
        for (int v : vs) {
            if (f.degree(v) == 1) {
                note(prefix + "linear", "degree 1 in " + var_name(f, v) + " with trivial content", true);
                return Verdict::Irreducible;
            }
        }
        if (!f.is_real()) {
            note(prefix + "coefficients", "non-real coefficients; specialization test needs Q", false);
            return Verdict::Inconclusive;
        }
        if (vs.size() == 2) return bivariate(f, vs[0], vs[1], prefix);
        if (vs.size() == 3) return trivariate(f, vs, prefix);
        note(prefix + "variables", std::to_string(vs.size()) + " variables not supported", false);
        return Verdict::Inconclusive;
    }

    Verdict bivariate(const LaurentPoly& f, int x, int y, const std::string& prefix) {
        long g = newton_edge_gcd(f, x, y);
        note(prefix + "newton polygon", "edge lattice-length gcd " + std::to_string(g), g == 1);
        if (g != 1) return Verdict::Inconclusive;
        for (auto [keep, spec] : {std::pair{x, y}, std::pair{y, x}}) {
            int attempts = 0;
            for (long c : opt.schedule) {
                if (attempts++ >= opt.max_attempts) break;
                LaurentPoly fc = f.specialize(spec, GaussianRational(c));
                std::string where = var_name(f, spec) + "=" + std::to_string(c);
                if (fc.degree(keep) != f.degree(keep)) {
                    note(prefix + "specialize " + where, "degree in " + var_name(f, keep) + " drops", false);
                    continue;
                }
                try {
                    auto coeffs = univariate_coefficients(fc, keep);
                    auto ri = rational_irreducibility(coeffs, opt.max_primes);
                    std::string detail = "degree " + std::to_string(fc.degree(keep)) + " preserved; " + ri.method;
                    if (!ri.primes.empty()) {
                        detail += "; primes";
                        for (auto p : ri.primes) detail += " " + std::to_string(p);
                    }
                    note(prefix + "specialize " + where, detail, ri.irreducible);
                    if (ri.irreducible) return Verdict::Irreducible;
                } catch (const PreconditionError& e) {
                    note(prefix + "specialize " + where, e.what(), false);
                }
            }
        }
        return Verdict::Inconclusive;
    }

    Verdict trivariate(const LaurentPoly& f, const std::vector<int>& vs, const std::string& prefix) {
        for (int w : vs) {
            std::vector<int> others;
            for (int v : vs) {
                if (v != w) others.push_back(v);
            }
            // gcd of the coefficients of f as a polynomial in the other two variables
            std::map<std::pair<int, int>, std::vector<LaurentPoly::Term>> groups;
            for (const auto& t : f.terms()) {
                LaurentPoly::Term s = t;
                s.exp[uz(others[0])] = 0;
                s.exp[uz(others[1])] = 0;
                groups[{t.exp[uz(others[0])], t.exp[uz(others[1])]}].push_back(s);
            }
            LaurentPoly g(f.vars());
            for (auto& [key, terms] : groups) {
                LaurentPoly c = LaurentPoly::from_terms(f.vars(), terms);
                g = g.is_zero() ? c : subresultant_gcd(g, c);
                if (g.is_constant()) break;
            }
            bool trivial = g.is_constant();
            note(prefix + "content over Q[" + var_name(f, w) + "]", trivial ? "1" : g.to_string(), trivial);
            if (!trivial) continue;
            std::vector<int> weights(uz(f.nvars()), 0);
            weights[uz(others[0])] = 1;
            weights[uz(others[1])] = 1;
            int deg = f.weighted_degree(weights);
            int attempts = 0;
            for (long c : opt.schedule) {
                if (attempts++ >= opt.max_attempts) break;
                LaurentPoly fc = f.specialize(w, GaussianRational(c));
                std::string where = var_name(f, w) + "=" + std::to_string(c);
                if (fc.weighted_degree(weights) != deg || fc.core() != fc) {
                    note(prefix + "specialize " + where, "total degree drops or monomial factor appears", false);
                    continue;
                }
                note(prefix + "specialize " + where, "total degree " + std::to_string(deg) + " preserved", true);
                std::vector<LaurentPoly> sub;
                if (run(fc, sub, prefix + where + ": ") == Verdict::Irreducible) return Verdict::Irreducible;
            }
        }
        return Verdict::Inconclusive;
    }
};

} // namespace

IrreducibilityCertificate certify_irreducible(const LaurentPoly& p, const CertifyOptions& options) {
    if (p.is_zero()) throw PreconditionError("certify_irreducible: zero polynomial");
    IrreducibilityCertificate cert;
    Certifier c{options, cert.evidence};
    LaurentPoly f = p.core();
    if (f != p) c.note("monomial factor", "removed (a unit for Laurent polynomials)", true);
    if (f.is_constant()) throw PreconditionError("certify_irreducible: unit input");
    for (const auto& cand : options.candidate_factors) {
        LaurentPoly h = cand.core();
        if (h.is_constant()) continue;
        auto q = try_divide(f, h);
        if (q && !q->is_constant()) {
            if (h * *q != f) throw InternalCheckError("candidate factorization does not reproduce the input");
            c.note("candidate factor", h.to_string() + " divides exactly", true);
            cert.verdict = Verdict::Reducible;
            cert.factors = {h, *q};
            return cert;
        }
    }
    cert.verdict = c.run(f, cert.factors, "");
    if (cert.verdict != Verdict::Reducible) cert.factors.clear();
    return cert;
}

namespace {

struct AverageProducts {
    LaurentPoly pi1, pi2;
};

AverageProducts average_products(const LatticeSpec& lat) {
    const int q1 = lat.period(0);
    const int q2 = lat.period(1);
    VarsPtr ring = product_ring(2);
    LaurentPoly z1 = var(ring, 0), z2 = var(ring, 1), t1 = var(ring, 2), t2 = var(ring, 3);
    std::vector<int> ts{2, 3};
    auto pi1 = checked_product(
        t1 * z2 + t2 * z1, ts, lat.periods(),
        [&](const std::vector<std::complex<double>>& z) {
            std::complex<double> acc = 1.0;
            for_each_tuple(lat.periods(), [&](const std::vector<int>& n) {
                acc *= z[1] / root_of_unity(n[0], q1) + z[0] / root_of_unity(n[1], q2);
            });
            return acc;
        },
        2);
    auto pi2 = checked_product(
        t1 + t2 * z1 * z2, ts, lat.periods(),
        [&](const std::vector<std::complex<double>>& z) {
            std::complex<double> acc = 1.0;
            for_each_tuple(lat.periods(), [&](const std::vector<int>& n) {
                acc *= 1.0 / root_of_unity(n[0], q1) + root_of_unity(n[1], q2) * z[0] * z[1];
            });
            return acc;
        },
        2);
    return {to_floquet(pi1.value, 2), to_floquet(pi2.value, 2)};
}

} // namespace

IrreducibilityCertificate certify_fermi_irreducible(const PeriodicPotential& V, const GaussianRational& lambda,
                                                    const CertifyOptions& options) {
    const auto& lat = V.lattice();
    auto b = charpoly_exact(V);
    LaurentPoly p1 = b.p1.specialize(lat.dim(), lambda);
    CertifyOptions opt = options;
    if (lat.coprime() && lat.dim() >= 2) {
        auto div = with_lambda(lat.periods());
        if (lat.dim() == 2) {
            auto ap = average_products(lat);
            opt.candidate_factors.push_back(exponent_division(ap.pi1, div));
            opt.candidate_factors.push_back(exponent_division(ap.pi2, div));
        } else {
            opt.candidate_factors.push_back(htilde({lat, RootsForm::H1}).pushdown);
        }
    }
    return certify_irreducible(p1, opt);
}

FactorAtAverageReport factor_at_average(const PeriodicPotential& V) {
    const auto& lat = V.lattice();
    if (lat.dim() != 2) throw PreconditionError("factor_at_average is defined for d = 2");
    require_coprime(lat, "factor_at_average");
    auto b = charpoly_exact(V);
    FactorAtAverageReport r;
    r.average = V.average();
    r.lhs = phi_of(b, V.average());
    auto ap = average_products(lat);
    r.pi1 = ap.pi1;
    r.pi2 = ap.pi2;
    LaurentPoly prod = r.pi1 * r.pi2;
    const auto& lead = prod.leading_term();
    GaussianRational c_lhs;
    for (const auto& t : r.lhs.terms()) {
        if (t.exp == lead.exp) c_lhs = t.coef;
    }
    LaurentPoly p1_avg = b.p1.specialize(2, V.average());
    auto div = with_lambda(lat.periods());
    if (!c_lhs.is_zero()) {
        GaussianRational K = c_lhs / lead.coef;
        if (r.lhs == prod * K) {
            r.K = K;
            r.identity_holds = true;
        }
    }
    if (r.identity_holds) {
        r.verdict = Verdict::Reducible;
        r.lhs_factors = {r.pi1, r.pi2 * *r.K};
        r.p1_factors = {exponent_division(r.lhs_factors[0], div), exponent_division(r.lhs_factors[1], div)};
        if (r.p1_factors[0] * r.p1_factors[1] != p1_avg) {
            throw InternalCheckError("pushed-down factors do not reproduce P1 at the average");
        }
        r.p1_certificate.verdict = Verdict::Reducible;
        r.p1_certificate.factors = r.p1_factors;
        r.p1_certificate.evidence.push_back(
            {"factor at average", "(-1)^Q (z1 z2)^Q P~ = K Pi1 Pi2 with K = " + r.K->to_string(), true});
    } else {
        // a factorization at [V] forces the identity, so its failure leaves P1 irreducible
        r.verdict = Verdict::Irreducible;
        r.p1_certificate = certify_irreducible(p1_avg);
    }
    return r;
}

bool squarefree_check(const PeriodicPotential& V, const GaussianRational& lambda) {
    auto b = charpoly_exact(V);
    return squarefree_test(b.p1.specialize(V.lattice().dim(), lambda));
}

AllLambdaSquarefree squarefree_all_lambda(const CharPolyBundle& b) {
    if (b.lattice.dim() != 2) throw PreconditionError("all-lambda square-free certificate is for d = 2");
    AllLambdaSquarefree out;
    const LaurentPoly& p1 = b.p1;
    // Specialization commutes with the resultant when the leading z2-coefficient is a lambda-free monomial;
    // a lambda-free term without z1 keeps the z2-content trivial at every level.
    LaurentPoly lead = p1.coefficient(1, p1.degree(1));
    bool unit_free = false;
    for (const auto& t : p1.terms()) unit_free |= t.exp[0] == 0 && t.exp[2] == 0;
    if (!lead.is_monomial() || lead.depends_on(2) || !unit_free) {
        out.gcd_in_lambda = LaurentPoly(p1.vars());
        return out;
    }
    LaurentPoly R = resultant(p1, p1.derivative(1), 1);
    LaurentPoly G(p1.vars());
    for (const auto& c : R.coefficients_in(0)) {
        if (c.is_zero()) continue;
        G = G.is_zero() ? normalize_monic(c) : subresultant_gcd(G, c);
        if (G.is_constant()) break;
    }
    out.gcd_in_lambda = G;
    out.all_lambda = G.is_constant() && !G.is_zero();
    if (!out.all_lambda && !G.is_zero()) {
        std::vector<std::complex<double>> c;
        for (const auto& x : G.coefficients_in(2)) c.push_back(x.constant_term().to_complex());
        out.exceptional = polynomial_roots(c);
    }
    return out;
}

bool squarefree_at_level(const AllLambdaSquarefree& cert, double lambda, double tol) {
    if (cert.all_lambda) return true;
    if (cert.gcd_in_lambda.is_zero()) return false;
    for (const auto& r : cert.exceptional) {
        if (std::abs(r - std::complex<double>(lambda, 0.0)) < tol) return false;
    }
    return true;
}

std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    std::size_t zeros = 0;
    while (zeros < c.size() && c[zeros] == 0.0) ++zeros;
    std::vector<std::complex<double>> roots(zeros, 0.0);
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
    if (c.size() <= 1) return roots;
    const auto n = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) m(i, n - 1) = -c[uz(static_cast<int>(i))] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

namespace {

// P1(., lambda) as numeric terms with value, gradient and Hessian in z.
struct NumericBivariate {
    std::vector<std::array<int, 2>> e;
    std::vector<std::complex<double>> c;

    NumericBivariate(const LaurentPoly& p, std::complex<double> lambda) {
        std::map<std::array<int, 2>, std::complex<double>> acc;
        for (const auto& t : p.terms()) {
            acc[{t.exp[0], t.exp[1]}] += t.coef.to_complex() * std::pow(lambda, t.exp[2]);
        }
        for (auto& [k, v] : acc) {
            e.push_back(k);
            c.push_back(v);
        }
    }

    // f, fx, fy, fxx, fxy, fyy
    std::array<std::complex<double>, 6> eval(std::complex<double> x, std::complex<double> y) const {
        std::array<std::complex<double>, 6> r{};
        auto pw = [](std::complex<double> b, int k) { return k < 0 ? std::complex<double>(0.0) : std::pow(b, k); };
        for (std::size_t i = 0; i < c.size(); ++i) {
            int a = e[i][0], b = e[i][1];
            auto cc = c[i];
            r[0] += cc * pw(x, a) * pw(y, b);
            if (a >= 1) r[1] += cc * double(a) * pw(x, a - 1) * pw(y, b);
            if (b >= 1) r[2] += cc * double(b) * pw(x, a) * pw(y, b - 1);
            if (a >= 2) r[3] += cc * double(a * (a - 1)) * pw(x, a - 2) * pw(y, b);
            if (a >= 1 && b >= 1) r[4] += cc * double(a * b) * pw(x, a - 1) * pw(y, b - 1);
            if (b >= 2) r[5] += cc * double(b * (b - 1)) * pw(x, a) * pw(y, b - 2);
        }
        return r;
    }

    std::vector<std::complex<double>> coeffs_in_y(std::complex<double> x) const {
        int top = 0;
        for (const auto& k : e) top = std::max(top, k[1]);
        std::vector<std::complex<double>> out(uz(top + 1), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) out[uz(e[i][1])] += c[i] * std::pow(x, e[i][0]);
        return out;
    }
};

double residual_norm(const std::array<std::complex<double>, 6>& r) {
    return std::sqrt(std::norm(r[0]) + std::norm(r[1]) + std::norm(r[2]));
}

// Damped Gauss-Newton on (f, fx, fy) = 0.
std::pair<std::complex<double>, std::complex<double>> polish(const NumericBivariate& f, std::complex<double> x,
                                                             std::complex<double> y) {
    auto r = f.eval(x, y);
    double res = residual_norm(r);
    for (int it = 0; it < 50 && res > 0.0; ++it) {
        Eigen::Matrix<std::complex<double>, 3, 2> J;
        J << r[1], r[2], r[3], r[4], r[4], r[5];
        Eigen::Vector3cd F(r[0], r[1], r[2]);
        Eigen::Vector2cd step = J.colPivHouseholderQr().solve(-F);
        double alpha = 1.0;
        bool moved = false;
        for (int h = 0; h < 12; ++h, alpha *= 0.5) {
            auto nx = x + alpha * step(0);
            auto ny = y + alpha * step(1);
            auto nr = f.eval(nx, ny);
            double nres = residual_norm(nr);
            if (nres < res) {
                x = nx;
                y = ny;
                r = nr;
                res = nres;
                moved = true;
                break;
            }
        }
        if (!moved || step.norm() < 1e-16 * (1.0 + std::abs(x) + std::abs(y))) break;
    }
    return {x, y};
}

double wrap01(double k) {
    k -= std::floor(k);
    if (k >= 1.0 - 1e-12) k = 0.0;
    return k;
}

double torus_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::fabs(a[i] - b[i]);
        m = std::max(m, std::min(d, 1.0 - d));
    }
    return m;
}

constexpr double kLooseTorus = 5e-2;
constexpr double kResidualTol = 1e-7;

void collect_points(const CharPolyBundle& b, const NumericBivariate& f, std::complex<double> lambda,
                    const std::vector<std::complex<double>>& z1_candidates, double tol, SingularPointReport& out) {
    CharPolyEvaluator ev(b.p);
    for (auto x0 : z1_candidates) {
        if (std::fabs(std::abs(x0) - 1.0) > kLooseTorus) continue;
        for (auto y0 : polynomial_roots(f.coeffs_in_y(x0))) {
            if (std::fabs(std::abs(y0) - 1.0) > kLooseTorus) continue;
            auto [x, y] = polish(f, x0, y0);
            if (std::fabs(std::abs(x) - 1.0) > tol || std::fabs(std::abs(y) - 1.0) > tol) continue;
            std::vector<double> k{wrap01(std::arg(x) / (2.0 * std::numbers::pi)),
                                  wrap01(std::arg(y) / (2.0 * std::numbers::pi))};
            std::vector<std::complex<double>> kc{k[0], k[1]};
            double rp = std::abs(ev.value(kc, lambda));
            double rg = 0.0;
            for (auto g : ev.gradient(kc, lambda)) rg = std::max(rg, std::abs(g));
            if (rp > kResidualTol || rg > kResidualTol) continue;
            bool dup = false;
            for (const auto& p : out.points) {
                if (torus_distance(p.k, k) < 1e-6) dup = true;
            }
            if (!dup) out.points.push_back({k, rp, rg});
        }
    }
    std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    out.count = static_cast<int>(out.points.size());
}

std::vector<std::complex<double>> numeric_coeffs(const LaurentPoly& p, int var) {
    std::vector<std::complex<double>> c;
    for (const auto& x : p.coefficients_in(var)) c.push_back(x.constant_term().to_complex());
    return c;
}

} // namespace

SingularPointReport singular_points_d2(const PeriodicPotential& V, const GaussianRational& lambda, double tol) {
    return singular_points_d2(charpoly_exact(V), lambda, tol);
}

SingularPointReport singular_points_d2(const CharPolyBundle& b, const GaussianRational& lambda, double tol) {
    if (b.lattice.dim() != 2) throw PreconditionError("singular_points_d2 needs d = 2");
    SingularPointReport out;
    out.lambda_star = lambda;
    out.lambda_value = lambda.re().get_d();
    out.bound = 4 * (b.lattice.period(0) + b.lattice.period(1)) * (b.lattice.period(0) + b.lattice.period(1));
    LaurentPoly p = b.p1.specialize(2, lambda);
    out.squarefree = squarefree_test(p);
    if (!out.squarefree) throw PreconditionError("P1 is not square-free at lambda = " + lambda.to_string());
    LaurentPoly r1 = resultant(p, p.derivative(0), 1);
    LaurentPoly r2 = resultant(p, p.derivative(1), 1);
    if (r1.is_zero() || r2.is_zero()) throw InternalCheckError("resultant vanishes identically");
    LaurentPoly g = subresultant_gcd(r1, r2).core();
    std::vector<std::complex<double>> cands;
    if (!g.is_constant()) {
        LaurentPoly sqf = exact_divide(g, subresultant_gcd(g, g.derivative(0)));
        cands = polynomial_roots(numeric_coeffs(sqf, 0));
    }
    NumericBivariate f(b.p1, lambda.to_complex());
    collect_points(b, f, lambda.to_complex(), cands, tol, out);
    out.ok = out.count <= out.bound;
    if (!out.ok) throw InternalCheckError("singular point count exceeds the bound");
    return out;
}

SingularPointReport singular_points_d2_numeric(const CharPolyBundle& b, double lambda, double tol) {
    if (b.lattice.dim() != 2) throw PreconditionError("singular_points_d2 needs d = 2");
    SingularPointReport out;
    out.lambda_value = lambda;
    out.bound = 4 * (b.lattice.period(0) + b.lattice.period(1)) * (b.lattice.period(0) + b.lattice.period(1));
    out.squarefree = squarefree_at_level(squarefree_all_lambda(b), lambda);
    if (!out.squarefree) throw PreconditionError("square-freeness not certified at this level");
    // Res_{z2}(P1, dP1/dz2) with lambda symbolic; singular points sit over its roots in z1
    LaurentPoly r2 = resultant(b.p1, b.p1.derivative(1), 1);
    std::vector<std::complex<double>> c;
    for (const auto& x : r2.coefficients_in(0)) {
        std::complex<double> v = 0.0;
        for (const auto& t : x.terms()) v += t.coef.to_complex() * std::pow(lambda, t.exp[2]);
        c.push_back(v);
    }
    NumericBivariate f(b.p1, lambda);
    collect_points(b, f, lambda, polynomial_roots(c), tol, out);
    out.ok = out.count <= out.bound;
    if (!out.ok) throw InternalCheckError("singular point count exceeds the bound");
    return out;
}

} // namespace fermi
