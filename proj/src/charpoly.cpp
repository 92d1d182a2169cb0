#include "fermi/charpoly.hpp"

#include "fermi/error.hpp"
#include "fermi/kernels/kernels.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

namespace fermi {

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

LaurentPoly bareiss(PolyMatrix a) {
    const int n = a.n;
    const VarsPtr& vars = a.e.front().vars();
    LaurentPoly prev = LaurentPoly::constant(vars, GaussianRational(1));
    bool negate = false;
    for (int k = 0; k + 1 < n; ++k) {
        // smallest nonzero pivot in column k keeps the next products cheap
        int piv = -1;
        for (int r = k; r < n; ++r) {
            if (a.at(r, k).is_zero()) continue;
            if (piv < 0 || a.at(r, k).size() < a.at(piv, k).size()) piv = r;
        }
        if (piv < 0) return LaurentPoly(vars);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            negate = !negate;
        }
        const LaurentPoly& pk = a.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            const LaurentPoly& aik = a.at(i, k);
            for (int j = k + 1; j < n; ++j) {
                LaurentPoly num = pk * a.at(i, j);
                if (!aik.is_zero() && !a.at(k, j).is_zero()) num -= aik * a.at(k, j);
                a.at(i, j) = k == 0 ? std::move(num) : exact_divide(num, prev);
            }
        }
        prev = pk;
    }
    LaurentPoly det = a.at(n - 1, n - 1);
    return negate ? -det : det;
}

LaurentPoly cofactor(const PolyMatrix& a) {
    const int n = a.n;
    if (n > 16) throw PreconditionError("cofactor expansion is limited to small matrices");
    const VarsPtr& vars = a.e.front().vars();
    // memo over the set of columns consumed by the rows above
    std::unordered_map<unsigned, LaurentPoly> memo;
    auto rec = [&](auto&& self, int row, unsigned used) -> LaurentPoly {
        if (row == n) return LaurentPoly::constant(vars, GaussianRational(1));
        if (auto it = memo.find(used); it != memo.end()) return it->second;
        LaurentPoly acc(vars);
        int pos = 0;
        for (int c = 0; c < n; ++c) {
            if (used & (1u << c)) continue;
            if (!a.at(row, c).is_zero()) {
                LaurentPoly term = a.at(row, c) * self(self, row + 1, used | (1u << c));
                if (pos % 2) acc -= term;
                else acc += term;
            }
            ++pos;
        }
        memo.emplace(used, acc);
        return acc;
    };
    return rec(rec, 0, 0u);
}

GaussianRational random_nonzero(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    for (;;) {
        GaussianRational g(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
        if (!g.is_zero()) return g;
    }
}

} // namespace

GaussianRational scalar_determinant(std::vector<GaussianRational> a, int n) {
    GaussianRational det(1);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int r = k; r < n; ++r) {
            if (!a[uz(r * n + k)].is_zero()) {
                piv = r;
                break;
            }
        }
        if (piv < 0) return GaussianRational(0);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[uz(k * n + j)], a[uz(piv * n + j)]);
            det = -det;
        }
        const GaussianRational pk = a[uz(k * n + k)];
        det *= pk;
        GaussianRational inv = pk.inverse();
        for (int i = k + 1; i < n; ++i) {
            if (a[uz(i * n + k)].is_zero()) continue;
            GaussianRational f = a[uz(i * n + k)] * inv;
            for (int j = k + 1; j < n; ++j) a[uz(i * n + j)] -= f * a[uz(k * n + j)];
        }
    }
    return det;
}

LaurentPoly determinant(const PolyMatrix& m, DetMethod method) {
    if (m.n == 0) throw PreconditionError("empty matrix");
    const int nv = m.e.front().nvars();
    PolyMatrix a = m;
    Exponents total{};
    for (int i = 0; i < m.n; ++i) {
        Exponents lift{};
        for (int v = 0; v < nv; ++v) {
            int lo = 0;
            for (int j = 0; j < m.n; ++j) {
                if (!m.at(i, j).is_zero()) lo = std::min(lo, m.at(i, j).min_degree(v));
            }
            lift[uz(v)] = -lo;
            total[uz(v)] += lo;
        }
        for (int j = 0; j < m.n; ++j) a.at(i, j) = a.at(i, j).mul_monomial(lift);
    }
    LaurentPoly det = method == DetMethod::Bareiss ? bareiss(std::move(a)) : cofactor(a);
    return det.mul_monomial(total);
}

PolyMatrix characteristic_matrix(const FloquetMatrixSymbolic& d) {
    PolyMatrix m;
    m.n = d.size();
    const int lam = d.lattice().dim();
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            LaurentPoly e = d.at(i, j);
            if (i == j) e -= LaurentPoly::variable(d.vars(), lam);
            m.e.push_back(std::move(e));
        }
    }
    return m;
}

CharPolyBundle charpoly_exact(const PeriodicPotential& V, DetMethod method, int checks, std::uint64_t seed) {
    const auto& lat = V.lattice();
    auto sym = assemble_symbolic(V);
    PolyMatrix cm = characteristic_matrix(sym);
    LaurentPoly p = determinant(cm, method);

    std::mt19937_64 rng(seed);
    for (int c = 0; c < checks; ++c) {
        std::vector<GaussianRational> pt;
        for (int v = 0; v < p.nvars(); ++v) pt.push_back(random_nonzero(rng));
        std::vector<GaussianRational> vals;
        vals.reserve(cm.e.size());
        for (const auto& e : cm.e) vals.push_back(e.evaluate(pt));
        if (scalar_determinant(std::move(vals), cm.n) != p.evaluate(pt)) {
            throw InternalCheckError("determinant cross-check failed at a random exact point");
        }
    }

    const int Q = lat.cell_size();
    Exponents clear{};
    for (int j = 0; j < lat.dim(); ++j) clear[uz(j)] = Q / lat.period(j);
    LaurentPoly p1 = p.mul_monomial(clear) * GaussianRational(Q % 2 ? -1 : 1);
    std::vector<int> q(lat.periods());
    q.push_back(1);
    LaurentPoly pt = pushforward(p, q);
    return {lat, p.vars(), std::move(p), std::move(p1), std::move(pt)};
}

FactsReport check_facts(const CharPolyBundle& b) {
    FactsReport r;
    const auto& lat = b.lattice;
    const int d = lat.dim();
    const int Q = lat.cell_size();
    auto add = [&](std::string name, bool ok, std::string detail, bool info = false) {
        if (!info) r.ok = r.ok && ok;
        r.facts.push_back({std::move(name), ok, std::move(detail), info});
    };

    {
        // D(1/z) is the transpose of D(z)
        std::vector<int> flip(uz(d + 1), -1);
        flip[uz(d)] = 1;
        bool ok = b.p.scale_exponents(flip) == b.p;
        add("symmetry z <-> 1/z", ok, ok ? "invariant" : "P changes under inversion");
    }
    for (int j = 0; j < d; ++j) {
        // single-variable inversion is the reflection n_j -> -n_j, which moves V once two periods exceed 2
        std::vector<int> flip(uz(d + 1), 1);
        flip[uz(j)] = -1;
        bool ok = b.p.scale_exponents(flip) == b.p;
        add("symmetry z" + std::to_string(j + 1) + " <-> 1/z" + std::to_string(j + 1) + " alone", ok,
            ok ? "invariant" : "not invariant for this potential", true);
    }

    for (int j = 0; j < d; ++j) {
        int e = Q / lat.period(j);
        bool ok = b.p.degree(j) == e && b.p.min_degree(j) == -e;
        std::string detail = "exponent range [" + std::to_string(b.p.min_degree(j)) + ", " +
                             std::to_string(b.p.degree(j)) + "], expected +-" + std::to_string(e);
        for (int s : {e, -e}) {
            LaurentPoly c = b.p.coefficient(j, s);
            bool unit = c.is_constant() && !c.is_zero() && c.constant_term().norm2() == 1;
            if (!unit) detail += "; coefficient of z" + std::to_string(j + 1) + "^" + std::to_string(s) + " is " + c.to_string();
            ok = ok && unit;
        }
        add("extreme exponents of z" + std::to_string(j + 1), ok, detail);
    }
    {
        LaurentPoly c = b.p.coefficient(d, Q);
        GaussianRational want(Q % 2 ? -1 : 1);
        bool ok = b.p.degree(d) == Q && c.is_constant() && c.constant_term() == want;
        add("lambda^Q coefficient (-1)^Q", ok, "coefficient " + c.to_string());
    }

    for (int j = 0; j < d; ++j) {
        bool ok = b.p1.is_polynomial() && b.p1.min_degree(j) == 0;
        add("z" + std::to_string(j + 1) + " does not divide P1", ok,
            "lowest power " + std::to_string(b.p1.min_degree(j)));
    }

    for (int j = 0; j < d; ++j) {
        bool ok = true;
        std::string bad;
        for (const auto& t : b.ptilde.terms()) {
            if (t.exp[uz(j)] % lat.period(j) != 0) {
                ok = false;
                bad = LaurentPoly::monomial(b.vars, t.exp, t.coef).to_string();
                break;
            }
        }
        add("mu-invariance of P~ in z" + std::to_string(j + 1), ok,
            ok ? "all exponents divisible by " + std::to_string(lat.period(j)) : "term " + bad);
    }
    return r;
}

CharPolyEvaluator::CharPolyEvaluator(const LaurentPoly& p) : d_(p.nvars() - 1) {
    for (const auto& t : p.terms()) {
        for (int j = 0; j <= d_; ++j) exps_.push_back(t.exp[uz(j)]);
        coef_.push_back(t.coef.to_complex());
    }
}

namespace {

constexpr std::complex<double> kTwoPiI(0.0, 2.0 * std::numbers::pi);

struct PowerTables {
    std::vector<std::vector<std::complex<double>>> tab;
    std::vector<int> lo;
    std::complex<double> at(int j, int e) const { return tab[uz(j)][uz(e - lo[uz(j)])]; }
};

PowerTables powers(std::span<const std::int32_t> exps, int stride, std::span<const std::complex<double>> base) {
    PowerTables pt;
    const int nv = static_cast<int>(base.size());
    pt.lo.assign(uz(nv), 0);
    std::vector<int> hi(uz(nv), 0);
    for (std::size_t t = 0; t < exps.size(); t += uz(stride)) {
        for (int j = 0; j < nv; ++j) {
            pt.lo[uz(j)] = std::min(pt.lo[uz(j)], exps[t + uz(j)]);
            hi[uz(j)] = std::max(hi[uz(j)], exps[t + uz(j)]);
        }
    }
    pt.tab.resize(uz(nv));
    for (int j = 0; j < nv; ++j) {
        auto& tb = pt.tab[uz(j)];
        tb.resize(uz(hi[uz(j)] - pt.lo[uz(j)] + 1));
        for (int e = pt.lo[uz(j)]; e <= hi[uz(j)]; ++e) tb[uz(e - pt.lo[uz(j)])] = std::pow(base[uz(j)], e);
    }
    return pt;
}

} // namespace

std::complex<double> CharPolyEvaluator::value(std::span<const std::complex<double>> k, std::complex<double> lambda) const {
    std::vector<std::complex<double>> base;
    for (int j = 0; j < d_; ++j) base.push_back(std::exp(kTwoPiI * k[uz(j)]));
    base.push_back(lambda);
    auto pt = powers(exps_, d_ + 1, base);
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < coef_.size(); ++t) {
        std::complex<double> m = coef_[t];
        for (int j = 0; j <= d_; ++j) m *= pt.at(j, exps_[t * uz(d_ + 1) + uz(j)]);
        acc += m;
    }
    return acc;
}

std::vector<std::complex<double>> CharPolyEvaluator::gradient(std::span<const std::complex<double>> k,
                                                              std::complex<double> lambda) const {
    std::vector<std::complex<double>> base;
    for (int j = 0; j < d_; ++j) base.push_back(std::exp(kTwoPiI * k[uz(j)]));
    base.push_back(lambda);
    auto pt = powers(exps_, d_ + 1, base);
    std::vector<std::complex<double>> g(uz(d_), 0.0);
    for (std::size_t t = 0; t < coef_.size(); ++t) {
        const std::int32_t* e = &exps_[t * uz(d_ + 1)];
        std::complex<double> m = coef_[t];
        for (int j = 0; j <= d_; ++j) m *= pt.at(j, e[j]);
        for (int j = 0; j < d_; ++j) g[uz(j)] += kTwoPiI * static_cast<double>(e[j]) * m;
    }
    return g;
}

std::vector<std::complex<double>> CharPolyEvaluator::hessian(std::span<const std::complex<double>> k,
                                                             std::complex<double> lambda) const {
    std::vector<std::complex<double>> base;
    for (int j = 0; j < d_; ++j) base.push_back(std::exp(kTwoPiI * k[uz(j)]));
    base.push_back(lambda);
    auto pt = powers(exps_, d_ + 1, base);
    std::vector<std::complex<double>> h(uz(d_ * d_), 0.0);
    for (std::size_t t = 0; t < coef_.size(); ++t) {
        const std::int32_t* e = &exps_[t * uz(d_ + 1)];
        std::complex<double> m = coef_[t];
        for (int j = 0; j <= d_; ++j) m *= pt.at(j, e[j]);
        for (int a = 0; a < d_; ++a) {
            for (int b = 0; b < d_; ++b) h[uz(a * d_ + b)] += kTwoPiI * kTwoPiI * static_cast<double>(e[a] * e[b]) * m;
        }
    }
    return h;
}

CharPolyEvaluator::Folded CharPolyEvaluator::fold_lambda(std::complex<double> lambda) const {
    std::map<std::vector<std::int32_t>, std::complex<double>> acc;
    for (std::size_t t = 0; t < coef_.size(); ++t) {
        const std::int32_t* e = &exps_[t * uz(d_ + 1)];
        std::vector<std::int32_t> key(e, e + d_);
        acc[key] += coef_[t] * std::pow(lambda, e[d_]);
    }
    Folded f;
    for (const auto& [key, c] : acc) {
        f.exps.insert(f.exps.end(), key.begin(), key.end());
        f.re.push_back(c.real());
        f.im.push_back(c.imag());
    }
    return f;
}

std::vector<std::complex<double>> CharPolyEvaluator::value_batch(std::span<const double> k, std::size_t count,
                                                                 double lambda) const {
    Folded f = fold_lambda(lambda);
    kernels::TorusPoly tp{d_, f.re.size(), f.exps.data(), f.re.data(), f.im.data()};
    std::vector<double> re(count), im(count);
    kernels::torus_eval(tp, k.data(), count, re.data(), im.data());
    std::vector<std::complex<double>> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = {re[i], im[i]};
    return out;
}

std::complex<double> evaluate_P(const CharPolyBundle& b, std::span<const std::complex<double>> k,
                                std::complex<double> lambda) {
    return CharPolyEvaluator(b.p).value(k, lambda);
}

std::vector<std::complex<double>> gradient_P(const CharPolyBundle& b, std::span<const std::complex<double>> k,
                                             std::complex<double> lambda) {
    return CharPolyEvaluator(b.p).gradient(k, lambda);
}

} // namespace fermi
