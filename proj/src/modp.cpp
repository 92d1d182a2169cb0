#include "fermi/modp.hpp"

#include "fermi/error.hpp"

#include <algorithm>
#include <set>

namespace fermi {

namespace {

using u64 = std::uint64_t;
using Poly = std::vector<u64>;  // ascending, trimmed

struct Zp {
    u64 p;
    u64 add(u64 a, u64 b) const { return (a + b) % p; }
    u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
    u64 reduce(const mpz_class& z) const {
        mpz_class r = z % static_cast<unsigned long>(p);
        if (r < 0) r += static_cast<unsigned long>(p);
        return r.get_ui();
    }
};

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly rem(Poly a, const Poly& b, const Zp& F) {
    u64 linv = F.inv(b.back());
    while (deg(a) >= deg(b)) {
        u64 c = F.mul(a.back(), linv);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
        trim(a);
    }
    return a;
}

Poly quo(Poly a, const Poly& b, const Zp& F) {
    if (deg(a) < deg(b)) return {};
    Poly q(a.size() - b.size() + 1, 0);
    u64 linv = F.inv(b.back());
    while (deg(a) >= deg(b)) {
        u64 c = F.mul(a.back(), linv);
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
        trim(a);
    }
    trim(q);
    return q;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m, const Zp& F) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return rem(std::move(r), m, F);
}

Poly powmod(Poly base, u64 e, const Poly& m, const Zp& F) {
    Poly r{1};
    base = rem(std::move(base), m, F);
    while (e) {
        if (e & 1) r = mulmod(r, base, m, F);
        base = mulmod(base, base, m, F);
        e >>= 1;
    }
    return r;
}

Poly gcd(Poly a, Poly b, const Zp& F) {
    while (!b.empty()) {
        Poly r = rem(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        u64 linv = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, linv);
    }
    return a;
}

Poly derivative(const Poly& a, const Zp& F) {
    Poly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(F.mul(a[i], i % F.p));
    trim(d);
    return d;
}

Poly sub_x(Poly a, const Zp& F) {
    if (a.size() < 2) a.resize(2, 0);
    a[1] = F.sub(a[1], 1);
    trim(a);
    return a;
}

// x^{p^k} mod m by k Frobenius steps
Poly frobenius(const Poly& m, int k, const Zp& F) {
    Poly h{0, 1};
    for (int i = 0; i < k; ++i) h = powmod(h, F.p, m, F);
    return h;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

enum class Reduction { Ok, BadPrime, NotSquarefree };

Reduction reduce(std::span<const mpq_class> f, u64 p, Poly& out) {
    if (!is_prime(p) || p >= (1ULL << 62)) return Reduction::BadPrime;
    if (f.empty() || sgn(f.back()) == 0) return Reduction::BadPrime;
    Zp F{p};
    out.assign(f.size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (F.reduce(f[i].get_den()) == 0) return Reduction::BadPrime;
        out[i] = F.mul(F.reduce(f[i].get_num()), F.inv(F.reduce(f[i].get_den())));
    }
    if (out.back() == 0) return Reduction::BadPrime;
    if (out.size() > 1 && deg(gcd(out, derivative(out, F), F)) > 0) return Reduction::NotSquarefree;
    return Reduction::Ok;
}

Poly checked_reduce(std::span<const mpq_class> f, u64 p) {
    Poly r;
    switch (reduce(f, p, r)) {
    case Reduction::BadPrime:
        throw PreconditionError("prime " + std::to_string(p) +
                                " is unusable (not prime, denominator collision or degree drop); choose another");
    case Reduction::NotSquarefree:
        throw PreconditionError("reduction mod " + std::to_string(p) + " is not square-free; choose another prime");
    case Reduction::Ok:
        break;
    }
    return r;
}

std::vector<int> prime_divisors(int n) {
    std::vector<int> r;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            r.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) r.push_back(n);
    return r;
}

} // namespace

std::vector<mpq_class> univariate_coefficients(const LaurentPoly& p, int var) {
    for (int j = 0; j < p.nvars(); ++j) {
        if (j != var && p.depends_on(j)) throw PreconditionError("polynomial is not univariate in the requested variable");
    }
    if (p.min_degree(var) < 0) throw PreconditionError("negative power in a univariate polynomial");
    std::vector<mpq_class> c(static_cast<std::size_t>(p.degree(var)) + 1);
    for (const auto& t : p.terms()) {
        if (!t.coef.is_real()) throw PreconditionError("univariate tools need rational coefficients");
        c[static_cast<std::size_t>(t.exp[static_cast<std::size_t>(var)])] = t.coef.re();
    }
    return c;
}

bool good_prime(std::span<const mpq_class> f, std::uint64_t p) {
    Poly r;
    return reduce(f, p, r) == Reduction::Ok;
}

bool irreducible_mod_p(std::span<const mpq_class> f, std::uint64_t p) {
    Poly m = checked_reduce(f, p);
    Zp F{p};
    int n = deg(m);
    if (n <= 0) return false;
    if (n == 1) return true;
    if (!sub_x(frobenius(m, n, F), F).empty()) return false;
    for (int r : prime_divisors(n)) {
        Poly h = sub_x(frobenius(m, n / r, F), F);
        if (deg(gcd(m, h, F)) > 0) return false;
    }
    return true;
}

bool irreducible_mod_p(const LaurentPoly& f, int var, std::uint64_t p) {
    auto c = univariate_coefficients(f, var);
    return irreducible_mod_p(c, p);
}

std::vector<int> factor_degrees_mod_p(std::span<const mpq_class> f, std::uint64_t p) {
    Poly m = checked_reduce(f, p);
    Zp F{p};
    std::vector<int> out;
    Poly h{0, 1};
    for (int d = 1; 2 * d <= deg(m); ++d) {
        h = powmod(h, p, m, F);
        Poly g = gcd(m, sub_x(h, F), F);
        if (deg(g) > 0) {
            for (int i = 0; i < deg(g) / d; ++i) out.push_back(d);
            m = quo(m, g, F);
            h = rem(h, m, F);
        }
    }
    if (deg(m) > 0) out.push_back(deg(m));
    std::sort(out.begin(), out.end());
    return out;
}

bool is_rational_square(const mpq_class& x) {
    if (sgn(x) < 0) return false;
    return mpz_perfect_square_p(x.get_num_mpz_t()) != 0 && mpz_perfect_square_p(x.get_den_mpz_t()) != 0;
}

RationalIrreducibility rational_irreducibility(std::span<const mpq_class> f, int max_primes) {
    RationalIrreducibility out;
    int n = static_cast<int>(f.size()) - 1;
    if (n < 1 || sgn(f.back()) == 0) {
        out.method = "degree below 1";
        return out;
    }
    if (n == 1) {
        out.irreducible = true;
        out.method = "degree 1";
        return out;
    }
    if (n == 2) {
        mpq_class disc = f[1] * f[1] - 4 * f[2] * f[0];
        out.irreducible = !is_rational_square(disc);
        out.method = "quadratic discriminant " + disc.get_str();
        return out;
    }
    // degrees a proper factor could have, intersected over primes
    std::set<int> possible;
    for (int d = 1; d < n; ++d) possible.insert(d);
    int used = 0;
    for (u64 p = 101; used < max_primes && p < 200000; ++p) {
        if (!is_prime(p) || !good_prime(f, p)) continue;
        auto degs = factor_degrees_mod_p(f, p);
        ++used;
        out.primes.push_back(p);
        out.patterns.push_back(degs);
        std::vector<char> reach(static_cast<std::size_t>(n) + 1, 0);
        reach[0] = 1;
        for (int d : degs) {
            for (int s = n; s >= d; --s) {
                if (reach[static_cast<std::size_t>(s - d)]) reach[static_cast<std::size_t>(s)] = 1;
            }
        }
        for (auto it = possible.begin(); it != possible.end();) {
            if (!reach[static_cast<std::size_t>(*it)]) it = possible.erase(it);
            else ++it;
        }
        if (possible.empty()) {
            out.irreducible = true;
            out.method = "factor-degree patterns mod primes";
            return out;
        }
    }
    out.method = "factor-degree patterns inconclusive";
    return out;
}

} // namespace fermi
