#include "fermi/laurent_poly.hpp"

#include "fermi/error.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <map>
#include <unordered_map>

namespace fermi {

namespace {

struct ExponentsHash {
    std::size_t operator()(const Exponents& e) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : e) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

Exponents add(const Exponents& a, const Exponents& b) {
    Exponents r{};
    for (int i = 0; i < kMaxVars; ++i) r[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
    return r;
}

Exponents sub(const Exponents& a, const Exponents& b) {
    Exponents r{};
    for (int i = 0; i < kMaxVars; ++i) r[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
    return r;
}

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

const char* kSuperDigits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
const char* kSubDigits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};

std::string superscript(int e) {
    std::string s;
    if (e < 0) {
        s += "⁻";
        e = -e;
    }
    for (char c : std::to_string(e)) s += kSuperDigits[c - '0'];
    return s;
}

std::string pretty_name(const std::string& name) {
    if (name == "lambda") return "λ";
    std::size_t split = name.size();
    while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
    if (split == name.size() || split == 0) return name;
    std::string s = name.substr(0, split);
    for (std::size_t i = split; i < name.size(); ++i) s += kSubDigits[name[i] - '0'];
    return s;
}

} // namespace

VarsPtr make_vars(std::vector<std::string> names) {
    if (names.size() > static_cast<std::size_t>(kMaxVars)) throw Error("too many polynomial variables");
    return std::make_shared<const VarNames>(std::move(names));
}

VarsPtr floquet_vars(int d) {
    std::vector<std::string> names;
    for (int j = 1; j <= d; ++j) names.push_back("z" + std::to_string(j));
    names.emplace_back("lambda");
    return make_vars(std::move(names));
}

bool same_vars(const VarsPtr& a, const VarsPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

LaurentPoly LaurentPoly::constant(VarsPtr vars, const GaussianRational& c) {
    LaurentPoly p(std::move(vars));
    if (!c.is_zero()) p.terms_.push_back({Exponents{}, c});
    return p;
}

LaurentPoly LaurentPoly::variable(VarsPtr vars, int var, int power) {
    Exponents e{};
    e[uz(var)] = power;
    return monomial(std::move(vars), e, GaussianRational(1));
}

LaurentPoly LaurentPoly::monomial(VarsPtr vars, const Exponents& exp, const GaussianRational& c) {
    LaurentPoly p(std::move(vars));
    if (!c.is_zero()) p.terms_.push_back({exp, c});
    return p;
}

LaurentPoly LaurentPoly::from_terms(VarsPtr vars, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
    LaurentPoly p(std::move(vars));
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().exp == t.exp) {
            p.terms_.back().coef += t.coef;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
    return p;
}

bool LaurentPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == Exponents{});
}

bool LaurentPoly::is_polynomial() const {
    for (const auto& t : terms_) {
        for (auto e : t.exp) {
            if (e < 0) return false;
        }
    }
    return true;
}

bool LaurentPoly::is_real() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coef.is_real(); });
}

bool LaurentPoly::depends_on(int var) const {
    return std::any_of(terms_.begin(), terms_.end(), [var](const Term& t) { return t.exp[uz(var)] != 0; });
}

GaussianRational LaurentPoly::constant_term() const {
    for (const auto& t : terms_) {
        if (t.exp == Exponents{}) return t.coef;
    }
    return {};
}

int LaurentPoly::degree(int var) const {
    if (terms_.empty()) return 0;
    int d = INT_MIN;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.exp[uz(var)]));
    return d;
}

int LaurentPoly::min_degree(int var) const {
    if (terms_.empty()) return 0;
    int d = INT_MAX;
    for (const auto& t : terms_) d = std::min(d, static_cast<int>(t.exp[uz(var)]));
    return d;
}

int LaurentPoly::weighted_degree(std::span<const int> weights) const {
    if (terms_.empty()) return 0;
    int best = INT_MIN;
    for (const auto& t : terms_) {
        int s = 0;
        for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * t.exp[j];
        best = std::max(best, s);
    }
    return best;
}

int LaurentPoly::total_degree() const {
    std::vector<int> w(uz(nvars()), 1);
    return weighted_degree(w);
}

Exponents LaurentPoly::shift() const {
    Exponents s{};
    for (int j = 0; j < nvars(); ++j) s[uz(j)] = min_degree(j);
    return s;
}

LaurentPoly LaurentPoly::core() const {
    auto s = shift();
    Exponents neg{};
    for (int j = 0; j < kMaxVars; ++j) neg[uz(j)] = -s[uz(j)];
    return mul_monomial(neg);
}

void LaurentPoly::check_compatible(const LaurentPoly& o) const {
    if (!same_vars(vars_, o.vars_)) throw Error("polynomial operands live in different variable sets");
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (!vars_) vars_ = o.vars_;
    check_compatible(o);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].exp < o.terms_[j].exp)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || o.terms_[j].exp < terms_[i].exp) {
            out.push_back(o.terms_[j++]);
        } else {
            Term t = std::move(terms_[i++]);
            t.coef += o.terms_[j++].coef;
            if (!t.coef.is_zero()) out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const GaussianRational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    if (c.is_one()) return *this;
    for (auto& t : terms_) t.coef *= c;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_compatible(b);
    LaurentPoly r(a.vars_);
    if (a.is_zero() || b.is_zero()) return r;
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
        const auto& mono = a.terms_.size() == 1 ? a : b;
        const auto& other = a.terms_.size() == 1 ? b : a;
        r.terms_.reserve(other.terms_.size());
        for (const auto& t : other.terms_) r.terms_.push_back({add(t.exp, mono.terms_[0].exp), t.coef * mono.terms_[0].coef});
        return r;
    }
    std::unordered_map<Exponents, GaussianRational, ExponentsHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    GaussianRational prod;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            prod = x.coef;
            prod *= y.coef;
            auto [it, inserted] = acc.try_emplace(add(x.exp, y.exp), prod);
            if (!inserted) it->second += prod;
        }
    }
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc) {
        if (!c.is_zero()) r.terms_.push_back({e, std::move(c)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(), [](const auto& s, const auto& t) { return s.exp < t.exp; });
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    *this = *this * o;
    return *this;
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
    LaurentPoly result = constant(vars_, GaussianRational(1));
    LaurentPoly base = *this;
    while (n > 0) {
        if (n & 1U) result *= base;
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return result;
}

LaurentPoly LaurentPoly::mul_monomial(const Exponents& exp) const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.exp = add(t.exp, exp);
    return r;
}

LaurentPoly LaurentPoly::derivative(int var) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        int e = t.exp[uz(var)];
        if (e == 0) continue;
        Term d = t;
        d.exp[uz(var)] = e - 1;
        d.coef *= GaussianRational(static_cast<long>(e));
        out.push_back(std::move(d));
    }
    // decrementing one coordinate preserves lex order among survivors
    LaurentPoly r(vars_);
    r.terms_ = std::move(out);
    return r;
}

LaurentPoly LaurentPoly::substitute(int var, const LaurentPoly& value) const {
    check_compatible(value);
    int lo = min_degree(var);
    int hi = degree(var);
    if (is_zero()) return *this;
    if (lo < 0 && !value.is_monomial()) {
        throw Error("substituting a non-monomial into negative powers of " + (*vars_)[uz(var)]);
    }
    // cache powers of value
    std::map<int, LaurentPoly> powers;
    auto power_of = [&](int e) -> const LaurentPoly& {
        auto it = powers.find(e);
        if (it != powers.end()) return it->second;
        LaurentPoly p;
        if (e >= 0) {
            p = value.pow(static_cast<unsigned>(e));
        } else {
            const auto& m = value.terms_[0];
            Exponents inv{};
            for (int j = 0; j < kMaxVars; ++j) inv[uz(j)] = -m.exp[uz(j)] * (-e);
            p = monomial(vars_, inv, ::fermi::pow(m.coef.inverse(), static_cast<unsigned>(-e)));
        }
        return powers.emplace(e, std::move(p)).first->second;
    };
    (void)hi;
    std::map<int, std::vector<Term>> buckets;
    for (const auto& t : terms_) {
        Term s = t;
        s.exp[uz(var)] = 0;
        buckets[t.exp[uz(var)]].push_back(std::move(s));
    }
    LaurentPoly result(vars_);
    for (auto& [e, ts] : buckets) {
        auto part = from_terms(vars_, std::move(ts));
        result += part * power_of(e);
    }
    return result;
}

LaurentPoly LaurentPoly::specialize(int var, const GaussianRational& value) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    std::map<int, GaussianRational> powers;
    for (const auto& t : terms_) {
        int e = t.exp[uz(var)];
        auto it = powers.find(e);
        if (it == powers.end()) {
            GaussianRational v = e >= 0 ? ::fermi::pow(value, static_cast<unsigned>(e))
                                        : ::fermi::pow(value.inverse(), static_cast<unsigned>(-e));
            it = powers.emplace(e, v).first;
        }
        Term s = t;
        s.exp[uz(var)] = 0;
        s.coef *= it->second;
        out.push_back(std::move(s));
    }
    return from_terms(vars_, std::move(out));
}

LaurentPoly LaurentPoly::scale_exponents(std::span<const int> factors) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) {
        for (std::size_t j = 0; j < factors.size(); ++j) t.exp[j] *= factors[j];
    }
    return from_terms(vars_, std::move(out));
}

LaurentPoly LaurentPoly::coefficient(int var, int power) const {
    LaurentPoly r(vars_);
    for (const auto& t : terms_) {
        if (t.exp[uz(var)] == power) {
            Term s = t;
            s.exp[uz(var)] = 0;
            r.terms_.push_back(std::move(s));
        }
    }
    std::sort(r.terms_.begin(), r.terms_.end(), [](const auto& s, const auto& u) { return s.exp < u.exp; });
    return r;
}

std::vector<LaurentPoly> LaurentPoly::coefficients_in(int var) const {
    if (min_degree(var) < 0) throw Error("coefficients_in needs non-negative powers of " + (*vars_)[uz(var)]);
    std::vector<std::vector<Term>> buckets(uz(degree(var) + 1));
    for (const auto& t : terms_) {
        Term s = t;
        s.exp[uz(var)] = 0;
        buckets[uz(t.exp[uz(var)])].push_back(std::move(s));
    }
    std::vector<LaurentPoly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) {
        LaurentPoly c(vars_);
        c.terms_ = std::move(b);  // relative order preserved
        out.push_back(std::move(c));
    }
    return out;
}

LaurentPoly LaurentPoly::remap(VarsPtr new_vars, std::span<const int> mapping) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term s;
        s.coef = t.coef;
        for (int j = 0; j < nvars(); ++j) {
            if (t.exp[uz(j)] == 0) continue;
            if (mapping[uz(j)] < 0) throw Error("remap drops variable " + (*vars_)[uz(j)] + " that is in use");
            s.exp[uz(mapping[uz(j)])] += t.exp[uz(j)];
        }
        out.push_back(std::move(s));
    }
    return from_terms(std::move(new_vars), std::move(out));
}

GaussianRational LaurentPoly::evaluate(std::span<const GaussianRational> point) const {
    GaussianRational acc;
    for (const auto& t : terms_) {
        GaussianRational v = t.coef;
        for (int j = 0; j < nvars(); ++j) {
            int e = t.exp[uz(j)];
            if (e > 0) v *= ::fermi::pow(point[uz(j)], static_cast<unsigned>(e));
            if (e < 0) v *= ::fermi::pow(point[uz(j)].inverse(), static_cast<unsigned>(-e));
        }
        acc += v;
    }
    return acc;
}

std::complex<double> LaurentPoly::evaluate(std::span<const std::complex<double>> point) const {
    std::complex<double> acc = 0.0;
    for (const auto& t : terms_) {
        std::complex<double> v = t.coef.to_complex();
        for (int j = 0; j < nvars(); ++j) {
            int e = t.exp[uz(j)];
            if (e != 0) v *= std::pow(point[uz(j)], e);
        }
        acc += v;
    }
    return acc;
}

namespace {

std::string monomial_text(const VarNames& names, const Exponents& exp) {
    std::string s;
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (exp[j] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[j];
        if (exp[j] != 1) s += "^" + std::to_string(exp[j]);
    }
    return s;
}

} // namespace

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
        std::string mono = monomial_text(*vars_, t.exp);
        GaussianRational c = t.coef;
        bool negative = c.is_real() && sgn(c.re()) < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        if (mono.empty()) {
            out += c.to_string();
        } else if (c.is_one()) {
            out += mono;
        } else {
            out += c.to_string() + "*" + mono;
        }
    }
    return out;
}

std::string LaurentPoly::pretty() const {
    if (terms_.empty()) return "0";
    // display order: non-z variables first, then z_j; positive powers before negative before absent
    std::vector<int> order;
    for (int j = 0; j < nvars(); ++j) {
        if ((*vars_)[uz(j)].front() != 'z') order.push_back(j);
    }
    for (int j = 0; j < nvars(); ++j) {
        if ((*vars_)[uz(j)].front() == 'z') order.push_back(j);
    }
    auto key = [&](const Term& t) {
        std::vector<std::pair<int, int>> k;
        for (int j : order) {
            int e = t.exp[uz(j)];
            if (e > 0) k.emplace_back(0, -e);
            else if (e < 0) k.emplace_back(1, -e);
            else k.emplace_back(2, 0);
        }
        return k;
    };
    std::vector<const Term*> sorted;
    for (const auto& t : terms_) sorted.push_back(&t);
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Term* a, const Term* b) { return key(*a) < key(*b); });
    std::string out;
    bool first = true;
    for (const Term* t : sorted) {
        std::string mono;
        for (int j : order) {
            int e = t->exp[uz(j)];
            if (e == 0) continue;
            mono += pretty_name((*vars_)[uz(j)]);
            if (e != 1) mono += superscript(e);
        }
        GaussianRational c = t->coef;
        bool negative = c.is_real() && sgn(c.re()) < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) out += "−";
        } else {
            out += negative ? " − " : " + ";
        }
        first = false;
        if (mono.empty()) out += c.to_string();
        else if (c.is_one()) out += mono;
        else out += c.to_string() + "·" + mono;
    }
    return out;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    if (!a.terms_.empty() && !same_vars(a.vars_, b.vars_)) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coef != b.terms_[i].coef) return false;
    }
    return true;
}

std::optional<LaurentPoly> try_divide(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw Error("division by the zero polynomial");
    if (a.is_zero()) return LaurentPoly(a.vars());
    if (!same_vars(a.vars(), b.vars())) throw Error("polynomial operands live in different variable sets");
    const int n = a.nvars();
    if (b.is_monomial()) {
        const auto& m = b.terms()[0];
        Exponents neg{};
        for (int j = 0; j < kMaxVars; ++j) neg[uz(j)] = -m.exp[uz(j)];
        return a.mul_monomial(neg) * m.coef.inverse();
    }
    // quotient exponents are confined to [min_a - min_b, max_a - max_b] per variable
    Exponents qlo{};
    Exponents qhi{};
    for (int j = 0; j < n; ++j) {
        qlo[uz(j)] = a.min_degree(j) - b.min_degree(j);
        qhi[uz(j)] = a.degree(j) - b.degree(j);
        if (qlo[uz(j)] > qhi[uz(j)]) return std::nullopt;
    }
    std::map<Exponents, GaussianRational> rem;
    for (const auto& t : a.terms()) rem.emplace(t.exp, t.coef);
    const auto& blead = b.leading_term();
    GaussianRational binv = blead.coef.inverse();
    std::vector<LaurentPoly::Term> quotient;
    while (!rem.empty()) {
        auto it = std::prev(rem.end());
        Exponents qe = sub(it->first, blead.exp);
        for (int j = 0; j < n; ++j) {
            if (qe[uz(j)] < qlo[uz(j)] || qe[uz(j)] > qhi[uz(j)]) return std::nullopt;
        }
        GaussianRational qc = it->second * binv;
        for (const auto& t : b.terms()) {
            Exponents e = add(t.exp, qe);
            GaussianRational c = t.coef * qc;
            auto [pos, inserted] = rem.try_emplace(e, -c);
            if (!inserted) {
                pos->second -= c;
                if (pos->second.is_zero()) rem.erase(pos);
            }
        }
        quotient.push_back({qe, std::move(qc)});
    }
    return LaurentPoly::from_terms(a.vars(), std::move(quotient));
}

LaurentPoly exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
    auto q = try_divide(a, b);
    if (!q) throw InternalCheckError("inexact polynomial division");
    return *std::move(q);
}

LaurentPoly pushforward(const LaurentPoly& p, std::span<const int> exponents) { return p.scale_exponents(exponents); }

LaurentPoly exponent_division(const LaurentPoly& p, std::span<const int> divisors) {
    std::vector<LaurentPoly::Term> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
        LaurentPoly::Term s = t;
        for (std::size_t j = 0; j < divisors.size(); ++j) {
            if (divisors[j] == 0 || t.exp[j] % divisors[j] != 0) {
                throw Error("exponent of " + (*p.vars())[j] + " in term " +
                            LaurentPoly::monomial(p.vars(), t.exp, t.coef).to_string() + " is not divisible by " +
                            std::to_string(divisors[j]));
            }
            s.exp[j] = t.exp[j] / divisors[j];
        }
        out.push_back(std::move(s));
    }
    return LaurentPoly::from_terms(p.vars(), std::move(out));
}

LaurentPoly weighted_lowest_component(const LaurentPoly& p, std::span<const int> signs) {
    if (p.is_zero()) return p;
    int best = INT_MAX;
    for (const auto& t : p.terms()) {
        int s = 0;
        for (std::size_t j = 0; j < signs.size(); ++j) {
            int e = signs[j] * t.exp[j];
            if (signs[j] != 0 && e < 0) {
                throw Error("not a polynomial in the relabeled variables (term " +
                            LaurentPoly::monomial(p.vars(), t.exp, t.coef).to_string() + ")");
            }
            s += e;
        }
        best = std::min(best, s);
    }
    std::vector<LaurentPoly::Term> out;
    for (const auto& t : p.terms()) {
        int s = 0;
        for (std::size_t j = 0; j < signs.size(); ++j) s += signs[j] * t.exp[j];
        if (s == best) out.push_back(t);
    }
    return LaurentPoly::from_terms(p.vars(), std::move(out));
}

} // namespace fermi

namespace fermi {

namespace {

class PolyReader {
public:
    PolyReader(VarsPtr vars, std::string_view text) : vars_(std::move(vars)), s_(text) {}

    LaurentPoly read() {
        std::vector<LaurentPoly::Term> terms;
        skip();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        for (;;) {
            auto t = term();
            if (negative) t.coef = -t.coef;
            terms.push_back(std::move(t));
            skip();
            if (pos_ >= s_.size()) break;
            char c = s_[pos_];
            if (c != '+' && c != '-') fail("expected + or -");
            negative = c == '-';
            ++pos_;
        }
        return LaurentPoly::from_terms(vars_, std::move(terms));
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ConstructionError("cannot parse polynomial '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " +
                                what);
    }

    LaurentPoly::Term term() {
        LaurentPoly::Term t;
        t.coef = GaussianRational(1);
        bool have_factor = false;
        for (;;) {
            char c = peek();
            if (c == '(') {
                std::size_t close = s_.find(")i", pos_);
                if (close == std::string_view::npos) fail("unterminated complex coefficient");
                t.coef *= GaussianRational::parse(s_.substr(pos_, close + 2 - pos_));
                pos_ = close + 2;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t b = pos_;
                while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
                t.coef *= GaussianRational(parse_rational(s_.substr(b, pos_ - b)));
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t b = pos_;
                while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                std::string name(s_.substr(b, pos_ - b));
                auto it = std::find(vars_->begin(), vars_->end(), name);
                if (it == vars_->end()) fail("unknown variable " + name);
                int e = 1;
                if (peek() == '^') {
                    ++pos_;
                    skip();
                    std::size_t eb = pos_;
                    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                    if (pos_ == eb) fail("missing exponent");
                    e = std::stoi(std::string(s_.substr(eb, pos_ - eb)));
                }
                t.exp[uz(static_cast<int>(it - vars_->begin()))] += e;
            } else {
                fail("expected a factor");
            }
            have_factor = true;
            if (peek() != '*') break;
            ++pos_;
        }
        if (!have_factor) fail("empty term");
        return t;
    }

    VarsPtr vars_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

LaurentPoly parse_poly(VarsPtr vars, std::string_view text) { return PolyReader(std::move(vars), text).read(); }

} // namespace fermi
