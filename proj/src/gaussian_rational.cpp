#include "fermi/gaussian_rational.hpp"

#include "fermi/error.hpp"

#include <cctype>

namespace fermi {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string strip_plus(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return std::string(s);
}

} // namespace

mpq_class parse_rational(std::string_view text) {
    auto s = trim(text);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
    auto slash = s.find('/');
    std::string_view num = trim(s.substr(0, slash));
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : trim(s.substr(slash + 1));
    if (!valid_integer(num) || !valid_integer(den)) {
        throw ConstructionError("not a rational number: '" + std::string(text) + "'");
    }
    mpz_class n(strip_plus(num), 10);
    mpz_class d(strip_plus(den), 10);
    if (d == 0) throw ConstructionError("zero denominator in '" + std::string(text) + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

GaussianRational GaussianRational::ratio(long num, long den) {
    if (den == 0) throw ConstructionError("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return GaussianRational(q);
}

GaussianRational GaussianRational::parse(std::string_view text) {
    auto s = trim(text);
    if (s.empty() || s.back() != 'i') return GaussianRational(parse_rational(s));
    // "(p/q)+(r/s)i" or "(p/q)-(r/s)i"
    s.remove_suffix(1);
    auto close = s.find(')');
    if (s.empty() || s.front() != '(' || close == std::string_view::npos || close + 2 > s.size()) {
        throw ConstructionError("not a Gaussian rational: '" + std::string(text) + "'");
    }
    auto re = parse_rational(s.substr(0, close + 1));
    char sign = s[close + 1];
    if (sign != '+' && sign != '-') throw ConstructionError("not a Gaussian rational: '" + std::string(text) + "'");
    auto im = parse_rational(s.substr(close + 2));
    if (sign == '-') im = -im;
    return {re, im};
}

GaussianRational GaussianRational::parse_pair(std::string_view re, std::string_view im) {
    return {parse_rational(re), parse_rational(im)};
}

GaussianRational GaussianRational::inverse() const {
    if (is_zero()) throw Error("division by zero Gaussian rational");
    if (is_real()) return GaussianRational(mpq_class(1 / re_));
    mpq_class n = norm2();
    return {re_ / n, -im_ / n};
}

std::string GaussianRational::to_string() const {
    if (is_real()) return re_.get_str();
    std::string out = "(" + re_.get_str() + ")";
    if (sgn(im_) < 0) {
        out += "-(" + mpq_class(-im_).get_str() + ")i";
    } else {
        out += "+(" + im_.get_str() + ")i";
    }
    return out;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    if (o.is_real()) {
        if (sgn(o.re_) == 0) throw Error("division by zero Gaussian rational");
        re_ /= o.re_;
        if (sgn(im_) != 0) im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

GaussianRational pow(const GaussianRational& base, unsigned exponent) {
    GaussianRational result(1);
    GaussianRational b = base;
    while (exponent > 0) {
        if (exponent & 1U) result *= b;
        exponent >>= 1U;
        if (exponent > 0) b *= b;
    }
    return result;
}

} // namespace fermi
