#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace fermi {

/// Exact element of Q(i): re + im*i with arbitrary precision rationals.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
    GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational ratio(long num, long den);

    /// Accepts "p", "p/q", "(p/q)+(r/s)i" and "(p/q)-(r/s)i".
    static GaussianRational parse(std::string_view text);
    /// Builds from a ("p/q", "r/s") pair of real and imaginary parts.
    static GaussianRational parse_pair(std::string_view re, std::string_view im);

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    GaussianRational conj() const { return {re_, -im_}; }
    /// |z|^2, exact.
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }
    GaussianRational inverse() const;

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// Canonical text: "p/q" for reals, "(p/q)+(r/s)i" otherwise.
    std::string to_string() const;

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

/// Parses a plain rational "p" or "p/q".
mpq_class parse_rational(std::string_view text);

GaussianRational pow(const GaussianRational& base, unsigned exponent);

} // namespace fermi
