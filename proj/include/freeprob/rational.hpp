#pragma once

#include <gmpxx.h>

#include <string>

namespace freeprob {

// All scalar arithmetic in this library is exact. Integers and rationals are
// GMP-backed; complex values are pairs of rationals.
using BigInt = mpz_class;
using Rational = mpq_class;

/// binom(n, k) as an exact big integer; 0 when k > n.
BigInt binomial(unsigned long n, unsigned long k);

/// Parses "p/q" or "p" (optional sign); throws DomainError on garbage or q = 0.
Rational parse_rational(const std::string& s);

/// Canonical form: "p" when the denominator is 1, else "p/q", q > 0.
std::string rational_str(const Rational& r);

/// A complex number with exact rational real and imaginary parts.
struct ExactScalar {
    Rational re;
    Rational im;

    ExactScalar() : re(0), im(0) {}
    ExactScalar(Rational real) : re(std::move(real)), im(0) {}
    ExactScalar(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
    ExactScalar(long real) : re(real), im(0) {}

    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar one() { return ExactScalar(Rational(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    ExactScalar conj() const { return {re, Rational(-im)}; }

    /// |z|^2 = re^2 + im^2, exact.
    Rational abs_sq() const { return Rational(re * re + im * im); }

    ExactScalar& operator+=(const ExactScalar& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    ExactScalar& operator*=(const ExactScalar& o) {
        Rational r(re * o.re - im * o.im);
        Rational i(re * o.im + im * o.re);
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator-(const ExactScalar& a) {
        return {Rational(-a.re), Rational(-a.im)};
    }
    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return cmp(a.re, b.re) == 0 && cmp(a.im, b.im) == 0;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
};

/// "p/q" for real values, "p/q+r/si" / "p/q-r/si" otherwise.
std::string scalar_str(const ExactScalar& z);

/// r^e for integer e (negative allowed when r != 0).
Rational rational_pow(const Rational& r, long e);

}  // namespace freeprob
