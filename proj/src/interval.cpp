#include "freeprob/interval.hpp"

#include <algorithm>

#include "freeprob/errors.hpp"

namespace freeprob {

RationalInterval::RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (cmp(lo, hi) > 0) throw DomainError("interval endpoints out of order");
}

RationalInterval RationalInterval::operator+(const RationalInterval& o) const {
    return {Rational(lo + o.lo), Rational(hi + o.hi)};
}

RationalInterval RationalInterval::operator*(const RationalInterval& o) const {
    Rational a(lo * o.lo), b(lo * o.hi), c(hi * o.lo), d(hi * o.hi);
    Rational mn = std::min({a, b, c, d}, [](const Rational& x, const Rational& y) { return cmp(x, y) < 0; });
    Rational mx = std::max({a, b, c, d}, [](const Rational& x, const Rational& y) { return cmp(x, y) < 0; });
    return {mn, mx};
}

RationalInterval RationalInterval::pow(unsigned long e) const {
    if (sgn(lo) < 0) throw DomainError("interval pow requires non-negative endpoints");
    RationalInterval out(Rational(1));
    RationalInterval base = *this;
    // Monotone on non-negative intervals, so endpoint powers suffice.
    out.lo = rational_pow(lo, static_cast<long>(e));
    out.hi = rational_pow(hi, static_cast<long>(e));
    return out;
}

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "undecided";
    }
}

Verdict certified_leq(const Rational& lhs, const RationalInterval& rhs) {
    if (cmp(lhs, rhs.lo) <= 0) return Verdict::Pass;
    if (cmp(lhs, rhs.hi) > 0) return Verdict::Fail;
    return Verdict::Undecided;
}

RationalInterval e_enclosure(unsigned terms) {
    if (terms < 2) terms = 2;
    Rational sum(1);
    BigInt fact(1);
    for (unsigned k = 1; k <= terms; ++k) {
        fact *= k;
        sum += Rational(BigInt(1), fact);
    }
    // Tail sum_{k>N} 1/k! < 1/(N! * N).
    Rational tail(BigInt(1), BigInt(fact * terms));
    return {sum, Rational(sum + tail)};
}

RationalInterval sqrt_enclosure(const Rational& x, unsigned precision_bits) {
    if (sgn(x) < 0) throw DomainError("sqrt of a negative rational");
    if (sgn(x) == 0) return RationalInterval(Rational(0));
    // sqrt(a/b) = sqrt(a*b)/b; bracket sqrt(a*b * 4^p) between integer roots.
    BigInt a = x.get_num(), b = x.get_den();
    BigInt scaled = a * b;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * precision_bits);
    BigInt root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t());
    BigInt denom = b;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), precision_bits);
    Rational lo(root, denom);
    lo.canonicalize();
    if (sgn(rem) == 0) return RationalInterval(lo);
    Rational hi(BigInt(root + 1), denom);
    hi.canonicalize();
    return {lo, hi};
}

RationalInterval modulus_enclosure(const ExactScalar& z, unsigned precision_bits) {
    if (z.is_real()) return RationalInterval(Rational(abs(z.re)));
    if (sgn(z.re) == 0) return RationalInterval(Rational(abs(z.im)));
    return sqrt_enclosure(z.abs_sq(), precision_bits);
}

}  // namespace freeprob
