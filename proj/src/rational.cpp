#include "freeprob/rational.hpp"

#include "freeprob/errors.hpp"

namespace freeprob {

BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw DomainError("empty rational literal");
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw DomainError("malformed rational literal: " + s);
    if (sgn(Rational(r.get_den())) == 0)
        throw DomainError("zero denominator in rational literal: " + s);
    r.canonicalize();
    return r;
}

std::string rational_str(const Rational& r) {
    return r.get_str();
}

std::string scalar_str(const ExactScalar& z) {
    if (z.is_real()) return rational_str(z.re);
    std::string s = rational_str(z.re);
    if (sgn(z.im) >= 0) s += "+";
    s += rational_str(z.im);
    s += "i";
    return s;
}

Rational rational_pow(const Rational& r, long e) {
    if (e == 0) return Rational(1);
    if (sgn(r) == 0) {
        if (e < 0) throw DomainError("zero to a negative power");
        return Rational(0);
    }
    Rational base = e < 0 ? Rational(1 / r) : r;
    unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), n);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), n);
    // base is canonical, so num^n / den^n already is.
    return out;
}

}  // namespace freeprob
