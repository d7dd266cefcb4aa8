#pragma once

#include <string>

#include "freeprob/rational.hpp"

namespace freeprob {

/*
 * Rational interval arithmetic for certified inequality verdicts.
 *
 * Transcendental quantities (e, square roots) are enclosed between rational
 * endpoints; a comparison passes only when it holds against the pessimistic
 * endpoint, so a PASS verdict is a proof and an UNDECIDED verdict asks for
 * more precision.
 */
struct RationalInterval {
    Rational lo;
    Rational hi;

    RationalInterval() : lo(0), hi(0) {}
    RationalInterval(Rational point) : lo(point), hi(lo) {}
    RationalInterval(Rational l, Rational h);

    bool is_point() const { return cmp(lo, hi) == 0; }
    Rational width() const { return Rational(hi - lo); }

    RationalInterval operator+(const RationalInterval& o) const;
    RationalInterval operator*(const RationalInterval& o) const;

    /// Interval power with a non-negative integer exponent.
    RationalInterval pow(unsigned long e) const;
};

enum class Verdict { Pass, Fail, Undecided };

std::string verdict_str(Verdict v);

/// Certifies lhs <= rhs: Pass when lhs <= rhs.lo, Fail when lhs > rhs.hi.
Verdict certified_leq(const Rational& lhs, const RationalInterval& rhs);

/// Enclosure of Euler's number from the Taylor partial sum with a certified
/// remainder bound; `terms` >= 1 summands past the constant term.
RationalInterval e_enclosure(unsigned terms);

/// Enclosure of sqrt(x), x >= 0, with width <= 2^-precision_bits * scale;
/// collapses to a point when x is a perfect rational square.
RationalInterval sqrt_enclosure(const Rational& x, unsigned precision_bits);

/// Enclosure of |z| (a point interval when z is real or purely imaginary).
RationalInterval modulus_enclosure(const ExactScalar& z, unsigned precision_bits);

}  // namespace freeprob
