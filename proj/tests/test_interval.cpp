#include <doctest.h>

#include "freeprob/errors.hpp"
#include "freeprob/interval.hpp"

using namespace freeprob;

TEST_CASE("interval arithmetic basics") {
    RationalInterval a(Rational(1, 2), Rational(3, 4));
    RationalInterval b(Rational(-1), Rational(2));
    auto sum = a + b;
    CHECK(sum.lo == Rational(-1, 2));
    CHECK(sum.hi == Rational(11, 4));
    auto prod = a * b;
    CHECK(prod.lo == Rational(-3, 4));
    CHECK(prod.hi == Rational(3, 2));
    CHECK_THROWS_AS(RationalInterval(Rational(1), Rational(0)), DomainError);
}

TEST_CASE("e enclosure brackets the usual decimal expansion") {
    auto e = e_enclosure(20);
    CHECK(cmp(e.lo, Rational(2718281828, 1000000000)) > 0);
    CHECK(cmp(e.hi, Rational(2718281829, 1000000000)) < 0);
    // widths shrink as terms grow
    CHECK(cmp(e_enclosure(40).width(), e.width()) < 0);
}

TEST_CASE("sqrt enclosures") {
    auto s2 = sqrt_enclosure(Rational(2), 64);
    CHECK(cmp(s2.lo * s2.lo, Rational(2)) <= 0);
    CHECK(cmp(s2.hi * s2.hi, Rational(2)) >= 0);
    CHECK(cmp(s2.width(), Rational(1, 1000000000)) < 0);

    // perfect squares collapse to points
    auto s94 = sqrt_enclosure(Rational(9, 4), 16);
    CHECK(s94.is_point());
    CHECK(s94.lo == Rational(3, 2));

    CHECK_THROWS_AS(sqrt_enclosure(Rational(-1), 16), DomainError);
}

TEST_CASE("modulus enclosures") {
    CHECK(modulus_enclosure(ExactScalar(Rational(-5, 3)), 32).is_point());
    CHECK(modulus_enclosure(ExactScalar(Rational(-5, 3)), 32).lo == Rational(5, 3));
    CHECK(modulus_enclosure(ExactScalar(Rational(0), Rational(-2)), 32).lo == Rational(2));
    auto m = modulus_enclosure(ExactScalar(Rational(3), Rational(4)), 32);
    CHECK(m.is_point());
    CHECK(m.lo == Rational(5));
    auto irr = modulus_enclosure(ExactScalar(Rational(1), Rational(1)), 64);
    CHECK_FALSE(irr.is_point());
    CHECK(cmp(irr.lo * irr.lo, Rational(2)) <= 0);
    CHECK(cmp(irr.hi * irr.hi, Rational(2)) >= 0);
}

TEST_CASE("certified comparisons") {
    RationalInterval rhs(Rational(2), Rational(3));
    CHECK(certified_leq(Rational(1), rhs) == Verdict::Pass);
    CHECK(certified_leq(Rational(5, 2), rhs) == Verdict::Undecided);
    CHECK(certified_leq(Rational(4), rhs) == Verdict::Fail);
}
