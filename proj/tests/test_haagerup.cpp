#include <doctest.h>

#include "freeprob/errors.hpp"
#include "freeprob/haagerup.hpp"

#include "test_util.hpp"

using namespace freeprob;

namespace {

FreeFamily circular_family(int count) {
    FreeFamily f;
    for (int i = 1; i <= count; ++i) f.with("x" + std::to_string(i), CumulantSpec::circular());
    return f;
}

FreeFamily haar_family(int count) {
    FreeFamily f;
    for (int i = 1; i <= count; ++i) f.with("x" + std::to_string(i), CumulantSpec::haar_unitary());
    return f;
}

HomPolynomial monomial(const std::vector<Label>& idx, ExactScalar a = ExactScalar::one()) {
    HomPolynomial T(static_cast<int>(idx.size()));
    T.set(idx, std::move(a));
    return T;
}

HomPolynomial random_poly(testutil::RationalSampler& sampler, const std::vector<Label>& alphabet,
                          int d, int support, bool complex_coeffs = true) {
    HomPolynomial T(d);
    for (int s = 0; s < support; ++s) {
        MultiIndex idx;
        for (int j = 0; j < d; ++j)
            idx.push_back(alphabet[static_cast<size_t>(
                sampler.uniform(0, static_cast<int>(alphabet.size()) - 1))]);
        T.set(std::move(idx), complex_coeffs ? sampler.complex_scalar(4, 3)
                                             : ExactScalar(sampler.rational(4, 3)));
    }
    return T;
}

}  // namespace

TEST_CASE("l2 norms") {
    auto fam = circular_family(2);
    CHECK(l2_norm_sq(monomial({"x1"}), fam) == ExactScalar::one());

    HomPolynomial T(2);
    T.set({"x1", "x2"}, ExactScalar::one());
    T.set({"x2", "x1"}, ExactScalar::one());
    CHECK(l2_norm_sq(T, fam) == ExactScalar(Rational(2)));
    // cross-check against the full expansion of phi(T T*)
    CHECK(lp_norm_2m_pow(T, fam, 1) == ExactScalar(Rational(2)));

    ExactScalar a(Rational(3, 2), Rational(-1, 3));
    CHECK(l2_norm_sq(monomial({"x1", "x1"}, a), fam) == ExactScalar(a.abs_sq()));

    FreeFamily mixed;
    mixed.with("x1", CumulantSpec::circular()).with("x2", CumulantSpec::haar_unitary());
    CHECK_THROWS_AS(l2_norm_sq(T, mixed), DomainError);
}

TEST_CASE("2m-norm powers of named monomials") {
    auto c = circular_family(1);
    CHECK(lp_norm_2m_pow(monomial({"x1"}), c, 1) == ExactScalar::one());
    CHECK(lp_norm_2m_pow(monomial({"x1"}), c, 2) == ExactScalar(Rational(2)));
    CHECK(lp_norm_2m_pow(monomial({"x1", "x1"}), c, 2) == ExactScalar(Rational(3)));

    auto z = haar_family(1);
    for (int d = 1; d <= 3; ++d) {
        for (int m = 1; 2 * d * m <= 12 && m <= 3; ++m) {
            CHECK(lp_norm_2m_pow(monomial(MultiIndex(static_cast<size_t>(d), "x1")), z, m) ==
                  ExactScalar::one());
        }
    }
}

TEST_CASE("circular power moments are Fuss-Catalan counts") {
    auto c = circular_family(1);
    Caps caps;
    caps.m_cap = 6;
    for (int d = 1; d <= 3; ++d)
        for (int m = 1; 2 * d * m <= 12; ++m)
            CHECK(lp_norm_2m_pow(monomial(MultiIndex(static_cast<size_t>(d), "x1")), c, m, caps) ==
                  ExactScalar(Rational(count_chains(m, d))));
}

TEST_CASE("scaling covariance") {
    testutil::RationalSampler sampler(808);
    auto fam = circular_family(2);
    auto T = random_poly(sampler, {"x1", "x2"}, 2, 3);
    ExactScalar lambda(Rational(2, 3), Rational(1, 2));
    for (int m = 1; m <= 2; ++m) {
        ExactScalar lhs = lp_norm_2m_pow(T.scaled(lambda), fam, m);
        ExactScalar rhs = ExactScalar(rational_pow(lambda.abs_sq(), m)) * lp_norm_2m_pow(T, fam, m);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("norm ladder monotonicity") {
    testutil::RationalSampler sampler(717);
    auto fam = haar_family(2);
    MomentCache cache;
    for (int trial = 0; trial < 5; ++trial) {
        auto T = random_poly(sampler, {"x1", "x2"}, 2, 3);
        Rational v1 = lp_norm_2m_pow(T, fam, 1, Caps::defaults(), &cache).re;
        Rational v2 = lp_norm_2m_pow(T, fam, 2, Caps::defaults(), &cache).re;
        Rational v3 = lp_norm_2m_pow(T, fam, 3, Caps::defaults(), &cache).re;
        CHECK(cmp(rational_pow(v1, 2), v2) <= 0);
        CHECK(cmp(rational_pow(v2, 3), rational_pow(v3, 2)) <= 0);
    }
}

TEST_CASE("monomials are orthogonal") {
    auto fam = circular_family(2);
    MomentCache cache;
    std::vector<Label> alphabet = {"x1", "x2"};
    for (int d = 1; d <= 3; ++d) {
        // all pairs of multi-indices of degree d over two labels
        std::vector<MultiIndex> all;
        std::vector<int> pick(static_cast<size_t>(d), 0);
        for (;;) {
            MultiIndex idx;
            for (int j = 0; j < d; ++j) idx.push_back(alphabet[static_cast<size_t>(pick[static_cast<size_t>(j)])]);
            all.push_back(idx);
            int j = d - 1;
            while (j >= 0 && pick[static_cast<size_t>(j)] == 1) pick[static_cast<size_t>(j--)] = 0;
            if (j < 0) break;
            pick[static_cast<size_t>(j)] += 1;
        }
        for (const auto& i : all) {
            for (const auto& j : all) {
                StarWord w;
                for (const auto& l : i) w.append(l, Exp::One);
                for (auto it = j.rbegin(); it != j.rend(); ++it) w.append(*it, Exp::Star);
                ExactScalar val = moment(fam, w, Caps::defaults(), &cache);
                CHECK(val == (i == j ? ExactScalar::one() : ExactScalar::zero()));
            }
        }
    }
    // unequal degrees
    StarWord w = StarWord::parse("x1 x1*");
    w.append("x2", Exp::Star);
    CHECK(moment(fam, w) == ExactScalar::zero());
}

TEST_CASE("dual expansion routes agree on random instances") {
    testutil::RationalSampler sampler(6021);
    for (bool use_haar : {false, true}) {
        for (int d = 1; d <= 2; ++d) {
            for (int m = 1; m <= 2; ++m) {
                auto fam = use_haar ? haar_family(3) : circular_family(3);
                MomentCache cache;
                for (int trial = 0; trial < 5; ++trial) {
                    auto T = random_poly(sampler, {"x1", "x2", "x3"}, d, 4);
                    // lp_norm_2m_pow throws InconsistencyError if routes differ
                    ExactScalar v = lp_norm_2m_pow(T, fam, m, Caps::defaults(), &cache);
                    CHECK(v.is_real());
                    CHECK(sgn(v.re) >= 0);
                }
            }
        }
    }
}

TEST_CASE("graded expansion matches the homogeneous one") {
    testutil::RationalSampler sampler(33);
    auto fam = circular_family(2);
    auto T = random_poly(sampler, {"x1", "x2"}, 2, 3);
    GradedPolynomial g;
    g.emplace(2, T);
    for (int m = 1; m <= 2; ++m)
        CHECK(lp_norm_2m_pow_graded(g, fam, m) == lp_norm_2m_pow(T, fam, m));
}

TEST_CASE("strong Haagerup certificates") {
    auto c = circular_family(1);
    auto cert = shi_certify(monomial({"x1"}), c, 1);
    CHECK(cert.verdict == Verdict::Pass);
    CHECK(cert.lhs_pow == Rational(1));
    CHECK(cert.mode == "tuple");

    // T = sum of all degree-2 monomials over two circular labels
    auto fam2 = circular_family(2);
    HomPolynomial sum2(2);
    for (const Label& a : {"x1", "x2"})
        for (const Label& b : {"x1", "x2"}) sum2.set({a, b}, ExactScalar::one());
    auto cert2 = shi_certify(sum2, fam2, 2);
    CHECK(cert2.verdict == Verdict::Pass);

    FreeFamily semi;
    semi.with("x1", CumulantSpec::semicircular()).with("x2", CumulantSpec::semicircular());
    HomPolynomial bad(2);
    bad.set({"x1", "x2"}, ExactScalar::one());
    CHECK_THROWS_AS(shi_certify(bad, semi, 1), DomainError);
}

TEST_CASE("array certificates") {
    FreeFamily fam;
    for (int r = 1; r <= 2; ++r)
        for (int cidx = 1; cidx <= 2; ++cidx)
            fam.with(ArrayPolynomial::pair_label(r, cidx), CumulantSpec::circular());
    ArrayPolynomial T(2, 2);
    T.set({1, 2}, {2, 1}, ExactScalar::one());
    T.set({1, 1}, {2, 2}, ExactScalar(Rational(1, 2)));
    auto cert = shi_certify(T, fam, 2);
    CHECK(cert.verdict == Verdict::Pass);
    CHECK(cert.mode == "array");

    // tuple-mode expansion of the converted polynomial is identical to the
    // same polynomial written over a renamed single-letter alphabet
    auto hom = T.to_hom();
    std::map<Label, Label> rename;
    FreeFamily plain_fam;
    char next = 'a';
    for (const auto& [idx, a] : hom.support())
        for (const Label& l : idx)
            if (!rename.count(l)) {
                rename[l] = std::string(1, next++);
                plain_fam.with(rename[l], CumulantSpec::circular());
            }
    HomPolynomial renamed(hom.degree());
    for (const auto& [idx, a] : hom.support()) {
        MultiIndex ridx;
        for (const Label& l : idx) ridx.push_back(rename[l]);
        renamed.set(std::move(ridx), a);
    }
    CHECK(lp_norm_2m_pow(hom, fam, 2) == lp_norm_2m_pow(renamed, plain_fam, 2));
}

TEST_CASE("abc estimate pipeline") {
    auto fam = circular_family(1);
    auto rep1 = abc_estimates(1, 1, monomial({"x1"}), fam);
    CHECK(rep1.count_eps == 1);
    CHECK(rep1.a_vs_pairings == Verdict::Pass);
    CHECK(rep1.a_vs_closed_form == Verdict::Pass);
    CHECK(rep1.b_bound == Verdict::Pass);
    CHECK(rep1.c_bound == Verdict::Pass);
    CHECK(rep1.inner_lemma_ok);

    auto rep2 = abc_estimates(2, 2, monomial({"x1", "x1"}), fam);
    auto cls = enumerate_partitions(8, PartitionClass::nc_eps(epsilon_d(2, 2)));
    CHECK(rep2.count_eps == BigInt(static_cast<long>(cls.size())));
    CHECK(rep2.a_vs_pairings == Verdict::Pass);
    CHECK(rep2.a_vs_closed_form == Verdict::Pass);
    CHECK(rep2.b_bound == Verdict::Pass);
    CHECK(rep2.c_bound == Verdict::Pass);

    HomPolynomial zero(2);
    auto rep0 = abc_estimates(2, 1, zero, fam);
    CHECK(cmp(rep0.c_max.hi, Rational(0)) == 0);
    CHECK(rep0.c_bound == Verdict::Pass);
}

TEST_CASE("coefficient sum lemma") {
    testutil::RationalSampler sampler(99);
    for (int d = 1; d <= 2; ++d) {
        for (int m = 1; 2 * d * m <= 8 && m <= 2; ++m) {
            auto classes = enumerate_partitions(2 * d * m, PartitionClass::eps(epsilon_d(d, m)));
            for (int trial = 0; trial < 3; ++trial) {
                auto T = random_poly(sampler, {"x1", "x2"}, d, 3, /*complex=*/false);
                for (const auto& pi : classes) CHECK(coefficient_sum_check(pi, T, m) == Verdict::Pass);
            }
        }
    }
}

TEST_CASE("chebyshev recursion") {
    CHECK(chebyshev_u(0).coeffs == std::vector<BigInt>{1});
    CHECK(chebyshev_u(1).coeffs == std::vector<BigInt>{0, 1});
    CHECK(chebyshev_u(2).coeffs == std::vector<BigInt>{-1, 0, 1});
    CHECK(chebyshev_u(3).coeffs == std::vector<BigInt>{0, -2, 0, 1});
    for (int d = 0; d <= 20; ++d) {
        auto T = chebyshev_u(d);
        CHECK(T.degree() == d);
        CHECK(T.eval(Rational(2)) == Rational(d + 1));
    }
    // orthonormal-family recursion identity at rational sample points
    for (int d = 1; d <= 10; ++d) {
        for (const auto& x : {Rational(1, 3), Rational(-7, 5), Rational(2)}) {
            Rational lhs = x * chebyshev_u(d).eval(x);
            Rational rhs = chebyshev_u(d + 1).eval(x) + chebyshev_u(d - 1).eval(x);
            CHECK(cmp(lhs, rhs) == 0);
        }
    }
}

TEST_CASE("character norm ladder") {
    Caps caps;
    caps.m_cap = 6;
    auto rep1 = character_norm_check(1, 6, caps);
    CHECK(rep1.fuss_catalan_ok);
    CHECK(rep1.monotone_ok);
    CHECK(rep1.bound_ok);
    for (int m = 1; m <= 6; ++m)
        CHECK(rep1.norm_pows[static_cast<size_t>(m - 1)] == Rational(catalan(m)));

    auto rep2 = character_norm_check(2, 3, caps);
    CHECK(rep2.fuss_catalan_ok);
    CHECK(rep2.monotone_ok);
    CHECK(rep2.bound_ok);

    auto rep3 = character_norm_check(3, 2, caps);
    CHECK(rep3.fuss_catalan_ok);
    CHECK(rep3.monotone_ok);
    CHECK(rep3.bound_ok);
}

TEST_CASE("degree semigroup action") {
    testutil::RationalSampler sampler(2718);
    auto fam = circular_family(2);
    GradedPolynomial T;
    T.emplace(1, random_poly(sampler, {"x1", "x2"}, 1, 2));
    T.emplace(3, random_poly(sampler, {"x1", "x2"}, 3, 2));

    auto same = ou_apply(T, Rational(1));
    for (const auto& [deg, comp] : T) {
        auto it = same.find(deg);
        REQUIRE(it != same.end());
        for (const auto& [idx, a] : comp.support()) CHECK(it->second.coeff(idx) == a);
    }

    auto half = ou_apply(T, Rational(1, 2));
    for (const auto& [idx, a] : T.at(3).support())
        CHECK(half.at(3).coeff(idx) == a * ExactScalar(Rational(1, 8)));

    // L2 contraction
    auto q = sampler.rational(1, 1);  // in [-1, 1]
    if (sgn(q) <= 0) q = Rational(1, 3);
    Rational before(0), after(0);
    for (const auto& [deg, comp] : T) before += l2_norm_sq(comp, fam).re;
    for (const auto& [deg, comp] : ou_apply(T, q)) after += l2_norm_sq(comp, fam).re;
    CHECK(cmp(after, before) <= 0);

    CHECK_THROWS_AS(ou_apply(T, Rational(0)), DomainError);
    CHECK_THROWS_AS(ou_apply(T, Rational(3, 2)), DomainError);
}

TEST_CASE("radial multiplier bound") {
    testutil::RationalSampler sampler(161803);
    auto fam = circular_family(2);

    // psi supported on a single degree reduces to the per-degree bound
    GradedPolynomial T;
    T.emplace(2, random_poly(sampler, {"x1", "x2"}, 2, 3));
    RadialMultiplier p_d;
    p_d.set(2, ExactScalar::one());
    auto rep = multiplier_apply(T, p_d, fam, 2);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.k_psi_sq == Rational(27));  // (2+1)^3 * 1

    // geometric decay q^d truncated at N reproduces the truncated semigroup
    Rational q(1, 2);
    RadialMultiplier geo;
    for (int deg = 0; deg <= 4; ++deg) geo.set(deg, ExactScalar(rational_pow(q, deg)));
    GradedPolynomial mixed;
    mixed.emplace(1, random_poly(sampler, {"x1", "x2"}, 1, 2));
    mixed.emplace(2, random_poly(sampler, {"x1", "x2"}, 2, 2));
    auto rep_geo = multiplier_apply(mixed, geo, fam, 2);
    CHECK(rep_geo.verdict == Verdict::Pass);

    // random two-degree multiplier
    RadialMultiplier two;
    two.set(1, sampler.complex_scalar(3, 2));
    two.set(2, sampler.complex_scalar(3, 2));
    auto rep_two = multiplier_apply(mixed, two, fam, 2);
    CHECK(rep_two.verdict == Verdict::Pass);
}

TEST_CASE("sup norms of named kinds") {
    CHECK(sup_norm(CumulantSpec::haar_unitary()) == Rational(1));
    CHECK(sup_norm(CumulantSpec::circular()) == Rational(2));
    CHECK(sup_norm(CumulantSpec::semicircular()) == Rational(2));
    CHECK_FALSE(sup_norm(CumulantSpec::custom({{"1*", ExactScalar::one()}}, 2)).has_value());
}
