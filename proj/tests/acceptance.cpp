/*
 * Acceptance suite: every check this project promises, one line per
 * criterion. Exact identities are compared with exact arithmetic; analytic
 * bounds are certified against rational enclosures. Exit code 0 iff all
 * criteria pass.
 */

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "freeprob/cumulants.hpp"
#include "freeprob/errors.hpp"
#include "freeprob/freegroup.hpp"
#include "freeprob/haagerup.hpp"
#include "freeprob/partition.hpp"
#include "freeprob/weingarten.hpp"

#include "test_util.hpp"

using namespace freeprob;

namespace {

struct Failure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

// ---- criterion 1: cumulant moments equal free-group traces -------------------

void oracle_equivalence() {
    auto rep = haar_oracle_check(8);
    expect(rep.checked == 87380, "expected 87380 words, checked " + std::to_string(rep.checked));
    expect(rep.mismatches == 0, "mismatch: " + rep.first_mismatch);
}

// ---- criterion 2: counting identities ----------------------------------------

void counting_identities() {
    for (int k = 1; k <= 10; ++k) {
        auto nc = enumerate_partitions(k, PartitionClass::noncrossing());
        expect(BigInt(static_cast<long>(nc.size())) == catalan(k),
               "|NC(" + std::to_string(k) + ")| != C_k");
    }
    for (int k = 1; k <= 5; ++k) {
        auto nce = enumerate_partitions(2 * k, PartitionClass::nc_even());
        expect(BigInt(static_cast<long>(nce.size())) == count_chains(k, 2),
               "|NC_e(" + std::to_string(2 * k) + ")| != 2-chain count");
    }
    for (int d = 1; d <= 6; ++d)
        for (int m = 1; 2 * d * m <= 12; ++m)
            expect(pair_to_chain_count_check(d, m),
                   "eps-pairing count mismatch at d=" + std::to_string(d) +
                       ", m=" + std::to_string(m));
}

// ---- criterion 3: Moebius values and defining identity ------------------------

void moebius_criteria() {
    for (int k = 1; k <= 8; ++k) {
        BigInt want = catalan(k - 1);
        if (k % 2 == 0) want = -want;
        expect(moebius_nc(Partition::singletons(k), Partition::full(k)) == want,
               "mu(0_k, 1_k) wrong at k=" + std::to_string(k));
    }
    for (int k = 1; k <= 6; ++k) {
        auto nc = enumerate_partitions(k, PartitionClass::noncrossing());
        for (const auto& s : nc) {
            auto row = moebius_interval(s, Partition::full(k));
            for (const auto& p : nc) {
                if (!leq(s, p)) continue;
                BigInt sum(0);
                for (const auto& [t, mu] : row)
                    if (leq(t, p)) sum += mu;
                expect(sum == (s == p ? 1 : 0),
                       "Moebius identity fails on [" + s.str() + ", " + p.str() + "]");
            }
        }
    }
}

// ---- criterion 4: moment-cumulant roundtrip ------------------------------------

void roundtrip() {
    testutil::RationalSampler sampler(40404);
    int passed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int order = 2 + trial % 5;  // 2..6
        std::map<std::string, ExactScalar> table;
        for (int len = 1; len <= order; ++len) {
            for (long mask = 0; mask < (1L << len); ++mask) {
                std::string pat;
                for (int i = 0; i < len; ++i) pat += (mask >> i) & 1 ? '*' : '1';
                table[pat] = sampler.complex_scalar(6, 4);
            }
        }
        auto spec = CumulantSpec::custom(table, order);
        FreeFamily fam;
        fam.with("x", spec);
        MomentCache cache;
        auto oracle = [&](const StarWord& w) { return moment(fam, w, Caps::defaults(), &cache); };
        bool ok = true;
        for (int len = 1; len <= order && ok; ++len) {
            for (long mask = 0; mask < (1L << len) && ok; ++mask) {
                StarWord w;
                std::string pat;
                for (int i = 0; i < len; ++i) {
                    bool star = (mask >> i) & 1;
                    pat += star ? '*' : '1';
                    w.append("x", star ? Exp::Star : Exp::One);
                }
                ok = cumulant_from_moments(oracle, w) == spec.kappa(EpsilonPattern(pat));
            }
        }
        expect(ok, "roundtrip failed in trial " + std::to_string(trial));
        ++passed;
    }
    expect(passed == 100, "expected 100 roundtrip trials");
}

// ---- criterion 5: Weingarten inverses and generator moments --------------------

void weingarten_criteria() {
    for (int n = 4; n <= 8; ++n) {
        for (int k = 1; k <= 3; ++k) {
            auto g = gram(n, k);
            auto w = weingarten(n, k);  // identity is verified internally on build
            expect(g.basis.size() == w.basis.size(), "basis mismatch");
            const size_t dim = g.basis.size();
            for (size_t r = 0; r < dim; ++r) {
                for (size_t c = 0; c < dim; ++c) {
                    Rational acc(0);
                    for (size_t t = 0; t < dim; ++t)
                        acc += w.entries[r][t] * Rational(g.entries[t][c]);
                    expect(cmp(acc, Rational(r == c ? 1 : 0)) == 0,
                           "W G != I at n=" + std::to_string(n) + ", k=" + std::to_string(k));
                }
            }
        }
    }
    for (int n = 4; n <= 8; ++n) {
        for (int i1 = 1; i1 <= n; ++i1)
            for (int i2 = 1; i2 <= n; ++i2)
                for (int j1 = 1; j1 <= n; ++j1)
                    for (int j2 = 1; j2 <= n; ++j2) {
                        Rational want = (i1 == i2 && j1 == j2) ? Rational(1, n) : Rational(0);
                        expect(haar_moment(n, {i1, i2}, {j1, j2}) == want,
                               "k=1 generator moment wrong at n=" + std::to_string(n));
                    }
        for (int i1 = 1; i1 <= n; ++i1)
            for (int j1 = 1; j1 <= n; ++j1) {
                expect(haar_moment(n, {i1}, {j1}) == Rational(0), "odd moment nonzero");
                expect(haar_moment(n, {i1, i1, i1}, {j1, j1, j1}) == Rational(0),
                       "odd moment nonzero");
            }
    }
}

// ---- criteria 6 and 7: expansion consistency and SHI certification -------------

struct Instance {
    FreeFamily fam;
    HomPolynomial T;
    int d;
    int m;
};

std::vector<Instance> shi_instances(int draws_per_combo) {
    testutil::RationalSampler sampler(60706);
    std::vector<Instance> out;
    const std::vector<Label> alphabet = {"x1", "x2", "x3"};
    for (bool use_haar : {false, true}) {
        FreeFamily fam;
        for (const Label& l : alphabet)
            fam.with(l, use_haar ? CumulantSpec::haar_unitary() : CumulantSpec::circular());
        for (int d = 1; d <= 3; ++d) {
            for (int m = 1; m <= 3 && 2 * d * m <= 12; ++m) {
                const int support = 2 * d * m <= 8 ? 5 : 3;
                // one fixed support per combination, fresh coefficients per draw
                std::vector<MultiIndex> indices;
                for (int s = 0; s < support; ++s) {
                    MultiIndex idx;
                    for (int j = 0; j < d; ++j)
                        idx.push_back(alphabet[static_cast<size_t>(sampler.uniform(0, 2))]);
                    indices.push_back(std::move(idx));
                }
                for (int draw = 0; draw < draws_per_combo; ++draw) {
                    HomPolynomial T(d);
                    for (const auto& idx : indices) T.set(idx, sampler.complex_scalar(5, 3));
                    out.push_back({fam, std::move(T), d, m});
                }
            }
        }
    }
    return out;
}

void expansion_consistency(const std::vector<Instance>& instances) {
    // lp_norm_2m_pow evaluates both routes and raises on any disagreement
    std::map<std::string, MomentCache> caches;
    for (const auto& inst : instances) {
        std::string key = inst.fam.specs().begin()->second.kind() == CumulantSpec::Kind::HaarUnitary
                              ? "h"
                              : "c";
        ExactScalar v = lp_norm_2m_pow(inst.T, inst.fam, inst.m, Caps::defaults(), &caches[key]);
        expect(v.is_real() && sgn(v.re) >= 0, "phi((TT*)^m) not a non-negative rational");
    }
}

void shi_certification(const std::vector<Instance>& instances) {
    std::map<std::string, MomentCache> tuple_caches;
    std::map<std::string, MomentCache> array_caches;
    for (const auto& inst : instances) {
        std::string key = inst.fam.specs().begin()->second.kind() == CumulantSpec::Kind::HaarUnitary
                              ? "h"
                              : "c";
        auto cert = shi_certify(inst.T, inst.fam, inst.m, Caps::defaults(), &tuple_caches[key]);
        expect(cert.verdict == Verdict::Pass,
               "tuple certificate " + verdict_str(cert.verdict) + " at d=" +
                   std::to_string(inst.d) + ", m=" + std::to_string(inst.m));

        // array instance: diagonal embedding of the alphabet into pairs
        FreeFamily pair_fam;
        for (int i = 1; i <= 3; ++i)
            pair_fam.with(ArrayPolynomial::pair_label(i, i),
                          inst.fam.specs().begin()->second);
        ArrayPolynomial A(inst.d, 3);
        for (const auto& [idx, a] : inst.T.support()) {
            std::vector<int> rows;
            for (const Label& l : idx) rows.push_back(l == "x1" ? 1 : (l == "x2" ? 2 : 3));
            A.set(rows, rows, a);
        }
        auto acert = shi_certify(A, pair_fam, inst.m, Caps::defaults(), &array_caches[key]);
        expect(acert.verdict == Verdict::Pass,
               "array certificate " + verdict_str(acert.verdict) + " at d=" +
                   std::to_string(inst.d) + ", m=" + std::to_string(inst.m));
    }
}

// ---- criterion 8: Fuss-Catalan norm identity ------------------------------------

void fuss_catalan_norms() {
    Caps caps;
    caps.m_cap = 6;
    for (int d = 1; 2 * d <= 12; ++d) {
        int m_max = 12 / (2 * d);
        auto rep = character_norm_check(d, m_max, caps);
        expect(rep.fuss_catalan_ok, "||c^d||_{2m}^{2m} != chain count at d=" + std::to_string(d));
        expect(rep.monotone_ok, "norm ladder not monotone at d=" + std::to_string(d));
        expect(rep.bound_ok, "closed-form bound fails at d=" + std::to_string(d));
    }
    // d = 1 ladder climbs towards 2: strictly increasing from m = 2 on
    auto rep1 = character_norm_check(1, 6, caps);
    for (int m = 2; m + 1 <= 6; ++m) {
        Rational lhs = rational_pow(rep1.norm_pows[static_cast<size_t>(m - 1)], m + 1);
        Rational rhs = rational_pow(rep1.norm_pows[static_cast<size_t>(m)], m);
        expect(cmp(lhs, rhs) < 0, "d=1 ladder not strictly increasing");
    }
}

// ---- criterion 9: Chebyshev recursion ---------------------------------------------

void chebyshev_criteria() {
    for (int d = 0; d <= 20; ++d)
        expect(chebyshev_u(d).eval(Rational(2)) == Rational(d + 1),
               "T_d(2) != d+1 at d=" + std::to_string(d));
    for (int d = 1; d <= 19; ++d) {
        auto lo = chebyshev_u(d - 1);
        auto mid = chebyshev_u(d);
        auto hi = chebyshev_u(d + 1);
        // coefficients of x T_d must equal those of T_{d+1} + T_{d-1}
        std::vector<BigInt> shifted(mid.coeffs.size() + 1, BigInt(0));
        for (size_t i = 0; i < mid.coeffs.size(); ++i) shifted[i + 1] = mid.coeffs[i];
        std::vector<BigInt> sum(hi.coeffs.begin(), hi.coeffs.end());
        for (size_t i = 0; i < lo.coeffs.size(); ++i) sum[i] += lo.coeffs[i];
        expect(shifted == sum, "recursion coefficients wrong at d=" + std::to_string(d));
    }
}

// ---- criterion 10: free group Haagerup bounds --------------------------------------

void free_group_bounds() {
    testutil::RationalSampler sampler(101010);
    int trials = 0;
    while (trials < 100) {
        int d = sampler.uniform(1, 4);
        int m = sampler.uniform(1, 3);
        bool semigroup = trials % 2 == 0;
        GroupFunction f;
        int want_support = sampler.uniform(1, 12);
        for (int s = 0; s < want_support; ++s) {
            std::vector<int> letters;
            for (int j = 0; j < d; ++j) {
                for (;;) {
                    int g = sampler.uniform(1, 2);
                    int letter = semigroup ? g : (sampler.uniform(0, 1) ? g : -g);
                    if (!letters.empty() && letters.back() == -letter) continue;
                    letters.push_back(letter);
                    break;
                }
            }
            f.add(ReducedWord::reduce(letters), sampler.complex_scalar(5, 3));
        }
        if (f.support_size() == 0) continue;
        auto rep = haagerup_check(f, d, m, semigroup);
        expect(rep.classical == Verdict::Pass,
               "classical bound failed at trial " + std::to_string(trials));
        if (semigroup)
            expect(rep.strong == Verdict::Pass,
                   "strong bound failed at trial " + std::to_string(trials));
        ++trials;
    }
}

// ---- criterion 11: structure of the admissible classes ------------------------------

void structural_criteria() {
    for (int d = 1; d <= 6; ++d) {
        for (int m = 1; 2 * d * m <= 12; ++m) {
            auto cls = enumerate_partitions(2 * d * m, PartitionClass::nc_eps(epsilon_d(d, m)));
            BigInt pairings(0);
            for (const auto& p : cls) {
                int pair_blocks = 0;
                size_t max_block = 0;
                for (const auto& b : p.blocks()) {
                    pair_blocks += b.size() == 2;
                    max_block = std::max(max_block, b.size());
                }
                expect(pair_blocks >= d * m - 2 * m, "too few pair blocks in " + p.str());
                expect(max_block <= static_cast<size_t>(2 * m), "oversized block in " + p.str());
                if (is_pairing(p)) ++pairings;
            }
            BigInt four2m;
            mpz_ui_pow_ui(four2m.get_mpz_t(), 4, static_cast<unsigned long>(2 * m));
            expect(BigInt(static_cast<long>(cls.size())) <= four2m * pairings,
                   "class count exceeds 4^{2m} pairings at d=" + std::to_string(d) +
                       ", m=" + std::to_string(m));
        }
    }
}

// ---- criterion 12: coefficient-sum lemma ---------------------------------------------

void coefficient_sum_criteria() {
    testutil::RationalSampler sampler(121212);
    const std::vector<Label> alphabet = {"x1", "x2", "x3"};
    for (int d = 1; d <= 4; ++d) {
        for (int m = 1; 2 * d * m <= 8; ++m) {
            auto classes = enumerate_partitions(2 * d * m, PartitionClass::eps(epsilon_d(d, m)));
            for (int draw = 0; draw < 50; ++draw) {
                HomPolynomial T(d);
                int support = sampler.uniform(1, 4);
                for (int s = 0; s < support; ++s) {
                    MultiIndex idx;
                    for (int j = 0; j < d; ++j)
                        idx.push_back(alphabet[static_cast<size_t>(sampler.uniform(0, 2))]);
                    // real draws keep every modulus rational, so the
                    // comparison below is exact rather than certified
                    T.set(std::move(idx), ExactScalar(sampler.rational(6, 4)));
                }
                for (const auto& pi : classes)
                    expect(coefficient_sum_check(pi, T, m) == Verdict::Pass,
                           "coefficient-sum lemma failed for " + pi.str());
            }
        }
    }
}

}  // namespace

int main() {
    std::vector<Instance> instances = shi_instances(50);
    struct Criterion {
        int id;
        const char* name;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence (cumulant moments vs free-group traces, words <= 8)",
         oracle_equivalence},
        {2, "counting identities (Catalan, even classes, eps-pairings)", counting_identities},
        {3, "Moebius values and defining identity", moebius_criteria},
        {4, "moment-cumulant roundtrip on 100 random custom specs", roundtrip},
        {5, "Weingarten inverses and generator moments", weingarten_criteria},
        {6, "expansion consistency (direct vs restricted), 50 draws per combination",
         [&] { expansion_consistency(instances); }},
        {7, "strong Haagerup certificates, tuple and array constants",
         [&] { shi_certification(instances); }},
        {8, "Fuss-Catalan norm identity and closed-form bound", fuss_catalan_norms},
        {9, "Chebyshev recursion and endpoint values", chebyshev_criteria},
        {10, "free group Haagerup bounds, 100 random supports", free_group_bounds},
        {11, "structure of the admissible partition classes", structural_criteria},
        {12, "coefficient-sum lemma, 50 draws per admissible partition",
         coefficient_sum_criteria},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            c.run();
        } catch (const Failure& f) {
            ok = false;
            detail = f.detail;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d [%s] %s (%.2fs)\n", c.id, ok ? "PASS" : "FAIL", c.name, secs);
        if (!ok) {
            std::printf("              %s\n", detail.c_str());
            ++failures;
        }
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
