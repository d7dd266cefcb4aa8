#include "freeprob/haagerup.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "freeprob/errors.hpp"

namespace freeprob {

// ---- polynomial types ---------------------------------------------------------

void HomPolynomial::throw_bad_degree(int d) {
    throw DomainError("polynomial degree must be positive, got " + std::to_string(d));
}

void HomPolynomial::set(MultiIndex idx, ExactScalar value) {
    if (static_cast<int>(idx.size()) != degree_)
        throw DomainError("multi-index length " + std::to_string(idx.size()) +
                          " does not match degree " + std::to_string(degree_));
    if (value.is_zero())
        coeffs_.erase(idx);
    else
        coeffs_.insert_or_assign(std::move(idx), std::move(value));
}

ExactScalar HomPolynomial::coeff(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? ExactScalar::zero() : it->second;
}

HomPolynomial HomPolynomial::scaled(const ExactScalar& factor) const {
    HomPolynomial out(degree_);
    if (factor.is_zero()) return out;
    for (const auto& [idx, a] : coeffs_) out.coeffs_.emplace(idx, a * factor);
    return out;
}

Rational HomPolynomial::coeff_l2_sq() const {
    Rational out(0);
    for (const auto& [idx, a] : coeffs_) out += a.abs_sq();
    return out;
}

ArrayPolynomial::ArrayPolynomial(int degree, int dim) : degree_(degree), dim_(dim) {
    if (degree < 1 || dim < 1) throw DomainError("array polynomial needs degree, dim >= 1");
}

Label ArrayPolynomial::pair_label(int row, int col) {
    return std::to_string(row) + "," + std::to_string(col);
}

void ArrayPolynomial::set(std::vector<int> rows, std::vector<int> cols, ExactScalar value) {
    if (static_cast<int>(rows.size()) != degree_ || static_cast<int>(cols.size()) != degree_)
        throw DomainError("array multi-index length does not match degree");
    for (int v : rows)
        if (v < 1 || v > dim_) throw DomainError("array row index out of range");
    for (int v : cols)
        if (v < 1 || v > dim_) throw DomainError("array column index out of range");
    auto key = std::make_pair(std::move(rows), std::move(cols));
    if (value.is_zero())
        coeffs_.erase(key);
    else
        coeffs_.insert_or_assign(std::move(key), std::move(value));
}

HomPolynomial ArrayPolynomial::to_hom() const {
    HomPolynomial out(degree_);
    for (const auto& [key, a] : coeffs_) {
        MultiIndex idx;
        idx.reserve(static_cast<size_t>(degree_));
        for (int t = 0; t < degree_; ++t)
            idx.push_back(pair_label(key.first[static_cast<size_t>(t)], key.second[static_cast<size_t>(t)]));
        out.set(std::move(idx), a);
    }
    return out;
}

ChebyshevPoly chebyshev_u(int d) {
    if (d < 0) throw DomainError("Chebyshev degree must be non-negative");
    ChebyshevPoly prev{{BigInt(1)}};          // T_0 = 1
    if (d == 0) return prev;
    ChebyshevPoly cur{{BigInt(0), BigInt(1)}};  // T_1 = x
    for (int n = 1; n < d; ++n) {
        // T_{n+1} = x T_n - T_{n-1}
        std::vector<BigInt> next(static_cast<size_t>(n + 2), BigInt(0));
        for (size_t i = 0; i < cur.coeffs.size(); ++i) next[i + 1] = cur.coeffs[i];
        for (size_t i = 0; i < prev.coeffs.size(); ++i) next[i] -= prev.coeffs[i];
        prev = std::move(cur);
        cur.coeffs = std::move(next);
    }
    return cur;
}

Rational ChebyshevPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = Rational(acc * x + Rational(*it));
    return acc;
}

void RadialMultiplier::set(int degree, ExactScalar value) {
    if (degree < 0) throw DomainError("multiplier degree must be non-negative");
    if (value.is_zero())
        psi_.erase(degree);
    else
        psi_.insert_or_assign(degree, std::move(value));
}

Rational RadialMultiplier::k_psi_sq() const {
    Rational best(0);
    for (const auto& [d, v] : psi_) {
        Rational cand = rational_pow(Rational(d + 1), 3) * v.abs_sq();
        if (cmp(cand, best) > 0) best = cand;
    }
    return best;
}

// ---- shared helpers -----------------------------------------------------------

namespace {

const Label& reference_label(const FreeFamily& fam) {
    if (fam.specs().empty()) throw DomainError("family has no labels");
    return fam.specs().begin()->first;
}

Rational real_part(const ExactScalar& z, const char* what) {
    if (!z.is_real()) throw DomainError(std::string(what) + " has a nonzero imaginary part");
    return z.re;
}

/// phi(x x*) for the reference variable.
Rational second_moment(const FreeFamily& fam, const Caps& caps, MomentCache* cache) {
    const Label& x = reference_label(fam);
    StarWord w;
    w.append(x, Exp::One);
    w.append(x, Exp::Star);
    return real_part(moment(fam, w, caps, cache), "phi(x x*)");
}

void require_identical(const FreeFamily& fam) {
    if (!fam.identically_distributed())
        throw DomainError("this operation requires an identically distributed family");
}

// R-diagonality of the whole family, as far as each spec is checkable.
// CUSTOM specs must be checkable through order 2dm for the restricted route.
bool family_r_diagonal_through(const FreeFamily& fam, int order) {
    int even_order = order - (order % 2);
    if (even_order < 2) even_order = 2;
    for (const auto& [label, spec] : fam.specs()) {
        if (spec.kind() == CumulantSpec::Kind::Custom && spec.max_order() < even_order) return false;
        if (!is_r_diagonal(spec, even_order)) return false;
    }
    return true;
}

const std::vector<Partition>& eps_class_cached(int d, int m, const Caps& caps) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<Partition>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, m);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto parts = enumerate_partitions(2 * d * m, PartitionClass::nc_eps(epsilon_d(d, m)), caps);
        it = cache.emplace(std::move(key), std::move(parts)).first;
    }
    return it->second;
}

void check_expansion_caps(int d, int m, int support, const Caps& caps) {
    if (m < 1) throw DomainError("power index m must be positive");
    if (m > caps.m_cap)
        throw SizeGuardError("m = " + std::to_string(m) + " exceeds m_cap = " +
                             std::to_string(caps.m_cap));
    if (2 * d * m > caps.expansion_cap)
        throw SizeGuardError("2dm = " + std::to_string(2 * d * m) + " exceeds expansion_cap = " +
                             std::to_string(caps.expansion_cap));
    if (support > caps.support_cap)
        throw SizeGuardError("support size " + std::to_string(support) +
                             " exceeds support_cap = " + std::to_string(caps.support_cap));
}

// Interned view of polynomial support for the expansion engines.
struct SupportView {
    std::vector<Label> labels;                 // id -> label
    std::vector<std::vector<int>> plain;       // entry -> label ids of the index
    std::vector<std::vector<int>> reversed;    // entry -> label ids, reversed
    std::vector<ExactScalar> a;                // entry -> coefficient
    std::vector<ExactScalar> a_conj;

    explicit SupportView(const HomPolynomial& T) {
        std::map<Label, int> ids;
        for (const auto& [idx, coeff] : T.support()) {
            std::vector<int> fwd;
            fwd.reserve(idx.size());
            for (const Label& l : idx) {
                auto [it, inserted] = ids.emplace(l, static_cast<int>(labels.size()));
                if (inserted) labels.push_back(l);
                fwd.push_back(it->second);
            }
            std::vector<int> rev(fwd.rbegin(), fwd.rend());
            plain.push_back(std::move(fwd));
            reversed.push_back(std::move(rev));
            a.push_back(coeff);
            a_conj.push_back(coeff.conj());
        }
    }
    size_t size() const { return a.size(); }
};

/*
 * The expansion of phi((T T*)^m) restricted to the eps_d-admissible
 * non-crossing partitions, summing over label assignments that are constant
 * on blocks and drawn from the coefficient support segment by segment.
 */
class RestrictedExpansion {
public:
    RestrictedExpansion(const SupportView& sv, const FreeFamily& fam, int d, int m,
                        const Caps& caps)
        : sv_(sv), fam_(fam), d_(d), m_(m), caps_(caps), eps_(epsilon_d(d, m)) {}

    ExactScalar run() {
        for (const Partition& pi : eps_class_cached(d_, m_, caps_)) sum_one(pi);
        return total_;
    }

private:
    void sum_one(const Partition& pi) {
        const int k = 2 * d_ * m_;
        pos_block_.assign(static_cast<size_t>(k), 0);
        for (size_t b = 0; b < pi.blocks().size(); ++b)
            for (int e : pi.blocks()[b]) pos_block_[static_cast<size_t>(e - 1)] = static_cast<int>(b);
        const size_t nblocks = pi.blocks().size();
        block_label_.assign(nblocks, -1);
        kappa_.assign(nblocks, {});
        for (size_t b = 0; b < nblocks; ++b) {
            std::vector<Exp> pat;
            pat.reserve(pi.blocks()[b].size());
            for (int e : pi.blocks()[b]) pat.push_back(eps_[e - 1]);
            EpsilonPattern pattern(std::move(pat));
            kappa_[b].reserve(sv_.labels.size());
            bool all_zero = true;
            for (const Label& l : sv_.labels) {
                kappa_[b].push_back(fam_.spec(l).kappa(pattern));
                if (!kappa_[b].back().is_zero()) all_zero = false;
            }
            if (all_zero) return;  // pi cannot contribute for any assignment
        }
        descend(0, ExactScalar::one(), ExactScalar::one());
    }

    void descend(int slot, ExactScalar kappa_prod, ExactScalar coeff_prod) {
        if (slot == 2 * m_) {
            total_ += kappa_prod * coeff_prod;
            return;
        }
        const bool starred = slot % 2 == 1;
        for (size_t entry = 0; entry < sv_.size(); ++entry) {
            const auto& seg = starred ? sv_.reversed[entry] : sv_.plain[entry];
            ExactScalar kp = kappa_prod;
            bool ok = true;
            size_t fixed = fixed_stack_.size();
            for (int j = 0; j < d_ && ok; ++j) {
                size_t b = static_cast<size_t>(pos_block_[static_cast<size_t>(slot * d_ + j)]);
                int lid = seg[static_cast<size_t>(j)];
                if (block_label_[b] == -1) {
                    block_label_[b] = lid;
                    fixed_stack_.push_back(b);
                    const ExactScalar& kv = kappa_[b][static_cast<size_t>(lid)];
                    if (kv.is_zero()) { ok = false; break; }
                    kp *= kv;
                } else if (block_label_[b] != lid) {
                    ok = false;
                }
            }
            if (ok)
                descend(slot + 1, kp,
                        coeff_prod * (starred ? sv_.a_conj[entry] : sv_.a[entry]));
            while (fixed_stack_.size() > fixed) {
                block_label_[fixed_stack_.back()] = -1;
                fixed_stack_.pop_back();
            }
        }
    }

    const SupportView& sv_;
    const FreeFamily& fam_;
    const int d_, m_;
    const Caps& caps_;
    const EpsilonPattern eps_;
    std::vector<int> pos_block_;
    std::vector<int> block_label_;
    std::vector<std::vector<ExactScalar>> kappa_;
    std::vector<size_t> fixed_stack_;
    ExactScalar total_;
};

}  // namespace

// ---- norms ----------------------------------------------------------------

ExactScalar l2_norm_sq(const HomPolynomial& T, const FreeFamily& fam, const Caps& caps) {
    require_identical(fam);
    Rational xx2 = second_moment(fam, caps, nullptr);
    return ExactScalar(rational_pow(xx2, T.degree()) * T.coeff_l2_sq());
}

namespace {

ExactScalar direct_expansion(const HomPolynomial& T, const FreeFamily& fam, int m,
                             const Caps& caps, MomentCache* cache) {
    const int d = T.degree();
    std::vector<const MultiIndex*> idx;
    std::vector<const ExactScalar*> coeff;
    for (const auto& [i, a] : T.support()) {
        idx.push_back(&i);
        coeff.push_back(&a);
    }
    const size_t s = idx.size();
    if (s == 0) return ExactScalar::zero();
    std::vector<size_t> pick(static_cast<size_t>(2 * m), 0);
    ExactScalar total;
    for (;;) {
        ExactScalar c = ExactScalar::one();
        for (int t = 0; t < 2 * m; ++t) {
            const ExactScalar& a = *coeff[pick[static_cast<size_t>(t)]];
            c *= (t % 2 == 0) ? a : a.conj();
            if (c.is_zero()) break;
        }
        if (!c.is_zero()) {
            StarWord w;
            for (int t = 0; t < 2 * m; ++t) {
                const MultiIndex& i = *idx[pick[static_cast<size_t>(t)]];
                if (t % 2 == 0)
                    for (int j = 0; j < d; ++j) w.append(i[static_cast<size_t>(j)], Exp::One);
                else
                    for (int j = d - 1; j >= 0; --j) w.append(i[static_cast<size_t>(j)], Exp::Star);
            }
            total += c * moment(fam, w, caps, cache);
        }
        int t = 2 * m - 1;
        while (t >= 0 && pick[static_cast<size_t>(t)] == s - 1) {
            pick[static_cast<size_t>(t)] = 0;
            --t;
        }
        if (t < 0) break;
        pick[static_cast<size_t>(t)] += 1;
    }
    return total;
}

}  // namespace

ExactScalar lp_norm_2m_pow(const HomPolynomial& T, const FreeFamily& fam, int m,
                           const Caps& caps, MomentCache* cache) {
    const int d = T.degree();
    check_expansion_caps(d, m, T.support_size(), caps);
    for (const auto& [i, a] : T.support())
        for (const Label& l : i)
            if (!fam.has(l)) throw DomainError("polynomial uses label '" + l + "' without a spec");

    ExactScalar direct = direct_expansion(T, fam, m, caps, cache);
    if (!family_r_diagonal_through(fam, 2 * d * m)) return direct;

    SupportView sv(T);
    ExactScalar restricted = RestrictedExpansion(sv, fam, d, m, caps).run();
    if (direct != restricted)
        throw InconsistencyError(
            "direct and eps-restricted expansions of phi((TT*)^m) disagree: " +
            scalar_str(direct) + " vs " + scalar_str(restricted));
    return direct;
}

ExactScalar lp_norm_2m_pow_graded(const GradedPolynomial& S, const FreeFamily& fam, int m,
                                  const Caps& caps, MomentCache* cache) {
    if (m < 1) throw DomainError("power index m must be positive");
    if (m > caps.m_cap)
        throw SizeGuardError("m = " + std::to_string(m) + " exceeds m_cap = " +
                             std::to_string(caps.m_cap));
    struct Term {
        int d;
        const MultiIndex* idx;
        ExactScalar a;
        ExactScalar a_conj;
    };
    std::vector<Term> terms;
    int dmax = 0;
    for (const auto& [deg, comp] : S) {
        if (deg != comp.degree()) throw DomainError("graded polynomial degree key mismatch");
        for (const auto& [i, a] : comp.support()) {
            terms.push_back({deg, &i, a, a.conj()});
            dmax = std::max(dmax, deg);
        }
    }
    if (terms.empty()) return ExactScalar::zero();
    if (2 * dmax * m > caps.expansion_cap)
        throw SizeGuardError("2dm = " + std::to_string(2 * dmax * m) + " exceeds expansion_cap = " +
                             std::to_string(caps.expansion_cap));
    if (static_cast<int>(terms.size()) > caps.support_cap)
        throw SizeGuardError("support size " + std::to_string(terms.size()) +
                             " exceeds support_cap = " + std::to_string(caps.support_cap));

    std::vector<size_t> pick(static_cast<size_t>(2 * m), 0);
    ExactScalar total;
    for (;;) {
        ExactScalar c = ExactScalar::one();
        for (int t = 0; t < 2 * m; ++t)
            c *= (t % 2 == 0) ? terms[pick[static_cast<size_t>(t)]].a
                              : terms[pick[static_cast<size_t>(t)]].a_conj;
        if (!c.is_zero()) {
            StarWord w;
            for (int t = 0; t < 2 * m; ++t) {
                const Term& term = terms[pick[static_cast<size_t>(t)]];
                if (t % 2 == 0)
                    for (int j = 0; j < term.d; ++j) w.append((*term.idx)[static_cast<size_t>(j)], Exp::One);
                else
                    for (int j = term.d - 1; j >= 0; --j)
                        w.append((*term.idx)[static_cast<size_t>(j)], Exp::Star);
            }
            total += c * moment(fam, w, caps, cache);
        }
        int t = 2 * m - 1;
        while (t >= 0 && pick[static_cast<size_t>(t)] == terms.size() - 1) {
            pick[static_cast<size_t>(t)] = 0;
            --t;
        }
        if (t < 0) break;
        pick[static_cast<size_t>(t)] += 1;
    }
    return total;
}

// ---- certification -----------------------------------------------------------

namespace {

ShiCertificate certify_common(const HomPolynomial& T, const FreeFamily& fam, int m,
                              const Caps& caps, MomentCache* cache, bool array_mode) {
    require_identical(fam);
    const int d = T.degree();
    if (!family_r_diagonal_through(fam, 2 * d * m))
        throw DomainError("strong Haagerup certification requires an R-diagonal family");

    ShiCertificate cert;
    cert.d = d;
    cert.m = m;
    cert.mode = array_mode ? "array" : "tuple";
    cert.lhs_pow = real_part(lp_norm_2m_pow(T, fam, m, caps, cache), "||T||_{2m}^{2m}");

    Rational l2sq = real_part(l2_norm_sq(T, fam, caps), "||T||_2^2");
    Rational xx2 = second_moment(fam, caps, cache);
    HomPolynomial xmono(1);
    xmono.set({reference_label(fam)}, ExactScalar::one());
    Caps mono_caps = caps;
    mono_caps.m_cap = std::max(caps.m_cap, m);
    mono_caps.expansion_cap = std::max(caps.expansion_cap, 2 * m);
    Rational xxm = real_part(lp_norm_2m_pow(xmono, fam, m, mono_caps, cache), "phi((xx*)^m)");

    // The bound to the 2m-th power:
    //   4^{10m} 3^{4m} e^{5m} (phi((xx*)^m))^2 / phi(xx*)^{2m} (d+1)^m (||T||_2^2)^m
    // with an extra (3e)^{2m} in array mode. Only the e power needs an
    // enclosure; a pass against the lower endpoint is a proof.
    const int three_exp = array_mode ? 6 * m : 4 * m;
    const unsigned long e_exp = static_cast<unsigned long>(array_mode ? 7 * m : 5 * m);
    if (sgn(xx2) == 0) {
        cert.rhs_pow = RationalInterval(Rational(0));
        cert.verdict = sgn(cert.lhs_pow) <= 0 ? Verdict::Pass : Verdict::Fail;
        return cert;
    }
    Rational rational_factor = rational_pow(Rational(4), 10 * m) *
                               rational_pow(Rational(3), three_exp) * xxm * xxm /
                               rational_pow(xx2, 2 * m) * rational_pow(Rational(d + 1), m) *
                               rational_pow(l2sq, m);
    for (unsigned terms = 20; terms <= 320; terms *= 2) {
        cert.rhs_pow = RationalInterval(rational_factor) * e_enclosure(terms).pow(e_exp);
        cert.verdict = certified_leq(cert.lhs_pow, cert.rhs_pow);
        if (cert.verdict != Verdict::Undecided) return cert;
    }
    throw UndecidableError("certification undecided at maximum e-precision");
}

}  // namespace

ShiCertificate shi_certify(const HomPolynomial& T, const FreeFamily& fam, int m,
                           const Caps& caps, MomentCache* cache) {
    return certify_common(T, fam, m, caps, cache, /*array_mode=*/false);
}

ShiCertificate shi_certify(const ArrayPolynomial& T, const FreeFamily& fam, int m,
                           const Caps& caps, MomentCache* cache) {
    return certify_common(T.to_hom(), fam, m, caps, cache, /*array_mode=*/true);
}

// ---- estimate pipeline ---------------------------------------------------------

namespace {

/*
 * Walks support-consistent label assignments for one admissible partition.
 * visit(kappa_product, coefficient_modulus_interval) is called at each leaf;
 * use_checks reverses the even-slot segments (the L^{2m} bookkeeping) while
 * the plain coefficient-sum lemma keeps raw segments.
 */
class AssignmentWalker {
public:
    AssignmentWalker(const SupportView& sv, const FreeFamily& fam, const Partition& pi,
                     const EpsilonPattern& eps, int d, int m, bool use_checks,
                     unsigned precision_bits)
        : sv_(sv), fam_(fam), d_(d), m_(m), use_checks_(use_checks), precision_(precision_bits) {
        const int k = 2 * d * m;
        pos_block_.assign(static_cast<size_t>(k), 0);
        for (size_t b = 0; b < pi.blocks().size(); ++b)
            for (int e : pi.blocks()[b]) pos_block_[static_cast<size_t>(e - 1)] = static_cast<int>(b);
        for (const auto& block : pi.blocks()) {
            std::vector<Exp> pat;
            pat.reserve(block.size());
            for (int e : block) pat.push_back(eps[e - 1]);
            patterns_.emplace_back(std::move(pat));
        }
        block_label_.assign(patterns_.size(), -1);
        moduli_.reserve(sv_.size());
        for (size_t i = 0; i < sv_.size(); ++i)
            moduli_.push_back(modulus_enclosure(sv_.a[i], precision_));
    }

    template <typename Visit>
    void walk(Visit&& visit) {
        descend(0, ExactScalar::one(), RationalInterval(Rational(1)), visit);
    }

private:
    template <typename Visit>
    void descend(int slot, ExactScalar kappa_prod, RationalInterval mod_prod, Visit& visit) {
        if (slot == 2 * m_) {
            visit(kappa_prod, mod_prod);
            return;
        }
        const bool starred = slot % 2 == 1;
        for (size_t entry = 0; entry < sv_.size(); ++entry) {
            const auto& seg = (use_checks_ && starred) ? sv_.reversed[entry] : sv_.plain[entry];
            ExactScalar kp = kappa_prod;
            bool ok = true;
            size_t fixed = fixed_stack_.size();
            for (int j = 0; j < d_ && ok; ++j) {
                size_t b = static_cast<size_t>(pos_block_[static_cast<size_t>(slot * d_ + j)]);
                int lid = seg[static_cast<size_t>(j)];
                if (block_label_[b] == -1) {
                    block_label_[b] = lid;
                    fixed_stack_.push_back(b);
                    ExactScalar kv = fam_.spec(sv_.labels[static_cast<size_t>(lid)]).kappa(patterns_[b]);
                    if (kv.is_zero()) { ok = false; break; }
                    kp *= kv;
                } else if (block_label_[b] != lid) {
                    ok = false;
                }
            }
            if (ok) descend(slot + 1, kp, mod_prod * moduli_[entry], visit);
            while (fixed_stack_.size() > fixed) {
                block_label_[fixed_stack_.back()] = -1;
                fixed_stack_.pop_back();
            }
        }
    }

    const SupportView& sv_;
    const FreeFamily& fam_;
    const int d_, m_;
    const bool use_checks_;
    const unsigned precision_;
    std::vector<int> pos_block_;
    std::vector<int> block_label_;
    std::vector<EpsilonPattern> patterns_;
    std::vector<RationalInterval> moduli_;
    std::vector<size_t> fixed_stack_;
};

}  // namespace

Verdict coefficient_sum_check(const Partition& pi, const HomPolynomial& T, int m) {
    const int d = T.degree();
    const int k = 2 * d * m;
    if (pi.ground_size() != k)
        throw DomainError("partition ground size must equal 2dm");
    EpsilonPattern eps = epsilon_d(d, m);
    if (!is_even(pi) || !alternates_on_blocks(pi, eps))
        throw DomainError("coefficient_sum_check requires an eps_d-admissible partition");
    Rational rhs = rational_pow(T.coeff_l2_sq(), m);
    SupportView sv(T);
    // Dummy family: kappa factors are not part of the lemma, so the walker
    // runs with a spec whose kappa never vanishes on admissible blocks.
    FreeFamily haar_all;
    for (const Label& l : sv.labels) haar_all.with(l, CumulantSpec::haar_unitary());
    for (unsigned prec = 64; prec <= 256; prec *= 2) {
        RationalInterval total(Rational(0));
        AssignmentWalker walker(sv, haar_all, pi, eps, d, m, /*use_checks=*/false, prec);
        walker.walk([&](const ExactScalar&, const RationalInterval& mods) { total = total + mods; });
        if (cmp(total.hi, rhs) <= 0) return Verdict::Pass;
        if (cmp(total.lo, rhs) > 0) return Verdict::Fail;
    }
    return Verdict::Undecided;
}

AbcReport abc_estimates(int d, int m, const HomPolynomial& T, const FreeFamily& fam,
                        const Caps& caps) {
    if (d != T.degree()) throw DomainError("degree argument must match the polynomial");
    check_expansion_caps(d, m, T.support_size(), caps);
    require_identical(fam);
    AbcReport report;
    report.d = d;
    report.m = m;

    const auto& classes = eps_class_cached(d, m, caps);
    report.count_eps = BigInt(static_cast<long>(classes.size()));
    BigInt pairings(0);
    for (const auto& p : classes)
        if (is_pairing(p)) ++pairings;
    report.count_eps_pairings = pairings;

    BigInt four2m;
    mpz_ui_pow_ui(four2m.get_mpz_t(), 4, static_cast<unsigned long>(2 * m));
    report.a_vs_pairings =
        report.count_eps <= four2m * pairings ? Verdict::Pass : Verdict::Fail;

    Rational a_factor = Rational(four2m) * rational_pow(Rational(d + 1), m);
    report.a_vs_closed_form = Verdict::Undecided;
    for (unsigned terms = 20; terms <= 160 && report.a_vs_closed_form == Verdict::Undecided;
         terms *= 2) {
        RationalInterval rhs = RationalInterval(a_factor) *
                               e_enclosure(terms).pow(static_cast<unsigned long>(m));
        report.a_vs_closed_form = certified_leq(Rational(report.count_eps), rhs);
    }

    // (B) and (C) walk the same support-consistent assignments.
    SupportView sv(T);
    EpsilonPattern eps = epsilon_d(d, m);
    Rational b_max(0);
    RationalInterval c_max(Rational(0));
    bool inner_ok = true;
    for (const Partition& pi : classes) {
        RationalInterval c_pi(Rational(0));
        AssignmentWalker walker(sv, fam, pi, eps, d, m, /*use_checks=*/true, 128);
        walker.walk([&](const ExactScalar& kappa, const RationalInterval& mods) {
            Rational ksq = kappa.abs_sq();
            if (cmp(ksq, b_max) > 0) b_max = ksq;
            c_pi = c_pi + mods;
        });
        if (cmp(c_pi.lo, c_max.lo) > 0) c_max.lo = c_pi.lo;
        if (cmp(c_pi.hi, c_max.hi) > 0) c_max.hi = c_pi.hi;
        if (coefficient_sum_check(pi, T, m) != Verdict::Pass) inner_ok = false;
    }
    report.b_max_sq = b_max;
    report.c_max = c_max;
    report.inner_lemma_ok = inner_ok;

    // (B)^2 <= phi(xx*)^{2dm - 4m} 16^{8m} phi((xx*)^m)^4, all rational.
    Rational xx2 = second_moment(fam, caps, nullptr);
    HomPolynomial xmono(1);
    xmono.set({reference_label(fam)}, ExactScalar::one());
    Caps mono_caps = caps;
    mono_caps.m_cap = std::max(caps.m_cap, m);
    mono_caps.expansion_cap = std::max(caps.expansion_cap, 2 * m);
    Rational xxm = real_part(lp_norm_2m_pow(xmono, fam, m, mono_caps, nullptr), "phi((xx*)^m)");
    if (sgn(xx2) == 0) {
        report.b_bound = sgn(b_max) == 0 ? Verdict::Pass : Verdict::Fail;
    } else {
        Rational rhs_sq = rational_pow(xx2, 2 * d * m - 4 * m) * rational_pow(Rational(16), 8 * m) *
                          rational_pow(xxm, 4);
        report.b_bound = cmp(b_max, rhs_sq) <= 0 ? Verdict::Pass : Verdict::Fail;
    }

    // (C) <= (3e)^{4m} (sum |a_i|^2)^m.
    Rational c_factor = rational_pow(Rational(3), 4 * m) * rational_pow(T.coeff_l2_sq(), m);
    report.c_bound = Verdict::Undecided;
    for (unsigned terms = 20; terms <= 160 && report.c_bound == Verdict::Undecided; terms *= 2) {
        RationalInterval rhs = RationalInterval(c_factor) *
                               e_enclosure(terms).pow(static_cast<unsigned long>(4 * m));
        if (cmp(c_max.hi, rhs.lo) <= 0) report.c_bound = Verdict::Pass;
        else if (cmp(c_max.lo, rhs.hi) > 0) report.c_bound = Verdict::Fail;
    }
    return report;
}

// ---- character norms -----------------------------------------------------------

CharacterReport character_norm_check(int d, int m_max, const Caps& caps) {
    if (d < 1 || m_max < 1) throw DomainError("character_norm_check requires d, m_max >= 1");
    if (2 * d * m_max > caps.expansion_cap)
        throw SizeGuardError("2 d m_max = " + std::to_string(2 * d * m_max) +
                             " exceeds expansion_cap = " + std::to_string(caps.expansion_cap));
    CharacterReport report;
    report.d = d;
    FreeFamily fam;
    fam.with("c", CumulantSpec::circular());
    HomPolynomial T(d);
    T.set(MultiIndex(static_cast<size_t>(d), "c"), ExactScalar::one());
    Caps local = caps;
    local.m_cap = std::max(caps.m_cap, m_max);
    MomentCache cache;

    for (int m = 1; m <= m_max; ++m) {
        Rational v = real_part(lp_norm_2m_pow(T, fam, m, local, &cache), "||c^d||_{2m}^{2m}");
        report.norm_pows.push_back(v);
        if (cmp(v, Rational(count_chains(m, d))) != 0) report.fuss_catalan_ok = false;
        // v_m <= ((d+1)/d)^{dm} (d+1)^m, both sides exact.
        Rational bound = rational_pow(Rational(d + 1, d), d * m) * rational_pow(Rational(d + 1), m);
        if (cmp(v, bound) > 0) report.bound_ok = false;
    }
    // Ladder: ||.||_{2m} nondecreasing iff v_m^{m+1} <= v_{m+1}^m.
    for (int m = 1; m + 1 <= m_max; ++m) {
        Rational lhs = rational_pow(report.norm_pows[static_cast<size_t>(m - 1)], m + 1);
        Rational rhs = rational_pow(report.norm_pows[static_cast<size_t>(m)], m);
        if (cmp(lhs, rhs) > 0) report.monotone_ok = false;
    }
    return report;
}

// ---- degree semigroup and multipliers --------------------------------------------

GradedPolynomial ou_apply(const GradedPolynomial& T, const Rational& q) {
    if (sgn(q) <= 0 || cmp(q, Rational(1)) > 0)
        throw DomainError("semigroup parameter q must lie in (0, 1]");
    GradedPolynomial out;
    for (const auto& [deg, comp] : T) {
        HomPolynomial scaled = comp.scaled(ExactScalar(rational_pow(q, deg)));
        if (scaled.support_size() > 0) out.emplace(deg, std::move(scaled));
    }
    return out;
}

MultiplierReport multiplier_apply(const GradedPolynomial& T, const RadialMultiplier& psi,
                                  const FreeFamily& fam, int m, const Caps& caps,
                                  MomentCache* cache) {
    require_identical(fam);
    int dmax = 0;
    for (const auto& [deg, comp] : T) dmax = std::max(dmax, deg);
    if (!family_r_diagonal_through(fam, 2 * std::max(1, dmax) * m))
        throw DomainError("multiplier bound requires an R-diagonal family");

    MultiplierReport report;
    report.m = m;
    report.k_psi_sq = psi.k_psi_sq();

    GradedPolynomial scaled;
    Rational inv_dplus1_sum(0);  // sum of 1/(d+1) over acting degrees
    Rational l2sq_total(0);
    for (const auto& [deg, comp] : T) {
        l2sq_total += real_part(l2_norm_sq(comp, fam, caps), "||T_d||_2^2");
        auto it = psi.support().find(deg);
        if (it == psi.support().end()) continue;
        HomPolynomial part = comp.scaled(it->second);
        if (part.support_size() > 0) {
            scaled.emplace(deg, std::move(part));
            inv_dplus1_sum += Rational(1, deg + 1);
        }
    }
    report.lhs_pow =
        real_part(lp_norm_2m_pow_graded(scaled, fam, m, caps, cache), "||M_psi T||_{2m}^{2m}");

    // (C_B K ||T||_2)^{2m} with C_B = 4^5 (3e)^2 sqrt(e) (||x||_{2m}^2/||x||_2^2)
    // * sum 1/(d+1): rational except for e^{5m}.
    Rational xx2 = second_moment(fam, caps, cache);
    HomPolynomial xmono(1);
    xmono.set({reference_label(fam)}, ExactScalar::one());
    Caps mono_caps = caps;
    mono_caps.m_cap = std::max(caps.m_cap, m);
    mono_caps.expansion_cap = std::max(caps.expansion_cap, 2 * m);
    Rational xxm = real_part(lp_norm_2m_pow(xmono, fam, m, mono_caps, cache), "phi((xx*)^m)");
    if (sgn(xx2) == 0) throw DomainError("reference variable has vanishing L^2 norm");

    Rational rational_factor = rational_pow(Rational(4), 10 * m) * rational_pow(Rational(3), 4 * m) *
                               xxm * xxm / rational_pow(xx2, 2 * m) *
                               rational_pow(inv_dplus1_sum, 2 * m) *
                               rational_pow(report.k_psi_sq, m) * rational_pow(l2sq_total, m);
    if (sgn(rational_factor) == 0) {
        report.rhs_pow = RationalInterval(Rational(0));
        report.verdict = sgn(report.lhs_pow) <= 0 ? Verdict::Pass : Verdict::Fail;
        return report;
    }
    for (unsigned terms = 20; terms <= 320; terms *= 2) {
        report.rhs_pow = RationalInterval(rational_factor) *
                         e_enclosure(terms).pow(static_cast<unsigned long>(5 * m));
        report.verdict = certified_leq(report.lhs_pow, report.rhs_pow);
        if (report.verdict != Verdict::Undecided) return report;
    }
    throw UndecidableError("multiplier bound undecided at maximum e-precision");
}

std::optional<Rational> sup_norm(const CumulantSpec& spec) {
    switch (spec.kind()) {
        case CumulantSpec::Kind::HaarUnitary: return Rational(1);
        case CumulantSpec::Kind::Circular: return Rational(2);
        case CumulantSpec::Kind::Semicircular: return Rational(2);
        case CumulantSpec::Kind::Custom: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace freeprob
