#include "freeprob/freegroup.hpp"

#include <cmath>

#include "freeprob/cumulants.hpp"
#include "freeprob/errors.hpp"

namespace freeprob {

// ---- ReducedWord ------------------------------------------------------------

ReducedWord ReducedWord::reduce(std::span<const int> letters) {
    ReducedWord out;
    out.letters_.reserve(letters.size());
    for (int l : letters) {
        if (l == 0) throw DomainError("free group letters are nonzero integers");
        if (!out.letters_.empty() && out.letters_.back() == -l)
            out.letters_.pop_back();
        else
            out.letters_.push_back(l);
    }
    return out;
}

ReducedWord ReducedWord::reduce(std::initializer_list<int> letters) {
    return reduce(std::span<const int>(letters.begin(), letters.size()));
}

ReducedWord ReducedWord::inverse() const {
    std::vector<int> inv(letters_.rbegin(), letters_.rend());
    for (int& l : inv) l = -l;
    ReducedWord out;
    out.letters_ = std::move(inv);  // reversal of a reduced word is reduced
    return out;
}

ReducedWord operator*(const ReducedWord& a, const ReducedWord& b) {
    std::vector<int> cat = a.letters_;
    cat.insert(cat.end(), b.letters_.begin(), b.letters_.end());
    return ReducedWord::reduce(cat);
}

bool ReducedWord::is_positive() const {
    for (int l : letters_)
        if (l < 0) return false;
    return true;
}

std::string ReducedWord::str() const {
    if (letters_.empty()) return "e";
    std::string s;
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += ".";
        s += (letters_[i] > 0 ? "g" : "g-") + std::to_string(std::abs(letters_[i]));
    }
    return s;
}

// ---- GroupFunction ----------------------------------------------------------

void GroupFunction::set(ReducedWord w, ExactScalar value) {
    if (value.is_zero())
        coeffs_.erase(w);
    else
        coeffs_.insert_or_assign(std::move(w), std::move(value));
}

void GroupFunction::add(const ReducedWord& w, const ExactScalar& value) {
    auto it = coeffs_.find(w);
    if (it == coeffs_.end()) {
        if (!value.is_zero()) coeffs_.emplace(w, value);
        return;
    }
    it->second += value;
    if (it->second.is_zero()) coeffs_.erase(it);
}

Rational GroupFunction::l2_sq() const {
    Rational out(0);
    for (const auto& [w, c] : coeffs_) out += c.abs_sq();
    return out;
}

// ---- trace ------------------------------------------------------------------

namespace {

using WordMap = std::map<ReducedWord, ExactScalar>;

WordMap convolve(const WordMap& a, const WordMap& b) {
    WordMap out;
    for (const auto& [u, cu] : a) {
        for (const auto& [v, cv] : b) {
            ExactScalar prod = cu * cv;
            if (prod.is_zero()) continue;
            ReducedWord w = u * v;
            auto it = out.find(w);
            if (it == out.end())
                out.emplace(std::move(w), std::move(prod));
            else {
                it->second += prod;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

}  // namespace

Rational trace_norm_2m_pow(const GroupFunction& f, int m, const Caps& caps) {
    if (m < 1) throw DomainError("trace power index must be positive");
    const double tuples = std::pow(static_cast<double>(f.support_size()), 2.0 * m);
    if (tuples > static_cast<double>(caps.tuple_budget))
        throw SizeGuardError("|support|^{2m} exceeds tuple_budget = " +
                             std::to_string(caps.tuple_budget));
    if (f.support_size() == 0) return Rational(0);

    // tau((f f*)^m) = (f * f~)^{*m}(e), where f~(g) = conj(f(g^{-1})).
    WordMap h;
    {
        WordMap fstar;
        for (const auto& [w, c] : f.support()) fstar.emplace(w.inverse(), c.conj());
        h = convolve(f.support(), fstar);
    }
    WordMap power = h;
    for (int i = 1; i < m; ++i) power = convolve(power, h);
    auto it = power.find(ReducedWord());
    Rational out(0);
    if (it != power.end()) {
        if (sgn(it->second.im) != 0)
            throw InconsistencyError("trace of (f f*)^m has a nonzero imaginary part");
        out = it->second.re;
    }
    return out;
}

// ---- Haagerup bounds --------------------------------------------------------

FreeGroupReport haagerup_check(const GroupFunction& f, int d, int m, bool semigroup,
                               const Caps& caps) {
    if (d < 1 || m < 1) throw DomainError("haagerup_check requires d, m >= 1");
    for (const auto& [w, c] : f.support()) {
        if (w.length() != d)
            throw DomainError("support word " + w.str() + " has length " +
                              std::to_string(w.length()) + ", expected " + std::to_string(d));
        if (semigroup && !w.is_positive())
            throw DomainError("semigroup mode forbids inverse letters in " + w.str());
    }
    FreeGroupReport report;
    report.d = d;
    report.m = m;
    report.semigroup = semigroup;
    report.norm_2m_pow = trace_norm_2m_pow(f, m, caps);
    report.l2_sq = f.l2_sq();

    // Compare 2m-th powers: ||f||_{2m}^{2m} <= (d+1)^{2m} (||f||_2^2)^m.
    Rational l2m = rational_pow(report.l2_sq, m);
    Rational classical_rhs = rational_pow(Rational(d + 1), 2 * m) * l2m;
    report.classical = cmp(report.norm_2m_pow, classical_rhs) <= 0 ? Verdict::Pass : Verdict::Fail;

    report.strong_applicable = semigroup;
    if (semigroup) {
        // ||f||_{2m}^{2m} <= e^m (d+1)^m (||f||_2^2)^m, e by certified enclosure.
        Rational base = rational_pow(Rational(d + 1), m) * l2m;
        report.strong = Verdict::Undecided;
        for (unsigned terms = 20; terms <= 160; terms *= 2) {
            RationalInterval rhs = e_enclosure(terms).pow(static_cast<unsigned long>(m)) *
                                   RationalInterval(base);
            report.strong = certified_leq(report.norm_2m_pow, rhs);
            if (report.strong != Verdict::Undecided) break;
        }
    }
    return report;
}

// ---- Haar unitary oracle ----------------------------------------------------

OracleReport haar_oracle_check(int cap, const Caps& caps) {
    if (cap < 1 || cap > 8) throw DomainError("oracle check cap must lie in [1, 8]");
    FreeFamily fam;
    fam.with("z1", CumulantSpec::haar_unitary()).with("z2", CumulantSpec::haar_unitary());
    const Label labels[2] = {"z1", "z2"};
    OracleReport report;
    MomentCache cache;
    for (int len = 1; len <= cap; ++len) {
        // Each position ranges over {z1, z1*, z2, z2*}.
        std::vector<int> choice(static_cast<size_t>(len), 0);
        for (;;) {
            StarWord w;
            std::vector<int> group_letters;
            group_letters.reserve(static_cast<size_t>(len));
            for (int pos = 0; pos < len; ++pos) {
                int c = choice[static_cast<size_t>(pos)];
                int gen = c / 2 + 1;
                Exp e = (c % 2 == 0) ? Exp::One : Exp::Star;
                w.append(labels[gen - 1], e);
                group_letters.push_back(e == Exp::One ? gen : -gen);
            }
            ExactScalar lhs = moment(fam, w, caps, &cache);
            ExactScalar rhs = ReducedWord::reduce(group_letters).is_identity()
                                  ? ExactScalar::one()
                                  : ExactScalar::zero();
            ++report.checked;
            if (lhs != rhs) {
                ++report.mismatches;
                if (report.first_mismatch.empty())
                    report.first_mismatch = w.str() + ": cumulant engine " + scalar_str(lhs) +
                                            " vs free group " + scalar_str(rhs);
            }
            int pos = len - 1;
            while (pos >= 0 && choice[static_cast<size_t>(pos)] == 3) {
                choice[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            choice[static_cast<size_t>(pos)] += 1;
        }
    }
    return report;
}

}  // namespace freeprob
