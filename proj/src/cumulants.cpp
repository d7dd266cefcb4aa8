#include "freeprob/cumulants.hpp"

#include <algorithm>
#include <sstream>

#include "freeprob/errors.hpp"

namespace freeprob {

// ---- StarWord ---------------------------------------------------------------

StarWord StarWord::parse(const std::string& compact) {
    std::istringstream in(compact);
    std::string tok;
    std::vector<StarLetter> letters;
    while (in >> tok) {
        Exp e = Exp::One;
        if (tok.size() > 1 && tok.back() == '*') {
            e = Exp::Star;
            tok.pop_back();
        }
        letters.push_back({tok, e});
    }
    if (letters.empty()) throw DomainError("empty star-word");
    return StarWord(std::move(letters));
}

StarWord StarWord::adjoint() const {
    std::vector<StarLetter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l.exp = flip(l.exp);
    return StarWord(std::move(out));
}

StarWord StarWord::rotated(int r) const {
    const int k = size();
    std::vector<StarLetter> out;
    out.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(letters_[static_cast<size_t>((i + r) % k)]);
    return StarWord(std::move(out));
}

EpsilonPattern StarWord::eps_pattern() const {
    std::vector<Exp> v;
    v.reserve(letters_.size());
    for (const auto& l : letters_) v.push_back(l.exp);
    return EpsilonPattern(std::move(v));
}

std::string StarWord::key() const {
    std::string s;
    for (const auto& l : letters_) {
        s += l.label;
        s += (l.exp == Exp::One ? '\x01' : '\x02');
    }
    return s;
}

std::string StarWord::str() const {
    std::string s;
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += ' ';
        s += letters_[i].label;
        if (letters_[i].exp == Exp::Star) s += '*';
    }
    return s;
}

// ---- CumulantSpec -----------------------------------------------------------

CumulantSpec CumulantSpec::custom(std::map<std::string, ExactScalar> table, int max_order) {
    if (max_order < 1) throw DomainError("custom cumulant table needs max_order >= 1");
    CumulantSpec spec(Kind::Custom);
    spec.max_order_ = max_order;
    for (auto& [pattern, value] : table) {
        EpsilonPattern parsed(pattern);  // validates the key
        if (parsed.size() > max_order)
            throw DomainError("custom table entry '" + pattern + "' exceeds max_order");
        if (!value.is_zero()) spec.table_.emplace(pattern, value);
    }
    return spec;
}

namespace {
bool is_alternating(const EpsilonPattern& p) {
    for (int i = 1; i < p.size(); ++i)
        if (p[i] == p[i - 1]) return false;
    return true;
}
}  // namespace

ExactScalar CumulantSpec::kappa(const EpsilonPattern& pattern) const {
    const int len = pattern.size();
    switch (kind_) {
        case Kind::HaarUnitary: {
            if (len % 2 != 0 || !is_alternating(pattern)) return ExactScalar::zero();
            const int k = len / 2;
            BigInt c = catalan(k - 1);
            if (k % 2 == 0) c = -c;  // (-1)^{k-1} C_{k-1}
            return ExactScalar(Rational(c));
        }
        case Kind::Circular:
            return (len == 2 && is_alternating(pattern)) ? ExactScalar::one() : ExactScalar::zero();
        case Kind::Semicircular:
            return len == 2 ? ExactScalar::one() : ExactScalar::zero();
        case Kind::Custom: {
            if (len > max_order_)
                throw TruncationError("custom cumulant queried at order " + std::to_string(len) +
                                      " beyond max_order = " + std::to_string(max_order_));
            auto it = table_.find(pattern.str());
            return it == table_.end() ? ExactScalar::zero() : it->second;
        }
    }
    return ExactScalar::zero();
}

// ---- FreeFamily -------------------------------------------------------------

FreeFamily& FreeFamily::with(Label label, CumulantSpec spec) {
    specs_.insert_or_assign(std::move(label), std::move(spec));
    return *this;
}

const CumulantSpec& FreeFamily::spec(const Label& label) const {
    auto it = specs_.find(label);
    if (it == specs_.end()) throw DomainError("no cumulant spec for label '" + label + "'");
    return it->second;
}

std::vector<Label> FreeFamily::alphabet() const {
    std::vector<Label> out;
    out.reserve(specs_.size());
    for (const auto& [label, spec] : specs_) out.push_back(label);
    return out;
}

bool FreeFamily::identically_distributed() const {
    if (specs_.empty()) return true;
    const CumulantSpec& first = specs_.begin()->second;
    for (const auto& [label, spec] : specs_)
        if (!(spec == first)) return false;
    return true;
}

// ---- kappa_pi ---------------------------------------------------------------

ExactScalar kappa_pi(const FreeFamily& fam, const Partition& p, const StarWord& w) {
    if (p.ground_size() != w.size())
        throw DomainError("partition ground size must match word length");
    if (!is_noncrossing(p)) throw DomainError("kappa_pi requires a non-crossing partition");
    ExactScalar out = ExactScalar::one();
    for (const auto& block : p.blocks()) {
        const Label& label = w[block[0] - 1].label;
        std::vector<Exp> eps;
        eps.reserve(block.size());
        bool mixed = false;
        for (int e : block) {
            if (w[e - 1].label != label) { mixed = true; break; }
            eps.push_back(w[e - 1].exp);
        }
        if (mixed) return ExactScalar::zero();  // mixed free cumulants vanish
        out *= fam.spec(label).kappa(EpsilonPattern(std::move(eps)));
        if (out.is_zero()) return out;
    }
    return out;
}

// ---- moment -----------------------------------------------------------------

namespace {

/*
 * Backtracking sum over non-crossing partitions with label-constant blocks.
 * Structural pruning follows the spec kind of each block's label: it only
 * ever skips partitions whose cumulant product is guaranteed zero, so the
 * pruned sum equals the full moment-cumulant sum.
 */
class MomentSummer {
public:
    MomentSummer(const FreeFamily& fam, const StarWord& w) : fam_(fam), w_(w), k_(w.size()) {}

    ExactScalar run() {
        open_.reserve(static_cast<size_t>(k_));  // stable storage across recursion
        place(1);
        return sum_;
    }

private:
    struct OpenBlock {
        const CumulantSpec* spec;
        Label label;
        int min, max, size;
        Exp last_exp;
        std::vector<Exp> eps;
    };

    static bool closable(const OpenBlock& b) {
        switch (b.spec->kind()) {
            case CumulantSpec::Kind::HaarUnitary: return b.size % 2 == 0;
            case CumulantSpec::Kind::Circular:
            case CumulantSpec::Kind::Semicircular: return b.size == 2;
            case CumulantSpec::Kind::Custom: return true;
        }
        return true;
    }

    static int deficit(const OpenBlock& b) {
        switch (b.spec->kind()) {
            case CumulantSpec::Kind::HaarUnitary: return b.size % 2;
            case CumulantSpec::Kind::Circular:
            case CumulantSpec::Kind::Semicircular: return 2 - b.size;
            case CumulantSpec::Kind::Custom: return 0;
        }
        return 0;
    }

    bool may_extend(const OpenBlock& b, int e) const {
        const StarLetter& letter = w_[e - 1];
        if (b.label != letter.label) return false;
        switch (b.spec->kind()) {
            case CumulantSpec::Kind::HaarUnitary:
                if (letter.exp == b.last_exp) return false;
                break;
            case CumulantSpec::Kind::Circular:
                if (b.size >= 2 || letter.exp == b.last_exp) return false;
                break;
            case CumulantSpec::Kind::Semicircular:
                if (b.size >= 2) return false;
                break;
            case CumulantSpec::Kind::Custom:
                if (b.size >= b.spec->max_order()) return false;
                break;
        }
        for (const auto& o : open_)
            if (&o != &b && o.min < b.max && b.max < o.max) return false;  // crossing
        return true;
    }

    bool feasible(int e) const {
        int need = 0;
        for (const auto& b : open_) need += deficit(b);
        return need <= k_ - e;
    }

    void place(int e) {
        if (e > k_) {
            emit();
            return;
        }
        const StarLetter& letter = w_[e - 1];
        const size_t nopen = open_.size();
        for (size_t i = 0; i < nopen; ++i) {
            if (!may_extend(open_[i], e)) continue;
            const int old_max = open_[i].max;
            open_[i].max = e;
            open_[i].size += 1;
            open_[i].last_exp = letter.exp;
            open_[i].eps.push_back(letter.exp);
            if (feasible(e)) place(e + 1);
            open_[i].eps.pop_back();
            open_[i].size -= 1;
            open_[i].last_exp = open_[i].eps.back();
            open_[i].max = old_max;
        }
        open_.push_back({&fam_.spec(letter.label), letter.label, e, e, 1, letter.exp, {letter.exp}});
        if (feasible(e)) place(e + 1);
        open_.pop_back();
    }

    void emit() {
        ExactScalar prod = ExactScalar::one();
        for (const auto& b : open_) {
            if (!closable(b)) return;
            prod *= b.spec->kappa(EpsilonPattern(b.eps));
            if (prod.is_zero()) return;
        }
        sum_ += prod;
    }

    const FreeFamily& fam_;
    const StarWord& w_;
    const int k_;
    std::vector<OpenBlock> open_;
    ExactScalar sum_;
};

}  // namespace

ExactScalar moment(const FreeFamily& fam, const StarWord& w, const Caps& caps, MomentCache* cache) {
    if (w.size() < 1) throw DomainError("moment of an empty word");
    if (w.size() > caps.moment_word_cap)
        throw SizeGuardError("word length " + std::to_string(w.size()) +
                             " exceeds moment_word_cap = " + std::to_string(caps.moment_word_cap));
    std::string key;
    if (cache) {
        key = w.key();
        auto it = cache->values.find(key);
        if (it != cache->values.end()) return it->second;
    }
    // CUSTOM truncation is a hard error whenever the full-label block would be
    // queried past max_order; mixed blocks never query the spec.
    std::map<Label, int> counts;
    for (const auto& l : w.letters()) counts[l.label] += 1;
    for (const auto& [label, count] : counts) {
        const CumulantSpec& spec = fam.spec(label);
        if (spec.kind() == CumulantSpec::Kind::Custom && count > spec.max_order())
            throw TruncationError("moment would query custom spec of label '" + label +
                                  "' at order " + std::to_string(count) + " beyond max_order = " +
                                  std::to_string(spec.max_order()));
    }
    ExactScalar value = MomentSummer(fam, w).run();
    if (cache) cache->values.emplace(std::move(key), value);
    return value;
}

// ---- Moebius inversion ------------------------------------------------------

ExactScalar cumulant_from_moments(const std::function<ExactScalar(const StarWord&)>& oracle,
                                  const StarWord& w, const Caps& caps) {
    const int k = w.size();
    if (k < 1) throw DomainError("cumulant of an empty word");
    if (k > caps.moment_word_cap)
        throw SizeGuardError("word length " + std::to_string(k) +
                             " exceeds moment_word_cap = " + std::to_string(caps.moment_word_cap));
    const auto& lattice = nc_lattice(k, caps);
    const auto& mu_col = moebius_to_top(k);
    std::unordered_map<std::string, ExactScalar> memo;
    ExactScalar out;
    for (size_t idx = 0; idx < lattice.size(); ++idx) {
        ExactScalar prod(Rational(mu_col[idx]));
        for (const auto& block : lattice[idx].blocks()) {
            std::vector<StarLetter> sub;
            sub.reserve(block.size());
            for (int e : block) sub.push_back(w[e - 1]);
            StarWord subword(std::move(sub));
            std::string key = subword.key();
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(std::move(key), oracle(subword)).first;
            prod *= it->second;
            if (prod.is_zero()) break;
        }
        out += prod;
    }
    return out;
}

// ---- R-diagonality ----------------------------------------------------------

bool is_r_diagonal(const CumulantSpec& spec, int order) {
    if (order < 2 || order % 2 != 0) throw DomainError("R-diagonality order must be positive and even");
    if (spec.kind() == CumulantSpec::Kind::Custom && order > spec.max_order())
        throw TruncationError("R-diagonality check at order " + std::to_string(order) +
                              " beyond max_order = " + std::to_string(spec.max_order()));
    for (int len = 1; len <= order; ++len) {
        std::vector<Exp> pat(static_cast<size_t>(len), Exp::One);
        for (long mask = 0; mask < (1L << len); ++mask) {
            for (int i = 0; i < len; ++i)
                pat[static_cast<size_t>(i)] = (mask >> i) & 1 ? Exp::Star : Exp::One;
            EpsilonPattern pattern{pat};
            if (len % 2 == 0 && is_alternating(pattern)) continue;
            if (!spec.kappa(pattern).is_zero()) return false;
        }
    }
    return true;
}

// ---- free complexification ---------------------------------------------------

ExactScalar complexified_moment(const FreeFamily& fam, const StarWord& w, const Caps& caps) {
    if (2 * w.size() > caps.moment_word_cap)
        throw SizeGuardError("complexified word length " + std::to_string(2 * w.size()) +
                             " exceeds moment_word_cap = " + std::to_string(caps.moment_word_cap));
    Label z = "z";
    while (fam.has(z)) z += "#";
    FreeFamily extended = fam;
    extended.with(z, CumulantSpec::haar_unitary());
    StarWord rewritten;
    for (const auto& l : w.letters()) {
        if (l.exp == Exp::One) {
            rewritten.append(z, Exp::One);
            rewritten.append(l.label, Exp::One);
        } else {
            rewritten.append(l.label, Exp::Star);
            rewritten.append(z, Exp::Star);
        }
    }
    return moment(extended, rewritten, caps);
}

bool epsilon_support_check(const FreeFamily& fam, const StarWord& w, const Partition& p) {
    int order = w.size() + (w.size() % 2);
    for (const auto& [label, spec] : fam.specs())
        if (!is_r_diagonal(spec, order)) throw DomainError("epsilon_support_check requires an R-diagonal family");
    if (in_class(p, PartitionClass::nc_eps(w.eps_pattern()))) return true;
    return kappa_pi(fam, p, w).is_zero();
}

}  // namespace freeprob
