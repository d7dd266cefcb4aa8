#pragma once

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "freeprob/caps.hpp"
#include "freeprob/partition.hpp"
#include "freeprob/rational.hpp"

namespace freeprob {

using Label = std::string;

/// One letter of a star-word: a variable label with exponent 1 or *.
struct StarLetter {
    Label label;
    Exp exp = Exp::One;

    bool operator==(const StarLetter&) const = default;
    auto operator<=>(const StarLetter&) const = default;
};

/// A word in the variables and their adjoints.
class StarWord {
public:
    StarWord() = default;
    explicit StarWord(std::vector<StarLetter> letters) : letters_(std::move(letters)) {}

    static StarWord parse(const std::string& compact);  // "z1 z2* z1"

    int size() const { return static_cast<int>(letters_.size()); }
    const StarLetter& operator[](int pos) const { return letters_[static_cast<size_t>(pos)]; }
    const std::vector<StarLetter>& letters() const { return letters_; }

    void append(Label label, Exp exp) { letters_.push_back({std::move(label), exp}); }

    /// (w_1 ... w_k)^* = w_k^* ... w_1^*.
    StarWord adjoint() const;
    /// Cyclic left rotation by r letters.
    StarWord rotated(int r) const;

    EpsilonPattern eps_pattern() const;
    /// Stable cache/map key.
    std::string key() const;
    std::string str() const;

    bool operator==(const StarWord&) const = default;
    auto operator<=>(const StarWord&) const = default;

private:
    std::vector<StarLetter> letters_;
};

/*
 * The free cumulant function of a single variable. Named kinds carry their
 * closed-form cumulants; CUSTOM kinds carry a finite table truncated at
 * max_order, and queries past the truncation are hard errors (silent zeros
 * would corrupt Moebius inversion).
 */
class CumulantSpec {
public:
    enum class Kind { HaarUnitary, Circular, Semicircular, Custom };

    static CumulantSpec haar_unitary() { return CumulantSpec(Kind::HaarUnitary); }
    static CumulantSpec circular() { return CumulantSpec(Kind::Circular); }
    static CumulantSpec semicircular() { return CumulantSpec(Kind::Semicircular); }
    static CumulantSpec custom(std::map<std::string, ExactScalar> table, int max_order);

    Kind kind() const { return kind_; }
    int max_order() const { return max_order_; }
    const std::map<std::string, ExactScalar>& table() const { return table_; }

    /// kappa on the exponent pattern; TruncationError past max_order (CUSTOM).
    ExactScalar kappa(const EpsilonPattern& pattern) const;

    bool operator==(const CumulantSpec&) const = default;

private:
    explicit CumulantSpec(Kind k) : kind_(k) {}
    Kind kind_;
    int max_order_ = 0;  // 0 = unbounded (named kinds)
    std::map<std::string, ExactScalar> table_;
};

/// A *-free family: every label carries its single-variable cumulant spec.
class FreeFamily {
public:
    FreeFamily() = default;

    FreeFamily& with(Label label, CumulantSpec spec);
    const CumulantSpec& spec(const Label& label) const;
    bool has(const Label& label) const { return specs_.count(label) > 0; }
    std::vector<Label> alphabet() const;
    const std::map<Label, CumulantSpec>& specs() const { return specs_; }

    /// All labels share one spec (joint distribution is exchangeable).
    bool identically_distributed() const;

private:
    std::map<Label, CumulantSpec> specs_;
};

/// Shared memo for moment evaluations; key is the star-word key.
/// Only valid for the family it was populated with.
struct MomentCache {
    std::unordered_map<std::string, ExactScalar> values;
};

/// kappa_pi: product over blocks of single-variable cumulants; zero as soon
/// as a block mixes labels (mixed free cumulants vanish).
ExactScalar kappa_pi(const FreeFamily& fam, const Partition& p, const StarWord& w);

/// phi(w) = sum over non-crossing partitions of kappa_pi. Pruned to
/// label-constant blocks with nonvanishing spec support.
ExactScalar moment(const FreeFamily& fam, const StarWord& w,
                   const Caps& caps = Caps::defaults(), MomentCache* cache = nullptr);

/// Moebius inversion: kappa(w) = sum_sigma mu(sigma, 1) * phi_sigma(w), with
/// phi_sigma the block product of oracle moments.
ExactScalar cumulant_from_moments(const std::function<ExactScalar(const StarWord&)>& oracle,
                                  const StarWord& w, const Caps& caps = Caps::defaults());

/// All cumulants up to `order` vanish except alternating even ones.
bool is_r_diagonal(const CumulantSpec& spec, int order);

/// Adjoins a fresh Haar unitary z, rewrites x -> z x and x* -> x* z*, and
/// evaluates the moment in the extended family.
ExactScalar complexified_moment(const FreeFamily& fam, const StarWord& w,
                                const Caps& caps = Caps::defaults());

/// Test harness for the support lemma: on an R-diagonal family, kappa_pi
/// must vanish off the eps-class of w's exponent pattern.
bool epsilon_support_check(const FreeFamily& fam, const StarWord& w, const Partition& p);

}  // namespace freeprob
