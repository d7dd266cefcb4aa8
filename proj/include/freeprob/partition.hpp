#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "freeprob/caps.hpp"
#include "freeprob/rational.hpp"

namespace freeprob {

/// Exponent alphabet for star-words and epsilon patterns.
enum class Exp : std::uint8_t { One = 0, Star = 1 };

inline Exp flip(Exp e) { return e == Exp::One ? Exp::Star : Exp::One; }

/// A word over {1, *}: the exponent pattern of a star-monomial.
class EpsilonPattern {
public:
    EpsilonPattern() = default;
    explicit EpsilonPattern(std::vector<Exp> letters);
    /// Parses a string over {'1', '*'}.
    explicit EpsilonPattern(std::string_view s);

    /// (1,*,1,*,...) of the given length, or (*,1,*,1,...) when star_first.
    static EpsilonPattern alternating(int length, bool star_first = false);

    int size() const { return static_cast<int>(letters_.size()); }
    Exp operator[](int pos) const { return letters_[static_cast<size_t>(pos)]; }
    const std::vector<Exp>& letters() const { return letters_; }
    std::string str() const;

    bool operator==(const EpsilonPattern&) const = default;
    auto operator<=>(const EpsilonPattern&) const = default;

private:
    std::vector<Exp> letters_;
};

/*
 * A set partition of [k] = {1,...,k} in canonical form: blocks are disjoint,
 * ascending, cover [k], and are ordered by minimum element. Equality and the
 * enumeration order are both defined on the canonical form; the restricted
 * growth string (block id of each element, ids by first appearance) is kept
 * alongside as the comparison and hashing key.
 */
class Partition {
public:
    Partition() = default;

    /// From explicit blocks; validates and canonicalizes. 1-based elements.
    Partition(int ground_size, std::vector<std::vector<int>> blocks);

    /// From a restricted-growth-style id vector (ids[e-1] = block of element e,
    /// arbitrary labels); canonicalizes.
    static Partition from_block_ids(const std::vector<int>& ids);

    static Partition singletons(int k);  // 0_k
    static Partition full(int k);        // 1_k

    int ground_size() const { return static_cast<int>(ids_.size()); }
    int block_count() const { return nblocks_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    /// Canonical block ids, 0-based: ids()[e-1] is the block of element e.
    const std::vector<int>& ids() const { return ids_; }

    bool operator==(const Partition& o) const { return ids_ == o.ids_; }
    /// Lexicographic order on the growth string: the enumeration order.
    auto operator<=>(const Partition& o) const { return ids_ <=> o.ids_; }

    std::string str() const;  // {{1,4},{2,3}}

private:
    std::vector<int> ids_;
    std::vector<std::vector<int>> blocks_;
    int nblocks_ = 0;
};

struct PartitionHash {
    size_t operator()(const Partition& p) const;
};

/// Partition families that can be enumerated and tested for membership.
class PartitionClass {
public:
    enum class Tag { All, NonCrossing, Pairing, NcPairing, Even, NcEven, Eps, NcEps };

    static PartitionClass all() { return PartitionClass(Tag::All); }
    static PartitionClass noncrossing() { return PartitionClass(Tag::NonCrossing); }
    static PartitionClass pairing() { return PartitionClass(Tag::Pairing); }
    static PartitionClass nc_pairing() { return PartitionClass(Tag::NcPairing); }
    static PartitionClass even() { return PartitionClass(Tag::Even); }
    static PartitionClass nc_even() { return PartitionClass(Tag::NcEven); }
    static PartitionClass eps(EpsilonPattern p) { return PartitionClass(Tag::Eps, std::move(p)); }
    static PartitionClass nc_eps(EpsilonPattern p) { return PartitionClass(Tag::NcEps, std::move(p)); }

    Tag tag() const { return tag_; }
    const EpsilonPattern& pattern() const { return pattern_; }
    bool restricts_to_noncrossing() const;

private:
    explicit PartitionClass(Tag t, EpsilonPattern p = {}) : tag_(t), pattern_(std::move(p)) {}
    Tag tag_;
    EpsilonPattern pattern_;
};

// ---- predicates -----------------------------------------------------------

bool is_noncrossing(const Partition& p);
bool is_pairing(const Partition& p);
bool is_even(const Partition& p);
/// Every block's restriction of eps alternates (1,*,1,*,...) or (*,1,...).
bool alternates_on_blocks(const Partition& p, const EpsilonPattern& eps);
bool in_class(const Partition& p, const PartitionClass& cls);

// ---- lattice operations ---------------------------------------------------

/// ker i: s ~ t iff i(s) = i(t).
template <typename T>
Partition kernel(const std::vector<T>& index) {
    std::vector<int> ids;
    ids.reserve(index.size());
    std::vector<T> seen;
    for (const T& v : index) {
        int id = -1;
        for (size_t j = 0; j < seen.size(); ++j)
            if (seen[j] == v) { id = static_cast<int>(j); break; }
        if (id < 0) {
            id = static_cast<int>(seen.size());
            seen.push_back(v);
        }
        ids.push_back(id);
    }
    return Partition::from_block_ids(ids);
}

/// p <= q: every block of p lies inside a block of q. Equal ground sizes.
bool leq(const Partition& p, const Partition& q);

/// Least upper bound in the full partition lattice (union-find closure).
Partition join_full(const Partition& p, const Partition& q);

/// Least upper bound in NC(k): the full join with crossing blocks merged to a
/// fixpoint. Both inputs must be non-crossing.
Partition join_nc(const Partition& p, const Partition& q);

/// Greatest lower bound (common refinement); the same in P(k) and NC(k).
Partition meet(const Partition& p, const Partition& q);

/// Moebius function of NC(k) on the interval [s, p]; requires s <= p,
/// both non-crossing. Memoized interval recursion.
BigInt moebius_nc(const Partition& s, const Partition& p);

/// One pass over the interval [s, p]: every (t, mu(s, t)) for s <= t <= p,
/// finest t first. The last entry is (p, mu(s, p)).
std::vector<std::pair<Partition, BigInt>> moebius_interval(const Partition& s,
                                                           const Partition& p);

/// mu(sigma, 1_k) for every sigma in NC(k), aligned with nc_lattice(k).
/// Cached per k (the column drives Moebius inversion of moments).
const std::vector<BigInt>& moebius_to_top(int k);

// ---- enumeration and counting ---------------------------------------------

/// All partitions of [k] in the class, canonical forms, ordered
/// lexicographically by growth string. Guarded by caps.enumeration_cap.
std::vector<Partition> enumerate_partitions(int k, const PartitionClass& cls,
                                            const Caps& caps = Caps::defaults());

/// The exponent pattern of ((x...x)(x...x)^*)^m: 2m groups of d equal
/// exponents, alternating 1-group / *-group.
EpsilonPattern epsilon_d(int d, int m);

/// Catalan number C_k = |NC(k)|.
BigInt catalan(int k);

/// Fuss-Catalan count of d-chains in NC(m): (1/m) binom(m(d+1), m-1).
BigInt count_chains(int m, int d);

/// Checks |non-crossing eps_d pairings of [2dm]| == count_chains(m, d)
/// by enumeration.
bool pair_to_chain_count_check(int d, int m, const Caps& caps = Caps::defaults());

/// Shared, lazily built enumeration of NC(k) (used by Moebius recursion and
/// the cumulant engines). Do not mutate.
const std::vector<Partition>& nc_lattice(int k, const Caps& caps = Caps::defaults());

}  // namespace freeprob
