#include "freeprob/partition.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "freeprob/errors.hpp"

namespace freeprob {

// ---- EpsilonPattern --------------------------------------------------------

EpsilonPattern::EpsilonPattern(std::vector<Exp> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw DomainError("epsilon pattern must be non-empty");
}

EpsilonPattern::EpsilonPattern(std::string_view s) {
    letters_.reserve(s.size());
    for (char c : s) {
        if (c == '1') letters_.push_back(Exp::One);
        else if (c == '*') letters_.push_back(Exp::Star);
        else throw DomainError(std::string("epsilon pattern letter must be '1' or '*', got '") + c + "'");
    }
    if (letters_.empty()) throw DomainError("epsilon pattern must be non-empty");
}

EpsilonPattern EpsilonPattern::alternating(int length, bool star_first) {
    if (length < 1) throw DomainError("alternating pattern needs positive length");
    std::vector<Exp> v(static_cast<size_t>(length));
    for (int i = 0; i < length; ++i)
        v[static_cast<size_t>(i)] = ((i % 2 == 0) != star_first) ? Exp::One : Exp::Star;
    return EpsilonPattern(std::move(v));
}

std::string EpsilonPattern::str() const {
    std::string s;
    s.reserve(letters_.size());
    for (Exp e : letters_) s += (e == Exp::One ? '1' : '*');
    return s;
}

// ---- Partition -------------------------------------------------------------

namespace {

// Canonical growth string: relabel arbitrary ids by first appearance.
std::vector<int> canonicalize_ids(const std::vector<int>& raw) {
    std::vector<int> out(raw.size());
    std::unordered_map<int, int> remap;
    int next = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = remap.emplace(raw[i], next);
        if (inserted) ++next;
        out[i] = it->second;
    }
    return out;
}

std::vector<std::vector<int>> blocks_from_ids(const std::vector<int>& ids, int nblocks) {
    std::vector<std::vector<int>> blocks(static_cast<size_t>(nblocks));
    for (size_t i = 0; i < ids.size(); ++i)
        blocks[static_cast<size_t>(ids[i])].push_back(static_cast<int>(i) + 1);
    return blocks;
}

}  // namespace

Partition::Partition(int ground_size, std::vector<std::vector<int>> blocks) {
    if (ground_size < 1) throw DomainError("partition ground size must be positive");
    std::vector<int> raw(static_cast<size_t>(ground_size), -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw DomainError("partition blocks must be non-empty");
        for (int e : blocks[b]) {
            if (e < 1 || e > ground_size)
                throw DomainError("partition element out of range: " + std::to_string(e));
            if (raw[static_cast<size_t>(e - 1)] != -1)
                throw DomainError("partition blocks must be disjoint");
            raw[static_cast<size_t>(e - 1)] = static_cast<int>(b);
        }
    }
    for (int id : raw)
        if (id == -1) throw DomainError("partition blocks must cover the ground set");
    ids_ = canonicalize_ids(raw);
    nblocks_ = *std::max_element(ids_.begin(), ids_.end()) + 1;
    blocks_ = blocks_from_ids(ids_, nblocks_);
}

Partition Partition::from_block_ids(const std::vector<int>& ids) {
    if (ids.empty()) throw DomainError("partition ground size must be positive");
    Partition p;
    p.ids_ = canonicalize_ids(ids);
    p.nblocks_ = *std::max_element(p.ids_.begin(), p.ids_.end()) + 1;
    p.blocks_ = blocks_from_ids(p.ids_, p.nblocks_);
    return p;
}

Partition Partition::singletons(int k) {
    std::vector<int> ids(static_cast<size_t>(k));
    std::iota(ids.begin(), ids.end(), 0);
    return from_block_ids(ids);
}

Partition Partition::full(int k) {
    return from_block_ids(std::vector<int>(static_cast<size_t>(k), 0));
}

std::string Partition::str() const {
    std::string s = "{";
    for (size_t b = 0; b < blocks_.size(); ++b) {
        s += b ? ",{" : "{";
        for (size_t i = 0; i < blocks_[b].size(); ++i) {
            if (i) s += ",";
            s += std::to_string(blocks_[b][i]);
        }
        s += "}";
    }
    return s + "}";
}

size_t PartitionHash::operator()(const Partition& p) const {
    size_t h = 1469598103934665603ull;
    for (int v : p.ids()) {
        h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

bool PartitionClass::restricts_to_noncrossing() const {
    switch (tag_) {
        case Tag::NonCrossing:
        case Tag::NcPairing:
        case Tag::NcEven:
        case Tag::NcEps:
            return true;
        default:
            return false;
    }
}

// ---- predicates ------------------------------------------------------------

bool is_noncrossing(const Partition& p) {
    const int k = p.ground_size();
    const auto& ids = p.ids();
    std::vector<int> first(static_cast<size_t>(p.block_count()), 0);
    std::vector<int> last(static_cast<size_t>(p.block_count()), 0);
    for (int e = k; e >= 1; --e) first[static_cast<size_t>(ids[static_cast<size_t>(e - 1)])] = e;
    for (int e = 1; e <= k; ++e) last[static_cast<size_t>(ids[static_cast<size_t>(e - 1)])] = e;
    std::vector<int> stack;
    for (int e = 1; e <= k; ++e) {
        int b = ids[static_cast<size_t>(e - 1)];
        if (first[static_cast<size_t>(b)] == e) {
            stack.push_back(b);
        } else if (stack.empty() || stack.back() != b) {
            return false;
        }
        if (last[static_cast<size_t>(b)] == e) stack.pop_back();
    }
    return true;
}

bool is_pairing(const Partition& p) {
    for (const auto& b : p.blocks())
        if (b.size() != 2) return false;
    return true;
}

bool is_even(const Partition& p) {
    for (const auto& b : p.blocks())
        if (b.size() % 2 != 0) return false;
    return true;
}

bool alternates_on_blocks(const Partition& p, const EpsilonPattern& eps) {
    if (eps.size() != p.ground_size())
        throw DomainError("epsilon pattern length must match ground size");
    for (const auto& b : p.blocks())
        for (size_t i = 1; i < b.size(); ++i)
            if (eps[b[i] - 1] == eps[b[i - 1] - 1]) return false;
    return true;
}

bool in_class(const Partition& p, const PartitionClass& cls) {
    using Tag = PartitionClass::Tag;
    switch (cls.tag()) {
        case Tag::All: return true;
        case Tag::NonCrossing: return is_noncrossing(p);
        case Tag::Pairing: return is_pairing(p);
        case Tag::NcPairing: return is_pairing(p) && is_noncrossing(p);
        case Tag::Even: return is_even(p);
        case Tag::NcEven: return is_even(p) && is_noncrossing(p);
        case Tag::Eps: return is_even(p) && alternates_on_blocks(p, cls.pattern());
        case Tag::NcEps:
            return is_even(p) && alternates_on_blocks(p, cls.pattern()) && is_noncrossing(p);
    }
    return false;
}

// ---- lattice operations ----------------------------------------------------

namespace {
void require_same_ground(const Partition& p, const Partition& q) {
    if (p.ground_size() != q.ground_size())
        throw DomainError("partitions have mismatched ground sizes: " +
                          std::to_string(p.ground_size()) + " vs " +
                          std::to_string(q.ground_size()));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};
}  // namespace

bool leq(const Partition& p, const Partition& q) {
    require_same_ground(p, q);
    const auto& qid = q.ids();
    for (const auto& block : p.blocks()) {
        int want = qid[static_cast<size_t>(block[0] - 1)];
        for (size_t i = 1; i < block.size(); ++i)
            if (qid[static_cast<size_t>(block[i] - 1)] != want) return false;
    }
    return true;
}

Partition join_full(const Partition& p, const Partition& q) {
    require_same_ground(p, q);
    const int k = p.ground_size();
    UnionFind uf(k);
    for (const auto& part : {p.blocks(), q.blocks()})
        for (const auto& block : part)
            for (size_t i = 1; i < block.size(); ++i) uf.unite(block[i] - 1, block[0] - 1);
    std::vector<int> ids(static_cast<size_t>(k));
    for (int e = 0; e < k; ++e) ids[static_cast<size_t>(e)] = uf.find(e);
    return Partition::from_block_ids(ids);
}

Partition meet(const Partition& p, const Partition& q) {
    require_same_ground(p, q);
    std::vector<std::pair<int, int>> pairs(static_cast<size_t>(p.ground_size()));
    for (int e = 0; e < p.ground_size(); ++e)
        pairs[static_cast<size_t>(e)] = {p.ids()[static_cast<size_t>(e)], q.ids()[static_cast<size_t>(e)]};
    return kernel(pairs);
}

namespace {
// Two blocks interleave iff one has elements on both sides of a gap of the
// other; on sorted blocks this reduces to the classic s1 < t1 < s2 < t2 scan.
bool blocks_cross(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0;
    int seen = 0;       // 0 = nothing, 1 = run from a, 2 = run from b
    int switches = 0;   // crossings show up as >= 3 alternations
    while (i < a.size() || j < b.size()) {
        int take;
        if (i == a.size()) take = 2;
        else if (j == b.size()) take = 1;
        else take = a[i] < b[j] ? 1 : 2;
        if (take != seen) {
            seen = take;
            ++switches;
            if (switches >= 4) return true;
        }
        if (take == 1) ++i; else ++j;
    }
    return false;
}
}  // namespace

Partition join_nc(const Partition& p, const Partition& q) {
    if (!is_noncrossing(p) || !is_noncrossing(q))
        throw DomainError("join_nc requires non-crossing inputs");
    Partition j = join_full(p, q);
    // Merge crossing block pairs until the fixpoint; each merge is forced in
    // any non-crossing upper bound, so the fixpoint is the least one.
    for (;;) {
        bool merged = false;
        const auto& blocks = j.blocks();
        for (size_t a = 0; a + 1 < blocks.size() && !merged; ++a) {
            for (size_t b = a + 1; b < blocks.size() && !merged; ++b) {
                if (!blocks_cross(blocks[a], blocks[b])) continue;
                std::vector<int> ids = j.ids();
                for (int& id : ids)
                    if (id == static_cast<int>(b)) id = static_cast<int>(a);
                j = Partition::from_block_ids(ids);
                merged = true;
            }
        }
        if (!merged) return j;
    }
}

// ---- enumeration -----------------------------------------------------------

namespace {

enum class BlockSizeMode { Any, Pair, Even };

struct EnumSpec {
    bool noncrossing = false;
    BlockSizeMode size_mode = BlockSizeMode::Any;
    const EpsilonPattern* eps = nullptr;  // alternation constraint per block
};

struct OpenBlock {
    int min = 0;
    int max = 0;
    int size = 0;
    Exp last_exp = Exp::One;
};

class Enumerator {
public:
    Enumerator(int k, EnumSpec spec, std::vector<Partition>& out)
        : k_(k), spec_(spec), out_(out), ids_(static_cast<size_t>(k)) {}

    void run() {
        open_.reserve(static_cast<size_t>(k_));  // stable storage across recursion
        place(1);
    }

private:
    bool feasible_after(int e) const {
        const int remaining = k_ - e;
        int deficit = 0;  // blocks that cannot be closed as they stand
        switch (spec_.size_mode) {
            case BlockSizeMode::Any:
                return true;
            case BlockSizeMode::Pair:
                for (const auto& b : open_) deficit += (b.size == 1);
                break;
            case BlockSizeMode::Even:
                for (const auto& b : open_) deficit += (b.size % 2);
                break;
        }
        return deficit <= remaining && (remaining - deficit) % 2 == 0;
    }

    bool may_extend(const OpenBlock& b, int e) const {
        if (spec_.size_mode == BlockSizeMode::Pair && b.size >= 2) return false;
        if (spec_.eps && (*spec_.eps)[e - 1] == b.last_exp) return false;
        if (spec_.noncrossing) {
            // Adding e to b creates the covering pair (b.max, e); any other
            // block straddling b.max would interleave with it.
            for (const auto& w : open_)
                if (&w != &b && w.min < b.max && b.max < w.max) return false;
        }
        return true;
    }

    void place(int e) {
        if (e > k_) {
            emit();
            return;
        }
        const int nopen = static_cast<int>(open_.size());
        for (int b = 0; b < nopen; ++b) {
            if (!may_extend(open_[static_cast<size_t>(b)], e)) continue;
            OpenBlock saved = open_[static_cast<size_t>(b)];
            auto& blk = open_[static_cast<size_t>(b)];
            blk.max = e;
            blk.size += 1;
            if (spec_.eps) blk.last_exp = (*spec_.eps)[e - 1];
            ids_[static_cast<size_t>(e - 1)] = b;
            if (feasible_after(e)) place(e + 1);
            open_[static_cast<size_t>(b)] = saved;
        }
        OpenBlock fresh{e, e, 1, spec_.eps ? (*spec_.eps)[e - 1] : Exp::One};
        open_.push_back(fresh);
        ids_[static_cast<size_t>(e - 1)] = nopen;
        if (feasible_after(e)) place(e + 1);
        open_.pop_back();
    }

    void emit() {
        for (const auto& b : open_) {
            if (spec_.size_mode == BlockSizeMode::Pair && b.size != 2) return;
            if (spec_.size_mode == BlockSizeMode::Even && b.size % 2 != 0) return;
        }
        out_.push_back(Partition::from_block_ids(ids_));
    }

    const int k_;
    const EnumSpec spec_;
    std::vector<Partition>& out_;
    std::vector<int> ids_;
    std::vector<OpenBlock> open_;
};

}  // namespace

std::vector<Partition> enumerate_partitions(int k, const PartitionClass& cls, const Caps& caps) {
    if (k < 1) throw DomainError("enumeration ground size must be positive");
    if (k > caps.enumeration_cap)
        throw SizeGuardError("enumeration ground size " + std::to_string(k) +
                             " exceeds enumeration_cap = " + std::to_string(caps.enumeration_cap));
    using Tag = PartitionClass::Tag;
    EnumSpec spec;
    spec.noncrossing = cls.restricts_to_noncrossing();
    switch (cls.tag()) {
        case Tag::Pairing:
        case Tag::NcPairing:
            spec.size_mode = BlockSizeMode::Pair;
            break;
        case Tag::Even:
        case Tag::NcEven:
            spec.size_mode = BlockSizeMode::Even;
            break;
        case Tag::Eps:
        case Tag::NcEps:
            spec.size_mode = BlockSizeMode::Even;
            spec.eps = &cls.pattern();
            if (cls.pattern().size() != k)
                throw DomainError("epsilon pattern length must equal ground size");
            break;
        default:
            break;
    }
    std::vector<Partition> out;
    Enumerator(k, spec, out).run();
    return out;
}

const std::vector<Partition>& nc_lattice(int k, const Caps& caps) {
    static std::mutex mu;
    static std::map<int, std::vector<Partition>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it == cache.end())
        it = cache.emplace(k, enumerate_partitions(k, PartitionClass::noncrossing(), caps)).first;
    return it->second;
}

// ---- Moebius ---------------------------------------------------------------

std::vector<std::pair<Partition, BigInt>> moebius_interval(const Partition& s, const Partition& p) {
    require_same_ground(s, p);
    if (!is_noncrossing(s) || !is_noncrossing(p))
        throw DomainError("moebius_nc requires non-crossing arguments");
    if (!leq(s, p)) throw DomainError("moebius_nc requires s <= p");

    const auto& all = nc_lattice(s.ground_size());
    std::vector<const Partition*> interval;
    for (const auto& t : all)
        if (leq(s, t) && leq(t, p)) interval.push_back(&t);
    // Finer partitions first: a linear extension since t' < t forces |t'| > |t|.
    std::stable_sort(interval.begin(), interval.end(),
                     [](const Partition* a, const Partition* b) {
                         return a->block_count() > b->block_count();
                     });
    // mu(s, s) = 1, mu(s, t) = -sum_{s <= t' < t} mu(s, t').
    std::vector<BigInt> mu(interval.size());
    std::vector<std::pair<Partition, BigInt>> out;
    out.reserve(interval.size());
    for (size_t i = 0; i < interval.size(); ++i) {
        if (*interval[i] == s) {
            mu[i] = 1;
        } else {
            BigInt acc(0);
            for (size_t j = 0; j < i; ++j)
                if (interval[j]->block_count() > interval[i]->block_count() &&
                    leq(*interval[j], *interval[i]))
                    acc += mu[j];
            mu[i] = -acc;
        }
        out.emplace_back(*interval[i], mu[i]);
    }
    return out;
}

BigInt moebius_nc(const Partition& s, const Partition& p) {
    return moebius_interval(s, p).back().second;  // p is the coarsest element
}

const std::vector<BigInt>& moebius_to_top(int k) {
    static std::mutex mu_lock;
    static std::map<int, std::vector<BigInt>> cache;
    std::lock_guard<std::mutex> lock(mu_lock);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;

    const auto& all = nc_lattice(k);
    // Dual recursion for the column: mu(1,1) = 1 and
    // mu(sigma, 1) = -sum_{sigma < t <= 1} mu(t, 1); coarser entries first.
    std::vector<size_t> order(all.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return all[a].block_count() < all[b].block_count();
    });
    std::vector<BigInt> col(all.size());
    std::vector<BigInt> tmp(all.size());
    for (size_t pos = 0; pos < order.size(); ++pos) {
        const Partition& sigma = all[order[pos]];
        if (sigma.block_count() == 1) {
            tmp[pos] = 1;
        } else {
            BigInt acc(0);
            for (size_t q = 0; q < pos; ++q)
                if (all[order[q]].block_count() < sigma.block_count() &&
                    leq(sigma, all[order[q]]))
                    acc += tmp[q];
            tmp[pos] = -acc;
        }
        col[order[pos]] = tmp[pos];
    }
    return cache.emplace(k, std::move(col)).first->second;
}

// ---- counting --------------------------------------------------------------

EpsilonPattern epsilon_d(int d, int m) {
    if (d < 1 || m < 1) throw DomainError("epsilon_d requires d, m >= 1");
    std::vector<Exp> v;
    v.reserve(static_cast<size_t>(2 * d * m));
    for (int g = 0; g < 2 * m; ++g)
        for (int i = 0; i < d; ++i) v.push_back(g % 2 == 0 ? Exp::One : Exp::Star);
    return EpsilonPattern(std::move(v));
}

BigInt catalan(int k) {
    if (k < 0) throw DomainError("catalan index must be non-negative");
    if (k == 0) return BigInt(1);
    BigInt b = binomial(static_cast<unsigned long>(2 * k), static_cast<unsigned long>(k - 1));
    BigInt out;
    mpz_divexact_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k));
    return out;
}

BigInt count_chains(int m, int d) {
    if (m < 1 || d < 1) throw DomainError("count_chains requires m, d >= 1");
    BigInt b = binomial(static_cast<unsigned long>(m) * static_cast<unsigned long>(d + 1),
                        static_cast<unsigned long>(m - 1));
    BigInt out;
    mpz_divexact_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(m));
    return out;
}

bool pair_to_chain_count_check(int d, int m, const Caps& caps) {
    const int k = 2 * d * m;
    auto eps = epsilon_d(d, m);
    auto parts = enumerate_partitions(k, PartitionClass::nc_eps(eps), caps);
    BigInt pairings(0);
    for (const auto& p : parts)
        if (is_pairing(p)) ++pairings;
    return pairings == count_chains(m, d);
}

}  // namespace freeprob
