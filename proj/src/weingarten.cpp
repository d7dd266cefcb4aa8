#include "freeprob/weingarten.hpp"

#include <map>
#include <mutex>

#include "freeprob/errors.hpp"

namespace freeprob {

GramMatrix gram(int n, int k, const Caps& caps) {
    if (n < 1 || k < 1) throw DomainError("gram requires n, k >= 1");
    if (2 * k > caps.weingarten_cap)
        throw SizeGuardError("2k = " + std::to_string(2 * k) + " exceeds weingarten_cap = " +
                             std::to_string(caps.weingarten_cap));
    GramMatrix g;
    g.n = n;
    g.k = k;
    g.basis = enumerate_partitions(2 * k, PartitionClass::nc_even(), caps);
    const size_t dim = g.basis.size();
    g.entries.assign(dim, std::vector<BigInt>(dim));
    BigInt nz(n);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = r; c < dim; ++c) {
            Partition join = join_full(g.basis[r], g.basis[c]);
            BigInt e;
            mpz_pow_ui(e.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(join.block_count()));
            g.entries[r][c] = e;
            g.entries[c][r] = std::move(e);
        }
    }
    return g;
}

namespace {

// Gauss-Jordan with the first nonzero pivot in basis order; exact rationals.
// Returns false when the matrix is singular.
bool invert_rational(std::vector<std::vector<Rational>> a, std::vector<std::vector<Rational>>& out) {
    const size_t dim = a.size();
    out.assign(dim, std::vector<Rational>(dim, Rational(0)));
    for (size_t i = 0; i < dim; ++i) out[i][i] = 1;
    for (size_t col = 0; col < dim; ++col) {
        size_t pivot = col;
        while (pivot < dim && sgn(a[pivot][col]) == 0) ++pivot;
        if (pivot == dim) return false;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(out[pivot], out[col]);
        }
        Rational inv_p(1 / a[col][col]);
        for (size_t c = 0; c < dim; ++c) {
            a[col][c] *= inv_p;
            out[col][c] *= inv_p;
        }
        for (size_t r = 0; r < dim; ++r) {
            if (r == col || sgn(a[r][col]) == 0) continue;
            Rational factor = a[r][col];
            for (size_t c = 0; c < dim; ++c) {
                a[r][c] -= Rational(factor * a[col][c]);
                out[r][c] -= Rational(factor * out[col][c]);
            }
        }
    }
    return true;
}

const WeingartenMatrix& weingarten_cached(int n, int k, const Caps& caps) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, WeingartenMatrix> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    GramMatrix g = gram(n, k, caps);
    const size_t dim = g.basis.size();
    std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim));
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) a[r][c] = Rational(g.entries[r][c]);

    WeingartenMatrix w;
    w.n = n;
    w.k = k;
    w.basis = g.basis;
    if (!invert_rational(a, w.entries)) throw GramSingularError(n, k);

    // Both products are checked exactly before the matrix is ever used.
    for (int side = 0; side < 2; ++side) {
        for (size_t r = 0; r < dim; ++r) {
            for (size_t c = 0; c < dim; ++c) {
                Rational acc(0);
                for (size_t t = 0; t < dim; ++t) {
                    acc += side == 0 ? Rational(w.entries[r][t] * Rational(g.entries[t][c]))
                                     : Rational(Rational(g.entries[r][t]) * w.entries[t][c]);
                }
                if (cmp(acc, Rational(r == c ? 1 : 0)) != 0)
                    throw InconsistencyError("Weingarten inverse failed the identity check at (" +
                                             std::to_string(r) + "," + std::to_string(c) + ")");
            }
        }
    }
    return cache.emplace(std::move(key), std::move(w)).first->second;
}

}  // namespace

WeingartenMatrix weingarten(int n, int k, const Caps& caps) {
    return weingarten_cached(n, k, caps);
}

Rational haar_moment(int n, const std::vector<int>& i, const std::vector<int>& j, const Caps& caps) {
    if (n < 1) throw DomainError("haar_moment requires n >= 1");
    if (i.size() != j.size()) throw DomainError("row and column multi-indices must have equal length");
    if (i.empty()) throw DomainError("haar_moment of an empty word");
    for (int v : i)
        if (v < 1 || v > n) throw DomainError("row index out of range");
    for (int v : j)
        if (v < 1 || v > n) throw DomainError("column index out of range");
    const int len = static_cast<int>(i.size());
    if (len % 2 != 0) return Rational(0);

    const WeingartenMatrix& w = weingarten_cached(n, len / 2, caps);
    Partition ker_i = kernel(i);
    Partition ker_j = kernel(j);
    std::vector<size_t> rows, cols;
    for (size_t b = 0; b < w.basis.size(); ++b) {
        if (leq(w.basis[b], ker_i)) rows.push_back(b);
        if (leq(w.basis[b], ker_j)) cols.push_back(b);
    }
    Rational out(0);
    for (size_t r : rows)
        for (size_t c : cols) out += w.entries[r][c];
    return out;
}

namespace {

bool has_even_nc_below(const Partition& ker, const Caps& caps) {
    if (ker.ground_size() % 2 != 0) return false;
    for (const auto& p : enumerate_partitions(ker.ground_size(), PartitionClass::nc_even(), caps))
        if (leq(p, ker)) return true;
    return false;
}

// Odometer over index words; returns false when exhausted.
bool next_word(std::vector<int>& digits, int base) {
    int pos = static_cast<int>(digits.size()) - 1;
    while (pos >= 0 && digits[static_cast<size_t>(pos)] == base - 1) {
        digits[static_cast<size_t>(pos)] = 0;
        --pos;
    }
    if (pos < 0) return false;
    digits[static_cast<size_t>(pos)] += 1;
    return true;
}

std::string describe_word(const std::vector<int>& idx, const EpsilonPattern& eps) {
    std::string s;
    for (size_t t = 0; t < idx.size(); ++t) {
        if (t) s += ' ';
        s += "x" + std::to_string(idx[t]);
        if (eps[static_cast<int>(t)] == Exp::Star) s += '*';
    }
    return s;
}

}  // namespace

InvarianceReport invariance_scan_tuple(const TupleMomentFn& oracle, int n, int k) {
    if (n < 1 || k < 1) throw DomainError("invariance scan requires n, k >= 1");
    InvarianceReport report;
    Caps caps = Caps::defaults();

    // Orthogonality identity at length 2: phi(x_a x_b*) = delta_ab / n * sum_l phi(x_l x_l*).
    ExactScalar trace_sum;
    EpsilonPattern eps2("1*");
    for (int l = 1; l <= n; ++l) trace_sum += oracle({l, l}, eps2);
    ExactScalar mean = trace_sum * ExactScalar(Rational(1, n));
    for (int a = 1; a <= n && report.passed; ++a) {
        for (int b = 1; b <= n && report.passed; ++b) {
            ExactScalar got = oracle({a, b}, eps2);
            ExactScalar want = (a == b) ? mean : ExactScalar::zero();
            ++report.words_checked;
            if (got != want) {
                report.passed = false;
                report.first_violation = describe_word({a, b}, eps2) +
                                         ": orthogonality identity gives " + scalar_str(want) +
                                         ", oracle gives " + scalar_str(got);
            }
        }
    }

    for (int len = 1; len <= k && report.passed; ++len) {
        std::vector<int> idx(static_cast<size_t>(len), 0);
        do {
            std::vector<int> word(static_cast<size_t>(len));
            for (int t = 0; t < len; ++t) word[static_cast<size_t>(t)] = idx[static_cast<size_t>(t)] + 1;
            bool kernel_ok = len % 2 == 0 && has_even_nc_below(kernel(word), caps);
            for (long mask = 0; mask < (1L << len); ++mask) {
                std::vector<Exp> ev(static_cast<size_t>(len));
                for (int t = 0; t < len; ++t)
                    ev[static_cast<size_t>(t)] = (mask >> t) & 1 ? Exp::Star : Exp::One;
                EpsilonPattern eps{ev};
                ++report.words_checked;
                if (kernel_ok) continue;  // no vanishing forced for this index word
                ExactScalar got = oracle(word, eps);
                if (!got.is_zero()) {
                    report.passed = false;
                    report.first_violation = describe_word(word, eps) +
                                             ": forced zero, oracle gives " + scalar_str(got);
                    break;
                }
            }
        } while (report.passed && next_word(idx, n));
    }
    return report;
}

InvarianceReport invariance_scan_array(const ArrayMomentFn& oracle, int n, int k) {
    if (n < 1 || k < 1) throw DomainError("invariance scan requires n, k >= 1");
    InvarianceReport report;
    Caps caps = Caps::defaults();

    // Row and column orthogonality identities at length 2.
    EpsilonPattern eps2("1*");
    for (int j1 = 1; j1 <= n && report.passed; ++j1) {
        for (int j2 = 1; j2 <= n && report.passed; ++j2) {
            ExactScalar row_sum;
            for (int l = 1; l <= n; ++l) row_sum += oracle({{l, j1}, {l, j2}}, eps2);
            for (int a = 1; a <= n && report.passed; ++a) {
                for (int b = 1; b <= n && report.passed; ++b) {
                    ExactScalar got = oracle({{a, j1}, {b, j2}}, eps2);
                    ExactScalar want =
                        (a == b) ? row_sum * ExactScalar(Rational(1, n)) : ExactScalar::zero();
                    ++report.words_checked;
                    if (got != want) {
                        report.passed = false;
                        report.first_violation = "row identity fails at x(" + std::to_string(a) +
                                                 "," + std::to_string(j1) + ") x(" +
                                                 std::to_string(b) + "," + std::to_string(j2) + ")*";
                    }
                }
            }
        }
    }
    for (int i1 = 1; i1 <= n && report.passed; ++i1) {
        for (int i2 = 1; i2 <= n && report.passed; ++i2) {
            ExactScalar col_sum;
            for (int l = 1; l <= n; ++l) col_sum += oracle({{i1, l}, {i2, l}}, eps2);
            for (int a = 1; a <= n && report.passed; ++a) {
                for (int b = 1; b <= n && report.passed; ++b) {
                    ExactScalar got = oracle({{i1, a}, {i2, b}}, eps2);
                    ExactScalar want =
                        (a == b) ? col_sum * ExactScalar(Rational(1, n)) : ExactScalar::zero();
                    ++report.words_checked;
                    if (got != want) {
                        report.passed = false;
                        report.first_violation = "column identity fails at x(" + std::to_string(i1) +
                                                 "," + std::to_string(a) + ") x(" +
                                                 std::to_string(i2) + "," + std::to_string(b) + ")*";
                    }
                }
            }
        }
    }

    for (int len = 1; len <= k && report.passed; ++len) {
        std::vector<int> flat(static_cast<size_t>(2 * len), 0);  // rows then columns
        do {
            std::vector<int> rows(static_cast<size_t>(len)), cols(static_cast<size_t>(len));
            std::vector<std::pair<int, int>> word(static_cast<size_t>(len));
            for (int t = 0; t < len; ++t) {
                rows[static_cast<size_t>(t)] = flat[static_cast<size_t>(t)] + 1;
                cols[static_cast<size_t>(t)] = flat[static_cast<size_t>(len + t)] + 1;
                word[static_cast<size_t>(t)] = {rows[static_cast<size_t>(t)], cols[static_cast<size_t>(t)]};
            }
            bool kernel_ok = len % 2 == 0 && has_even_nc_below(kernel(rows), caps) &&
                             has_even_nc_below(kernel(cols), caps);
            for (long mask = 0; mask < (1L << len); ++mask) {
                std::vector<Exp> ev(static_cast<size_t>(len));
                for (int t = 0; t < len; ++t)
                    ev[static_cast<size_t>(t)] = (mask >> t) & 1 ? Exp::Star : Exp::One;
                EpsilonPattern eps{ev};
                ++report.words_checked;
                if (kernel_ok) continue;
                ExactScalar got = oracle(word, eps);
                if (!got.is_zero()) {
                    report.passed = false;
                    report.first_violation = "forced zero violated at an array word of length " +
                                             std::to_string(len);
                    break;
                }
            }
        } while (report.passed && next_word(flat, n));
    }
    return report;
}

}  // namespace freeprob
