#pragma once

#include <functional>
#include <string>
#include <vector>

#include "freeprob/caps.hpp"
#include "freeprob/partition.hpp"
#include "freeprob/rational.hpp"

namespace freeprob {

/*
 * Exact Weingarten calculus for the hyperoctahedral quantum group H_n^+.
 * The Gram matrix lives on the even non-crossing partitions NC_e(2k) with
 * entries n^{|pi v sigma|} (full-lattice join: the entry counts index tuples
 * whose kernel dominates both partitions, which is governed by the join in
 * P(2k)); the Weingarten matrix is its exact rational inverse.
 */
struct GramMatrix {
    int n = 0;
    int k = 0;
    std::vector<Partition> basis;                 // NC_e(2k), enumeration order
    std::vector<std::vector<BigInt>> entries;     // entries[r][c] = n^{|b_r v b_c|}
};

struct WeingartenMatrix {
    int n = 0;
    int k = 0;
    std::vector<Partition> basis;
    std::vector<std::vector<Rational>> entries;   // exact inverse of the Gram matrix
};

GramMatrix gram(int n, int k, const Caps& caps = Caps::defaults());

/// Exact inverse with deterministic pivoting; W G = G W = I is verified
/// before returning. Singular Gram matrices raise GramSingularError.
WeingartenMatrix weingarten(int n, int k, const Caps& caps = Caps::defaults());

/// Haar-state moment of generator entries u_{i(1)j(1)} ... u_{i(len)j(len)}:
/// zero for odd len, else the double Weingarten sum over pairs of even
/// non-crossing partitions below ker i and ker j.
Rational haar_moment(int n, const std::vector<int>& i, const std::vector<int>& j,
                     const Caps& caps = Caps::defaults());

/// Joint-moment oracle of an n-tuple: indices are 1-based, eps gives the
/// exponents.
using TupleMomentFn =
    std::function<ExactScalar(const std::vector<int>&, const EpsilonPattern&)>;
/// Joint-moment oracle of an n x n array: (row, column) index pairs.
using ArrayMomentFn = std::function<ExactScalar(
    const std::vector<std::pair<int, int>>&, const EpsilonPattern&)>;

struct InvarianceReport {
    bool passed = true;
    long long words_checked = 0;
    std::string first_violation;
};

/// Verifies the vanishing pattern forced on moments of an H_n^+-invariant
/// n-tuple (odd moments vanish; even moments vanish unless some even
/// non-crossing partition sits below ker i) plus the k = 2 orthogonality
/// identity phi(x_i x_j*) = delta_{ij}/n * sum_l phi(x_l x_l*).
InvarianceReport invariance_scan_tuple(const TupleMomentFn& oracle, int n, int k);

/// Same for an H_n^+-bi-invariant array: both row and column kernels must be
/// dominated, and the k = 2 identity holds in rows and in columns.
InvarianceReport invariance_scan_array(const ArrayMomentFn& oracle, int n, int k);

}  // namespace freeprob
