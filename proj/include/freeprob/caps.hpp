#pragma once

namespace freeprob {

/*
 * Size guards for the exact-arithmetic engines. Every cap is overridable by
 * the caller; the defaults keep each computation at desk scale (seconds, not
 * hours). Exceeding a cap raises SizeGuardError naming the cap.
 */
struct Caps {
    int enumeration_cap = 14;          // ground size for partition enumeration
    int moment_word_cap = 12;          // star-word length in moment evaluation
    int weingarten_cap = 10;           // 2k for the Gram/Weingarten basis NC_e(2k)
    int expansion_cap = 12;            // 2dm in L^{2m} power expansions
    int support_cap = 6;               // coefficient support size of a polynomial
    int m_cap = 3;                     // power index m in L^{2m} expansions
    long long tuple_budget = 10000000; // group-algebra convolution tuple guard

    static const Caps& defaults() {
        static const Caps caps{};
        return caps;
    }
};

}  // namespace freeprob
