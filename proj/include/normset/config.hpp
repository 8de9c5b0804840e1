#pragma once

#include "normset/rational.hpp"

#include <string>
#include <vector>

namespace normset {

enum class Mode { faithful, scaled };

inline std::string mode_name(Mode m) { return m == Mode::faithful ? "faithful" : "scaled"; }

// w > m * 2^e, exactly, without materializing the shift when it is huge.
inline bool exceeds_shifted_pow2(const Nat& w, const Nat& m, const Nat& e) {
    if (w <= 0 || m <= 0) return w > 0;
    Nat wbits = static_cast<unsigned long>(boost::multiprecision::msb(w)) + 1;
    Nat mbits = static_cast<unsigned long>(boost::multiprecision::msb(m)) + 1;
    // m * 2^e has between mbits+e and mbits+e bits (exactly mbits+e).
    if (wbits > mbits + e) return true;
    if (wbits < mbits + e) return false;
    if (e > kPow2BitCap) return false;  // equal bit-length, cannot decide by materializing; e huge never happens with a representable w
    return w > (m << static_cast<unsigned>(e));
}

// Parameter set of the space: the set L = L_1 u L_2 feeding weights of type II
// functionals, the sigma growth condition, and the very-fast-growing check.
//
// faithful: l_1 = 11, l_{k+1} = 2^{2 l_k} + 1, split alternately into L_1/L_2;
//           growth conditions exactly as in the construction.
// scaled:   L = even numbers >= 4, L_1 = {4,8,12,...}, L_2 = {6,10,14,...};
//           sigma growth additive (> n + max supp + 1), very fast growing
//           reduced to strictly increasing sizes. Scaled certificates carry
//           the list of paper guarantees this voids.
struct SpaceConfig {
    Mode mode = Mode::scaled;
    bool strict_beta_successive = false;  // require successive beta-average children
    bool strict_convex_root_only = false; // restrict convex nodes to the root
    int scc_level_cap = 1;                // s.c.c. level substituted in scaled constructions
    std::size_t entry_budget = 2'000'000; // refuse constructions beyond this many stored entries

    std::vector<Nat> faithful_prefix;     // materialized l_1..l_3 in faithful mode

    static SpaceConfig scaled() { return SpaceConfig{}; }

    static SpaceConfig faithful() {
        SpaceConfig c;
        c.mode = Mode::faithful;
        Nat l1 = 11;
        Nat l2 = pow2(2 * l1) + 1;
        Nat l3 = pow2(2 * l2) + 1;  // ~1 MiB integer; the last materializable element
        c.faithful_prefix = {l1, l2, l3};
        c.check_faithful_conditions();
        return c;
    }

    // Conditions (i) and (ii) on L, verified with exact rationals. The tail of
    // sum 2^{-l_k} past the first element is bounded by 2^{1-l_2} <= 2^{-21},
    // so the comparison never touches megabyte denominators.
    void check_faithful_conditions() const {
        if (faithful_prefix.size() < 2 || faithful_prefix[0] <= 2)
            throw MalformedInput("faithful L: need l_1 > 2 and at least two elements");
        for (std::size_t k = 0; k + 1 < faithful_prefix.size(); ++k)
            if (!exceeds_pow2(faithful_prefix[k + 1], 2 * faithful_prefix[k]))
                throw MalformedInput("faithful L: l_{k+1} > 2^{2 l_k} fails");
        Rat bound = inv_pow2(faithful_prefix[0]) + inv_pow2(Nat(21));
        if (!(bound < Rat(1, 1000)))
            throw MalformedInput("faithful L: sum 2^{-l_k} < 1/1000 fails");
        // Remark-style gap property on the materialized prefix: at most one
        // element of L in any {n,...,2^{2n}} window follows from condition (i).
    }

    bool in_L(const Nat& x) const {
        if (mode == Mode::scaled) return x >= 4 && x % 2 == 0;
        for (auto& l : faithful_prefix)
            if (x == l) return true;
        return false;
    }
    bool in_L1(const Nat& x) const {
        if (mode == Mode::scaled) return x >= 4 && x % 4 == 0;
        for (std::size_t k = 0; k < faithful_prefix.size(); k += 2)
            if (x == faithful_prefix[k]) return true;
        return false;
    }
    bool in_L2(const Nat& x) const {
        if (mode == Mode::scaled) return x >= 6 && x % 4 == 2;
        for (std::size_t k = 1; k < faithful_prefix.size(); k += 2)
            if (x == faithful_prefix[k]) return true;
        return false;
    }

    Nat smallest_L1_above(const Nat& bound) const {
        if (mode == Mode::scaled) {
            Nat x = bound + 1;
            while (!(x >= 4 && x % 4 == 0)) ++x;
            return x;
        }
        for (std::size_t k = 0; k < faithful_prefix.size(); k += 2)
            if (faithful_prefix[k] > bound) return faithful_prefix[k];
        throw InfeasibleAtBudget("faithful L_1 exhausted above " + bound.str());
    }
    Nat smallest_L2_above(const Nat& bound) const {
        if (mode == Mode::scaled) {
            Nat x = bound + 1;
            while (!(x >= 6 && x % 4 == 2)) ++x;
            return x;
        }
        for (std::size_t k = 1; k < faithful_prefix.size(); k += 2)
            if (faithful_prefix[k] > bound) return faithful_prefix[k];
        throw InfeasibleAtBudget("faithful L_2 exhausted above " + bound.str());
    }

    // very fast growing: s(f_j) > s(f_{j-1}) always; in faithful mode also
    // s(f_j) > 2^{max supp f_{j-1}}.
    bool vfg_step_ok(const Nat& prev_size, const Nat& prev_max_supp, const Nat& next_size) const {
        if (!(next_size > prev_size)) return false;
        if (mode == Mode::faithful) return exceeds_pow2(next_size, prev_max_supp);
        return true;
    }
    // Smallest legal next size after (prev_size, prev_max_supp).
    Nat vfg_next_size(const Nat& prev_size, const Nat& prev_max_supp) const {
        if (mode == Mode::scaled) return prev_size + 1;
        Nat p = pow2(prev_max_supp) + 1;  // throws InfeasibleAtBudget when astronomical
        return nat_max(prev_size + 1, p);
    }

    // sigma growth: assigned weight must exceed this bound strictly.
    bool sigma_weight_ok(const Nat& w, const Nat& n_m, const Nat& max_supp) const {
        if (mode == Mode::faithful) return exceeds_shifted_pow2(w, max_supp, n_m);
        return w > n_m + max_supp + 1;
    }

    std::vector<std::string> void_guarantees() const {
        if (mode == Mode::faithful) return {};
        return {
            "sigma growth additive (paper: > 2^{n_m} max supp f_m)",
            "very fast growing reduced to strictly increasing sizes",
            "L density gap (at most one element of L in {n..2^{2n}}) void",
            "s.c.c. level in constructions capped at scc_level_cap",
            "exact-pair norm interval [1,29] and the 7C upper estimate not asserted",
            "paper constants 232/n and 112/n not asserted",
        };
    }
};

}  // namespace normset
