#pragma once

#include "normset/functional.hpp"
#include "normset/rational.hpp"
#include "normset/vector.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

namespace normset {

// ---------------------------------------------------------------------------
// Exact Tsirelson norm (Figiel–Johnson implicit formula) and the equivalent
// 2d-parts norm.
//
// Both norms are 1-unconditional, so the computation reduces to |coefficients|
// and witness leaves carry the original signs. For nonnegative vectors the
// supremum over successive finite subsets is attained on families of interval
// parts covering a contiguous window of the support: replacing a part by its
// interval hull never shrinks its norm and preserves admissibility, and
// dropping interior points never helps. The subset-enumerating brute-force
// oracle cross-checks this reduction in the test suite.
//
// Window DP, positions i..j over the sorted support:
//   T(i,j) = max over a in [i..j] of C(a,j)
//   C(a,j) = max(w_a, (1/2) * D(a, j, B)),  B = min(p_a, j-a+1) parts allowed
//   D(pos,j,b) = best sum of T over at most b interval parts covering [pos..j],
//                the first part starting at pos.
// D saturates to the plain sum once b >= window length (refining parts can
// only grow the sum, and singleton parts contribute full weights).
//
// The option "one part covering the whole window" inside C(a,j) is its own
// value halved and can never attain the max; it is excluded, which also
// breaks the only cyclic dependence.
// ---------------------------------------------------------------------------

struct TsirelsonResult {
    Rat value;
    TermPtr witness;        // W_T-grammar term with evaluate(witness, v) == value
    std::size_t steps = 0;  // DP states touched
};

namespace detail {

class TsirelsonDP {
  public:
    TsirelsonDP(const RationalVector& v, bool modified, std::size_t step_budget)
        : modified_(modified), step_budget_(step_budget) {
        for (auto& [k, c] : v.entries()) {
            pts_.push_back(k);
            w_.push_back(c < 0 ? Rat(-c) : c);
            signs_.push_back(c < 0 ? -1 : +1);
        }
        const std::size_t n = pts_.size();
        if (n > 60000) throw InfeasibleAtBudget("tsirelson_norm: support too large");
        prefix_.resize(n + 1);
        prefix_[0] = Rat(0);
        for (std::size_t i = 0; i < n; ++i) prefix_[i + 1] = prefix_[i] + w_[i];
        monotone_ = true;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (w_[i] < w_[i + 1]) { monotone_ = false; break; }
    }

    std::size_t size() const { return pts_.size(); }
    std::size_t steps() const { return steps_; }

    Rat norm() { return pts_.empty() ? Rat(0) : T(0, pts_.size() - 1); }

    TermPtr witness_for(const RationalVector& v) {
        if (pts_.empty()) return term::type0(Nat(1));
        return rebuild_T(0, pts_.size() - 1);
    }

    // Certified closed-form upper bound (one refinement level):
    //   T(P) <= (S(P) + max(P)) / 2   for every window (induction), hence
    //   D(a,j,b) <= (S + top_b)/2 and C(a,j) <= max(w_a, (S + top_b)/4)
    // when the budget binds, else max(w_a, S/2).
    Rat upper_bound() {
        const std::size_t n = pts_.size();
        if (n == 0) return Rat(0);
        Rat best(0);
        for (std::size_t a = 0; a < n; ++a) {
            std::size_t len = n - a;
            std::size_t B = clamp_to_size(pts_[a], len);
            Rat bound;
            if (B >= len) {
                bound = range_sum(a, n) / 2;
            } else {
                bound = (range_sum(a, n) + top_sum(a, n, B)) / 4;
            }
            if (w_[a] > bound) bound = w_[a];
            if (bound > best) best = bound;
        }
        return best;
    }

  private:
    bool modified_;
    std::size_t step_budget_;
    std::size_t steps_ = 0;
    bool monotone_ = false;
    std::vector<Nat> pts_;
    std::vector<Rat> w_;
    std::vector<int> signs_;
    std::vector<Rat> prefix_;
    std::unordered_map<std::uint64_t, Rat> memo_T_, memo_C_, memo_D_;

    static std::uint64_t key2(std::size_t i, std::size_t j) {
        return (static_cast<std::uint64_t>(i) << 20) | j;
    }
    static std::uint64_t key3(std::size_t i, std::size_t j, std::size_t b) {
        return (static_cast<std::uint64_t>(i) << 40) | (static_cast<std::uint64_t>(j) << 20) | b;
    }

    void tick() {
        if (++steps_ > step_budget_)
            throw InfeasibleAtBudget("tsirelson_norm: step budget exhausted");
    }

    Rat range_sum(std::size_t i, std::size_t j_excl) const { return prefix_[j_excl] - prefix_[i]; }

    // sum of the b largest weights among positions [i, j_excl)
    Rat top_sum(std::size_t i, std::size_t j_excl, std::size_t b) const {
        if (b >= j_excl - i) return range_sum(i, j_excl);
        if (monotone_) return range_sum(i, i + b);
        std::vector<Rat> tmp(w_.begin() + i, w_.begin() + j_excl);
        std::nth_element(tmp.begin(), tmp.begin() + (tmp.size() - b), tmp.end());
        Rat s(0);
        for (std::size_t k = tmp.size() - b; k < tmp.size(); ++k) s += tmp[k];
        return s;
    }

    std::size_t parts_budget(std::size_t a, std::size_t len) const {
        if (!modified_) return clamp_to_size(pts_[a], len);
        return clamp_to_size(2 * pts_[a], len);
    }

    Rat c_bound(std::size_t a, std::size_t j) {
        std::size_t len = j - a + 1;
        std::size_t B = parts_budget(a, len);
        Rat bound = (B >= len) ? range_sum(a, j + 1) / 2
                               : (range_sum(a, j + 1) + top_sum(a, j + 1, B)) / 4;
        return w_[a] > bound ? w_[a] : bound;
    }

    Rat T(std::size_t i, std::size_t j) {
        auto k = key2(i, j);
        auto it = memo_T_.find(k);
        if (it != memo_T_.end()) return it->second;
        tick();
        // scan start positions, pruning by the certified per-start bound
        Rat best = C(j, j);  // the last singleton is always available
        for (std::size_t a = i; a < j; ++a) {
            if (c_bound(a, j) < best) continue;
            Rat c = C(a, j);
            if (c > best) best = c;
        }
        memo_T_.emplace(k, best);
        return best;
    }

    Rat C(std::size_t a, std::size_t j) {
        auto k = key2(a, j);
        auto it = memo_C_.find(k);
        if (it != memo_C_.end()) return it->second;
        tick();
        Rat best = w_[a];
        std::size_t len = j - a + 1;
        if (len > 1) {
            std::size_t B = parts_budget(a, len);
            Rat d = (B >= len) ? range_sum(a, j + 1) : D(a, j, B, /*ban_full_single=*/true);
            d /= 2;
            if (d > best) best = d;
        }
        memo_C_.emplace(k, best);
        return best;
    }

    Rat D(std::size_t pos, std::size_t j, std::size_t b, bool ban_full_single) {
        std::size_t len = j - pos + 1;
        if (b >= len) return range_sum(pos, j + 1);
        // memo only the unbanned variant; the banned one occurs once per C
        if (!ban_full_single) {
            auto k = key3(pos, j, b);
            auto it = memo_D_.find(k);
            if (it != memo_D_.end()) return it->second;
        }
        tick();
        Rat best(0);
        if (!ban_full_single) best = T(pos, j);  // single part covering the window
        if (b >= 2) {
            for (std::size_t e = pos; e < j; ++e) {
                // sound prune: strict inequality only, ties must be kept
                Rat part_bound = c_bound_window(pos, e);
                Rat rest_bound = d_bound(e + 1, j, b - 1);
                if (part_bound + rest_bound < best) continue;
                Rat v = T(pos, e) + D(e + 1, j, b - 1, false);
                if (v > best) best = v;
            }
        }
        if (!ban_full_single) memo_D_.emplace(key3(pos, j, b), best);
        return best;
    }

    // upper bound for T(pos..e): (S + max)/2 vs singletons
    Rat c_bound_window(std::size_t pos, std::size_t e) {
        Rat s = range_sum(pos, e + 1);
        Rat mx = monotone_ ? w_[pos] : *std::max_element(w_.begin() + pos, w_.begin() + e + 1);
        Rat bound = (s + mx) / 2;
        return bound;
    }
    Rat d_bound(std::size_t pos, std::size_t j, std::size_t b) {
        Rat s = range_sum(pos, j + 1);
        if (b >= j - pos + 1) return s;
        return (s + top_sum(pos, j + 1, b)) / 2;
    }

    // ---- witness reconstruction (replays decisions against memoized values)

    TermPtr leaf(std::size_t i) const { return term::type0(pts_[i], signs_[i]); }

    TermPtr rebuild_T(std::size_t i, std::size_t j) {
        Rat val = T(i, j);
        for (std::size_t a = i; a <= j; ++a) {
            if (a < j && c_bound(a, j) < val) continue;
            if (C(a, j) == val) return rebuild_C(a, j);
        }
        throw std::logic_error("tsirelson witness: no matching start");
    }

    TermPtr rebuild_C(std::size_t a, std::size_t j) {
        Rat val = C(a, j);
        if (val == w_[a]) return leaf(a);
        std::size_t len = j - a + 1;
        std::size_t B = parts_budget(a, len);
        std::vector<TermPtr> kids;
        if (B >= len) {
            for (std::size_t i = a; i <= j; ++i) kids.push_back(leaf(i));
        } else {
            rebuild_D(a, j, B, true, val * 2, kids);
        }
        return term::type_ii(std::move(kids));
    }

    void rebuild_D(std::size_t pos, std::size_t j, std::size_t b, bool ban_full_single,
                   const Rat& target, std::vector<TermPtr>& out) {
        std::size_t len = j - pos + 1;
        if (b >= len) {
            for (std::size_t i = pos; i <= j; ++i) out.push_back(leaf(i));
            return;
        }
        if (!ban_full_single && T(pos, j) == target) {
            out.push_back(rebuild_T(pos, j));
            return;
        }
        if (b >= 2) {
            for (std::size_t e = pos; e < j; ++e) {
                Rat part_bound = c_bound_window(pos, e);
                Rat rest_bound = d_bound(e + 1, j, b - 1);
                if (part_bound + rest_bound < target) continue;
                Rat left = T(pos, e);
                Rat right = D(e + 1, j, b - 1, false);
                if (left + right == target) {
                    out.push_back(rebuild_T(pos, e));
                    rebuild_D(e + 1, j, b - 1, false, right, out);
                    return;
                }
            }
        }
        throw std::logic_error("tsirelson witness: no matching split");
    }
};

}  // namespace detail

inline constexpr std::size_t kUnlimitedSteps = std::numeric_limits<std::size_t>::max();

// Exact norm with an attaining witness in the W_T grammar.
inline TsirelsonResult tsirelson_norm(const RationalVector& v,
                                      std::size_t step_budget = kUnlimitedSteps) {
    detail::TsirelsonDP dp(v, /*modified=*/false, step_budget);
    TsirelsonResult r;
    r.value = dp.norm();
    r.witness = dp.witness_for(v);
    r.steps = dp.steps();
    return r;
}

// Value-only variant (skips witness reconstruction).
inline Rat tsirelson_norm_value(const RationalVector& v,
                                std::size_t step_budget = kUnlimitedSteps) {
    detail::TsirelsonDP dp(v, /*modified=*/false, step_budget);
    return dp.norm();
}

// Exact equivalent norm (parts budget 2d, d <= min E_1).
inline Rat modified_norm(const RationalVector& v, std::size_t step_budget = kUnlimitedSteps) {
    detail::TsirelsonDP dp(v, /*modified=*/true, step_budget);
    return dp.norm();
}

// Certified upper bound for the Tsirelson norm; cheap (O(N) on monotone
// vectors) and exact arithmetic throughout.
inline Rat tsirelson_norm_upper_bound(const RationalVector& v) {
    detail::TsirelsonDP dp(v, /*modified=*/false, kUnlimitedSteps);
    return dp.upper_bound();
}

// ---------------------------------------------------------------------------
// Brute-force oracle: enumerates families of general successive finite
// subsets exactly as in the implicit formula, with no interval reduction and
// no memoized shortcuts beyond subset caching. Only for small supports.
// ---------------------------------------------------------------------------

namespace detail {

class TsirelsonOracle {
  public:
    TsirelsonOracle(const RationalVector& v, bool modified) : modified_(modified) {
        for (auto& [k, c] : v.entries()) {
            pts_.push_back(k);
            w_.push_back(c < 0 ? Rat(-c) : c);
        }
        values_.assign(std::size_t(1) << pts_.size(), std::optional<Rat>());
    }

    Rat norm() {
        if (pts_.empty()) return Rat(0);
        return eval((std::uint32_t(1) << pts_.size()) - 1);
    }

  private:
    bool modified_;
    std::vector<Nat> pts_;
    std::vector<Rat> w_;
    std::vector<std::optional<Rat>> values_;

    Rat eval(std::uint32_t mask) {
        if (values_[mask]) return *values_[mask];
        Rat best(0);
        std::vector<std::size_t> elems;
        for (std::size_t i = 0; i < pts_.size(); ++i)
            if (mask & (std::uint32_t(1) << i)) elems.push_back(i);
        for (auto i : elems)
            if (w_[i] > best) best = w_[i];

        // families: every subset A of the support, cut into successive chunks.
        // The single chunk equal to the whole current set is skipped: that
        // option contributes half the set's own value and can never attain
        // the max (it is also the only cyclic dependence).
        for (std::uint32_t A = mask;; A = (A - 1) & mask) {
            if (A != 0) {
                std::vector<std::size_t> ae;
                for (std::size_t i = 0; i < pts_.size(); ++i)
                    if (A & (std::uint32_t(1) << i)) ae.push_back(i);
                std::size_t dmax_raw = clamp_to_size(pts_[ae[0]], ae.size());
                std::size_t dmax = modified_ ? std::min(ae.size(), 2 * dmax_raw) : dmax_raw;
                if (dmax >= 1) {
                    Rat v = best_cut(ae, 0, dmax, mask);
                    v /= 2;
                    if (v > best) best = v;
                }
            }
            if (A == 0) break;
        }
        values_[mask] = best;
        return best;
    }

    // best sum of chunk norms cutting elems[from..] into at most parts chunks
    Rat best_cut(const std::vector<std::size_t>& elems, std::size_t from, std::size_t parts,
                 std::uint32_t forbid) {
        if (from >= elems.size() || parts == 0) return Rat(0);
        Rat best(0);
        for (std::size_t to = from; to < elems.size(); ++to) {
            std::uint32_t chunk = 0;
            for (std::size_t k = from; k <= to; ++k) chunk |= std::uint32_t(1) << elems[k];
            if (chunk == forbid) continue;
            Rat v = eval(chunk) + best_cut(elems, to + 1, parts - 1, forbid);
            if (v > best) best = v;
        }
        return best;
    }
};

}  // namespace detail

// bruteForceTsirelsonOracle: exact norm by full enumeration (support cap).
inline Rat brute_force_tsirelson_oracle(const RationalVector& v, std::size_t support_cap = 8) {
    if (v.support_size() > support_cap)
        throw InfeasibleAtBudget("brute_force_tsirelson_oracle: support too large");
    detail::TsirelsonOracle o(v, /*modified=*/false);
    return o.norm();
}

inline Rat brute_force_modified_oracle(const RationalVector& v, std::size_t support_cap = 8) {
    if (v.support_size() > support_cap)
        throw InfeasibleAtBudget("brute_force_modified_oracle: support too large");
    detail::TsirelsonOracle o(v, /*modified=*/true);
    return o.norm();
}

}  // namespace normset
