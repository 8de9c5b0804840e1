#pragma once

#include "normset/rational.hpp"
#include "normset/vector.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace normset {

// ---------------------------------------------------------------------------
// Schreier hierarchy S_n.
//
// S_0 = singletons, S_{n+1} = unions F_1 < ... < F_k of S_n sets with
// k <= min F_1. The empty set is treated as a member of every S_n
// (hereditary-closure convention; the paper's recursion produces only
// nonempty sets).
//
// Membership is decided greedily: the maximal S_{n-1}-prefix is split off
// repeatedly. Greedy completeness rests on the families being hereditary and
// spreading; the brute-force oracle in the test suite carries that claim.
// ---------------------------------------------------------------------------

struct SchreierNode {
    int level = 0;
    std::vector<Nat> elements;           // covered elements in increasing order
    std::vector<SchreierNode> children;  // empty for level-0 leaves
};

struct SchreierWitness {
    Nat declared_level;                  // the n that was queried
    int tree_level = 0;                  // level at which the greedy tree lives (<= n)
    std::optional<SchreierNode> root;    // nullopt for the empty set
};

namespace detail {

// One greedy level step: given max-prefix lengths at level l, produce them at
// level l+1. L[i] is the length of the maximal S_l-prefix of points[i..].
inline std::vector<std::size_t> next_level_prefixes(const std::vector<Nat>& pts,
                                                    const std::vector<std::size_t>& L) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t budget = clamp_to_size(pts[i], n - i);
        std::size_t pos = i;
        for (std::size_t t = 0; t < budget && pos < n; ++t) pos += L[pos];
        out[i] = pos - i;
    }
    return out;
}

inline SchreierNode build_witness_node(const std::vector<Nat>& pts,
                                       const std::vector<std::vector<std::size_t>>& levels,
                                       int level, std::size_t i, std::size_t len) {
    SchreierNode node;
    node.level = level;
    node.elements.assign(pts.begin() + i, pts.begin() + i + len);
    if (level == 0) return node;
    const auto& L = levels[static_cast<std::size_t>(level) - 1];
    std::size_t pos = i;
    while (pos < i + len) {
        std::size_t step = std::min(L[pos], i + len - pos);
        node.children.push_back(build_witness_node(pts, levels, level - 1, pos, step));
        pos += step;
    }
    return node;
}

}  // namespace detail

// Decide F in S_n and return a decomposition witness. `set` must be strictly
// increasing. Levels are iterated upward until success, the queried level, or
// a fixpoint of the greedy prefix table (after which higher levels change
// nothing), so astronomically large n cost no more than small ones.
inline std::optional<SchreierWitness> is_member(const std::vector<Nat>& set, const Nat& n) {
    if (n < 0) return std::nullopt;
    SchreierWitness w;
    w.declared_level = n;
    if (set.empty()) return w;  // empty-set convention

    const std::size_t N = set.size();
    std::vector<std::vector<std::size_t>> levels;
    levels.push_back(std::vector<std::size_t>(N, 1));  // level 0
    if (N == 1) {
        w.tree_level = 0;
        w.root = detail::build_witness_node(set, levels, 0, 0, 1);
        return w;
    }
    if (n == 0) return std::nullopt;

    Nat level(0);
    while (level < n) {
        auto next = detail::next_level_prefixes(set, levels.back());
        bool fix = (next == levels.back());
        levels.push_back(std::move(next));
        ++level;
        if (levels.back()[0] == N) {
            w.tree_level = static_cast<int>(levels.size()) - 1;
            w.root = detail::build_witness_node(set, levels, w.tree_level, 0, N);
            return w;
        }
        if (fix) return std::nullopt;  // table stable, no higher level succeeds
    }
    return std::nullopt;
}

// Independent structural check of a witness (used by tests; shares no logic
// with the greedy builder beyond the node type).
inline bool witness_valid(const SchreierWitness& w, const std::vector<Nat>& set) {
    if (set.empty()) return !w.root.has_value();
    if (!w.root) return false;
    if (Nat(w.tree_level) > w.declared_level) return false;

    // collect leaves in order and check every internal node's constraints
    std::vector<Nat> leaves;
    bool ok = true;
    auto walk = [&](auto&& self, const SchreierNode& node) -> void {
        if (!ok) return;
        if (node.level == 0) {
            if (node.elements.size() != 1 || !node.children.empty()) { ok = false; return; }
            leaves.push_back(node.elements[0]);
            return;
        }
        if (node.children.empty()) { ok = false; return; }
        // children carry strictly smaller level and partition the elements in order
        Nat count(static_cast<unsigned long>(node.children.size()));
        if (node.children[0].elements.empty()) { ok = false; return; }
        if (count > node.children[0].elements[0]) { ok = false; return; }
        std::vector<Nat> gathered;
        for (auto& c : node.children) {
            if (c.level >= node.level) { ok = false; return; }
            gathered.insert(gathered.end(), c.elements.begin(), c.elements.end());
            self(self, c);
        }
        if (gathered != node.elements) ok = false;
    };
    walk(walk, *w.root);
    return ok && leaves == set && std::is_sorted(leaves.begin(), leaves.end());
}

inline bool is_admissible(const BlockSequence& blocks, const Nat& n) {
    if (blocks.blocks.empty()) return true;
    return is_member(blocks.min_supports(), n).has_value();
}

// ---------------------------------------------------------------------------
// Maximal weighted S_n-sums.
// ---------------------------------------------------------------------------

struct MaxSumResult {
    Rat value;
    std::vector<Nat> witness;  // a set in S_n attaining the value
};

namespace detail {

struct GeneralMaxSum {
    const std::vector<Nat>& pts;
    const std::vector<Rat>& w;

    struct Entry {
        Rat val;
        int choice = -1;  // -1 skip, -2 take level-0 point, e >= 0: block extent
    };
    std::map<std::tuple<int, std::size_t, std::size_t, std::size_t>, Entry> memo;

    // Best sum of at most `budget` successive level-`level` blocks within
    // positions [pos, end]. Blocks may skip points; the first block of a
    // level-(l+1) set starting at q gets budget min(value(q), room).
    const Entry& go(int level, std::size_t pos, std::size_t end, std::size_t budget) {
        auto key = std::make_tuple(level, pos, end, budget);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Entry best;
        best.val = Rat(0);
        if (pos > end || budget == 0) return memo.emplace(key, best).first->second;

        {
            const Entry& skip = go(level, pos + 1, end, budget);
            if (skip.val > best.val) { best.val = skip.val; best.choice = -1; }
        }
        if (level == 0) {
            Rat v = w[pos] + go(0, pos + 1, end, budget - 1).val;
            if (v > best.val) { best.val = v; best.choice = -2; }
        } else {
            for (std::size_t e = pos; e <= end; ++e) {
                std::size_t inner_budget = clamp_to_size(pts[pos], e - pos + 1);
                Rat v = go(level - 1, pos, e, inner_budget).val;
                if (budget > 1 && e < end) v += go(level, e + 1, end, budget - 1).val;
                if (v > best.val) { best.val = v; best.choice = static_cast<int>(e); }
            }
        }
        return memo.emplace(key, std::move(best)).first->second;
    }

    void rebuild(int level, std::size_t pos, std::size_t end, std::size_t budget,
                 std::vector<std::size_t>& out) {
        if (pos > end || budget == 0) return;
        const Entry& e = go(level, pos, end, budget);
        if (e.val == 0) return;  // all-zero tail: empty witness is fine
        if (e.choice == -1) { rebuild(level, pos + 1, end, budget, out); return; }
        if (e.choice == -2) {
            out.push_back(pos);
            rebuild(0, pos + 1, end, budget - 1, out);
            return;
        }
        std::size_t ext = static_cast<std::size_t>(e.choice);
        std::size_t inner_budget = clamp_to_size(pts[pos], ext - pos + 1);
        rebuild(level - 1, pos, ext, inner_budget, out);
        if (budget > 1 && ext < end) rebuild(level, ext + 1, end, budget - 1, out);
    }
};

// Fast path for nonincreasing weights, levels 1 and 2 only. At those levels a
// block may be taken as the full greedy prefix from its start: for S_1 the
// cardinality criterion makes the prefix weight-maximal, and for S_2 the
// blocks are S_1 sets, so the same argument applies per block. (For level >= 3
// blocks the prefix exchange fails, hence the gate.)
struct MonotoneMaxSum {
    const std::vector<Nat>& pts;
    const std::vector<Rat>& w;
    std::vector<Rat> prefix;            // prefix[i] = w[0] + ... + w[i-1]
    std::vector<std::size_t> L1;        // S_1 max-prefix length from i
    std::vector<std::size_t> count2;    // greedy S_1-block count to exhaust [i..)
    std::map<std::pair<std::size_t, std::size_t>, Rat> memo2;

    explicit MonotoneMaxSum(const std::vector<Nat>& p, const std::vector<Rat>& ww)
        : pts(p), w(ww) {
        const std::size_t n = pts.size();
        prefix.resize(n + 1);
        prefix[0] = Rat(0);
        for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + w[i];
        L1.resize(n);
        for (std::size_t i = 0; i < n; ++i) L1[i] = clamp_to_size(pts[i], n - i);
        count2.assign(n + 1, 0);
        for (std::size_t i = n; i-- > 0;) count2[i] = 1 + count2[std::min(n, i + L1[i])];
    }

    Rat range_sum(std::size_t i, std::size_t j) const { return prefix[j] - prefix[i]; }

    Rat best_s1(std::vector<Nat>* witness) const {
        const std::size_t n = pts.size();
        Rat best(0);
        std::size_t best_at = n;
        for (std::size_t i = 0; i < n; ++i) {
            Rat v = range_sum(i, i + L1[i]);
            if (v > best) { best = v; best_at = i; }
        }
        if (witness && best_at < n)
            for (std::size_t k = best_at; k < best_at + L1[best_at]; ++k)
                witness->push_back(pts[k]);
        return best;
    }

    // best chain of at most b full S_1-prefix blocks from position pos on
    Rat chain2(std::size_t pos, std::size_t b) {
        const std::size_t n = pts.size();
        if (pos >= n || b == 0) return Rat(0);
        if (b >= count2[pos]) return range_sum(pos, n);  // budget saturated
        auto key = std::make_pair(pos, b);
        auto it = memo2.find(key);
        if (it != memo2.end()) return it->second;
        Rat best = chain2(pos + 1, b);
        Rat take = range_sum(pos, pos + L1[pos]) + chain2(pos + L1[pos], b - 1);
        if (take > best) best = take;
        memo2.emplace(key, best);
        return best;
    }

    void rebuild2(std::size_t pos, std::size_t b, std::vector<Nat>& out) {
        const std::size_t n = pts.size();
        while (pos < n && b > 0) {
            if (b >= count2[pos]) {
                for (std::size_t k = pos; k < n; ++k) out.push_back(pts[k]);
                return;
            }
            Rat take = range_sum(pos, pos + L1[pos]) + chain2(pos + L1[pos], b - 1);
            if (take == chain2(pos, b)) {
                for (std::size_t k = pos; k < pos + L1[pos]; ++k) out.push_back(pts[k]);
                pos += L1[pos];
                --b;
            } else {
                ++pos;
            }
        }
    }

    Rat best_s2(std::vector<Nat>* witness) {
        const std::size_t n = pts.size();
        Rat best(0);
        std::size_t best_at = n;
        for (std::size_t a = 0; a < n; ++a) {
            std::size_t budget = clamp_to_size(pts[a], n - a);
            // first block starts exactly at a
            Rat v = range_sum(a, a + L1[a]) + chain2(a + L1[a], budget - 1);
            if (v > best) { best = v; best_at = a; }
        }
        if (witness && best_at < n) {
            std::size_t budget = clamp_to_size(pts[best_at], n - best_at);
            for (std::size_t k = best_at; k < best_at + L1[best_at]; ++k)
                witness->push_back(pts[k]);
            rebuild2(best_at + L1[best_at], budget - 1, *witness);
        }
        return best;
    }
};

}  // namespace detail

// value = max over G subset of supp(weights), G in S_n, of sum of weights; the
// witness attains it. Weights must be nonnegative.
inline MaxSumResult max_schreier_sum(const std::map<Nat, Rat>& weights, const Nat& n) {
    std::vector<Nat> pts;
    std::vector<Rat> w;
    pts.reserve(weights.size());
    for (auto& [k, c] : weights) {
        if (c < 0) throw MalformedInput("max_schreier_sum: negative weight");
        if (c == 0) continue;
        pts.push_back(k);
        w.push_back(c);
    }
    MaxSumResult res;
    res.value = Rat(0);
    if (pts.empty() || n < 0) return res;

    if (n == 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] > w[best]) best = i;
        res.value = w[best];
        res.witness = {pts[best]};
        return res;
    }

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] < w[i + 1]) { monotone = false; break; }

    if (monotone && (n == 1 || n == 2)) {
        detail::MonotoneMaxSum fast(pts, w);
        res.value = (n == 1) ? fast.best_s1(&res.witness) : fast.best_s2(&res.witness);
        return res;
    }

    if (n > Nat(64)) throw InfeasibleAtBudget("max_schreier_sum: level too large");
    detail::GeneralMaxSum gen{pts, w, {}};
    int level = static_cast<int>(static_cast<unsigned long>(n));
    res.value = gen.go(level, 0, pts.size() - 1, 1).val;
    std::vector<std::size_t> positions;
    gen.rebuild(level, 0, pts.size() - 1, 1, positions);
    for (auto i : positions) res.witness.push_back(pts[i]);
    return res;
}

}  // namespace normset
