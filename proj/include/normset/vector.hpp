#pragma once

#include "normset/rational.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace normset {

// Closed interval [lo, hi] of naturals, possibly empty or unbounded above.
// Restricting by an interval never enlarges a support.
struct IndexInterval {
    Nat lo = 1;
    std::optional<Nat> hi;  // nullopt = unbounded above
    bool is_empty = false;

    static IndexInterval empty() {
        IndexInterval i;
        i.is_empty = true;
        return i;
    }
    static IndexInterval all() { return IndexInterval{}; }
    static IndexInterval closed(Nat lo, Nat hi) {
        if (lo > hi) return empty();
        IndexInterval i;
        i.lo = std::move(lo);
        i.hi = std::move(hi);
        return i;
    }
    static IndexInterval from(Nat lo) {
        IndexInterval i;
        i.lo = std::move(lo);
        return i;
    }

    bool contains(const Nat& k) const {
        if (is_empty) return false;
        if (k < lo) return false;
        return !hi || k <= *hi;
    }
};

// Finitely supported map index -> rational (an element of c_00).
// Immutable value type: every operation returns a new vector; stored
// coefficients are never zero and indices start at 1.
class RationalVector {
  public:
    using Entries = std::map<Nat, Rat>;

    RationalVector() = default;

    static RationalVector from_entries(Entries e) {
        RationalVector v;
        for (auto& [k, c] : e) {
            if (k < 1) throw MalformedInput("vector index must be >= 1");
            if (c != 0) v.entries_.emplace(k, c);
        }
        return v;
    }

    static RationalVector unit(const Nat& k, const Rat& c = Rat(1)) {
        Entries e;
        e.emplace(k, c);
        return from_entries(std::move(e));
    }

    const Entries& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    Rat at(const Nat& k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? Rat(0) : it->second;
    }

    // Strictly increasing list of indices with nonzero coefficient.
    std::vector<Nat> support() const {
        std::vector<Nat> s;
        s.reserve(entries_.size());
        for (auto& [k, c] : entries_) s.push_back(k);
        return s;
    }

    std::optional<Nat> min_support() const {
        if (entries_.empty()) return std::nullopt;
        return entries_.begin()->first;
    }
    std::optional<Nat> max_support() const {
        if (entries_.empty()) return std::nullopt;
        return entries_.rbegin()->first;
    }

    RationalVector restrict(const IndexInterval& I) const {
        Entries e;
        if (!I.is_empty) {
            auto it = entries_.lower_bound(I.lo);
            for (; it != entries_.end(); ++it) {
                if (I.hi && it->first > *I.hi) break;
                e.insert(*it);
            }
        }
        RationalVector v;
        v.entries_ = std::move(e);
        return v;
    }

    // Restriction to an arbitrary index set (test plumbing for G ⊆ F checks).
    RationalVector restrict_to(const std::vector<Nat>& set) const {
        Entries e;
        for (auto& k : set) {
            auto it = entries_.find(k);
            if (it != entries_.end()) e.insert(*it);
        }
        RationalVector v;
        v.entries_ = std::move(e);
        return v;
    }

    RationalVector scaled(const Rat& c) const {
        RationalVector v;
        if (c == 0) return v;
        for (auto& [k, x] : entries_) v.entries_.emplace(k, x * c);
        return v;
    }

    friend RationalVector operator+(const RationalVector& a, const RationalVector& b) {
        Entries e = a.entries_;
        for (auto& [k, c] : b.entries_) {
            auto [it, fresh] = e.emplace(k, c);
            if (!fresh) {
                it->second += c;
                if (it->second == 0) e.erase(it);
            }
        }
        RationalVector v;
        v.entries_ = std::move(e);
        return v;
    }
    friend RationalVector operator-(const RationalVector& a, const RationalVector& b) {
        return a + b.scaled(Rat(-1));
    }

    Rat linf_norm() const {
        Rat m(0);
        for (auto& [k, c] : entries_) {
            Rat a = c < 0 ? Rat(-c) : c;
            if (a > m) m = a;
        }
        return m;
    }
    Rat l1_norm() const {
        Rat s(0);
        for (auto& [k, c] : entries_) s += (c < 0 ? Rat(-c) : c);
        return s;
    }

    bool operator==(const RationalVector& o) const { return entries_ == o.entries_; }

  private:
    Entries entries_;
};

// Ordered block sequence: max supp(blocks[i]) < min supp(blocks[i+1]).
struct BlockSequence {
    std::vector<RationalVector> blocks;

    // ok -> nullopt; otherwise the first offending adjacent pair (i, i+1).
    static std::optional<std::pair<std::size_t, std::size_t>> violation(
        const std::vector<RationalVector>& xs) {
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            auto hi = xs[i].max_support();
            auto lo = xs[i + 1].min_support();
            if (!hi || !lo) {
                // zero vectors cannot participate in a block sequence
                return std::make_pair(i, i + 1);
            }
            if (!(*hi < *lo)) return std::make_pair(i, i + 1);
        }
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i].is_zero()) return std::make_pair(i, i);
        return std::nullopt;
    }

    static std::optional<BlockSequence> make(std::vector<RationalVector> xs) {
        if (violation(xs)) return std::nullopt;
        BlockSequence b;
        b.blocks = std::move(xs);
        return b;
    }

    std::size_t size() const { return blocks.size(); }

    // psi(k) = min supp x_k, phi(k) = max supp x_k (0-based k here).
    Nat psi(std::size_t k) const { return *blocks.at(k).min_support(); }
    Nat phi(std::size_t k) const { return *blocks.at(k).max_support(); }

    std::vector<Nat> min_supports() const {
        std::vector<Nat> m;
        m.reserve(blocks.size());
        for (auto& b : blocks) m.push_back(*b.min_support());
        return m;
    }

    RationalVector combine(const std::vector<Rat>& coeffs) const {
        RationalVector::Entries e;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            if (coeffs.at(k) == 0) continue;
            for (auto& [i, c] : blocks[k].entries()) e.emplace(i, c * coeffs[k]);
        }
        return RationalVector::from_entries(std::move(e));
    }
};

}  // namespace normset
