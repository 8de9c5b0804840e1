#pragma once

// Brute-force oracles for the test and acceptance suites. These follow the
// recursive definitions literally and share no code with the library paths
// they check.

#include "normset/rational.hpp"
#include "normset/vector.hpp"

#include <map>
#include <random>
#include <utility>
#include <vector>

namespace normset::oracle {

// F in S_n straight from the recursion: S_0 = singletons,
// S_{n+1} = unions of at most min F sets from S_n. Empty set convention
// matches the library (member of every level).
class BruteSchreier {
  public:
    bool member(const std::vector<Nat>& sorted_set, int n) {
        if (sorted_set.empty()) return true;
        if (n < 0) return false;
        auto key = std::make_pair(sorted_set, n);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool ok;
        if (n == 0) {
            ok = sorted_set.size() == 1;
        } else {
            std::size_t budget = clamp_to_size(sorted_set[0], sorted_set.size());
            ok = cut_ok(sorted_set, 0, budget, n);
        }
        memo_.emplace(std::move(key), ok);
        return ok;
    }

    Rat max_sum(const std::map<Nat, Rat>& weights, int n, std::vector<Nat>* witness = nullptr) {
        std::vector<Nat> pts;
        std::vector<Rat> w;
        for (auto& [k, c] : weights) {
            if (c == 0) continue;
            pts.push_back(k);
            w.push_back(c);
        }
        Rat best(0);
        std::vector<Nat> bw;
        const std::size_t N = pts.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << N); ++mask) {
            std::vector<Nat> sub;
            Rat s(0);
            for (std::size_t i = 0; i < N; ++i)
                if (mask & (std::uint64_t(1) << i)) {
                    sub.push_back(pts[i]);
                    s += w[i];
                }
            if (s > best && member(sub, n)) {
                best = s;
                bw = std::move(sub);
            }
        }
        if (witness) *witness = bw;
        return best;
    }

  private:
    bool cut_ok(const std::vector<Nat>& set, std::size_t from, std::size_t parts_left, int n) {
        if (from == set.size()) return true;
        if (parts_left == 0) return false;
        for (std::size_t len = 1; from + len <= set.size(); ++len) {
            std::vector<Nat> part(set.begin() + from, set.begin() + from + len);
            if (member(part, n - 1) && cut_ok(set, from + len, parts_left - 1, n)) return true;
        }
        return false;
    }

    std::map<std::pair<std::vector<Nat>, int>, bool> memo_;
};

// Deterministic random rationals/vectors for the randomized suites.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    long pick(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(gen);
    }

    // rational in [-bound, bound], denominator up to 8
    Rat coeff(long bound = 3) {
        long q = pick(1, 8);
        long p = pick(-bound * q, bound * q);
        return Rat(p, q);
    }

    // vector with support_size distinct indices drawn from [1, index_cap]
    RationalVector vector(std::size_t support_size, long index_cap, long bound = 3) {
        RationalVector::Entries e;
        while (e.size() < support_size) {
            Nat k(pick(1, index_cap));
            Rat c = coeff(bound);
            if (c == 0) c = Rat(1, pick(1, 8));
            e.emplace(std::move(k), std::move(c));
        }
        return RationalVector::from_entries(std::move(e));
    }
};

}  // namespace normset::oracle
