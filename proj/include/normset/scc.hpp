#pragma once

#include "normset/rational.hpp"
#include "normset/schreier.hpp"
#include "normset/vector.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace normset {

// ---------------------------------------------------------------------------
// (n, eps) basic special convex combinations and their lifts.
// ---------------------------------------------------------------------------

struct SccDescriptor {
    Nat level;               // n >= 1
    Rat epsilon;             // 0 < eps <= 1
    std::map<Nat, Rat> coeffs;

    std::vector<Nat> support() const {
        std::vector<Nat> f;
        for (auto& [k, c] : coeffs) f.push_back(k);
        return f;
    }
    RationalVector vector() const {
        RationalVector::Entries e(coeffs.begin(), coeffs.end());
        return RationalVector::from_entries(std::move(e));
    }
};

struct SccValidation {
    bool ok = false;
    std::string violated_clause;     // empty when ok
    Rat worst_mass;                  // max S_{n-1} portion found
    std::vector<Nat> worst_witness;  // the portion attaining it
};

// Checks both clauses of the definition exactly.
inline SccValidation validate_basic_scc(const SccDescriptor& d) {
    SccValidation r;
    if (d.level < 1) {
        r.violated_clause = "level must be >= 1";
        return r;
    }
    if (!(d.epsilon > 0)) {
        r.violated_clause = "epsilon must be positive";
        return r;
    }
    Rat total(0);
    for (auto& [k, c] : d.coeffs) {
        if (c < 0) {
            r.violated_clause = "coefficients must be nonnegative";
            return r;
        }
        total += c;
    }
    if (total != 1) {
        r.violated_clause = "coefficients must sum to 1";
        return r;
    }
    if (!is_member(d.support(), d.level)) {
        r.violated_clause = "support not in S_n";
        return r;
    }
    auto worst = max_schreier_sum(d.coeffs, d.level - 1);
    r.worst_mass = worst.value;
    r.worst_witness = std::move(worst.witness);
    if (!(r.worst_mass < d.epsilon)) {
        r.violated_clause = "an S_{n-1} portion reaches epsilon";
        return r;
    }
    r.ok = true;
    return r;
}

// Strictly increasing index source (lazily consumed, single consumer per call).
struct IndexStream {
    virtual ~IndexStream() = default;
    virtual Nat next() = 0;
};

struct NaturalsFrom final : IndexStream {
    Nat at;
    explicit NaturalsFrom(Nat start) : at(std::move(start)) {}
    Nat next() override { return at++; }
};

struct VectorStream final : IndexStream {
    std::vector<Nat> values;
    std::size_t pos = 0;
    explicit VectorStream(std::vector<Nat> v) : values(std::move(v)) {}
    Nat next() override {
        if (pos >= values.size()) throw InfeasibleAtBudget("index stream exhausted");
        return values[pos++];
    }
};

namespace detail {

struct SccBuilder {
    IndexStream& stream;
    std::size_t entry_budget;
    std::size_t entries = 0;

    std::map<Nat, Rat> build(const Nat& level) {
        if (level == 0) {
            if (++entries > entry_budget)
                throw InfeasibleAtBudget("generate_basic_scc: entry budget exhausted");
            return {{stream.next(), Rat(1)}};
        }
        // uniform average of p level-(n-1) combinations, p = min of the first
        std::map<Nat, Rat> first = build(level - 1);
        Nat p = first.begin()->first;
        std::size_t parts = clamp_to_size(p, entry_budget + 1);
        if (parts > entry_budget)
            throw InfeasibleAtBudget("generate_basic_scc: too many parts at level " +
                                     level.str());
        std::vector<std::map<Nat, Rat>> pieces;
        pieces.push_back(std::move(first));
        for (std::size_t j = 1; j < parts; ++j) pieces.push_back(build(level - 1));
        std::map<Nat, Rat> out;
        Rat inv = Rat(1) / Rat(p);
        for (auto& piece : pieces)
            for (auto& [k, c] : piece) out.emplace(k, c * inv);
        return out;
    }
};

// Size of the repeated-averages construction assuming a consecutive stream —
// a lower bound on the entry count for any stream, used as a refusal gate
// before any work happens.
inline Nat estimate_scc_entries(const Nat& level, const Nat& start, const Nat& cap) {
    if (level == 0) return Nat(1);
    if (level == 1) return start;  // uniform on {start .. 2*start - 1}
    Nat consumed(0);
    Nat at = start;
    Nat parts = start;
    for (Nat j = 0; j < parts; ++j) {
        Nat sz = estimate_scc_entries(level - 1, at, cap);
        consumed += sz;
        if (consumed > cap) return consumed;  // early out, already infeasible
        at += sz;
    }
    return consumed;
}

}  // namespace detail

// Repeated-averages generator. Skips into M until the leading index exceeds
// 1/eps, then builds the level-n uniform hierarchy. Always validates its own
// output before returning it.
inline SccDescriptor generate_basic_scc(IndexStream& M, const Nat& n, const Rat& eps,
                                        std::size_t entry_budget = 2'000'000) {
    if (n < 1) throw MalformedInput("generate_basic_scc: n must be >= 1");
    if (!(eps > 0) || eps > 1) throw MalformedInput("generate_basic_scc: need 0 < eps <= 1");

    Nat lead = M.next();
    std::size_t skipped = 0;
    while (!(Rat(lead) * eps > 1)) {
        lead = M.next();
        if (++skipped > 1'000'000)
            throw InfeasibleAtBudget("generate_basic_scc: stream never exceeds 1/eps");
    }

    Nat cap(static_cast<unsigned long long>(entry_budget));
    Nat est = detail::estimate_scc_entries(n, lead, cap);
    if (est > cap)
        throw InfeasibleAtBudget("generate_basic_scc: a (" + n.str() + "," + rat_to_string(eps) +
                                 ") basic s.c.c. from " + lead.str() + " needs >= " + est.str() +
                                 " support points");

    // replay the stream with the leading element back in front
    struct Prepend final : IndexStream {
        Nat head;
        bool used = false;
        IndexStream& rest;
        Prepend(Nat h, IndexStream& r) : head(std::move(h)), rest(r) {}
        Nat next() override {
            if (!used) {
                used = true;
                return head;
            }
            return rest.next();
        }
    } replay(lead, M);

    detail::SccBuilder b{replay, entry_budget};
    SccDescriptor d;
    d.level = n;
    d.epsilon = eps;
    d.coeffs = b.build(n);

    auto check = validate_basic_scc(d);
    if (!check.ok)
        throw InfeasibleAtBudget("generate_basic_scc: construction failed validation (" +
                                 check.violated_clause + "); worst mass " +
                                 rat_to_string(check.worst_mass));
    return d;
}

// Sum c_k x_k where the coefficients, projected onto psi(k) = min supp x_k,
// must form an (n, eps) basic s.c.c.
inline RationalVector lift_scc(const BlockSequence& blocks, const SccDescriptor& d) {
    if (blocks.size() != d.coeffs.size())
        throw MalformedInput("lift_scc: block count does not match coefficient count");
    std::vector<Rat> cs;
    for (auto& [k, c] : d.coeffs) cs.push_back(c);

    SccDescriptor projected;
    projected.level = d.level;
    projected.epsilon = d.epsilon;
    for (std::size_t k = 0; k < blocks.size(); ++k) projected.coeffs.emplace(blocks.psi(k), cs[k]);
    auto check = validate_basic_scc(projected);
    if (!check.ok)
        throw MalformedInput("lift_scc: psi-projection-invalid (" + check.violated_clause + ")");
    return blocks.combine(cs);
}

// phi-shift of a descriptor along a block sequence (used by the Cor-2.21-style
// upper bound path: if the psi projection is (n,eps), the phi projection is
// expected to be (n,2eps); checked by the validator, never assumed).
inline SccDescriptor phi_shift(const BlockSequence& blocks, const SccDescriptor& d) {
    if (blocks.size() != d.coeffs.size())
        throw MalformedInput("phi_shift: block count does not match coefficient count");
    std::vector<Rat> cs;
    for (auto& [k, c] : d.coeffs) cs.push_back(c);
    SccDescriptor out;
    out.level = d.level;
    out.epsilon = d.epsilon * 2;
    for (std::size_t k = 0; k < blocks.size(); ++k) out.coeffs.emplace(blocks.phi(k), cs[k]);
    return out;
}

}  // namespace normset
