#pragma once

#include "normset/coding.hpp"
#include "normset/config.hpp"
#include "normset/functional.hpp"
#include "normset/normsearch.hpp"
#include "normset/scc.hpp"
#include "normset/schreier.hpp"
#include "normset/tsirelson.hpp"
#include "normset/vector.hpp"

#include <optional>
#include <string>
#include <vector>

namespace normset {

// ---------------------------------------------------------------------------
// c_0-style blocks: y_k = sum_{i in F_k} e_i with #F_k <= min F_k, growing
// sizes, and per-block witness averages alpha_k with alpha_k(y_k) = 1.
// In faithful mode the size clause #F_{k+1} > 2^{max supp y_k} makes anything
// past a few blocks unrepresentable; the builder refuses with the estimate.
// ---------------------------------------------------------------------------

struct C0Blocks {
    BlockSequence blocks;
    std::vector<TermPtr> witnesses;  // uniform averages, s(alpha_k) = #F_k
};

inline C0Blocks build_c0_blocks(std::size_t count, const SpaceConfig& cfg,
                                const Nat& start_at = Nat(1), const Nat& min_size = Nat(1)) {
    C0Blocks out;
    std::vector<RationalVector> blocks;
    Nat next_start = start_at;
    Nat prev_size(0), prev_max(0);
    for (std::size_t k = 0; k < count; ++k) {
        Nat size = min_size;
        if (k > 0) {
            size = nat_max(min_size,
                           cfg.vfg_next_size(prev_size, prev_max));  // faithful growth may throw
            if (size > Nat(static_cast<unsigned long long>(cfg.entry_budget)))
                throw InfeasibleAtBudget("build_c0_blocks: block " + std::to_string(k) +
                                         " would need " + size.str() + " points");
        }
        Nat lo = nat_max(next_start, size);  // #F_k <= min F_k
        Nat hi = lo + size - 1;
        RationalVector::Entries e;
        std::vector<TermPtr> leaves;
        for (Nat i = lo; i <= hi; ++i) {
            e.emplace(i, Rat(1));
            leaves.push_back(term::type0(i));
        }
        blocks.push_back(RationalVector::from_entries(std::move(e)));
        out.witnesses.push_back(term::alpha_average(size, std::move(leaves)));
        prev_size = size;
        prev_max = hi;
        next_start = hi + 2;  // one-index gap keeps block boundaries visible
    }
    auto seq = BlockSequence::make(std::move(blocks));
    if (!seq) throw std::logic_error("build_c0_blocks: produced an invalid block sequence");
    out.blocks = std::move(*seq);
    return out;
}

// ---------------------------------------------------------------------------
// (C, theta, n) vectors and exact vectors.
// ---------------------------------------------------------------------------

struct ExactVectorRecord {
    Rat C;
    Rat theta;
    Nat n;            // the weight parameter of the definition
    Nat scc_level;    // level actually used by the s.c.c. (== n when faithful)
    Rat epsilon;
    BlockSequence blocks;
    std::vector<Rat> coeffs;
    std::vector<Rat> block_upper_certs;       // certified ||x_k|| upper bounds
    RationalVector x;                          // 2^n sum c_k x_k
    TermPtr companion;                         // type I_alpha, weight n, companion f
    Rat companion_value;                       // f(x) exactly
    std::optional<std::vector<Nat>> ris_ladder;
    std::vector<std::string> void_guarantees;  // paper clauses not honored (scaled)
};

inline Rat paper_eps_bound(const Rat& C, const Nat& n) {
    return Rat(1) / (36 * C * Rat(pow2(3 * n)));
}
// The scaled tolerance bound is deliberately independent of C: honest block
// certificates grow with the block count, and a C-coupled bound would chase
// its own tail (more blocks -> larger C -> smaller bound -> more blocks).
inline Rat scaled_eps_bound(const Nat& level) { return Rat(1) / (8 * (Rat(level) + 1)); }

struct RecordValidation {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(const std::string& s) {
        ok = false;
        violations.push_back(s);
    }
};

// Independent validator: shares no logic with the builder.
inline RecordValidation validate_exact_vector(const ExactVectorRecord& r, const SpaceConfig& cfg,
                                              const SigmaOracle* sigma = nullptr) {
    RecordValidation v;
    if (r.C < 1) v.fail("C must be >= 1");
    if (!(r.theta > 0)) v.fail("theta must be positive");
    if (BlockSequence::violation(r.blocks.blocks)) v.fail("blocks are not a block sequence");
    if (r.blocks.size() != r.coeffs.size() || r.blocks.size() != r.block_upper_certs.size())
        v.fail("coefficient/certificate arity mismatch");

    // epsilon clause (paper when representable, scaled fallback otherwise)
    bool paper_eps = false;
    if (3 * r.n <= Nat(64)) paper_eps = r.epsilon < paper_eps_bound(r.C, r.n);
    if (!paper_eps) {
        if (cfg.mode == Mode::faithful) v.fail("epsilon clause fails (faithful)");
        else if (!(r.epsilon < scaled_eps_bound(r.scc_level)))
            v.fail("epsilon clause fails (scaled fallback)");
    }

    // min-supp clause
    if (!r.blocks.blocks.empty()) {
        const Nat lo = *r.blocks.blocks.front().min_support();
        bool paper_min = false;
        if (2 * r.n <= Nat(64)) {
            Rat need = 8 * r.C * Rat(pow2(2 * r.n));
            paper_min = Rat(lo) >= need;
        }
        if (!paper_min) {
            if (cfg.mode == Mode::faithful) v.fail("min supp clause fails (faithful)");
            else if (!(Rat(lo) >= 8 * r.C &&
                       lo > Nat(static_cast<unsigned long>(r.blocks.size()))))
                v.fail("min supp clause fails (scaled fallback)");
        }
    }

    // scc clause at the psi points
    if (cfg.mode == Mode::faithful && r.scc_level != r.n) v.fail("scc level must equal n (faithful)");
    SccDescriptor d;
    d.level = r.scc_level;
    d.epsilon = r.epsilon;
    for (std::size_t k = 0; k < r.blocks.size(); ++k)
        d.coeffs.emplace(r.blocks.psi(k), r.coeffs[k]);
    auto sc = validate_basic_scc(d);
    if (!sc.ok) v.fail("psi projection is not a basic s.c.c.: " + sc.violated_clause);

    // assembly: x == 2^n sum c_k x_k
    RationalVector assembled = r.blocks.combine(r.coeffs).scaled(Rat(pow2(r.n)));
    if (!(assembled == r.x)) v.fail("x != 2^n sum c_k x_k");

    // block norms
    for (auto& u : r.block_upper_certs)
        if (u > r.C) v.fail("a block upper certificate exceeds C");

    // companion: valid W term of weight n, attains theta
    if (!r.companion) {
        v.fail("companion functional missing");
    } else {
        auto viols = validate(r.companion, Grammar::W, cfg, sigma);
        if (!viols.empty())
            v.fail("companion does not validate: " + viols.front().clause + " at " +
                   viols.front().path);
        if (evaluate(r.companion, r.x) != r.companion_value)
            v.fail("companion value mismatch");
        if (r.companion_value < r.theta) v.fail("companion does not certify theta");
    }

    // alpha-RIS ladder, structural clauses
    if (r.ris_ladder) {
        const auto& ladder = *r.ris_ladder;
        if (ladder.size() != r.blocks.size()) v.fail("ladder arity mismatch");
        bool paper_n1 = false;
        if (2 * r.n <= Nat(4096)) paper_n1 = !ladder.empty() && exceeds_pow2(ladder[0], 2 * r.n);
        if (!paper_n1) {
            if (cfg.mode == Mode::faithful) v.fail("ladder n_1 clause fails (faithful)");
            else if (ladder.empty() || !(ladder[0] > 2 * r.n + 1))
                v.fail("ladder n_1 clause fails (scaled fallback)");
        }
        for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
            if (!(ladder[k] < ladder[k + 1])) v.fail("ladder not strictly increasing");
            // (1/2^{n_{k+1}}) max supp x_k < 1/2^{n_k}
            Nat delta = ladder[k + 1] - ladder[k];
            const Nat& ms = r.blocks.phi(k);
            bool ok = false;
            if (ms == 0) ok = true;
            else {
                Nat bits = static_cast<unsigned long>(boost::multiprecision::msb(ms)) + 1;
                ok = bits <= delta;  // ms < 2^delta
            }
            if (!ok) v.fail("ladder growth clause (ii) fails at step " + std::to_string(k));
        }
    }
    return v;
}

enum class BlockStyle {
    unit,  // blocks are single unit vectors; C = 2; paper clauses attainable
    c0,    // blocks are uniform indicator sums with alpha_k(y_k) = 1 witnesses;
           // C is the certified max block norm; scaled mode only
};

// Builds a (C,theta,n) vector (exact when want_ris is set) with the companion
// f = (1/2^n) sum alpha_k of weight n.
//   unit style: alpha_k = (1/s_k)(e*_{m_k}); theta = sum c_k/s_k, small but
//               positive; every definition clause holds verbatim, including
//               in faithful mode (growth only pushes the size labels up).
//   c0 style:   alpha_k(y_k) = 1, so f(x) = 1 = theta; block certificates
//               grow like (size)/2, so C is the certified maximum.
// In scaled mode the s.c.c. level is capped by the config; the epsilon and
// min-supp clauses use the paper bounds whenever representable and the scaled
// fallbacks otherwise, everything recorded in void_guarantees.
inline ExactVectorRecord build_exact_vector(const Nat& n, const SpaceConfig& cfg,
                                            BlockStyle style = BlockStyle::c0,
                                            bool want_ris = true,
                                            std::optional<Nat> start_at = std::nullopt) {
    if (n < 1) throw MalformedInput("build_exact_vector: n must be >= 1");
    ExactVectorRecord r;
    r.n = n;
    r.scc_level = (cfg.mode == Mode::faithful)
                      ? n
                      : nat_min(n, Nat(static_cast<unsigned long>(cfg.scc_level_cap)));
    if (cfg.mode == Mode::scaled && r.scc_level != n)
        r.void_guarantees.push_back("s.c.c. level capped at " + r.scc_level.str());
    if (r.scc_level != 1)
        throw InfeasibleAtBudget(
            "build_exact_vector: a level-" + r.scc_level.str() +
            " s.c.c. below the definition's tolerance is intrinsically unrepresentable");
    if (style == BlockStyle::c0 && cfg.mode == Mode::faithful)
        throw InfeasibleAtBudget(
            "build_exact_vector: faithful very-fast-growing witnesses over indicator blocks "
            "exceed any representable support after three blocks");

    // Pick epsilon and the block count m (level 1: uniform 1/m < eps).
    const Rat C_unit(2);
    Rat eps;
    bool paper_eps_ok = false;
    if (style == BlockStyle::unit && 3 * n <= Nat(40)) {
        Rat pb = paper_eps_bound(C_unit, n);
        if (pb >= Rat(1, 8192)) {  // block count stays in the thousands
            eps = pb * Rat(1, 2);
            paper_eps_ok = true;
        }
    }
    if (!paper_eps_ok) {
        if (cfg.mode == Mode::faithful)
            throw InfeasibleAtBudget("build_exact_vector: faithful epsilon for n = " + n.str() +
                                     " is not representable");
        eps = scaled_eps_bound(r.scc_level) * Rat(1, 2);
        r.void_guarantees.push_back("epsilon relaxed to the scaled bound");
    }
    r.epsilon = eps;
    Rat inv = Rat(1) / eps;
    std::size_t m = clamp_to_size(numerator(inv) / denominator(inv) + 1, cfg.entry_budget);
    if (style == BlockStyle::c0 && m * (m + 3) / 2 > cfg.entry_budget)
        throw InfeasibleAtBudget("build_exact_vector: ~" + std::to_string(m) +
                                 " indicator blocks exceed the entry budget");

    // indicator blocks carry sizes 2..m+1, so the largest honest Tsirelson
    // certificate is (m+1)/2; unit blocks are certified at 1 and C = 2 keeps
    // the RIS decay strict
    r.C = (style == BlockStyle::unit)
              ? C_unit
              : Rat(nat_max(Nat(4), Nat(static_cast<unsigned long long>(m) + 1))) / Rat(2);

    // min supp: paper bound when representable and sane, else scaled fallback
    Nat min_lo = Nat(static_cast<unsigned long long>(m)) + 1;  // admissibility of the witness family
    {
        bool paper_min = false;
        if (2 * n <= Nat(40)) {
            Rat need = 8 * r.C * Rat(pow2(2 * n));
            Nat lo = numerator(need) / denominator(need);
            if (Rat(lo) < need) lo += 1;
            if (lo <= Nat(10'000'000)) {
                min_lo = nat_max(min_lo, lo);
                paper_min = true;
            }
        }
        if (!paper_min) {
            if (cfg.mode == Mode::faithful)
                throw InfeasibleAtBudget("build_exact_vector: faithful min-supp for n = " +
                                         n.str());
            Rat need = 8 * r.C;
            Nat lo = numerator(need) / denominator(need) + 1;
            min_lo = nat_max(min_lo, lo);
            r.void_guarantees.push_back("min supp clause relaxed (scaled)");
        }
    }
    if (start_at && *start_at > min_lo) min_lo = *start_at;

    // assemble blocks and witnesses
    std::vector<Rat> cs(m, Rat(1, static_cast<unsigned long>(m)));
    if (style == BlockStyle::unit) {
        std::vector<RationalVector> blocks;
        for (std::size_t k = 0; k < m; ++k) {
            Nat idx = min_lo + Nat(static_cast<unsigned long long>(k));
            blocks.push_back(RationalVector::unit(idx));
            r.block_upper_certs.push_back(Rat(1));  // ||e_idx|| = 1 exactly
        }
        auto seq = BlockSequence::make(std::move(blocks));
        if (!seq) throw std::logic_error("build_exact_vector: bad unit block sequence");
        r.blocks = std::move(*seq);
        // a single-member family certifies theta = 1/m without dragging the
        // faithful growth sizes (2^{index}-sized labels) into the arithmetic
        auto alpha1 = term::alpha_average(Nat(1), {term::type0(min_lo)});
        r.companion = term::type_i_alpha(n, {alpha1});
    } else {
        auto src = build_c0_blocks(m, cfg, min_lo, /*min_size=*/Nat(2));
        r.blocks = src.blocks;
        r.companion = term::type_i_alpha(n, src.witnesses);
        for (std::size_t k = 0; k < m; ++k)
            r.block_upper_certs.push_back(tsirelson_norm(r.blocks.blocks[k]).value);
    }
    r.coeffs = cs;
    r.x = r.blocks.combine(cs).scaled(Rat(pow2(n)));
    r.companion_value = evaluate(r.companion, r.x);
    r.theta = r.companion_value;

    if (want_ris) {
        std::vector<Nat> ladder;
        Nat at = (2 * n <= Nat(4096)) ? pow2(2 * n) + 1 : 2 * n + 2;
        if (2 * n > Nat(4096)) r.void_guarantees.push_back("ladder n_1 clause relaxed (scaled)");
        for (std::size_t k = 0; k < r.blocks.size(); ++k) {
            ladder.push_back(at);
            const Nat& ms = r.blocks.phi(k);
            Nat bits = static_cast<unsigned long>(boost::multiprecision::msb(ms)) + 1;
            at = at + bits + 1;
        }
        r.ris_ladder = std::move(ladder);
    }

    auto check = validate_exact_vector(r, cfg);
    if (!check.ok)
        throw std::logic_error("build_exact_vector: output fails validation: " +
                               check.violations.front());
    return r;
}

inline VectorInstance to_instance(const ExactVectorRecord& r) {
    VectorInstance inst;
    inst.x = r.x;
    inst.blocks = r.blocks;
    inst.coeffs = r.coeffs;
    inst.C = r.C;
    inst.n = r.n;
    inst.ris_ladder = r.ris_ladder;
    return inst;
}

// ---------------------------------------------------------------------------
// Exact pairs and dependent sequences.
// ---------------------------------------------------------------------------

struct ExactPair {
    int kind = 1;  // 1 or 0
    RationalVector x;
    TermPtr f;     // type I_alpha of weight n
    ExactVectorRecord record;
    Rat f_of_x;    // exactly 1 (kind 1) or 0 (kind 0)
    NormCertificate x_cert;
};

inline ExactPair build_exact_pair(const Nat& n, int kind, const SpaceConfig& cfg,
                                  CodingRegistry* registry,
                                  std::optional<Nat> start_at = std::nullopt) {
    if (kind != 0 && kind != 1) throw MalformedInput("build_exact_pair: kind must be 0 or 1");
    ExactPair p;
    p.kind = kind;
    p.record = build_exact_vector(n, cfg, BlockStyle::c0, /*want_ris=*/true, start_at);
    p.x = p.record.x;

    if (kind == 1) {
        p.f = p.record.companion;  // f(x) = 1 exactly (the eta slack is not exercised)
    } else {
        // averages (1/s)(e_a - e_b) vanish on the uniform blocks (all of
        // which carry at least two points)
        std::vector<TermPtr> parts;
        for (std::size_t k = 0; k < p.record.blocks.size(); ++k) {
            const auto& y = p.record.blocks.blocks[k];
            auto sup = y.support();
            if (sup.size() < 2) throw std::logic_error("build_exact_pair: block too small");
            const TermPtr& w = p.record.companion->children[k];
            std::vector<TermPtr> kids{term::type0(sup.front()), term::type0(sup.back(), -1)};
            parts.push_back(term::alpha_average(w->size, std::move(kids)));
        }
        p.f = term::type_i_alpha(n, std::move(parts));
    }
    p.f_of_x = evaluate(p.f, p.x);
    if ((kind == 1 && p.f_of_x != 1) || (kind == 0 && p.f_of_x != 0))
        throw std::logic_error("build_exact_pair: pair action is wrong");
    // definition clause (i): min supp x <= min supp f, max supp x <= max supp f
    if (!(*p.x.min_support() <= *p.f->min_supp) || !(*p.x.max_support() <= *p.f->max_supp))
        throw std::logic_error("build_exact_pair: support clause violated");

    SearchBudget b;
    p.x_cert = norm_certificate(p.x, b, cfg, registry);
    return p;
}

struct DependentSequence {
    int kind = 1;
    std::vector<ExactPair> pairs;
    std::vector<Nat> weights;  // m_1 in L_1, m_{k+1} = sigma(history)
    TermPtr type_ii_witness;   // (1/2) sum f_k, validates as type II in W
    std::vector<std::string> void_guarantees;
};

// Definition clauses: (i) pairs at weights m_k with m_1 > 4n 2^{2n},
// (ii) max supp f_k < min supp x_{k+1}, (iii) the f_k form a special sequence.
inline DependentSequence build_dependent_sequence(std::size_t length, int kind,
                                                  const SpaceConfig& cfg,
                                                  CodingRegistry& registry) {
    if (length < 1) throw MalformedInput("build_dependent_sequence: length must be >= 1");
    if (cfg.mode == Mode::faithful && length > 2)
        throw InfeasibleAtBudget(
            "build_dependent_sequence: faithful L_2 has a single representable element; "
            "lengths > 2 need scaled mode");

    DependentSequence seq;
    seq.kind = kind;

    Nat nn(static_cast<unsigned long long>(length));
    Nat m1_bound;
    if (2 * nn <= Nat(40)) {
        m1_bound = 4 * nn * pow2(2 * nn);
    } else {
        m1_bound = 4 * nn * (2 * nn + 1);
        seq.void_guarantees.push_back("m_1 bound relaxed (scaled)");
    }
    Nat m = cfg.smallest_L1_above(m1_bound);

    std::vector<std::pair<TermPtr, Nat>> history;
    Nat place(1);
    for (std::size_t k = 0; k < length; ++k) {
        auto pair = build_exact_pair(m, kind, cfg, &registry, place);
        if (!pair.f->has_support())
            throw std::logic_error("build_dependent_sequence: functional without support");
        place = *pair.f->max_supp + 1;  // clause (ii)
        seq.pairs.push_back(pair);
        seq.weights.push_back(m);
        history.emplace_back(pair.f, m);
        if (k + 1 < length) m = registry.assign(history);
    }

    std::vector<TermPtr> fs;
    for (auto& p : seq.pairs) fs.push_back(p.f);
    seq.type_ii_witness = term::type_ii(std::move(fs));
    auto viols = validate(seq.type_ii_witness, Grammar::W, cfg, &registry);
    if (!viols.empty())
        throw std::logic_error("build_dependent_sequence: witness fails type II validation: " +
                               viols.front().clause + " at " + viols.front().path);
    for (auto& v : cfg.void_guarantees()) seq.void_guarantees.push_back(v);
    return seq;
}

// ---------------------------------------------------------------------------
// alpha/beta index witness searches: best found sum over very fast growing
// S_n-admissible average families on single blocks. Diagnostic lower bounds,
// never a decision of the asymptotic index.
// ---------------------------------------------------------------------------

struct IndexWitness {
    Rat score;
    std::size_t block = 0;            // the block attaining the score
    std::vector<TermPtr> family;      // the attaining family
};

inline IndexWitness alpha_index_witness(const BlockSequence& xs, const Nat& n,
                                        const SearchBudget& budget, const SpaceConfig& cfg) {
    IndexWitness best;
    best.score = Rat(0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const auto& x = xs.blocks[k];
        detail::LowerSearch search{x, cfg, budget};
        auto rs = search.runs();
        for (std::size_t mcount = 1; mcount <= std::min(rs.size(), budget.children); ++mcount) {
            auto grouped = search.merged_runs(rs, mcount);
            // build the family with minimal legal sizes and score sum |alpha_q(x)|
            std::vector<TermPtr> family;
            Nat prev_size(0), prev_max(0);
            bool first = true;
            bool aborted = false;
            for (auto& g : grouped) {
                Nat size(1);
                if (!first) {
                    try {
                        size = cfg.vfg_next_size(prev_size, prev_max);
                    } catch (const InfeasibleAtBudget&) {
                        aborted = true;
                        break;
                    }
                }
                auto c = search.run_average(g, size);
                if (!c.term) continue;
                family.push_back(c.term);
                prev_size = c.term->size;
                prev_max = *c.term->max_supp;
                first = false;
            }
            if (aborted || family.empty()) continue;
            std::vector<Nat> mins;
            for (auto& a : family) mins.push_back(*a->min_supp);
            if (!is_member(mins, n)) continue;
            Rat score(0);
            for (auto& a : family) {
                Rat val = evaluate(a, x);
                score += val < 0 ? Rat(-val) : val;
            }
            if (score > best.score) best = {score, k, family};
        }
    }
    return best;
}

inline IndexWitness beta_index_witness(const BlockSequence& xs, const Nat& n,
                                       const SearchBudget& budget, const SpaceConfig& cfg,
                                       CodingRegistry& registry) {
    IndexWitness best;
    best.score = Rat(0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        for (long s = 1; s <= 4; ++s) {
            auto ds = dual_norm_score(xs.blocks[k], Nat(s), /*beta=*/true, budget, cfg, &registry);
            if (!ds.witness) continue;
            Rat val = ds.value * Rat(s);  // sum over the single family member
            Rat single = ds.value;
            (void)val;
            if (single > best.score) best = {single, k, {ds.witness}};
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// HI demonstration pair.
// ---------------------------------------------------------------------------

struct HiDemo {
    std::size_t n = 0;
    DependentSequence seq;        // 1-dependent, length 2n
    RationalVector x, y;          // interleaved averages
    Rat lower_x_plus_y;           // witness value for ||x+y||, >= 1
    TermPtr witness;              // the (1/2) sum f_k
    NormCertificate diff_report;  // upper report for ||x-y|| (no paper constant asserted)
};

inline HiDemo hi_demo(std::size_t n, const SpaceConfig& cfg, CodingRegistry& registry) {
    if (n < 1) throw MalformedInput("hi_demo: n must be >= 1");
    HiDemo out;
    out.n = n;
    out.seq = build_dependent_sequence(2 * n, /*kind=*/1, cfg, registry);

    std::vector<RationalVector> odd, even;
    for (std::size_t k = 0; k < 2 * n; ++k)
        (k % 2 == 0 ? odd : even).push_back(out.seq.pairs[k].x);
    Rat inv_n(1, static_cast<unsigned long>(n));
    RationalVector xs, ys;
    for (auto& b : odd) xs = xs + b.scaled(inv_n);
    for (auto& b : even) ys = ys + b.scaled(inv_n);
    out.x = xs;
    out.y = ys;

    out.witness = out.seq.type_ii_witness;
    out.lower_x_plus_y = evaluate(out.witness, out.x + out.y);

    // upper report for ||x - y|| through the block-domination route
    BlockPresentation pres;
    std::vector<RationalVector> all;
    std::vector<Rat> cs, us;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        all.push_back(out.seq.pairs[k].x);
        cs.push_back(k % 2 == 0 ? inv_n : Rat(-1) * inv_n);
        us.push_back(out.seq.pairs[k].x_cert.upper);
    }
    auto bs = BlockSequence::make(all);
    if (!bs) throw std::logic_error("hi_demo: pairs are not a block sequence");
    pres.blocks = *bs;
    pres.coeffs = cs;
    pres.upper_certs = us;
    SearchBudget b;
    out.diff_report = norm_certificate(out.x - out.y, b, cfg, &registry, &pres);
    return out;
}

}  // namespace normset
