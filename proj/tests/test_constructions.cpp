#include "normset/constructions.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace normset;

namespace {
const SpaceConfig S = SpaceConfig::scaled();
}

TEST_CASE("c0 blocks: shape and witnesses") {
    auto scaled = build_c0_blocks(5, S, Nat(3));
    CHECK(scaled.blocks.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        const auto& y = scaled.blocks.blocks[k];
        // #F_k <= min F_k
        CHECK(Nat(static_cast<unsigned long>(y.support_size())) <= *y.min_support());
        // witness evaluates to exactly 1
        CHECK(evaluate(scaled.witnesses[k], y) == 1);
    }
    // sizes strictly increase (the scaled very-fast-growing rule)
    for (std::size_t k = 1; k < 5; ++k)
        CHECK(scaled.witnesses[k]->size > scaled.witnesses[k - 1]->size);

    // faithful growth: F_2 needs more than 2^{max supp y_1} points, and the
    // fourth block is beyond any representable support
    auto F = SpaceConfig::faithful();
    auto faithful = build_c0_blocks(3, F, Nat(1));
    CHECK(faithful.blocks.blocks[0] == RationalVector::unit(Nat(1)));
    CHECK(exceeds_pow2(faithful.witnesses[1]->size, *faithful.blocks.blocks[0].max_support()));
    CHECK(exceeds_pow2(faithful.witnesses[2]->size, *faithful.blocks.blocks[1].max_support()));
    CHECK_THROWS_AS(build_c0_blocks(5, F, Nat(1)), InfeasibleAtBudget);
}

TEST_CASE("exact vector records validate") {
    // unit-style, faithful mode: every definition clause holds verbatim
    auto F = SpaceConfig::faithful();
    auto unit = build_exact_vector(Nat(1), F, BlockStyle::unit);
    CHECK(unit.void_guarantees.empty());
    CHECK(unit.scc_level == Nat(1));
    CHECK(unit.epsilon < paper_eps_bound(unit.C, Nat(1)));
    CHECK(validate_exact_vector(unit, F).ok);
    CHECK(unit.theta > 0);

    // c0-style, scaled: the companion attains exactly 1
    auto rec = build_exact_vector(Nat(1), S, BlockStyle::c0);
    CHECK(rec.companion_value == 1);
    CHECK(rec.theta == 1);
    CHECK(validate_exact_vector(rec, S).ok);
    // epsilon clause relaxed in scaled mode at this size
    CHECK_FALSE(rec.void_guarantees.empty());

    // scaled unit records for n = 2, 3 carry the level cap in their voids
    for (long n : {2L, 3L}) {
        auto r = build_exact_vector(Nat(n), S, BlockStyle::unit);
        CHECK(validate_exact_vector(r, S).ok);
        bool capped = false;
        for (auto& v : r.void_guarantees) capped |= v.find("capped") != std::string::npos;
        CHECK(capped);
    }
}

TEST_CASE("builder and validator are independent: tampering is caught") {
    auto rec = build_exact_vector(Nat(1), S, BlockStyle::c0);
    auto broken = rec;
    broken.x = broken.x + RationalVector::unit(Nat(1), Rat(1, 7));
    CHECK_FALSE(validate_exact_vector(broken, S).ok);

    auto broken2 = rec;
    broken2.epsilon = Rat(1);
    CHECK_FALSE(validate_exact_vector(broken2, S).ok);

    auto broken3 = rec;
    broken3.theta = broken3.companion_value + 1;
    CHECK_FALSE(validate_exact_vector(broken3, S).ok);
}

TEST_CASE("exact pairs") {
    CodingRegistry reg(S);
    auto p1 = build_exact_pair(Nat(4), 1, S, &reg);
    CHECK(p1.f_of_x == 1);
    CHECK(p1.f->weight == Nat(4));
    CHECK(*p1.x.min_support() <= *p1.f->min_supp);
    CHECK(*p1.x.max_support() <= *p1.f->max_supp);
    CHECK(validates(p1.f, Grammar::W, S, &reg));
    CHECK(p1.x_cert.lower <= p1.x_cert.upper);

    auto p0 = build_exact_pair(Nat(4), 0, S, &reg);
    CHECK(p0.f_of_x == 0);
    CHECK(validates(p0.f, Grammar::W, S, &reg));
    CHECK(validate_exact_vector(p0.record, S).ok);
}

TEST_CASE("dependent sequences") {
    CodingRegistry reg(S);
    auto seq = build_dependent_sequence(4, 1, S, reg);
    REQUIRE(seq.pairs.size() == 4);
    // clause (i): m_1 in L_1 above the bound
    CHECK(S.in_L1(seq.weights[0]));
    CHECK(seq.weights[0] > 4 * Nat(4) * pow2(Nat(8)));
    // clause (ii): max supp f_k < min supp x_{k+1}
    for (std::size_t k = 0; k + 1 < 4; ++k)
        CHECK(*seq.pairs[k].f->max_supp < *seq.pairs[k + 1].x.min_support());
    // clause (iii): the assembled functional is a valid type II term
    CHECK(validates(seq.type_ii_witness, Grammar::W, S, &reg));
    // sigma-coherence: weights equal the registry assignments
    std::vector<std::pair<TermPtr, Nat>> hist;
    for (std::size_t k = 0; k + 1 < 4; ++k) {
        hist.emplace_back(seq.pairs[k].f, seq.weights[k]);
        CHECK(reg.assign(hist) == seq.weights[k + 1]);
    }
    // witness evaluation: (1/2) sum f_k on sum x_k equals half the length
    RationalVector total;
    for (auto& p : seq.pairs) total = total + p.x;
    CHECK(evaluate(seq.type_ii_witness, total) == Rat(2));  // 4 pairs: (1/2)*4
}

TEST_CASE("faithful dependent sequences are refused beyond the representable L_2") {
    auto F = SpaceConfig::faithful();
    CodingRegistry reg(F);
    CHECK_THROWS_AS(build_dependent_sequence(3, 1, F, reg), InfeasibleAtBudget);
}

TEST_CASE("alpha index witness") {
    SearchBudget b;
    // c_0-style blocks: per-block witness averages give score >= 1
    auto c0 = build_c0_blocks(4, S, Nat(5));
    auto w = alpha_index_witness(c0.blocks, Nat(1), b, S);
    CHECK(w.score >= 1);
    REQUIRE_FALSE(w.family.empty());
    // the family really is very fast growing and admissible
    std::vector<Nat> mins;
    for (auto& a : w.family) mins.push_back(*a->min_supp);
    CHECK(is_member(mins, Nat(1)));

    // exact vectors with increasing n: scores stay under the lemma bound
    CodingRegistry reg(S);
    std::vector<RationalVector> xs;
    Nat place(40);
    std::vector<ExactVectorRecord> recs;
    for (long n : {2L, 3L, 4L}) {
        auto r = build_exact_vector(Nat(n), S, BlockStyle::c0, true, place);
        place = *r.x.max_support() + 1;
        xs.push_back(r.x);
        recs.push_back(r);
    }
    auto seq = BlockSequence::make(xs);
    REQUIRE(seq);
    auto w2 = alpha_index_witness(*seq, Nat(1), b, S);
    // diagnostic consistency: the attained family obeys the 3.7-style bound
    const auto& rec = recs[w2.block];
    Rat bound = 6 * rec.C / Rat(w2.family.front()->size) + inv_pow2(rec.n);
    CHECK(w2.score < bound);
}

TEST_CASE("beta index witness needs the registry") {
    SearchBudget b;
    CodingRegistry reg(S);
    // seed the registry with a short special sequence over a known window
    auto seqd = build_dependent_sequence(2, 1, S, reg);
    std::vector<RationalVector> xs;
    for (auto& p : seqd.pairs) xs.push_back(p.x);
    auto seq = BlockSequence::make(xs);
    REQUIRE(seq);
    auto w = beta_index_witness(*seq, Nat(1), b, S, reg);
    // scores are honest lower bounds: the witness evaluates to the score
    if (w.family.size() == 1 && w.score > 0)
        CHECK(evaluate(w.family[0], seq->blocks[w.block]) * Rat(w.family[0]->size) >= 0);
    CHECK(w.score >= 0);
}

TEST_CASE("hi demo") {
    CodingRegistry reg(S);
    auto demo = hi_demo(2, S, reg);
    CHECK(demo.lower_x_plus_y >= 1);
    CHECK(validates(demo.witness, Grammar::W, S, &reg));
    // interleaving: x lives on the odd pairs, y on the even ones
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& block = demo.seq.pairs[k].x;
        auto inside_x = demo.x.restrict(IndexInterval::closed(*block.min_support(),
                                                              *block.max_support()));
        auto inside_y = demo.y.restrict(IndexInterval::closed(*block.min_support(),
                                                              *block.max_support()));
        if (k % 2 == 0) {
            CHECK_FALSE(inside_x.is_zero());
            CHECK(inside_y.is_zero());
        } else {
            CHECK(inside_x.is_zero());
            CHECK_FALSE(inside_y.is_zero());
        }
    }
    // the upper report exists and is sound
    CHECK(demo.diff_report.lower <= demo.diff_report.upper);
}
