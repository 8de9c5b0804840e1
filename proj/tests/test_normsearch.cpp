#include "normset/constructions.hpp"
#include "normset/normsearch.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace normset;

namespace {
const SpaceConfig S = SpaceConfig::scaled();

TermPtr uniform_leaf_average(long lo, long count, long size) {
    std::vector<TermPtr> leaves;
    for (long i = 0; i < count; ++i) leaves.push_back(term::type0(Nat(lo + i)));
    return term::alpha_average(Nat(size), std::move(leaves));
}
}  // namespace

TEST_CASE("tsirelson analysis reconstructs the functional") {
    // weight-2 term: parts have weight 1 and f = (1/2) sum g_i
    auto a1 = uniform_leaf_average(3, 2, 2);
    auto a2 = uniform_leaf_average(6, 3, 3);
    auto a3 = uniform_leaf_average(10, 4, 4);
    auto f = term::type_i_alpha(Nat(2), {a1, a2, a3});
    REQUIRE(validates(f, Grammar::W, S));

    auto parts = tsirelson_analysis(f);
    REQUIRE_FALSE(parts.empty());
    for (auto& g : parts) {
        CHECK(g->kind == TermKind::type_i_alpha);
        CHECK(g->weight == Nat(1));
    }
    // S_1-admissibility across parts and exact reconstruction
    std::vector<Nat> mins;
    for (auto& g : parts) mins.push_back(*g->min_supp);
    CHECK(is_member(mins, Nat(1)));

    oracle::Rng rng(67);
    for (int t = 0; t < 20; ++t) {
        auto v = rng.vector(7, 14);
        Rat direct = evaluate(f, v);
        Rat sum(0);
        for (auto& g : parts) sum += evaluate(g, v);
        CHECK(direct == sum / 2);
    }

    // weight-1 terms: the analysis is the children themselves
    auto f1 = term::type_i_alpha(Nat(1), {a1, a2});
    auto parts1 = tsirelson_analysis(f1);
    CHECK(parts1 == f1->children);
}

TEST_CASE("tree analysis shape") {
    auto leaf = term::type0(Nat(5));
    auto ta0 = tree_analysis(leaf);
    CHECK(ta0.nodes.size() == 1);

    auto a1 = uniform_leaf_average(3, 2, 2);
    auto a2 = uniform_leaf_average(6, 3, 3);
    auto f = term::type_i_alpha(Nat(1), {a1, a2});
    auto ta = tree_analysis(f);
    // root -> 2 averages -> leaves; the root is a non-convex (1/2)-sum node
    CHECK_FALSE(ta.nodes[ta.root].convex);
    CHECK(ta.nodes[ta.root].children.size() == 2);
    for (auto c : ta.nodes[ta.root].children) CHECK(ta.nodes[c].convex);

    // every non-convex non-maximal node evaluates as half the children sum
    oracle::Rng rng(71);
    for (int t = 0; t < 15; ++t) {
        auto v = rng.vector(6, 10);
        for (auto& node : ta.nodes) {
            if (node.children.empty() || node.convex) continue;
            Rat sum(0);
            for (auto c : node.children) sum += evaluate(ta.nodes[c].f, v);
            CHECK(evaluate(node.f, v) == sum / 2);
        }
    }
}

namespace {
BlockSequence small_blocks(const std::vector<std::vector<long>>& groups) {
    std::vector<RationalVector> blocks;
    for (auto& g : groups) {
        RationalVector::Entries e;
        for (std::size_t i = 0; i < g.size(); i += 2)
            e.emplace(Nat(g[i]), Rat(g[i + 1], 4));
        blocks.push_back(RationalVector::from_entries(std::move(e)));
    }
    auto seq = BlockSequence::make(std::move(blocks));
    REQUIRE(seq);
    return *seq;
}
}  // namespace

TEST_CASE("basic inequality witness on hand-built cases") {
    // single leaf meeting one block -> e*_{phi(k)}
    auto blocks = small_blocks({{3, 2, 4, 1}, {7, 3}, {9, 1, 11, 2}});
    auto f_leaf = term::type0(Nat(4));
    auto g = basic_inequality_witness(f_leaf, blocks, S);
    CHECK(2 * evaluate(g, RationalVector::unit(blocks.phi(0))) >=
          evaluate(f_leaf, blocks.blocks[0]));

    // convex combination: witness is the convex combination of child witnesses
    auto f_cx = term::convex({Rat(1, 3), Rat(2, 3)}, {term::type0(Nat(3)), term::type0(Nat(7))});
    auto g_cx = basic_inequality_witness(f_cx, blocks, S);
    CHECK(validates(g_cx, Grammar::W_mod, S));
}

TEST_CASE("basic inequality witness randomized") {
    oracle::Rng rng(73);
    CodingRegistry reg(S);
    for (int t = 0; t < 60; ++t) {
        // random block sequence with l1 norms <= 1  =>  ||x_k|| <= 1 certified
        long at = rng.pick(1, 4);
        std::vector<RationalVector> bl;
        std::size_t nblocks = static_cast<std::size_t>(rng.pick(1, 5));
        for (std::size_t k = 0; k < nblocks; ++k) {
            RationalVector::Entries e;
            long width = rng.pick(1, 3);
            for (long i = 0; i < width; ++i) {
                Rat c(rng.pick(-3, 3), 12);
                if (c != 0) e.emplace(Nat(at), c);
                at += rng.pick(1, 2);
            }
            if (e.empty()) e.emplace(Nat(at++), Rat(1, 4));
            bl.push_back(RationalVector::from_entries(std::move(e)));
            at += rng.pick(1, 2);
        }
        auto seq = BlockSequence::make(bl);
        REQUIRE(seq);

        // random f in W over roughly the same index range (depth <= 4)
        auto a1 = uniform_leaf_average(rng.pick(3, 5), 2, 2);
        long mid = rng.pick(8, 12);
        auto a2 = uniform_leaf_average(mid, 3, 3);
        auto a3 = uniform_leaf_average(mid + 4, rng.pick(1, 4), 4);
        TermPtr f;
        switch (rng.pick(0, 3)) {
            case 0: f = term::type_i_alpha(Nat(1), {a1, a2, a3}); break;
            case 1:
                f = term::convex({Rat(1, 2), Rat(1, 2)},
                                 {a1, term::type_i_alpha(Nat(1), {a2, a3})});
                break;
            case 2:
                f = term::restricted(IndexInterval::closed(Nat(2), Nat(mid + 3)),
                                     term::type_i_alpha(Nat(1), {a1, a2, a3}), -1);
                break;
            default: f = term::type_i_alpha(Nat(2), {a1, a2, a3}); break;
        }
        REQUIRE(validates(f, Grammar::W, S, &reg));

        auto g = basic_inequality_witness(f, *seq, S);
        CHECK(validates(g, Grammar::W_mod, S));
        for (std::size_t k = 0; k < seq->size(); ++k) {
            Rat lhs = 2 * evaluate(g, RationalVector::unit(seq->phi(k)));
            Rat rhs = evaluate(f, seq->blocks[k]);
            CHECK(lhs >= rhs);
        }
    }
}

TEST_CASE("norm certificate basics") {
    SearchBudget b;
    auto cert = norm_certificate(RationalVector::unit(Nat(5)), b, S);
    CHECK(cert.lower == 1);
    CHECK(cert.upper == 1);
    CHECK(evaluate(cert.witness, RationalVector::unit(Nat(5))) == 1);

    auto zero = norm_certificate(RationalVector(), b, S);
    CHECK(zero.lower == 0);
    CHECK(zero.upper == 0);
}

TEST_CASE("norm certificate soundness and budget monotonicity") {
    oracle::Rng rng(79);
    for (int t = 0; t < 25; ++t) {
        auto v = rng.vector(static_cast<std::size_t>(rng.pick(1, 9)), 40);
        SearchBudget small{2, 2, 8, 100000};
        SearchBudget large{6, 8, 64, 4000000};
        auto cs = norm_certificate(v, small, S);
        auto cl = norm_certificate(v, large, S);
        CHECK(cs.lower <= cs.upper);
        CHECK(cl.lower <= cl.upper);
        CHECK(evaluate(cs.witness, v) == cs.lower);
        CHECK(evaluate(cl.witness, v) == cl.lower);
        CHECK(cl.lower >= cs.lower);
        CHECK(cl.upper <= cs.upper);
        // the W-norm upper stays within the Tsirelson norm
        CHECK(cl.upper <= tsirelson_norm(v).value);
    }
}

TEST_CASE("prop 2.23 style family is recovered by the search") {
    // blocks y_j with witness averages give f = (1/2) sum alpha_j, value sum
    auto c0 = build_c0_blocks(4, S, Nat(6));
    RationalVector v;
    for (auto& y : c0.blocks.blocks) v = v + y;
    SearchBudget b;
    auto cert = norm_certificate(v, b, S);
    // each alpha_j(y_j) = 1, the family is S_1-admissible: lower >= 4/2 = 2
    CHECK(cert.lower >= 2);
    CHECK(validates(cert.witness, Grammar::W, S));
}

TEST_CASE("dual norm score") {
    SearchBudget b;
    auto one = dual_norm_score(RationalVector::unit(Nat(4)), Nat(1), false, b, S);
    CHECK(one.value == 1);

    RationalVector::Entries e;
    for (long i = 5; i <= 9; ++i) e.emplace(Nat(i), Rat(1));
    auto v = RationalVector::from_entries(std::move(e));
    auto full = dual_norm_score(v, Nat(5), false, b, S);
    CHECK(full.value == 1);  // uniform average of the five unit functionals
    CHECK(evaluate(full.witness, v) == 1);

    auto big = dual_norm_score(v, Nat(40), false, b, S);
    CHECK(big.value >= Rat(5, 40));  // linf * d / j from the leaf family
}

TEST_CASE("harness hypothesis checks reject malformed instances") {
    auto rec = build_exact_vector(Nat(2), S, BlockStyle::unit);
    auto inst = to_instance(rec);
    // j >= n is not a lemma-3.7 instance
    CHECK_THROWS_AS(harness_lemma_3_7(inst, {uniform_leaf_average(2, 2, 2)}, Nat(2), S),
                    MalformedInput);
    // a type 0 leaf is not an alpha-average
    CHECK_THROWS_AS(harness_lemma_3_6(inst, term::type0(Nat(3))), MalformedInput);
}
