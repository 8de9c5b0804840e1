#include "normset/coding.hpp"
#include "normset/functional.hpp"
#include "normset/tsirelson.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

using namespace normset;

namespace {

const SpaceConfig S = SpaceConfig::scaled();

// (1/s) uniform average of the unit functionals over [lo, lo+count)
TermPtr uniform_leaf_average(long lo, long count, long size) {
    std::vector<TermPtr> leaves;
    for (long i = 0; i < count; ++i) leaves.push_back(term::type0(Nat(lo + i)));
    return term::alpha_average(Nat(size), std::move(leaves));
}

RationalVector ones(std::initializer_list<long> idx) {
    RationalVector::Entries e;
    for (auto i : idx) e.emplace(Nat(i), Rat(1));
    return RationalVector::from_entries(std::move(e));
}

}  // namespace

TEST_CASE("type 0 leaves validate and evaluate") {
    auto f = term::type0(Nat(4));
    CHECK(validates(f, Grammar::W, S));
    CHECK(evaluate(f, RationalVector::unit(Nat(4))) == 1);
    CHECK(evaluate(f, RationalVector()) == 0);
    auto neg = term::type0(Nat(4), -1);
    CHECK(evaluate(neg, RationalVector::unit(Nat(4))) == -1);
}

TEST_CASE("alpha averages: arity and successiveness") {
    auto ok = uniform_leaf_average(5, 3, 4);  // 3 children, size 4
    CHECK(validates(ok, Grammar::W, S));
    auto too_many = uniform_leaf_average(5, 5, 4);
    CHECK_FALSE(validates(too_many, Grammar::W, S));

    auto disordered =
        term::alpha_average(Nat(2), {term::type0(Nat(7)), term::type0(Nat(5))});
    CHECK_FALSE(validates(disordered, Grammar::W, S));
    CHECK(evaluate(ok, ones({5, 6, 7})) == Rat(3, 4));
}

TEST_CASE("type I_alpha: admissibility and very fast growing sizes") {
    // scaled mode: sizes strictly increasing; min supports S_1-admissible
    auto a1 = uniform_leaf_average(3, 2, 2);
    auto a2 = uniform_leaf_average(6, 3, 3);
    auto a3 = uniform_leaf_average(10, 4, 4);
    auto f = term::type_i_alpha(Nat(1), {a1, a2, a3});
    CHECK(validates(f, Grammar::W, S));

    auto shrinking = term::type_i_alpha(Nat(1), {a2, uniform_leaf_average(10, 2, 2)});
    auto viol = validate(shrinking, Grammar::W, S);
    REQUIRE_FALSE(viol.empty());
    bool has_vfg = false;
    for (auto& v : viol) has_vfg |= v.clause == "very fast growing";
    CHECK(has_vfg);

    // faithful mode demands s(next) > 2^{max supp prev}
    auto F = SpaceConfig::faithful();
    auto small_sizes = term::type_i_alpha(Nat(1), {a1, a2});
    CHECK_FALSE(validates(small_sizes, Grammar::W, F));
    auto big = term::alpha_average(Nat(300), {term::type0(Nat(9))});
    auto faithful_ok = term::type_i_alpha(Nat(1), {uniform_leaf_average(3, 2, 2), big});
    CHECK(validates(faithful_ok, Grammar::W, F));  // 300 > 2^7
}

TEST_CASE("evaluation matches hand computation for weighted nodes") {
    auto a1 = uniform_leaf_average(3, 2, 2);   // value 1 on ones: 2 * (1/2)
    auto a2 = uniform_leaf_average(6, 3, 3);   // value 1
    auto f = term::type_i_alpha(Nat(2), {a1, a2});
    CHECK(evaluate(f, ones({3, 4, 6, 7, 8})) == Rat(1, 2));  // (1/4)(1 + 1)
    auto r = term::restricted(IndexInterval::closed(Nat(6), Nat(8)), f, -1);
    CHECK(evaluate(r, ones({3, 4, 6, 7, 8})) == Rat(-1, 4));
}

TEST_CASE("restriction identity: (If)(v) == f(restrict(v, I))") {
    oracle::Rng rng(53);
    auto a1 = uniform_leaf_average(2, 2, 2);
    auto a2 = uniform_leaf_average(5, 3, 3);
    auto f = term::type_i_alpha(Nat(1), {a1, a2});
    for (int t = 0; t < 25; ++t) {
        auto v = rng.vector(6, 9);
        auto I = IndexInterval::closed(Nat(rng.pick(1, 5)), Nat(rng.pick(4, 9)));
        CHECK(evaluate(term::restricted(I, f), v) == evaluate(f, v.restrict(I)));
    }
}

TEST_CASE("sigma registry: determinism, injectivity, growth") {
    CodingRegistry reg(S);
    auto f1 = term::type_i_alpha(Nat(4), {uniform_leaf_average(8, 2, 2)});
    auto h1 = std::vector<std::pair<TermPtr, Nat>>{{f1, f1->weight}};
    Nat w1 = reg.assign(h1);
    CHECK(reg.assign(h1) == w1);            // same history -> same weight
    CHECK(S.in_L2(w1));
    CHECK(w1 > Nat(4) + Nat(9) + 1);        // scaled growth bound

    auto f2 = term::type_i_alpha(Nat(4), {uniform_leaf_average(8, 3, 3)});
    auto h2 = std::vector<std::pair<TermPtr, Nat>>{{f2, f2->weight}};
    Nat w2 = reg.assign(h2);
    CHECK(w2 != w1);                        // injective
    CHECK(w2 > w1);                         // increasing order of first use
}

TEST_CASE("type II needs sigma coherence") {
    CodingRegistry reg(S);
    auto f1 = term::type_i_alpha(Nat(4), {uniform_leaf_average(4, 2, 2)});
    Nat w2 = reg.assign({{f1, f1->weight}});
    std::size_t gap = clamp_to_size(w2, 1u << 20);
    auto a = uniform_leaf_average(static_cast<long>(gap) + 1, 3, 3);
    auto f2 = term::type_i_alpha(w2, {a});
    auto good = term::type_ii({f1, f2});
    CHECK(validates(good, Grammar::W, S, &reg));

    // wrong second weight
    auto f2_bad = term::type_i_alpha(w2 + 4, {a});
    CHECK_FALSE(validates(term::type_ii({f1, f2_bad}), Grammar::W, S, &reg));
    // no registry: unverifiable
    CHECK_FALSE(validates(good, Grammar::W, S));
    // first weight must come from L_1
    auto f1_bad = term::type_i_alpha(Nat(6), {uniform_leaf_average(4, 2, 2)});
    CHECK_FALSE(validates(term::type_ii({f1_bad}), Grammar::W, S, &reg));
}

TEST_CASE("weight sets and beta averages") {
    CodingRegistry reg(S);
    auto f1 = term::type_i_alpha(Nat(4), {uniform_leaf_average(4, 2, 2)});
    Nat w2 = reg.assign({{f1, f1->weight}});
    long start2 = static_cast<long>(clamp_to_size(w2, 1u << 20)) + 1;
    auto f2 = term::type_i_alpha(w2, {uniform_leaf_average(start2, 3, 3)});
    auto g = term::type_ii({f1, f2});

    auto ws = weight_set(g);
    CHECK(ws == std::set<Nat>{Nat(4), w2});

    // restricted so only the first child is met
    auto g_cut = term::restricted(IndexInterval::closed(Nat(1), Nat(9)), g);
    CHECK(weight_set(g_cut) == std::set<Nat>{Nat(4)});

    CHECK_THROWS_AS(weight_set(f1), MalformedInput);

    // a second type II with the same first weight cannot join the same beta average
    auto b_bad = term::beta_average(Nat(2), {g, g});
    CHECK_FALSE(validates(b_bad, Grammar::W, S, &reg));

    auto f1b = term::type_i_alpha(Nat(8), {uniform_leaf_average(start2 + 20, 2, 2)});
    auto g2 = term::type_ii({f1b});
    auto b_ok = term::beta_average(Nat(2), {g, g2});
    CHECK(validates(b_ok, Grammar::W, S, &reg));

    auto fb = term::type_i_beta(Nat(1), {b_ok});
    CHECK(validates(fb, Grammar::W, S, &reg));
}

TEST_CASE("W term evaluations never exceed the Tsirelson norm") {
    // Remark: W c W_T as evaluators
    oracle::Rng rng(59);
    CodingRegistry reg(S);
    auto a1 = uniform_leaf_average(2, 2, 2);
    auto a2 = uniform_leaf_average(5, 3, 3);
    auto a3 = uniform_leaf_average(8, 2, 4);
    std::vector<TermPtr> corpus = {
        term::type0(Nat(3)),
        a1,
        term::type_i_alpha(Nat(1), {a1, a2}),
        term::type_i_alpha(Nat(2), {a1, a2, term::alpha_average(Nat(5), {term::type0(Nat(8))})}),
        term::convex({Rat(1, 2), Rat(1, 2)}, {term::type0(Nat(2)), term::type0(Nat(5))}),
    };
    for (auto& t : corpus) REQUIRE(validate(t, Grammar::W, S, &reg).size() == 0);
    for (int i = 0; i < 25; ++i) {
        auto v = rng.vector(6, 9);
        Rat tn = tsirelson_norm(v).value;
        for (auto& t : corpus) CHECK(evaluate(t, v) <= tn);
    }
}

TEST_CASE("registry persistence is byte exact") {
    auto path1 = std::string("/tmp/normset_reg_a.json");
    auto path2 = std::string("/tmp/normset_reg_b.json");
    CodingRegistry reg(S);
    auto f1 = term::type_i_alpha(Nat(4), {uniform_leaf_average(4, 2, 2)});
    Nat w2 = reg.assign({{f1, f1->weight}});
    auto f2 = term::type_i_alpha(w2, {uniform_leaf_average(200, 3, 3)});
    reg.assign({{f1, f1->weight}, {f2, w2}});
    reg.save_file(path1);

    CodingRegistry replay(S);
    replay.load_file(path1);
    CHECK(replay.assign({{f1, f1->weight}}) == w2);  // replays identically
    replay.save_file(path2);

    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    CHECK(slurp(path1) == slurp(path2));
    std::remove(path1.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("term json round trip") {
    CodingRegistry reg(S);
    auto a1 = uniform_leaf_average(2, 2, 2);
    auto a2 = uniform_leaf_average(5, 3, 3);
    auto f = term::restricted(IndexInterval::closed(Nat(2), Nat(6)),
                              term::type_i_alpha(Nat(1), {a1, a2}), -1);
    auto j = term_to_json(f);
    auto back = term_from_json(j);
    CHECK(canonical_term_string(back) == canonical_term_string(f));
    oracle::Rng rng(61);
    for (int i = 0; i < 10; ++i) {
        auto v = rng.vector(5, 8);
        CHECK(evaluate(back, v) == evaluate(f, v));
    }
}
