#include "normset/json_io.hpp"
#include "normset/scc.hpp"
#include "normset/tsirelson.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace normset;

TEST_CASE("generator matches the worked example") {
    // n=1, eps=1/2, M = naturals from 3: uniform 1/3 on {3,4,5}
    NaturalsFrom m(Nat(3));
    auto d = generate_basic_scc(m, Nat(1), Rat(1, 2));
    REQUIRE(d.coeffs.size() == 3);
    for (long k = 3; k <= 5; ++k) CHECK(d.coeffs.at(Nat(k)) == Rat(1, 3));
    CHECK(validate_basic_scc(d).ok);
}

TEST_CASE("validator rejects what it should") {
    SccDescriptor d;
    d.level = Nat(1);
    d.epsilon = Rat(2, 3);
    d.coeffs = {{Nat(3), Rat(1, 2)}, {Nat(4), Rat(1, 2)}};
    CHECK(validate_basic_scc(d).ok);  // singleton masses 1/2 < 2/3

    // epsilon at the singleton mass: clause (ii) is strict
    d.epsilon = Rat(1, 2);
    d.coeffs = {{Nat(3), Rat(1, 2)}, {Nat(4), Rat(1, 4)}, {Nat(5), Rat(1, 4)}};
    auto r = validate_basic_scc(d);
    CHECK_FALSE(r.ok);
    CHECK(r.violated_clause == "an S_{n-1} portion reaches epsilon");
    CHECK(r.worst_mass == Rat(1, 2));

    d.coeffs = {{Nat(1), Rat(1, 2)}, {Nat(2), Rat(1, 2)}};  // {1,2} not in S_1
    auto r2 = validate_basic_scc(d);
    CHECK_FALSE(r2.ok);
    CHECK(r2.violated_clause == "support not in S_n");

    d.coeffs = {{Nat(3), Rat(1, 2)}, {Nat(4), Rat(1, 4)}};  // mass 3/4
    CHECK(validate_basic_scc(d).violated_clause == "coefficients must sum to 1");
}

TEST_CASE("generator round trip over the feasible grid") {
    for (long n : {1L, 2L}) {
        for (auto eps : {Rat(1), Rat(1, 2), Rat(1, 4), Rat(1, 8)}) {
            if (n == 2 && eps == Rat(1, 8)) continue;  // 4599 points; acceptance covers it
            NaturalsFrom m(Nat(1));
            auto d = generate_basic_scc(m, Nat(n), eps);
            auto v = validate_basic_scc(d);
            INFO("n=" << n << " eps=" << rat_to_string(eps)
                      << " worst=" << rat_to_string(v.worst_mass));
            CHECK(v.ok);
        }
    }
    // level 3 with eps = 1 stays around two thousand points
    NaturalsFrom m(Nat(1));
    auto d3 = generate_basic_scc(m, Nat(3), Rat(1));
    CHECK(d3.coeffs.size() == 2046);
    CHECK(validate_basic_scc(d3).ok);
    CHECK(validate_basic_scc(d3).worst_mass == Rat(1, 2));
}

TEST_CASE("intrinsically infeasible combinations are refused with an estimate") {
    NaturalsFrom m(Nat(1));
    CHECK_THROWS_AS(generate_basic_scc(m, Nat(3), Rat(1, 4)), InfeasibleAtBudget);
}

TEST_CASE("prop 2.1 bound on generated combinations") {
    oracle::Rng rng(47);
    for (long n : {1L, 2L}) {
        NaturalsFrom m(Nat(2));
        Rat eps(1, 4);
        auto d = generate_basic_scc(m, Nat(n), eps);
        auto x = d.vector();
        auto F = x.support();
        Rat inv = inv_pow2(Nat(n));
        for (int t = 0; t < 12; ++t) {
            std::vector<Nat> G;
            if (t == 0) {
                G = F;
            } else {
                for (auto& k : F)
                    if (rng.pick(0, 1)) G.push_back(k);
            }
            auto rest = x.restrict_to(G);
            Rat mass(0);
            for (auto& [k, c] : rest.entries()) mass += c;
            Rat lhs = tsirelson_norm(rest).value;
            CHECK(lhs <= inv * mass + eps);
        }
    }
}

TEST_CASE("lift: identity on unit blocks, psi-projection enforced") {
    NaturalsFrom m(Nat(3));
    auto d = generate_basic_scc(m, Nat(1), Rat(1, 2));  // on {3,4,5}

    std::vector<RationalVector> blocks;
    for (auto& [k, c] : d.coeffs) blocks.push_back(RationalVector::unit(k));
    auto seq = BlockSequence::make(blocks);
    REQUIRE(seq);
    CHECK(lift_scc(*seq, d) == d.vector());

    // blocks whose psi values break the S_1 condition
    auto bad = BlockSequence::make({RationalVector::unit(Nat(1)), RationalVector::unit(Nat(2)),
                                    RationalVector::unit(Nat(3))});
    REQUIRE(bad);
    CHECK_THROWS_AS(lift_scc(*bad, d), MalformedInput);
}

TEST_CASE("phi shift stays a basic scc with doubled tolerance") {
    // generate on the odd numbers so that width-2 blocks {psi, psi+1} fit in
    // the gaps: psi(k) odd, phi(k) = psi(k)+1 interleave as a block sequence
    struct OddsFrom final : IndexStream {
        Nat at;
        explicit OddsFrom(Nat s) : at(std::move(s)) {}
        Nat next() override {
            Nat r = at;
            at += 2;
            return r;
        }
    } m(Nat(5));
    auto d = generate_basic_scc(m, Nat(2), Rat(1, 4));

    std::vector<RationalVector> blocks;
    for (auto& [k, c] : d.coeffs) {
        RationalVector::Entries e;
        e.emplace(k, Rat(1));
        e.emplace(k + 1, Rat(1, 3));
        blocks.push_back(RationalVector::from_entries(std::move(e)));
    }
    auto seq = BlockSequence::make(blocks);
    REQUIRE(seq);

    // the psi projection is exactly the generated descriptor
    for (std::size_t k = 0; k < seq->size(); ++k)
        REQUIRE(d.coeffs.count(seq->psi(k)) == 1);

    auto shifted = phi_shift(*seq, d);
    auto v1 = validate_basic_scc(shifted);
    CHECK(v1.ok);
    CHECK(shifted.epsilon == d.epsilon * 2);
}

TEST_CASE("descriptor json round trip") {
    NaturalsFrom m(Nat(3));
    auto d = generate_basic_scc(m, Nat(1), Rat(1, 4));
    auto j = scc_to_json(d);
    auto back = scc_from_json(j);
    CHECK(back.level == d.level);
    CHECK(back.epsilon == d.epsilon);
    CHECK(back.coeffs == d.coeffs);
}
