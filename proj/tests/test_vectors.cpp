#include "normset/json_io.hpp"
#include "normset/vector.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace normset;

TEST_CASE("support basics") {
    CHECK(RationalVector().support().empty());

    RationalVector::Entries e;
    e.emplace(Nat(3), Rat(1, 2));
    e.emplace(Nat(7), Rat(-1));
    auto v = RationalVector::from_entries(std::move(e));
    CHECK(v.support() == std::vector<Nat>{Nat(3), Nat(7)});

    auto r = v.restrict(IndexInterval::closed(Nat(4), Nat(9)));
    CHECK(r.support() == std::vector<Nat>{Nat(7)});
}

TEST_CASE("zero coefficients are never stored") {
    RationalVector::Entries e;
    e.emplace(Nat(2), Rat(0));
    e.emplace(Nat(5), Rat(3, 4));
    auto v = RationalVector::from_entries(std::move(e));
    CHECK(v.support_size() == 1);

    auto w = v + v.scaled(Rat(-1));
    CHECK(w.is_zero());
}

TEST_CASE("restrict") {
    RationalVector::Entries e;
    e.emplace(Nat(2), Rat(1));
    e.emplace(Nat(5), Rat(1));
    auto v = RationalVector::from_entries(std::move(e));

    CHECK(v.restrict(IndexInterval::all()) == v);
    CHECK(v.restrict(IndexInterval::empty()).is_zero());
    CHECK(v.restrict(IndexInterval::closed(Nat(3), Nat(5))) == RationalVector::unit(Nat(5)));

    oracle::Rng rng(7);
    for (int t = 0; t < 40; ++t) {
        auto x = rng.vector(6, 25);
        auto I = IndexInterval::closed(Nat(rng.pick(1, 20)), Nat(rng.pick(1, 30)));
        // idempotent
        CHECK(x.restrict(I).restrict(I) == x.restrict(I));
    }
}

TEST_CASE("block sequence validation") {
    auto e1 = RationalVector::unit(Nat(1));
    auto e2 = RationalVector::unit(Nat(2));
    CHECK_FALSE(BlockSequence::violation({e1, e2}));
    CHECK(BlockSequence::violation({}) == std::nullopt);

    RationalVector::Entries a;
    a.emplace(Nat(1), Rat(1));
    a.emplace(Nat(3), Rat(1));
    auto overlapping = RationalVector::from_entries(std::move(a));
    auto bad = BlockSequence::violation({overlapping, e2});
    REQUIRE(bad);
    CHECK(*bad == std::make_pair(std::size_t(0), std::size_t(1)));
}

TEST_CASE("json round trip uses decimal strings") {
    RationalVector::Entries e;
    e.emplace(parse_nat("123456789012345678901234567890"), Rat(-7, 3));
    e.emplace(Nat(1), Rat(2));
    auto v = RationalVector::from_entries(std::move(e));
    auto j = vector_to_json(v);
    CHECK(j["entries"][1][0].get<std::string>() == "123456789012345678901234567890");
    CHECK(vector_from_json(j) == v);

    CHECK_THROWS_AS(vector_from_json(nlohmann::json::parse("{\"entries\":[[\"0\",\"1\"]]}")),
                    MalformedInput);
    CHECK_THROWS_AS(vector_from_json(nlohmann::json::parse("{\"entries\":[[\"2\",\"1/0\"]]}")),
                    MalformedInput);
}
