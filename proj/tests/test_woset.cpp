#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "treetop/errors.hpp"
#include "treetop/woset.hpp"

using namespace treetop;

namespace {

WOSet fin(std::initializer_list<Rational> e) { return WOSet::finite(std::vector<Rational>(e)); }

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("-4").to_string() == "-4");
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK_THROWS_AS(Rational::parse("1.5"), SchemaError);
    CHECK_THROWS_AS(Rational::parse("1/0"), SchemaError);
    CHECK(Rational::pow2(-3) == Rational(1, 8));
    CHECK(Rational(1, 8).log2_exact() == -3);
    CHECK_FALSE(Rational(3, 8).log2_exact().has_value());
    CHECK(ExtRational::neg_inf() < ExtRational(Rational(-1000)));
    CHECK(ExtRational::parse("+inf") > ExtRational(Rational(1000)));
}

TEST_CASE("interval algebra") {
    const Interval a = Interval::closed_open(0, 1);
    const Interval b = Interval::closed_open(1, 2);
    CHECK_FALSE(a.intersect(b).has_value());
    CHECK(a.contains(0));
    CHECK_FALSE(a.contains(1));
    CHECK(Interval::closed_open(0, ExtRational::pos_inf()).contains_interval(b));
    CHECK_FALSE(Interval{1, 1, true, false}.has_rational());
}

TEST_CASE("is_initial_segment examples") {
    CHECK(is_initial_segment(WOSet{}, fin({1, 2})));
    CHECK_FALSE(is_initial_segment(fin({1, 3}), fin({1, 2, 3})));
    const WOSet w = WOSet::omega(0, 1);
    const WOSet w1({OmegaBlock{0, 1}, FinBlock{{1}}});
    CHECK(is_initial_segment(w, w1));
    CHECK_FALSE(is_initial_segment(w1, w));
    CHECK(is_initial_segment(fin({0, Rational(1, 2)}), w));
    CHECK_FALSE(is_initial_segment(fin({Rational(1, 2)}), w));
}

TEST_CASE("meet examples") {
    CHECK(meet(fin({1, 2}), fin({1, 2})) == fin({1, 2}));
    CHECK(meet(fin({1, 2}), fin({1, 3})) == fin({1}));
    CHECK(meet(fin({1}), fin({2})) == WOSet{});
    CHECK(meet(WOSet::omega(0, 1), WOSet::omega(Rational(1, 2), 1)) == WOSet{});
    CHECK(meet(WOSet::omega(0, 1), fin({0, Rational(1, 2), Rational(2)})) == fin({0, Rational(1, 2)}));
}

TEST_CASE("canonical form makes equal sets equal") {
    const WOSet a({FinBlock{{-1, 0}}, OmegaBlock{Rational(1, 2), 1}});
    const WOSet b({FinBlock{{-1}}, OmegaBlock{0, 1}});
    CHECK(a == b);
    CHECK(a.to_string() == b.to_string());
    CHECK_THROWS_AS(WOSet({OmegaBlock{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(WOSet({FinBlock{{2}}, FinBlock{{1}}}), std::invalid_argument);
}

TEST_CASE("enumeration of Q against the Newman recurrence") {
    CHECK(idx(0) == 0);
    CHECK(idx(1) == 1);
    CHECK(idx(Rational(1, 2)) == 3);
    CHECK(idx(2) == 5);
    const auto cw = oracle::calkin_wilf_prefix(3000);
    for (std::size_t k = 1; k <= cw.size(); ++k) {
        REQUIRE(idx(cw[k - 1]) == 2 * k - 1);
        REQUIRE(idx(-cw[k - 1]) == 2 * k);
        REQUIRE(enumerate_rational(2 * k - 1) == cw[k - 1]);
    }
    for (std::uint64_t n = 0; n < 5000; ++n) REQUIRE(idx(enumerate_rational(n)) == n);
    CHECK_THROWS_AS(idx(Rational(1) - Rational::pow2(-80)), std::overflow_error);
    CHECK_FALSE(try_idx(Rational(1) - Rational::pow2(-80)).has_value());
}

TEST_CASE("phi examples") {
    CHECK(phi(WOSet{}) == Enclosure::exact(0));
    CHECK(phi(fin({0, 1})) == Enclosure::exact(Rational(3, 2)));
    CHECK(phi(fin({Rational(1, 2), 2})) == Enclosure::exact(Rational(5, 32)));
    const Enclosure e = phi(WOSet::omega(0, 1));
    CHECK(e.lo >= Rational(1));
    CHECK(e.hi == Rational(2));
}

TEST_CASE("certify_phi_lt examples") {
    const PhiGap g0 = certify_phi_lt(WOSet{}, fin({0}));
    CHECK(g0.witness == Rational(0));
    CHECK(g0.gap == Rational(1));
    const PhiGap g = certify_phi_lt(fin({1}), fin({1, 2}));
    CHECK(g.witness == Rational(2));
    CHECK(g.index == 5);
    CHECK(g.gap == Rational(1, 32));
    CHECK_THROWS_AS(certify_phi_lt(fin({1}), fin({1})), NotAnExtension);
    CHECK_THROWS_AS(certify_phi_lt(fin({2}), fin({1, 2})), NotAnExtension);
    const PhiGap gw = certify_phi_lt(fin({0}), WOSet::omega(0, 1));
    CHECK(WOSet::omega(0, 1).contains(gw.witness));
    CHECK(gw.gap == Rational::pow2(-static_cast<long>(gw.index)));
}

TEST_CASE("order_type examples") {
    CHECK(order_type(WOSet{}) == OrdinalRep{0, 0});
    CHECK(order_type(fin({1, 2, 3})) == OrdinalRep{0, 3});
    CHECK(order_type(WOSet({OmegaBlock{0, 1}, FinBlock{{2, 3}}})) == OrdinalRep{1, 2});
    CHECK(order_type(WOSet({OmegaBlock{0, 1}, OmegaBlock{1, 2}})) == OrdinalRep{2, 0});
}

TEST_CASE("first_after and insertion") {
    CHECK(first_after(fin({1, 2}), fin({1})) == ExtRational(Rational(2)));
    CHECK(first_after(fin({1}), fin({1})).is_pos_inf());
    CHECK_THROWS_AS(first_after(fin({1}), fin({2})), NotAnExtension);
    CHECK(fin({1}).inserted(0) == fin({0, 1}));
    CHECK_FALSE(WOSet::omega(0, 1).inserted(Rational(1, 3)).has_value());
}

TEST_CASE("initial segment order agrees with the expansion oracle") {
    std::mt19937_64 rng(7);
    int prefix_pairs = 0;
    for (int i = 0; i < 3000; ++i) {
        const WOSet y = oracle::random_woset(rng);
        const WOSet x = i % 3 == 0 ? oracle::random_prefix(y, rng) : oracle::random_woset(rng);
        const bool s = is_initial_segment(x, y);
        REQUIRE_MESSAGE(s == oracle::initial_segment(x, y), x.to_string() << " vs " << y.to_string());
        prefix_pairs += s ? 1 : 0;
        const WOSet m = meet(x, y);
        REQUIRE(is_initial_segment(m, x));
        REQUIRE(is_initial_segment(m, y));
        const WOSet z = oracle::random_prefix(x, rng);
        if (is_initial_segment(z, y)) REQUIRE(is_initial_segment(z, m));
        if (s) REQUIRE(order_type(x) <= order_type(y));
    }
    CHECK(prefix_pairs > 1000);
}

TEST_CASE("phi is strictly monotone on finite extensions") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        std::vector<Rational> e;
        for (int k = std::uniform_int_distribution<int>(1, 5)(rng); k > 0; --k)
            e.emplace_back(std::uniform_int_distribution<int>(-8, 16)(rng), 4);
        const WOSet t = WOSet::finite(e);
        const WOSet s = WOSet::finite(t.first_elements(t.size() - 1));
        const PhiGap g = certify_phi_lt(s, t);
        const Enclosure ps = phi(s);
        const Enclosure pt = phi(t);
        REQUIRE(ps.lo < pt.lo);
        REQUIRE(pt.lo - ps.hi >= g.gap);
    }
}
