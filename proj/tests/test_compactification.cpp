#include <random>

#include "doctest.h"
#include "treetop/compactification.hpp"
#include "treetop/errors.hpp"

using namespace treetop;

namespace {

std::vector<std::vector<Rational>> line(const std::vector<long>& pos) {
    std::vector<std::vector<Rational>> d(pos.size(), std::vector<Rational>(pos.size()));
    for (std::size_t a = 0; a < pos.size(); ++a)
        for (std::size_t b = 0; b < pos.size(); ++b) d[a][b] = Rational(std::abs(pos[a] - pos[b]));
    return d;
}

/// The set (U u f^-1 U) \ F evaluated directly from its formula.
bool glued_formula(const CompactificationInstance& inst, const Glued& g, const SpacePoint& p) {
    const bool in_u = [&] {
        const std::size_t y = p.side == SpacePoint::Side::K ? p.index : inst.f[p.index];
        return inst.dist[g.center][y] < g.radius;
    }();
    if (p.side == SpacePoint::Side::K) return in_u;
    bool in_f = false;
    for (NodeId t : g.compact) {
        if (!inst.tree) {
            in_f = in_f || p.index == t;
            continue;
        }
        for (NodeId a : inst.tree->path(t)) in_f = in_f || a == p.index;
    }
    return in_u && !in_f;
}

Tree small_tree() {
    Tree t;
    const NodeId r = t.add_node(std::nullopt, WOSet{});
    const NodeId a = t.add_child(r, WOSet::finite({Rational(0)}));
    t.add_child(a, WOSet::finite({Rational(0), Rational(1)}));
    t.add_child(r, WOSet::finite({Rational(1)}));
    return t;
}

}  // namespace

TEST_CASE("af_basis examples") {
    const auto inst = discrete_instance({0, 0}, line({0}));
    const BasicNbhd g = af_basis(inst, SpacePoint::in_k(0), Rational(1));
    CHECK(contains(inst, g, SpacePoint::in_k(0)));
    CHECK(contains(inst, g, SpacePoint::in_x(0)));
    CHECK(contains(inst, g, SpacePoint::in_x(1)));
    const BasicNbhd x1 = af_basis(inst, SpacePoint::in_x(0), Rational(1));
    CHECK(contains(inst, x1, SpacePoint::in_x(0)));
    CHECK_FALSE(contains(inst, x1, SpacePoint::in_x(1)));
    CHECK_FALSE(contains(inst, x1, SpacePoint::in_k(0)));
    CHECK_THROWS_AS(af_basis(inst, SpacePoint::in_x(5), Rational(1)), UnknownPoint);
    CHECK_THROWS_AS(af_basis(inst, SpacePoint::in_k(0), Rational(0)), BadParams);

    const auto ti = tree_instance(small_tree(), {0, 1});
    const Glued minus{ti.f[2], Rational(2), {2}};
    CHECK(std::get<InX>(af_basis(ti, SpacePoint::in_x(2), Rational(1))).lower == NodeId{1});
    for (NodeId x : {0, 1, 2}) CHECK_FALSE(contains(ti, minus, SpacePoint::in_x(x)));
    CHECK(contains(ti, minus, SpacePoint::in_x(3)));
    for (std::size_t i = 0; i < ti.points_of_x(); ++i)
        CHECK(contains(ti, minus, SpacePoint::in_x(i)) == glued_formula(ti, minus, SpacePoint::in_x(i)));
}

TEST_CASE("glued membership agrees with the set formula") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto inst = random_instance(rng, 1 + rng() % 8, 1 + rng() % 6, false);
        for (std::size_t c = 0; c < inst.points_of_k(); ++c) {
            const Glued g{c, Rational(static_cast<long>(1 + rng() % 10)), {static_cast<NodeId>(rng() % inst.points_of_x())}};
            for (std::size_t x = 0; x < inst.points_of_x(); ++x)
                REQUIRE(contains(inst, g, SpacePoint::in_x(x)) == glued_formula(inst, g, SpacePoint::in_x(x)));
            for (std::size_t k = 0; k < inst.points_of_k(); ++k)
                REQUIRE(contains(inst, g, SpacePoint::in_k(k)) == glued_formula(inst, g, SpacePoint::in_k(k)));
        }
    }
}

TEST_CASE("hausdorff_check examples") {
    const auto inst = discrete_instance({0, 1}, line({0, 6}));
    const auto rep = hausdorff_check(inst, {{SpacePoint::in_x(0), SpacePoint::in_k(0)},
                                            {SpacePoint::in_k(0), SpacePoint::in_k(1)},
                                            {SpacePoint::in_x(1), SpacePoint::in_x(1)}});
    REQUIRE(rep.pairs.size() == 3);
    CHECK(rep.pairs[0].found());
    const auto& g = std::get<Glued>(*rep.pairs[0].around_b);
    CHECK(g.compact == std::vector<NodeId>{0});
    CHECK(rep.pairs[1].found());
    CHECK(std::get<Glued>(*rep.pairs[1].around_a).radius == Rational(2));
    CHECK(rep.pairs[2].skipped);
    CHECK(rep.checked() == 2);
    CHECK(rep.ok());

    const auto ti = tree_instance(small_tree(), {0, 1});
    std::vector<std::pair<SpacePoint, SpacePoint>> all;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) all.push_back({SpacePoint::in_x(a), SpacePoint::in_x(b)});
        for (std::size_t k = 0; k < ti.points_of_k(); ++k) all.push_back({SpacePoint::in_x(a), SpacePoint::in_k(k)});
    }
    CHECK(hausdorff_check(ti, all).ok());
}

TEST_CASE("hausdorff_check on random instances") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 20; ++i) {
        const std::size_t xs = 1 + rng() % 10;
        const auto inst = random_instance(rng, xs, xs + rng() % 4, i % 2 == 0);
        std::vector<std::pair<SpacePoint, SpacePoint>> pairs;
        auto pick = [&] {
            return rng() % 2 == 0 ? SpacePoint::in_x(rng() % inst.points_of_x()) : SpacePoint::in_k(rng() % inst.points_of_k());
        };
        for (int j = 0; j < 30; ++j) pairs.push_back({pick(), pick()});
        const auto rep = hausdorff_check(inst, pairs);
        REQUIRE(rep.ok());
        for (const auto& s : rep.pairs) {
            if (s.skipped) continue;
            CHECK(contains(inst, *s.around_a, s.a));
            CHECK(contains(inst, *s.around_b, s.b));
        }
    }
}

TEST_CASE("retraction_fibers") {
    const auto inj = discrete_instance({0, 1, 2, 3, 4}, line({0, 1, 2, 3, 4}));
    std::size_t mx = 0;
    for (const auto& [y, n] : retraction_fibers(inj)) mx = std::max(mx, n);
    CHECK(mx == 2);
    const auto con = discrete_instance({0, 0, 0}, line({0}));
    CHECK(retraction_fibers(con).at(0) == 4);
    const auto empty = discrete_instance({}, line({0, 2}));
    for (const auto& [y, n] : retraction_fibers(empty)) CHECK(n == 1);
}

TEST_CASE("instance validation and tree instances") {
    CHECK_THROWS_AS(discrete_instance({3}, line({0})), BadParams);
    CHECK_THROWS_AS(discrete_instance({0}, {{0, 1}, {2, 0}}), BadParams);
    CHECK_THROWS_AS(discrete_instance({0}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), BadParams);
    const auto ti = tree_instance(small_tree(), {0, 1});
    CHECK(ti.points_of_k() == 4);
    CHECK(ti.dist[ti.f[1]][ti.f[2]] == Rational(1, 2));
    CHECK(ti.dist[ti.f[0]][ti.f[1]] == Rational(1));

    const Tree t = small_tree();
    CHECK(infinity_neighborhood(t, {2}) == std::vector<NodeId>{3});
    CHECK(infinity_neighborhood(t, {}).size() == 4);
}
