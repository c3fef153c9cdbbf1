#include "doctest.h"
#include "treetop/errors.hpp"
#include "treetop/tree.hpp"

using namespace treetop;

namespace {

WOSet fin(std::initializer_list<Rational> e) { return WOSet::finite(std::vector<Rational>(e)); }

Tree chain3() {
    Tree t;
    const NodeId r = t.add_node(std::nullopt, WOSet{});
    const NodeId a = t.add_child(r, fin({1}));
    t.add_child(a, fin({1, 2}));
    return t;
}

bool has_violation(const TreeReport& r, const std::string& needle) {
    for (const auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("validate_tree examples") {
    CHECK(validate_tree(chain3()).ok());

    Tree two;
    two.add_node(std::nullopt, WOSet{});
    two.add_node(std::nullopt, fin({1}));
    CHECK(has_violation(validate_tree(two), "two minimal elements"));

    Tree bad = chain3();
    bad.set_payload(2, fin({3}));
    CHECK(has_violation(validate_tree(bad), "payload order"));

    Tree cyc = chain3();
    cyc.set_parent(1, 2);
    cyc.set_parent(0, std::nullopt);
    CHECK_FALSE(validate_tree(cyc).ok());
}

TEST_CASE("family intervals are checked against explicit children") {
    Tree t = chain3();
    t.add_family(0, SuccFamily{Interval::closed_open(0, 2), "t+{q}", {}});
    CHECK(has_violation(validate_tree(t), "overlaps explicit child 1"));
    Tree u = chain3();
    u.add_family(1, SuccFamily{Interval::closed_open(3, 4), "t+{q}", {}});
    u.add_family(1, SuccFamily{Interval::closed_open(Rational(7, 2), 5), "t+{q}", {}});
    CHECK(has_violation(validate_tree(u), "overlaps family"));
    Tree v = chain3();
    v.add_family(1, SuccFamily{Interval::closed_open(0, 1), "t+{q}", {}});
    CHECK(has_violation(validate_tree(v), "payload order"));
}

TEST_CASE("height examples") {
    const Tree t = chain3();
    CHECK(height(t, 0) == OrdinalRep{0, 0});
    CHECK(height(t, 2) == OrdinalRep{0, 2});
    CHECK_THROWS_AS(height(t, 9), UnknownNode);

    GenParams p;
    p.depth = 1;
    p.omega_run = 3;
    const Tree s = gen_tree(TreeKind::SigmaQ, p);
    for (NodeId n = 0; n < s.size(); ++n) CHECK(height(s, n) == order_type(woset_of(s, n)));
}

TEST_CASE("is_antichain examples") {
    Tree t;
    const NodeId r = t.add_node(std::nullopt, WOSet{});
    const NodeId a = t.add_child(r, fin({1}));
    const NodeId b = t.add_child(r, fin({2}));
    const NodeId c = t.add_child(a, fin({1, 2}));
    CHECK(is_antichain(t, {}));
    CHECK(is_antichain(t, {a, b}));
    CHECK_FALSE(is_antichain(t, {a, c}));
    CHECK(is_antichain(t, {c, b}));
    CHECK_THROWS_AS(is_antichain(t, {a, 17}), UnknownNode);
}

TEST_CASE("gen_tree examples") {
    GenParams p;
    p.depth = 1;
    p.branching = 2;
    const Tree s = gen_tree(TreeKind::SigmaQ, p);
    REQUIRE(s.size() == 3);
    CHECK(woset_of(s, 1) == fin({0}));
    CHECK(woset_of(s, 2) == fin({1}));

    GenParams g;
    g.depth = 1;
    g.grid = 2;
    const Tree gm = gen_tree(TreeKind::Gamma, g);
    REQUIRE(gm.size() == 3);
    const OrderLabel& h = gm.label("h");
    CHECK(h.rational(0) == Rational(0));
    CHECK(h.rational(1) == Rational(1));
    CHECK(h.rational(2) == Rational(1, 2));

    GenParams z;
    z.depth = 0;
    CHECK(gen_tree(TreeKind::SigmaQ, z).size() == 1);
    GenParams bad;
    bad.branching = 0;
    CHECK_THROWS_AS(gen_tree(TreeKind::SigmaQ, bad), BadParams);
}

TEST_CASE("sigma-Q truncations add one element above the parent's sup") {
    GenParams p;
    p.depth = 3;
    p.branching = 3;
    p.grid = 2;
    const Tree s = gen_tree(TreeKind::WQ, p);
    CHECK(s.size() == 40);
    CHECK(validate_tree(s).ok());
    for (NodeId n = 1; n < s.size(); ++n) {
        const WOSet& c = woset_of(s, n);
        const WOSet& par = woset_of(s, *s.parent(n));
        REQUIRE(is_initial_segment(par, c));
        REQUIRE(c.size() == par.size() + 1);
        REQUIRE(c.sup() > par.sup());
        CHECK(s.node(n).frontier == (s.depth(n) == 3));
    }
}

TEST_CASE("the Gamma label is strictly order preserving") {
    GenParams g;
    g.depth = 3;
    g.grid = 4;
    const Tree t = gen_tree(TreeKind::Gamma, g);
    CHECK(validate_tree(t).ok());
    const OrderLabel& h = t.label("h");
    for (NodeId a = 0; a < t.size(); ++a)
        for (NodeId b = 0; b < t.size(); ++b)
            if (t.lt(a, b)) REQUIRE(h.rational(a) < h.rational(b));
}

TEST_CASE("label comparison") {
    CHECK(compare(Rational(1), Rational(2)) == Cmp::Less);
    CHECK(compare(Enclosure{0, 1}, Enclosure{2, 3}) == Cmp::Less);
    CHECK(compare(Enclosure{0, 2}, Enclosure{1, 3}) == Cmp::Unknown);
    CHECK(compare(Enclosure::exact(1), Rational(1)) == Cmp::Equal);
    CHECK(compare(LexPair{1, 0}, LexPair{1, 1}) == Cmp::Less);
    CHECK(compare(LexPair{1, 5}, LexPair{2, 0}) == Cmp::Less);
    CHECK(compare(LexPair{1, 5}, Rational(2)) == Cmp::Unknown);
}

TEST_CASE("meet and order queries") {
    const Tree t = gen_tree(TreeKind::SigmaQ, GenParams{2, 2, 1, 0});
    CHECK(t.meet(3, 4) == 1);
    CHECK(t.meet(3, 5) == 0);
    CHECK(t.leq(0, 6));
    CHECK_FALSE(t.leq(1, 6));
    CHECK(t.bfs().size() == 7);
}
