#include "doctest.h"
#include "treetop/errors.hpp"
#include "treetop/set_family.hpp"

using namespace treetop;

namespace {

WOSet fin(std::initializer_list<Rational> e) { return WOSet::finite(std::vector<Rational>(e)); }

Tree sigma(std::size_t depth, std::size_t branching, std::size_t run = 0) {
    GenParams p;
    p.depth = depth;
    p.branching = branching;
    p.omega_run = run;
    return gen_tree(TreeKind::SigmaQ, p);
}

}  // namespace

TEST_CASE("canonical family membership") {
    Tree t;
    const NodeId r = t.add_node(std::nullopt, WOSet{});
    const NodeId one = t.add_child(r, fin({1}));
    const SetFamily f = canonical_set_family(t);
    CHECK(f.member(r, fin({7, 9})));
    CHECK_FALSE(f.member(one, fin({2, 3})));
    CHECK(f.member(one, fin({1, 5})));
    CHECK_THROWS_AS(f.member(5, WOSet{}), UnknownNode);

    Tree g = gen_tree(TreeKind::Gamma, GenParams{1, 1, 2, 0});
    CHECK_THROWS_AS(canonical_set_family(g), PayloadMismatch);
}

TEST_CASE("monotonicity of the canonical family is exact on all pairs") {
    const Tree t = sigma(3, 2, 3);
    const SetFamily f = canonical_set_family(t);
    for (NodeId s = 0; s < t.size(); ++s)
        for (NodeId u = 0; u < t.size(); ++u)
            if (t.leq(s, u)) REQUIRE(f.member(s, woset_of(t, u)));
}

TEST_CASE("tree-of-sets check on the canonical family") {
    const SetFamily f = canonical_set_family(sigma(3, 2, 3));
    const TreeOfSetsReport r = tree_of_sets_check(f, 400, 99);
    CHECK(r.seed == 99);
    for (const auto& c : r.conditions) {
        INFO(c.name);
        CHECK(c.ok());
        if (!c.ok()) MESSAGE(c.counterexamples.front());
    }
    for (const auto& c : r.conditions) CHECK(c.checked > 0);
}

TEST_CASE("a family with total membership breaks disjointness") {
    const Tree t = sigma(1, 2);
    const SetFamily f(t, [](NodeId, const WOSet&) { return true; }, std::vector<TopologyCert>(t.size(), Closed{}));
    const TreeOfSetsReport r = tree_of_sets_check(f, 50, 1);
    bool disjoint_failed = false;
    for (const auto& c : r.conditions)
        if (c.name == "disjoint") disjoint_failed = !c.ok();
    CHECK(disjoint_failed);
}

TEST_CASE("single-node family passes vacuously") {
    const TreeOfSetsReport r = tree_of_sets_check(canonical_set_family(sigma(0, 1)), 100, 5);
    CHECK(r.ok());
}

TEST_CASE("a descriptor claimed closed but open is caught") {
    Tree t;
    const NodeId r = t.add_node(std::nullopt, WOSet{});
    const NodeId c = t.add_node(r, PairPayload{r, "0", 1});
    std::vector<SetDescriptor> d{{WOSet{}, std::nullopt, Closed{}},
                                 {WOSet{}, Interval::closed_open(0, 1), Closed{}}};
    (void)c;
    const SetFamily f(t, d);
    const TreeOfSetsReport rep = tree_of_sets_check(f, 200, 3);
    bool cert_failed = false;
    for (const auto& cr : rep.conditions)
        if (cr.name == "certificates") cert_failed = !cr.ok();
    CHECK(cert_failed);
}

TEST_CASE("descriptor disjointness is decided exactly") {
    const SetDescriptor a{fin({1}), Interval::closed_open(1, 2), Closed{}};
    const SetDescriptor b{fin({1}), Interval{2, ExtRational::pos_inf(), true, true}, Closed{}};
    const SetDescriptor c{fin({1, 3}), std::nullopt, Closed{}};
    CHECK(disjoint(a, b));
    CHECK(disjoint(a, c));
    CHECK_FALSE(disjoint(b, c));
    CHECK(disjoint(SetDescriptor{fin({2}), std::nullopt, Closed{}}, c));
}

TEST_CASE("continuity check examples") {
    std::vector<TestSequence> seqs;
    TestSequence chain;
    chain.kind = SeqKind::Chain;
    chain.limit = Point{WOSet::omega(0, 1)};
    WOSet cur;
    for (std::size_t k = 0; k < 64; ++k) {
        cur = cur.appended(WOSet::omega(0, 1).first_elements(k + 1).back());
        chain.items.emplace_back(cur);
    }
    seqs.push_back(chain);
    TestSequence anti;
    anti.kind = SeqKind::Antichain;
    for (long k = 0; k < 64; ++k) anti.items.emplace_back(fin({k}));
    seqs.push_back(anti);

    auto constant = [](const Point&) { return Enclosure::exact(1); };
    for (const auto& r : continuity_check(seqs, constant, Enclosure::exact(1), Rational(0), 64)) {
        CHECK(r.converged);
        CHECK(r.index == 0);
    }

    // Brute-force diameter of A_x in the metric 2^-min idx of the symmetric difference:
    // the smallest index among rationals that some member may add or omit.
    auto diameter = [](const Point& p) {
        const WOSet& x = std::get<WOSet>(p);
        std::uint64_t best = 1U << 12;
        for (std::uint64_t n = 0; n < (1U << 12); ++n) {
            const Rational q = enumerate_rational(n);
            const ExtRational s = x.sup();
            const bool free = s.is_neg_inf() || (x.sup_attained() ? ExtRational(q) > s : ExtRational(q) >= s);
            if (free) {
                best = n;
                break;
            }
        }
        return Enclosure::exact(Rational::pow2(-static_cast<long>(best)));
    };
    const auto r = continuity_check({chain}, diameter, Enclosure::exact(0), Rational::pow2(-8), 64);
    CHECK(r[0].converged);

    auto indicator = [](const Point&) { return Enclosure::exact(1); };
    const auto ra = continuity_check({anti}, indicator, Enclosure::exact(0), Rational(1, 2), 64);
    CHECK_FALSE(ra[0].converged);
    CHECK(ra[0].index == 64);
}
