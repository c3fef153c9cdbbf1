#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "treetop/embeddings.hpp"
#include "treetop/errors.hpp"

using namespace treetop;

namespace {

WOSet fin(std::initializer_list<Rational> e) { return WOSet::finite(std::vector<Rational>(e)); }

Tree abstract_chain(std::size_t n) {
    Tree t;
    t.add_node(std::nullopt, Abstract{"0"});
    for (NodeId i = 1; i < n; ++i) t.add_child(i - 1, Abstract{std::to_string(i)});
    return t;
}

OrderLabel q_label(std::initializer_list<Rational> v) { return OrderLabel::of_rationals(Codomain::Q, v); }

}  // namespace

TEST_CASE("verify_order_label examples") {
    const Tree c = abstract_chain(2);
    const OrderLabel constant = q_label({1, 1});
    CHECK(verify_order_label(c, constant, false).ok());
    const LabelCheck strict = verify_order_label(c, constant, true);
    REQUIRE_FALSE(strict.ok());
    CHECK(*strict.violation == std::make_pair(NodeId{0}, NodeId{1}));
    CHECK_THROWS_AS(verify_order_label(c, q_label({1}), true), PartialLabel);

    OrderLabel touching;
    touching.set(0, Enclosure{0, 1});
    touching.set(1, Enclosure{1, 2});
    CHECK(verify_order_label(c, touching, false).ok());
    CHECK_FALSE(verify_order_label(c, touching, true).ok());
}

TEST_CASE("phi on a sigma-Q truncation is a strict label") {
    GenParams p;
    p.depth = 3;
    p.branching = 3;
    const Tree t = gen_tree(TreeKind::SigmaQ, p);
    OrderLabel f;
    f.codomain = Codomain::R;
    for (NodeId n = 0; n < t.size(); ++n) f.set(n, phi(woset_of(t, n)));
    CHECK(verify_order_label(t, f, true).ok());
    // Independent check: every edge carries a positive certified phi gap.
    for (NodeId n = 1; n < t.size(); ++n)
        CHECK(certify_phi_lt(woset_of(t, *t.parent(n)), woset_of(t, n)).gap > 0);
}

TEST_CASE("embed_into_sigmaQ examples") {
    const Tree c = abstract_chain(3);
    const EmbeddingWitness w = embed_into_sigmaQ(c, q_label({0, 1, 2}));
    CHECK(w.psi[0] == WOSet{});
    CHECK(w.psi[1] == fin({1}));
    CHECK(w.psi[2] == fin({1, 2}));

    CHECK(embed_into_sigmaQ(abstract_chain(1), q_label({5})).psi[0] == WOSet{});

    Tree s;
    const NodeId r = s.add_node(std::nullopt, Abstract{"r"});
    s.add_child(r, Abstract{"a"});
    s.add_child(r, Abstract{"b"});
    const EmbeddingWitness ws = embed_into_sigmaQ(s, q_label({0, 1, 1}));
    CHECK(ws.psi[1] == fin({1}));
    CHECK(ws.psi[2] == fin({Rational(1, 2)}));

    CHECK_THROWS_AS(embed_into_sigmaQ(c, q_label({0, 1, 1})), NotStrict);
}

TEST_CASE("embedding of a tree with a limit node") {
    GenParams p;
    p.depth = 1;
    p.omega_run = 3;
    const Tree t = gen_tree(TreeKind::SigmaQ, p);
    OrderLabel f;
    for (NodeId n = 0; n < t.size(); ++n) {
        const OrdinalRep h = height(t, n);
        f.set(n, Rational(static_cast<long>(h.k + 1)) - Rational::pow2(-static_cast<long>(h.n)));
    }
    REQUIRE(verify_order_label(t, f, true).ok());
    const EmbeddingWitness w = embed_into_sigmaQ(t, f);
    const WitnessCheck c = check_witness(t, f, w);
    CHECK(c.order_both_ways);
    CHECK(c.image_initial);
    CHECK(c.sup_bound);
    for (NodeId n = 0; n < t.size(); ++n)
        if (t.node(n).limit) CHECK(order_type(w.psi[n]).is_limit());
}

TEST_CASE("embedding witnesses on random trees") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 60; ++i) {
        const auto lt = oracle::random_labeled_tree(rng, 2 + i % 25);
        REQUIRE(oracle::strictly_increasing(lt.tree, lt.f));
        const EmbeddingWitness w = embed_into_sigmaQ(lt.tree, lt.f);
        REQUIRE(check_witness(lt.tree, lt.f, w).ok());
        // Brute force: psi(t) is the picks along the path, each at most f.
        for (NodeId n = 0; n < lt.tree.size(); ++n) {
            REQUIRE(w.psi[n].size() == lt.tree.depth(n));
            if (n != 0) REQUIRE(w.psi[n].sup() <= ExtRational(lt.f.rational(n)));
        }
        REQUIRE(close_image(w, lt.tree).psi == w.psi);
    }
}

TEST_CASE("close_image trims padded limit images") {
    Tree t;
    const NodeId r = t.add_node(std::nullopt, Abstract{"r"});
    const NodeId a = t.add_child(r, Abstract{"a"});
    const NodeId l = t.add_child(a, Abstract{"L"}, false, true);
    const NodeId above = t.add_child(l, Abstract{"x"});
    EmbeddingWitness w;
    w.psi = {WOSet{}, fin({0}), WOSet({FinBlock{{0}}, OmegaBlock{1, 2}, FinBlock{{5}}}),
             WOSet({FinBlock{{0}}, OmegaBlock{1, 2}, FinBlock{{5, 6}}})};
    const EmbeddingWitness c = close_image(w, t);
    CHECK(c.psi[l] == WOSet({FinBlock{{0}}, OmegaBlock{1, 2}}));
    CHECK(c.psi[above] == WOSet({FinBlock{{0}}, OmegaBlock{1, 2}, FinBlock{{6}}}));
    CHECK(close_image(c, t).psi == c.psi);
    const OrderLabel f = q_label({0, 1, 2, 7});
    CHECK(check_witness(t, f, c).ok());
    CHECK_FALSE(check_witness(t, f, w).image_initial);

    const Tree single = abstract_chain(1);
    EmbeddingWitness e{{WOSet{}}};
    CHECK(close_image(e, single).psi == e.psi);
}

TEST_CASE("countably branching expansion examples") {
    const Tree leaf = abstract_chain(1);
    const auto [same, g0] = countably_branching_expansion(leaf, q_label({3}), 4);
    CHECK(same.size() == 1);

    Tree t;
    const NodeId r = t.add_node(std::nullopt, Abstract{"r"});
    const NodeId half = t.add_child(r, Abstract{"half"});
    const NodeId two = t.add_child(r, Abstract{"two"});
    const OrderLabel f = q_label({0, Rational(1, 2), 2});
    const auto [x, g] = countably_branching_expansion(t, f, 4);
    CHECK(verify_order_label(x, g, true).ok());
    // Ring P_1 holds the child at 2, ring P_2 the child at 1/2.
    auto ring_of = [&x](NodeId n) {
        for (NodeId a : x.path(n))
            if (const auto* pp = std::get_if<PairPayload>(&x.payload(a)); pp != nullptr && pp->rank == 1)
                return pp->s;
        return std::string{};
    };
    CHECK(ring_of(two) == "n1");
    CHECK(ring_of(half) == "n2");
    CHECK(g.rational(two) == Rational(2));
    for (NodeId n = 0; n < x.size(); ++n)
        if (const auto* pp = std::get_if<PairPayload>(&x.payload(n)); pp != nullptr && pp->s == "n1")
            CHECK(g.rational(n) == Rational(1, 2));
    CHECK(validate_tree(x).ok());
    CHECK_THROWS_AS(countably_branching_expansion(t, q_label({0, 0, 2}), 4), NotStrict);
}

TEST_CASE("expansion then embedding succeeds on random strict trees") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
        const auto lt = oracle::random_labeled_tree(rng, 3 + i % 30);
        const auto [x, g] = countably_branching_expansion(lt.tree, lt.f, 8);
        REQUIRE(verify_order_label(x, g, true).ok());
        REQUIRE(oracle::strictly_increasing(x, g));
        REQUIRE(validate_tree(x).ok());
        for (NodeId n = 0; n < x.size(); ++n) {
            if (n < lt.tree.size()) REQUIRE(g.rational(n) == lt.f.rational(n));
            if (n >= lt.tree.size()) REQUIRE(x.children(n).size() <= 2);
        }
        // Original order is preserved inside the expansion.
        for (NodeId a = 0; a < lt.tree.size(); ++a)
            for (NodeId b = 0; b < lt.tree.size(); ++b) REQUIRE(lt.tree.leq(a, b) == x.leq(a, b));
        REQUIRE(check_witness(x, g, embed_into_sigmaQ(x, g)).ok());
    }
}

TEST_CASE("special decomposition examples") {
    const Tree c = abstract_chain(3);
    const auto parts = special_decomposition(c, q_label({0, 1, 2}), {1, 1, 1});
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == std::vector<NodeId>{0});
    CHECK(parts[2] == std::vector<NodeId>{2});

    Tree s;
    const NodeId r = s.add_node(std::nullopt, Abstract{"r"});
    for (int i = 0; i < 4; ++i) s.add_child(r, Abstract{std::to_string(i)});
    CHECK(special_decomposition(s, q_label({0, 1, 1, 1, 1}), {1, 1, 1, 1, 1}).size() == 2);

    CHECK_THROWS_AS(special_decomposition(c, q_label({0, 1, 2}), {1, 0, 1}), PreconditionFailed);
    try {
        special_decomposition(c, q_label({0, 1, Rational(3, 2)}), {1, 1, 1});
        FAIL("expected PreconditionFailed");
    } catch (const PreconditionFailed& e) {
        CHECK(e.pair() == std::make_pair(std::uint64_t{1}, std::uint64_t{2}));
    }
}

TEST_CASE("special decomposition covers random trees with antichains") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 40; ++i) {
        const auto lt = oracle::random_labeled_tree(rng, 5 + i);
        // eps(t) = smallest gap to any node above, so the precondition holds.
        std::vector<Rational> eps(lt.tree.size(), Rational(1));
        for (NodeId a = 0; a < lt.tree.size(); ++a)
            for (NodeId b = 0; b < lt.tree.size(); ++b)
                if (lt.tree.lt(a, b)) eps[a] = min(eps[a], lt.f.rational(b) - lt.f.rational(a));
        const auto parts = special_decomposition(lt.tree, lt.f, eps);
        std::vector<int> seen(lt.tree.size(), 0);
        for (const auto& a : parts) {
            REQUIRE(is_antichain(lt.tree, a));
            for (NodeId n : a) ++seen[n];
        }
        for (int v : seen) REQUIRE(v == 1);
    }
}

TEST_CASE("kurepa refuter examples") {
    const RefutationOutcome z = kurepa_refute(builtin_candidate("zero"), 10);
    REQUIRE(std::holds_alternative<RefutationWitness>(z));
    const auto& wz = std::get<RefutationWitness>(z);
    CHECK(wz.s == WOSet{});
    CHECK(wz.t == fin({0}));
    CHECK(wz.step == 1);

    const RefutationOutcome c = kurepa_refute(builtin_candidate("sup-plus-one-capped:10"), 40);
    REQUIRE(std::holds_alternative<RefutationWitness>(c));
    const auto& wc = std::get<RefutationWitness>(c);
    CHECK(wc.s == fin({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
    CHECK(wc.t == fin({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
    CHECK(wc.beta == 10);
    CHECK(wc.step == 11);

    const RefutationOutcome u = kurepa_refute(builtin_candidate("sup-plus-one"), 5);
    REQUIRE(std::holds_alternative<IncreasingRun>(u));
    const auto& run = std::get<IncreasingRun>(u).run;
    REQUIRE(run.size() == 5);
    CHECK(run[4] == fin({0, 1, 2, 3}));
    CHECK(std::get<IncreasingRun>(kurepa_refute(builtin_candidate("sup-plus-one"), 32)).run.size() == 32);

    CHECK_THROWS_AS(builtin_candidate("nope"), BadParams);
    CHECK_THROWS_AS(kurepa_refute(builtin_candidate("zero"), 0), BadParams);
}

TEST_CASE("kurepa refuter takes one limit step") {
    const RefutationOutcome h = kurepa_refute(builtin_candidate("half-to-one"), 12);
    REQUIRE(std::holds_alternative<RefutationWitness>(h));
    const auto& w = std::get<RefutationWitness>(h);
    CHECK(w.s == WOSet::omega(0, 1));
    CHECK(w.t == WOSet({OmegaBlock{0, 1}, FinBlock{{1}}}));

    // A candidate whose value at the limit falls below the run's limit is refuted inside the run.
    const Candidate dip = [](const WOSet& t) -> std::optional<Rational> {
        if (t.empty()) return Rational(0);
        if (!t.sup_attained()) return Rational(1, 2);
        return (t.sup().value() + 1) / 2;
    };
    const auto d = std::get<RefutationWitness>(kurepa_refute(dip, 12));
    CHECK(d.s == fin({0}));
    CHECK(d.t == WOSet::omega(0, 1));

    const Candidate finite_only = [](const WOSet& t) -> std::optional<Rational> {
        if (!t.is_finite()) return std::nullopt;
        if (t.empty()) return Rational(0);
        return (t.sup().value() + 1) / 2;
    };
    CHECK_THROWS_AS(kurepa_refute(finite_only, 12), CandidateNotRational);
}

TEST_CASE("countably branching expansion with tiny label gaps") {
    Tree c;
    c.add_node(std::nullopt, Abstract{"0"});
    c.add_child(0, Abstract{"1"});
    c.add_child(0, Abstract{"2"});
    const OrderLabel f = OrderLabel::of_rationals(Codomain::Q, {0, Rational::pow2(-80), Rational::pow2(-81)});
    const auto [x, g] = countably_branching_expansion(c, f, 3);
    CHECK(verify_order_label(x, g, true).ok());
}
