#include "treetop/expansions.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "treetop/errors.hpp"

namespace treetop {

namespace {

/// inf(u \ t) for WOSet payloads; nullopt for other payload kinds.
std::optional<ExtRational> successor_parameter(const Tree& t, NodeId parent, NodeId child) {
    const auto* a = std::get_if<WOSet>(&t.payload(parent));
    const auto* b = std::get_if<WOSet>(&t.payload(child));
    if (a == nullptr || b == nullptr) return std::nullopt;
    return first_after(*b, *a);
}

/// Membership of an explicit successor in D_s(t).
bool in_subset(const Tree& t, NodeId parent, NodeId child, const SuccessorSubset& d) {
    if (const auto* v = std::get_if<std::vector<NodeId>>(&d)) return std::find(v->begin(), v->end(), child) != v->end();
    const auto q = successor_parameter(t, parent, child);
    if (!q) throw InvalidScheme("interval subsets need WOSet payloads at node " + std::to_string(parent));
    return std::get<Interval>(d).contains(*q);
}

std::map<std::string, NodeId> index_by_name(const Tree& s) {
    std::map<std::string, NodeId> m;
    for (NodeId n = 0; n < s.size(); ++n) m[s_index(s, n)] = n;
    return m;
}

}  // namespace

Tree index_tree_s2() {
    Tree s;
    const NodeId r = s.add_node(std::nullopt, Abstract{""});
    s.add_child(r, Abstract{"0"});
    s.add_child(r, Abstract{"1"});
    return s;
}

Tree index_tree_binary(std::size_t depth) {
    Tree s;
    std::vector<NodeId> level{s.add_node(std::nullopt, Abstract{""})};
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<NodeId> next;
        for (NodeId n : level)
            for (const char* bit : {"0", "1"}) next.push_back(s.add_child(n, Abstract{s_index(s, n) + bit}));
        level = std::move(next);
    }
    return s;
}

const std::string& s_index(const Tree& s, NodeId n) {
    const auto* a = std::get_if<Abstract>(&s.payload(n));
    if (a == nullptr) throw PayloadMismatch("index tree nodes carry Abstract payloads");
    return a->name;
}

TreeReport validate_partition_scheme(const Tree& t, const Tree& s, const PartitionScheme& d) {
    TreeReport rep;
    const auto names = index_by_name(s);
    const NodeId sroot = s.root();
    for (const auto& [node, subsets] : d) {
        if (!t.contains(node)) {
            rep.violations.push_back("scheme for unknown node " + std::to_string(node));
            continue;
        }
        const auto& succ = t.children(node);
        const std::string at = "node " + std::to_string(node) + ": ";
        auto members = [&](const SuccessorSubset& x) {
            std::set<NodeId> out;
            for (NodeId c : succ)
                if (in_subset(t, node, c, x)) out.insert(c);
            return out;
        };
        bool known = true;
        for (const auto& [name, subset] : subsets) {
            if (!names.contains(name)) {
                rep.violations.push_back(at + "unknown S-index '" + name + "'");
                known = false;
            }
            if (const auto* v = std::get_if<std::vector<NodeId>>(&subset))
                for (NodeId c : *v)
                    if (std::find(succ.begin(), succ.end(), c) == succ.end())
                        rep.violations.push_back(at + "monotonicity: " + std::to_string(c) +
                                                 " is not a successor (S-index '" + name + "')");
        }
        if (!known) continue;
        if (const auto it = subsets.find(s_index(s, sroot)); it != subsets.end() &&
                                                               members(it->second).size() != succ.size())
            rep.violations.push_back(at + "root set is not suc(t)");
        for (auto a = subsets.begin(); a != subsets.end(); ++a) {
            for (auto b = std::next(a); b != subsets.end(); ++b) {
                const NodeId sa = names.at(a->first);
                const NodeId sb = names.at(b->first);
                if (sa == sroot || sb == sroot) continue;
                const std::string pair = " ('" + a->first + "', '" + b->first + "')";
                const auto ma = members(a->second);
                const auto mb = members(b->second);
                if (s.comparable(sa, sb)) {
                    const auto& big = s.leq(sa, sb) ? ma : mb;
                    const auto& small = s.leq(sa, sb) ? mb : ma;
                    bool ok = std::includes(big.begin(), big.end(), small.begin(), small.end());
                    const auto* ia = std::get_if<Interval>(&a->second);
                    const auto* ib = std::get_if<Interval>(&b->second);
                    if (ia != nullptr && ib != nullptr)
                        ok = ok && (s.leq(sa, sb) ? ia->contains_interval(*ib) : ib->contains_interval(*ia));
                    if (!ok) rep.violations.push_back(at + "monotonicity" + pair);
                } else {
                    bool ok = std::none_of(ma.begin(), ma.end(), [&](NodeId c) { return mb.contains(c); });
                    const auto* ia = std::get_if<Interval>(&a->second);
                    const auto* ib = std::get_if<Interval>(&b->second);
                    if (ia != nullptr && ib != nullptr) ok = ok && !ia->intersect(*ib).has_value();
                    if (!ok) rep.violations.push_back(at + "incomparable not disjoint" + pair);
                }
            }
        }
    }
    return rep;
}

Tree s_expansion(const Tree& t, const Tree& s, const PartitionScheme& d) {
    const TreeReport rep = validate_partition_scheme(t, s, d);
    if (!rep.ok()) throw InvalidScheme(rep.violations.front());
    Tree out;
    for (NodeId n = 0; n < t.size(); ++n) {
        const Node& node = t.node(n);
        out.add_node(std::nullopt, node.payload, node.frontier, node.limit);
    }
    for (NodeId n = 0; n < t.size(); ++n)
        if (const auto p = t.parent(n)) out.set_parent(n, *p);

    const NodeId sroot = s.root();
    const auto sorder = s.bfs();
    for (NodeId n = 0; n < t.size(); ++n) {
        const auto it = d.find(n);
        if (it == d.end()) continue;
        std::map<NodeId, NodeId> copy{{sroot, n}};
        for (NodeId sn : sorder) {
            if (sn == sroot) continue;
            const NodeId parent = copy.at(*s.parent(sn));
            copy[sn] = out.add_child(parent, PairPayload{n, s_index(s, sn), static_cast<int>(s.depth(sn))},
                                     t.node(n).frontier);
        }
        const auto names = index_by_name(s);
        for (NodeId r : t.children(n)) {
            NodeId best = sroot;
            for (const auto& [name, subset] : it->second) {
                const NodeId sn = names.at(name);
                if (!in_subset(t, n, r, subset)) continue;
                if (s.depth(sn) > s.depth(best)) {
                    if (!s.leq(best, sn)) throw InvalidScheme("successor " + std::to_string(r) + " lies in incomparable subsets");
                    best = sn;
                }
            }
            out.set_parent(r, copy.at(best));
        }
    }
    return out;
}

namespace {

PartitionScheme interval_scheme(const Tree& t, const Tree& s, const std::function<Interval(const ExtRational&, const std::string&)>& interval) {
    PartitionScheme d;
    for (NodeId n = 0; n < t.size(); ++n) {
        const ExtRational sup = woset_of(t, n).sup();
        for (NodeId sn = 0; sn < s.size(); ++sn)
            if (s.parent(sn)) d[n][s_index(s, sn)] = interval(sup, s_index(s, sn));
    }
    return d;
}

std::vector<SetDescriptor> descriptors(const Tree& x, const std::function<Interval(const ExtRational&, const std::string&)>& interval,
                                       const std::function<TopologyCert(NodeId parent, const std::string& s)>& cert) {
    std::vector<SetDescriptor> out;
    for (NodeId n = 0; n < x.size(); ++n) {
        if (const auto* p = std::get_if<PairPayload>(&x.payload(n))) {
            const WOSet& base = woset_of(x, p->base);
            out.push_back({base, interval(base.sup(), p->s), cert(*x.parent(n), p->s)});
        } else {
            out.push_back({woset_of(x, n), std::nullopt, Closed{}});
        }
    }
    return out;
}

Interval t1_interval(const ExtRational& sup, const std::string& s) {
    const Rational r = sup.is_neg_inf() ? Rational(0) : sup.value() + 1;
    if (s == "0") return Interval{sup, r, true, false};
    return Interval{r, ExtRational::pos_inf(), true, true};
}

}  // namespace

ExpandedTree build_T1(const GenParams& p) {
    const Tree sigma = gen_tree(TreeKind::SigmaQ, p);
    const Tree s = index_tree_s2();
    Tree x = s_expansion(sigma, s, interval_scheme(sigma, s, t1_interval));
    auto cert = [](NodeId parent, const std::string& idx) -> TopologyCert {
        if (idx == "1") return Closed{};
        return RelOpenIn{parent};
    };
    auto d = descriptors(x, t1_interval, cert);
    SetFamily family(x, std::move(d));
    return {std::move(x), std::move(family)};
}

Interval t2_interval(const ExtRational& sup, const std::string& s) {
    Interval cur{sup, ExtRational::pos_inf(), true, true};
    for (char bit : s) {
        ExtRational c = 0;
        if (cur.lo.is_neg_inf())
            c = cur.hi.is_pos_inf() ? ExtRational(0) : ExtRational(cur.hi.value() - 1);
        else if (cur.hi.is_pos_inf())
            c = cur.lo.value() + 1;
        else
            c = midpoint(cur.lo.value(), cur.hi.value());
        if (bit == '0')
            cur = Interval{cur.lo, c, cur.lo_closed, false};
        else
            cur = Interval{c, cur.hi, true, cur.hi_closed};
    }
    return cur;
}

ExpandedTree build_T2(const GenParams& p, std::size_t s_depth) {
    if (s_depth == 0) throw BadParams("s_depth must be at least 1");
    const Tree sigma = gen_tree(TreeKind::SigmaQ, p);
    const Tree s = index_tree_binary(s_depth);
    Tree x = s_expansion(sigma, s, interval_scheme(sigma, s, t2_interval));
    for (NodeId n = 0; n < x.size(); ++n) {
        if (const auto* pp = std::get_if<PairPayload>(&x.payload(n))) {
            if (pp->s.size() == s_depth) x.set_frontier(n, true);
        } else if (n != x.root()) {
            x.set_frontier(n, true);
            x.set_limit(n, true);
        }
    }
    auto cert = [](NodeId parent, const std::string& idx) -> TopologyCert {
        if (idx.back() == '1') return ClosedIn{parent};
        return RelOpenIn{parent};
    };
    auto d = descriptors(x, t2_interval, cert);
    SetFamily family(x, std::move(d));
    return {std::move(x), std::move(family)};
}

Tree build_upsilon(const GenParams& p) {
    const Tree gamma = gen_tree(TreeKind::Gamma, p);
    const OrderLabel& h = gamma.label("h");
    const Rational step = Rational::pow2(-static_cast<long>(p.depth));
    PartitionScheme d;
    for (NodeId n = 0; n < gamma.size(); ++n) {
        if (gamma.node(n).frontier) continue;
        std::vector<NodeId> low;
        std::vector<NodeId> high;
        for (NodeId c : gamma.children(n)) (h.rational(c) < h.rational(n) + step ? low : high).push_back(c);
        d[n]["0"] = low;
        d[n]["1"] = high;
    }
    Tree x = s_expansion(gamma, index_tree_s2(), d);
    x.labels()["h"] = h;
    x.labels()["g"] = lex_label(x, h);
    return x;
}

OrderLabel order_type_label(const Tree& t) {
    OrderLabel f;
    for (NodeId n = 0; n < t.size(); ++n) {
        if (std::holds_alternative<PairPayload>(t.payload(n))) continue;
        const OrdinalRep o = order_type(woset_of(t, n));
        f.set(n, Rational(static_cast<long>(o.k + 1)) - Rational::pow2(-static_cast<long>(o.n)));
    }
    return f;
}

OrderLabel lex_label(const Tree& t, const OrderLabel& f) {
    OrderLabel g;
    g.codomain = Codomain::RlexR;
    auto value = [&](NodeId n) {
        if (!f.has(n)) throw NotBaseLabeled("original node " + std::to_string(n) + " carries no label value");
        return f.rational(n);
    };
    for (NodeId n = 0; n < t.size(); ++n) {
        if (const auto* p = std::get_if<PairPayload>(&t.payload(n)))
            g.set(n, LexPair{value(p->base), Rational(p->rank)});
        else
            g.set(n, LexPair{value(n), Rational(0)});
    }
    return g;
}

}  // namespace treetop
