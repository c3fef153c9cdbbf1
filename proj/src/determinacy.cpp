#include "treetop/determinacy.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>

#include "treetop/embeddings.hpp"
#include "treetop/errors.hpp"

namespace treetop {

bool CertSet::contains(NodeId t) const { return std::binary_search(members.begin(), members.end(), t); }

namespace {

struct RawSet {
    Rational lo;
    Rational hi;
    NodeId separator = 0;
    /// Rank of the separator among the minimal elements of the interval's preimage.
    std::size_t rank = 0;
    std::vector<NodeId> members;
};

std::vector<std::vector<bool>> order_matrix(const Tree& t) {
    std::vector<std::vector<bool>> leq(t.size(), std::vector<bool>(t.size(), false));
    for (NodeId n = 0; n < t.size(); ++n)
        for (NodeId a : t.path(n)) leq[a][n] = true;
    return leq;
}

void check_continuity(const Tree& t, const std::vector<Rational>& v) {
    for (NodeId n = 0; n < t.size(); ++n) {
        if (!t.node(n).limit) continue;
        for (NodeId a : t.path(n))
            if (v[a] > v[n]) throw NotContinuous(n);
    }
}

/// The network sets of an order-preserving (not necessarily strict) label.
std::vector<RawSet> network(const Tree& t, const std::vector<Rational>& v) {
    std::vector<Rational> vals(v.begin(), v.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<Rational> grid;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i > 0) grid.push_back(midpoint(vals[i - 1], vals[i]));
        grid.push_back(vals[i]);
    }
    const auto leq = order_matrix(t);
    const auto order = t.bfs();
    std::vector<RawSet> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i; j < grid.size(); ++j) {
            const Rational& a = grid[i];
            const Rational& b = grid[j];
            std::vector<bool> in(t.size(), false);
            for (NodeId n = 0; n < t.size(); ++n) in[n] = a <= v[n] && v[n] <= b;
            std::size_t rank = 0;
            for (NodeId s : order) {
                if (!in[s]) continue;
                const auto p = t.parent(s);
                if (p && in[*p]) continue;  // preimages of intervals are convex along chains
                RawSet r{a, b, s, rank++, {}};
                for (NodeId n = 0; n < t.size(); ++n)
                    if (in[n] && leq[s][n]) r.members.push_back(n);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::string interval_string(const Rational& a, const Rational& b) {
    return "[" + a.to_string() + ", " + b.to_string() + "]";
}

void add_unique(std::vector<CertSet>& sets, std::set<std::vector<NodeId>>& seen, CertSet s) {
    if (seen.insert(s.members).second) sets.push_back(std::move(s));
}

std::vector<Rational> exact_values(const Tree& t, const OrderLabel& h) {
    std::vector<Rational> v;
    for (NodeId n = 0; n < t.size(); ++n) v.push_back(h.rational(n));
    return v;
}

}  // namespace

Certificate build_2det_network(const Tree& t, const OrderLabel& h) {
    const LabelCheck chk = verify_order_label(t, h, true);
    if (!chk.ok()) throw NotStrict(chk.violation->first, chk.violation->second);
    const auto v = exact_values(t, h);
    check_continuity(t, v);
    Certificate c;
    c.arity = 2;
    std::set<std::vector<NodeId>> seen;
    for (auto& r : network(t, v))
        add_unique(c.sets, seen,
                   CertSet{std::move(r.members), true,
                           {{"interval", interval_string(r.lo, r.hi)}, {"separator", std::to_string(r.separator)}}});
    return c;
}

Certificate build_3det_family(const Tree& t, const OrderLabel& g) {
    for (NodeId n = 0; n < t.size(); ++n)
        if (!std::holds_alternative<LexPair>(g.at(n)))
            throw NotLexStrict(n, n);
    const LabelCheck chk = verify_order_label(t, g, true);
    if (!chk.ok()) throw NotLexStrict(chk.violation->first, chk.violation->second);
    std::vector<Rational> f;
    std::vector<Rational> second;
    for (NodeId n = 0; n < t.size(); ++n) {
        f.push_back(std::get<LexPair>(g.at(n)).first);
        second.push_back(std::get<LexPair>(g.at(n)).second);
    }
    check_continuity(t, f);

    Certificate c;
    c.arity = 3;
    std::set<std::vector<NodeId>> seen;
    for (auto& r : network(t, f))
        add_unique(c.sets, seen,
                   CertSet{std::move(r.members), true,
                           {{"interval", interval_string(r.lo, r.hi)}, {"separator", std::to_string(r.separator)}}});

    // Fiber networks, keyed uniformly so that F_n collects the same-shaped set of every fiber.
    const NodeId root = t.root();
    std::map<Rational, std::vector<NodeId>> fibers;
    for (NodeId n : t.bfs()) fibers[f[n]].push_back(n);
    std::map<std::string, std::set<NodeId>> unions;
    for (const auto& [lambda, nodes] : fibers) {
        Tree ft;
        std::vector<NodeId> global;
        std::map<NodeId, NodeId> local;
        std::vector<Rational> lv;
        const bool has_root = nodes.front() == root;
        if (!has_root) {
            const Rational low = *std::min_element(second.begin(), second.end()) - 1;
            local[root] = ft.add_node(std::nullopt, Abstract{"0"});
            global.push_back(root);
            lv.push_back(low);
        }
        for (NodeId n : nodes) {
            std::optional<NodeId> parent;
            const auto p = t.path(n);
            for (std::size_t i = p.size() - 1; i-- > 0;)
                if (f[p[i]] == lambda || p[i] == root) {
                    parent = local.at(p[i]);
                    break;
                }
            local[n] = ft.add_node(parent, Abstract{std::to_string(n)});
            global.push_back(n);
            lv.push_back(second[n]);
        }
        for (const auto& r : network(ft, lv)) {
            const NodeId sep = global[r.separator];
            std::string key = interval_string(r.lo, r.hi) + " ";
            if (!has_root && r.separator == 0)
                key += "root";
            else if (const auto* pp = std::get_if<PairPayload>(&t.payload(sep)))
                key += "s:" + pp->s;
            else
                key += "b:" + std::to_string(r.rank);
            auto& u = unions[key];
            for (NodeId m : r.members)
                if (has_root || m != 0) u.insert(global[m]);
        }
    }

    // Closure at limit nodes approached by an omega-run of base nodes.
    const auto leq = order_matrix(t);
    for (auto& [key, u] : unions) {
        for (NodeId l : t.bfs()) {
            if (!t.node(l).limit || u.contains(l)) continue;
            const auto* w = std::get_if<WOSet>(&t.payload(l));
            if (w == nullptr || w->empty() || !std::holds_alternative<OmegaBlock>(w->blocks().back())) continue;
            const WOSet head(std::vector<Block>(w->blocks().begin(), w->blocks().end() - 1));
            bool cofinal = false;
            bool all = true;
            for (NodeId b : t.path(l)) {
                if (b == l) continue;
                const auto* bw = std::get_if<WOSet>(&t.payload(b));
                if (bw == nullptr || !is_initial_segment(head, *bw)) continue;
                cofinal = true;
                const bool between = std::any_of(u.begin(), u.end(), [&](NodeId m) {
                    return m != b && m != l && leq[b][m] && leq[m][l];
                });
                all = all && between;
            }
            if (cofinal && all) u.insert(l);
        }
        add_unique(c.sets, seen, CertSet{std::vector<NodeId>(u.begin(), u.end()), true, {{"fiber-key", key}}});
    }
    return c;
}

SeparationReport verify_separation(const Tree& t, const Certificate& cert) {
    SeparationReport rep;
    const std::size_t n = t.size();
    const std::size_t words = (n + 1 + 63) / 64;
    using Bits = std::vector<std::uint64_t>;
    auto set_bit = [](Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); };
    auto get_bit = [](const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; };

    std::vector<Bits> sets;
    for (std::size_t k = 0; k < cert.sets.size(); ++k) {
        Bits b(words, 0);
        for (NodeId m : cert.sets[k].members) {
            if (m >= n) {
                rep.failures.push_back("set " + std::to_string(k) + " names unknown node " + std::to_string(m));
                continue;
            }
            set_bit(b, m);
        }
        if (cert.sets[k].infinity)
            set_bit(b, n);
        else
            rep.failures.push_back("set " + std::to_string(k) + " misses infinity");
        sets.push_back(std::move(b));
    }

    const auto leq = order_matrix(t);
    std::vector<Bits> inter(n);
    std::set<std::vector<NodeId>> witnessed;
    for (NodeId x = 0; x < n; ++x) {
        Bits c(words, ~std::uint64_t{0});
        bool any = false;
        for (const auto& s : sets)
            if (get_bit(s, x)) {
                any = true;
                for (std::size_t w = 0; w < words; ++w) c[w] &= s[w];
            }
        if (!any) rep.failures.push_back("node " + std::to_string(x) + " lies in no set");
        Intersection it;
        it.at = x;
        for (NodeId y = 0; y < n; ++y)
            if (get_bit(c, y)) it.members.push_back(y);
        it.infinity = get_bit(c, n) != 0U;
        inter[x] = c;

        bool ok = it.members.size() <= cert.arity - 1;
        if (ok && it.members.size() == 2) ok = leq[it.members[0]][it.members[1]] || leq[it.members[1]][it.members[0]];
        if (!ok) {
            std::string list;
            for (NodeId y : it.members) list += (list.empty() ? "" : ", ") + std::to_string(y);
            rep.failures.push_back("intersection at node " + std::to_string(x) + " is {" + list + (it.infinity ? ", inf" : "") + "}");
        }
        if (it.size() > rep.max_intersection_size) {
            rep.max_intersection_size = it.size();
            rep.witness_intersections.clear();
            witnessed.clear();
        }
        if (it.size() == rep.max_intersection_size && rep.witness_intersections.size() < 64 &&
            witnessed.insert(it.members).second)
            rep.witness_intersections.push_back(std::move(it));
    }

    if (cert.arity == 2) {
        for (NodeId a = 0; a < n; ++a) {
            if (t.node(a).frontier) continue;
            for (NodeId b = a + 1; b < n; ++b) {
                if (t.node(b).frontier) continue;
                if (get_bit(inter[a], b) && get_bit(inter[b], a))
                    rep.failures.push_back("nodes " + std::to_string(a) + " and " + std::to_string(b) + " are not separated");
            }
        }
    }
    return rep;
}

std::set<std::size_t> phi_signature(const Tree& t, const Certificate& cert, NodeId node) {
    const auto path = t.path(node);
    std::set<std::size_t> out;
    for (std::size_t k = 0; k < cert.sets.size(); ++k)
        if (std::none_of(path.begin(), path.end(), [&](NodeId a) { return cert.sets[k].contains(a); })) out.insert(k);
    return out;
}

OrderLabel signature_label(const Tree& t, const Certificate& cert) {
    OrderLabel h;
    h.codomain = Codomain::Q;
    for (NodeId n = 0; n < t.size(); ++n) {
        Rational v(0);
        for (std::size_t k : phi_signature(t, cert, n)) v -= Rational::pow2(-static_cast<long>(k));
        h.set(n, v);
    }
    return h;
}

}  // namespace treetop
