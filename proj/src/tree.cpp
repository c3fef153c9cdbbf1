#include "treetop/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "treetop/errors.hpp"

namespace treetop {

Cmp compare(const LabelValue& a, const LabelValue& b) {
    if (std::holds_alternative<LexPair>(a) || std::holds_alternative<LexPair>(b)) {
        const auto* x = std::get_if<LexPair>(&a);
        const auto* y = std::get_if<LexPair>(&b);
        if (x == nullptr || y == nullptr) return Cmp::Unknown;
        const auto c = *x <=> *y;
        return c < 0 ? Cmp::Less : (c > 0 ? Cmp::Greater : Cmp::Equal);
    }
    auto enclose = [](const LabelValue& v) {
        if (const auto* q = std::get_if<Rational>(&v)) return Enclosure::exact(*q);
        return std::get<Enclosure>(v);
    };
    const Enclosure x = enclose(a);
    const Enclosure y = enclose(b);
    if (x.hi < y.lo) return Cmp::Less;
    if (y.hi < x.lo) return Cmp::Greater;
    if (x.is_exact() && y.is_exact() && x.lo == y.lo) return Cmp::Equal;
    return Cmp::Unknown;
}

std::string to_string(const LabelValue& v) {
    if (const auto* q = std::get_if<Rational>(&v)) return q->to_string();
    if (const auto* e = std::get_if<Enclosure>(&v))
        return "[" + e->lo.to_string() + ", " + e->hi.to_string() + "]";
    const auto& p = std::get<LexPair>(v);
    return "(" + p.first.to_string() + ", " + p.second.to_string() + ")";
}

OrderLabel OrderLabel::of_rationals(Codomain c, const std::vector<Rational>& v) {
    OrderLabel l;
    l.codomain = c;
    for (const auto& q : v) l.values.emplace_back(q);
    return l;
}

const LabelValue& OrderLabel::at(NodeId t) const {
    if (!has(t)) throw PartialLabel("label has no value at node " + std::to_string(t));
    return *values[t];
}

void OrderLabel::set(NodeId t, LabelValue v) {
    if (values.size() <= t) values.resize(t + 1);
    values[t] = std::move(v);
}

Rational OrderLabel::rational(NodeId t) const {
    const LabelValue& v = at(t);
    if (const auto* q = std::get_if<Rational>(&v)) return *q;
    if (const auto* e = std::get_if<Enclosure>(&v); e != nullptr && e->is_exact()) return e->lo;
    throw PartialLabel("label value at node " + std::to_string(t) + " is not an exact rational");
}

NodeId Tree::add_node(std::optional<NodeId> parent, Payload payload, bool frontier, bool limit) {
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{id, std::nullopt, std::move(payload), frontier, limit});
    children_.emplace_back();
    if (parent) set_parent(id, parent);
    return id;
}

void Tree::set_parent(NodeId t, std::optional<NodeId> parent) {
    Node& n = nodes_.at(t);
    if (n.parent && *n.parent < children_.size()) {
        auto& siblings = children_[*n.parent];
        siblings.erase(std::remove(siblings.begin(), siblings.end(), t), siblings.end());
    }
    n.parent = parent;
    if (parent) {
        if (children_.size() <= *parent) children_.resize(*parent + 1);
        children_[*parent].push_back(t);
    }
}

void Tree::set_payload(NodeId t, Payload p) { nodes_.at(t).payload = std::move(p); }
void Tree::set_frontier(NodeId t, bool v) { nodes_.at(t).frontier = v; }
void Tree::set_limit(NodeId t, bool v) { nodes_.at(t).limit = v; }

const Node& Tree::node(NodeId t) const {
    if (!contains(t)) throw UnknownNode(t);
    return nodes_[t];
}

const std::vector<NodeId>& Tree::children(NodeId t) const {
    if (!contains(t)) throw UnknownNode(t);
    return children_[t];
}

NodeId Tree::root() const {
    std::optional<NodeId> r;
    for (const auto& n : nodes_) {
        if (n.parent) continue;
        if (r) throw Error("tree has two minimal elements");
        r = n.id;
    }
    if (!r) throw Error("tree has no root");
    return *r;
}

std::vector<NodeId> Tree::path(NodeId t) const {
    std::vector<NodeId> p{t};
    std::optional<NodeId> cur = node(t).parent;
    while (cur) {
        if (p.size() > nodes_.size()) throw Error("parent links form a cycle");
        p.push_back(*cur);
        cur = node(*cur).parent;
    }
    std::reverse(p.begin(), p.end());
    return p;
}

bool Tree::leq(NodeId s, NodeId t) const {
    node(s);
    std::optional<NodeId> cur = t;
    std::size_t steps = 0;
    while (cur) {
        if (*cur == s) return true;
        if (++steps > nodes_.size()) throw Error("parent links form a cycle");
        cur = node(*cur).parent;
    }
    return false;
}

NodeId Tree::meet(NodeId s, NodeId t) const {
    const auto ps = path(s);
    const auto pt = path(t);
    if (ps.front() != pt.front()) throw Error("nodes have no common lower bound");
    std::size_t i = 0;
    while (i + 1 < ps.size() && i + 1 < pt.size() && ps[i + 1] == pt[i + 1]) ++i;
    return ps[i];
}

std::vector<NodeId> Tree::bfs() const {
    std::vector<NodeId> order;
    if (nodes_.empty()) return order;
    std::deque<NodeId> q{root()};
    while (!q.empty()) {
        const NodeId t = q.front();
        q.pop_front();
        order.push_back(t);
        for (NodeId c : children_[t]) q.push_back(c);
    }
    return order;
}

const std::vector<SuccFamily>& Tree::families_of(NodeId t) const {
    static const std::vector<SuccFamily> none;
    const auto it = families_.find(t);
    return it == families_.end() ? none : it->second;
}

void Tree::add_family(NodeId t, SuccFamily f) {
    node(t);
    families_[t].push_back(std::move(f));
}

const OrderLabel& Tree::label(const std::string& name) const {
    const auto it = labels_.find(name);
    if (it == labels_.end()) throw PartialLabel("tree has no label '" + name + "'");
    return it->second;
}

const WOSet& woset_of(const Tree& t, NodeId node) {
    const auto* w = std::get_if<WOSet>(&t.payload(node));
    if (w == nullptr) throw PayloadMismatch("node " + std::to_string(node) + " has no WOSet payload");
    return *w;
}

const WOSet& base_woset(const Tree& t, NodeId node) {
    if (const auto* p = std::get_if<PairPayload>(&t.payload(node))) return woset_of(t, p->base);
    return woset_of(t, node);
}

namespace {

std::string pair_str(NodeId a, NodeId b) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

bool edge_consistent(const Tree& t, NodeId parent, NodeId child) {
    const Payload& pp = t.payload(parent);
    const Payload& cp = t.payload(child);
    if (const auto* w = std::get_if<WOSet>(&cp)) {
        const WOSet* base = nullptr;
        if (std::holds_alternative<WOSet>(pp)) base = &std::get<WOSet>(pp);
        if (const auto* p = std::get_if<PairPayload>(&pp)) {
            if (!t.contains(p->base) || !std::holds_alternative<WOSet>(t.payload(p->base))) return false;
            base = &std::get<WOSet>(t.payload(p->base));
        }
        return base != nullptr && *base != *w && is_initial_segment(*base, *w);
    }
    if (const auto* c = std::get_if<PairPayload>(&cp)) {
        if (c->s.empty()) return false;
        if (const auto* p = std::get_if<PairPayload>(&pp))
            return p->base == c->base && c->s.size() > p->s.size() &&
                   c->s.compare(0, p->s.size(), p->s) == 0;
        return parent == c->base;
    }
    if (const auto* c = std::get_if<IntSeq>(&cp)) {
        const Payload* base = &pp;
        if (const auto* pr = std::get_if<PairPayload>(&pp)) {
            if (!t.contains(pr->base)) return false;
            base = &t.payload(pr->base);
        }
        const auto* p = std::get_if<IntSeq>(base);
        return p != nullptr && p->seq.size() < c->seq.size() &&
               std::equal(p->seq.begin(), p->seq.end(), c->seq.begin());
    }
    return true;
}

bool below_sup(const Interval& i, const WOSet& t) {
    const ExtRational s = t.sup();
    if (s.is_neg_inf()) return false;
    if (i.lo < s) return true;
    return i.lo == s && i.lo_closed && t.sup_attained();
}

}  // namespace

TreeReport validate_tree(const Tree& t) {
    TreeReport r;
    std::size_t roots = 0;
    bool dangling = false;
    for (NodeId id = 0; id < t.size(); ++id) {
        const auto p = t.node(id).parent;
        if (!p) {
            ++roots;
        } else if (!t.contains(*p)) {
            r.violations.push_back("unknown parent of node " + std::to_string(id));
            dangling = true;
        }
    }
    if (roots == 0) r.violations.emplace_back("no minimal element");
    if (roots > 1) r.violations.emplace_back("two minimal elements");
    if (dangling) return r;

    bool cyclic = false;
    for (NodeId id = 0; id < t.size(); ++id) {
        try {
            t.path(id);
        } catch (const Error&) {
            r.violations.push_back("cycle through node " + std::to_string(id));
            cyclic = true;
            break;
        }
    }
    if (cyclic) return r;

    for (NodeId id = 0; id < t.size(); ++id) {
        const auto p = t.node(id).parent;
        if (p && !edge_consistent(t, *p, id))
            r.violations.push_back("payload order at " + pair_str(*p, id));
    }

    for (const auto& [id, fams] : t.families()) {
        const WOSet* base = nullptr;
        try {
            base = &base_woset(t, id);
        } catch (const Error&) {
            r.violations.push_back("family on node " + std::to_string(id) + " without a WOSet base");
            continue;
        }
        for (std::size_t i = 0; i < fams.size(); ++i) {
            const Interval& iv = fams[i].interval;
            const std::string where = "family " + std::to_string(i) + " of node " + std::to_string(id);
            if (!iv.has_rational()) r.violations.push_back("empty " + where);
            if (below_sup(iv, *base)) r.violations.push_back("payload order in " + where);
            for (std::size_t j = i + 1; j < fams.size(); ++j)
                if (iv.intersect(fams[j].interval))
                    r.violations.push_back(where + " overlaps family " + std::to_string(j));
            for (NodeId c : t.children(id)) {
                const auto* w = std::get_if<WOSet>(&t.payload(c));
                if (w == nullptr || !is_initial_segment(*base, *w) || *base == *w) continue;
                if (iv.contains(first_after(*w, *base)))
                    r.violations.push_back(where + " overlaps explicit child " + std::to_string(c));
            }
        }
    }
    return r;
}

OrdinalRep height(const Tree& t, NodeId node) {
    const auto p = t.path(node);
    OrdinalRep h;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (t.node(p[i]).limit) {
            ++h.k;
            h.n = 0;
        } else {
            ++h.n;
        }
    }
    return h;
}

bool is_antichain(const Tree& t, const std::vector<NodeId>& a) {
    for (NodeId x : a) t.node(x);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] == a[j] || t.comparable(a[i], a[j])) return false;
    return true;
}

namespace {

constexpr std::size_t kMaxGeneratedNodes = 2'000'000;

void gen_sets(Tree& tree, const GenParams& p) {
    const Rational step(1, static_cast<long>(p.grid));
    std::vector<NodeId> level{tree.add_node(std::nullopt, WOSet{}, p.depth == 0)};
    for (std::size_t d = 1; d <= p.depth; ++d) {
        std::vector<NodeId> next;
        for (NodeId parent : level) {
            const WOSet s = woset_of(tree, parent);
            for (std::size_t k = 0; k < p.branching; ++k) {
                const Rational q = s.empty() ? Rational(static_cast<long>(k)) * step
                                             : s.sup().value() + Rational(static_cast<long>(k + 1)) * step;
                next.push_back(tree.add_child(parent, s.appended(q), d == p.depth));
            }
        }
        level = std::move(next);
    }
    if (p.omega_run == 0) return;

    const WOSet zero = WOSet::finite({Rational(0)});
    NodeId cur = 0;
    bool found = false;
    for (NodeId c : tree.children(0))
        if (woset_of(tree, c) == zero) {
            cur = c;
            found = true;
        }
    if (!found) cur = tree.add_child(0, zero, true);
    WOSet run = zero;
    for (std::size_t i = 1; i < p.omega_run; ++i) {
        run = run.appended(Rational(1) - Rational::pow2(-static_cast<long>(i)));
        cur = tree.add_child(cur, run, true);
    }
    tree.add_child(cur, WOSet::omega(0, 1), true, true);
}

void gen_gamma(Tree& tree, const GenParams& p) {
    OrderLabel h;
    h.codomain = Codomain::Q;
    auto value = [](const std::vector<std::uint64_t>& seq) {
        Rational v(0);
        for (auto n : seq) v += Rational::pow2(-static_cast<long>(n));
        return v;
    };
    std::vector<NodeId> level{tree.add_node(std::nullopt, IntSeq{}, p.depth == 0)};
    h.set(0, Rational(0));
    for (std::size_t d = 1; d <= p.depth; ++d) {
        std::vector<NodeId> next;
        for (NodeId parent : level) {
            const auto seq = std::get<IntSeq>(tree.payload(parent)).seq;
            for (std::uint64_t n = 0; n < p.grid; ++n) {
                if (std::find(seq.begin(), seq.end(), n) != seq.end()) continue;
                auto child = seq;
                child.push_back(n);
                const Rational v = value(child);
                const NodeId id = tree.add_child(parent, IntSeq{std::move(child)}, d == p.depth);
                h.set(id, v);
                next.push_back(id);
                if (tree.size() > kMaxGeneratedNodes) throw BadParams("truncation too large");
            }
        }
        level = std::move(next);
    }
    tree.labels()["h"] = std::move(h);
}

}  // namespace

Tree gen_tree(TreeKind kind, const GenParams& p) {
    if (p.branching == 0) throw BadParams("branching must be at least 1");
    if (p.grid == 0) throw BadParams("grid must be at least 1");
    Tree tree;
    if (kind == TreeKind::Gamma) {
        gen_gamma(tree, p);
        return tree;
    }
    double estimate = 1;
    for (std::size_t d = 0; d < p.depth; ++d) estimate = estimate * static_cast<double>(p.branching) + 1;
    if (estimate > static_cast<double>(kMaxGeneratedNodes)) throw BadParams("truncation too large");
    gen_sets(tree, p);
    return tree;
}

}  // namespace treetop
