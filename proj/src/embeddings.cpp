#include "treetop/embeddings.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "treetop/errors.hpp"

namespace treetop {

namespace {

bool passes(const LabelValue& lo, const LabelValue& hi, bool strict) {
    const Cmp c = compare(lo, hi);
    if (c == Cmp::Less || (!strict && c == Cmp::Equal)) return true;
    if (strict || c != Cmp::Unknown) return false;
    // Non-strict: enclosures that only touch are still certified.
    auto upper = [](const LabelValue& v) -> std::optional<Rational> {
        if (const auto* q = std::get_if<Rational>(&v)) return *q;
        if (const auto* e = std::get_if<Enclosure>(&v)) return e->hi;
        return std::nullopt;
    };
    auto lower = [](const LabelValue& v) -> std::optional<Rational> {
        if (const auto* q = std::get_if<Rational>(&v)) return *q;
        if (const auto* e = std::get_if<Enclosure>(&v)) return e->lo;
        return std::nullopt;
    };
    const auto a = upper(lo);
    const auto b = lower(hi);
    return a && b && *a <= *b;
}

/// Largest rational known to be <= the label value.
Rational lower_bound(const OrderLabel& f, NodeId t) {
    const LabelValue& v = f.at(t);
    if (const auto* q = std::get_if<Rational>(&v)) return *q;
    if (const auto* e = std::get_if<Enclosure>(&v)) return e->lo;
    throw BadParams("embedding into sigma-Q needs a real-valued label");
}

std::optional<Rational> exact_value(const OrderLabel& f, NodeId t) {
    const LabelValue& v = f.at(t);
    if (const auto* q = std::get_if<Rational>(&v)) return *q;
    if (const auto* e = std::get_if<Enclosure>(&v); e != nullptr && e->is_exact()) return e->lo;
    return std::nullopt;
}

constexpr long kMaxRefinements = 1L << 16;

/// Dyadic pick in (lo, hi] (or (lo, hi) when hi_open): try hi itself first, then k/2^m with
/// the smallest m, then smallest |k| (positive first on ties), skipping values in `used`.
Rational dyadic_pick(const Rational& lo, const Rational& hi, bool hi_open, std::optional<Rational> preferred,
                     const std::set<Rational>& used) {
    if (!hi_open && preferred && *preferred == hi && !used.contains(hi)) return hi;
    for (long m = 0; m <= kMaxRefinements; ++m) {
        const Rational scale = Rational::pow2(m);
        // Integers k with lo < k/2^m and k/2^m <= hi (or < hi).
        const mpz_class kmin = (lo * scale).floor() + 1;
        const Rational top = hi * scale;
        mpz_class kmax = top.floor();
        if (hi_open && top.is_integer()) kmax -= 1;
        if (kmin > kmax) continue;
        auto try_k = [&](const mpz_class& k) -> std::optional<Rational> {
            const Rational q = Rational(mpq_class(k)) / scale;
            if (used.contains(q)) return std::nullopt;
            return q;
        };
        // Among the candidates in range, used.size() + 1 of them always contain a free one.
        std::size_t budget = used.size() + 1;
        auto visit = [&](const mpz_class& k) -> std::optional<Rational> {
            if (k < kmin || k > kmax || budget == 0) return std::nullopt;
            --budget;
            return try_k(k);
        };
        if (kmin > 0) {
            for (mpz_class k = kmin; k <= kmax && budget > 0; ++k)
                if (auto q = visit(k)) return *q;
        } else if (kmax < 0) {
            for (mpz_class k = kmax; k >= kmin && budget > 0; --k)
                if (auto q = visit(k)) return *q;
        } else {
            if (auto q = visit(0)) return *q;
            for (mpz_class a = 1; budget > 0 && (a <= kmax || -a >= kmin); ++a) {
                if (auto q = visit(a)) return *q;
                if (auto q = visit(-a)) return *q;
            }
        }
    }
    throw PickExhausted("no unused dyadic rational left after 2^16 refinements");
}

/// The elements of x from first_after(x, prefix) on, as blocks.
std::vector<Block> tail_after(const WOSet& x, const WOSet& prefix) {
    const ExtRational m = first_after(x, prefix);
    std::vector<Block> out;
    if (m.is_pos_inf()) return out;
    const Rational& from = m.value();
    for (const Block& b : x.blocks()) {
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            FinBlock kept;
            for (const auto& q : f->elems)
                if (q >= from) kept.elems.push_back(q);
            if (!kept.elems.empty()) out.emplace_back(std::move(kept));
        } else {
            const auto& o = std::get<OmegaBlock>(b);
            if (o.limit <= from) continue;
            if (o.start >= from) {
                out.emplace_back(o);
            } else {
                const auto pos = o.position(from);
                if (!pos) throw NotAnExtension("first element after the prefix is not in its block");
                out.emplace_back(OmegaBlock{o.element(*pos), o.limit});
            }
        }
    }
    return out;
}

WOSet concat(const WOSet& head, const std::vector<Block>& tail) {
    std::vector<Block> b = head.blocks();
    b.insert(b.end(), tail.begin(), tail.end());
    return WOSet(std::move(b));
}

}  // namespace

LabelCheck verify_order_label(const Tree& t, const OrderLabel& f, bool strict) {
    for (NodeId n = 0; n < t.size(); ++n) f.at(n);
    for (NodeId upper : t.bfs()) {
        const auto p = t.path(upper);
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (!passes(f.at(p[i]), f.at(upper), strict)) return {std::make_pair(p[i], upper)};
    }
    return {};
}

EmbeddingWitness embed_into_sigmaQ(const Tree& t, const OrderLabel& f) {
    const LabelCheck chk = verify_order_label(t, f, true);
    if (!chk.ok()) throw NotStrict(chk.violation->first, chk.violation->second);
    EmbeddingWitness w;
    w.psi.resize(t.size());
    if (t.size() == 0) return w;
    for (NodeId s : t.bfs()) {
        std::set<Rational> used;
        const WOSet& base = w.psi[s];
        for (NodeId r : t.children(s)) {
            const Rational hi = lower_bound(f, r);
            const ExtRational sup = base.sup();
            const Rational lo = sup.is_neg_inf() ? hi - 1 : sup.value();
            if (t.node(r).limit) {
                const Rational a = dyadic_pick(lo, hi, true, std::nullopt, used);
                used.insert(a);
                w.psi[r] = concat(base, {OmegaBlock{a, hi}});
            } else {
                const Rational j = dyadic_pick(lo, hi, false, exact_value(f, r), used);
                used.insert(j);
                w.psi[r] = base.appended(j);
            }
        }
    }
    return w;
}

EmbeddingWitness close_image(const EmbeddingWitness& w, const Tree& t) {
    EmbeddingWitness out;
    out.psi = w.psi;
    if (t.size() == 0) return out;
    for (NodeId n : t.bfs()) {
        const auto p = t.parent(n);
        if (!p) continue;
        std::vector<Block> tail = tail_after(w.psi[n], w.psi[*p]);
        if (t.node(n).limit) {
            const auto it = std::find_if(tail.begin(), tail.end(),
                                         [](const Block& b) { return std::holds_alternative<OmegaBlock>(b); });
            if (it != tail.end()) tail.erase(it + 1, tail.end());
        }
        out.psi[n] = concat(out.psi[*p], tail);
    }
    return out;
}

WitnessCheck check_witness(const Tree& t, const OrderLabel& f, const EmbeddingWitness& w) {
    WitnessCheck c;
    if (w.psi.size() != t.size()) return c;
    c.order_both_ways = true;
    for (NodeId a = 0; a < t.size() && c.order_both_ways; ++a)
        for (NodeId b = 0; b < t.size(); ++b)
            if (t.leq(a, b) != is_initial_segment(w.psi[a], w.psi[b])) {
                c.order_both_ways = false;
                break;
            }
    c.image_initial = true;
    for (NodeId n = 0; n < t.size() && c.image_initial; ++n) {
        const auto p = t.parent(n);
        if (!p) continue;
        if (!is_initial_segment(w.psi[*p], w.psi[n]) || w.psi[*p] == w.psi[n]) {
            c.image_initial = false;
            break;
        }
        const auto tail = tail_after(w.psi[n], w.psi[*p]);
        if (t.node(n).limit) {
            c.image_initial = std::holds_alternative<OmegaBlock>(tail.back()) &&
                              std::count_if(tail.begin(), tail.end(), [](const Block& b) {
                                  return std::holds_alternative<OmegaBlock>(b);
                              }) == 1;
        } else {
            const auto* fb = std::get_if<FinBlock>(&tail.front());
            c.image_initial = tail.size() == 1 && fb != nullptr && fb->elems.size() == 1;
        }
    }
    c.sup_bound = true;
    for (NodeId n = 0; n < t.size(); ++n) {
        const ExtRational s = w.psi[n].sup();
        if (s.is_neg_inf()) continue;
        const LabelValue& v = f.at(n);
        if (std::holds_alternative<LexPair>(v) || s > ExtRational(lower_bound(f, n))) {
            c.sup_bound = false;
            break;
        }
    }
    return c;
}

std::pair<Tree, OrderLabel> countably_branching_expansion(const Tree& t, const OrderLabel& f, std::size_t depth) {
    const LabelCheck chk = verify_order_label(t, f, true);
    if (!chk.ok()) throw NotStrict(chk.violation->first, chk.violation->second);

    Tree out;
    OrderLabel g;
    g.codomain = Codomain::Q;
    for (NodeId n = 0; n < t.size(); ++n) {
        const Node& node = t.node(n);
        out.add_node(std::nullopt, node.payload, node.frontier, node.limit);
        g.set(n, f.rational(n));
    }
    for (NodeId n = 0; n < t.size(); ++n)
        if (const auto p = t.parent(n)) out.set_parent(n, *p);

    for (NodeId n = 0; n < t.size(); ++n) {
        const Rational ft = f.rational(n);
        std::map<mpz_class, std::vector<NodeId>> rings;
        for (NodeId x : t.children(n)) {
            // Smallest ring index m with f(x) >= f(t) + 1/m.
            const Rational gap = f.rational(x) - ft;
            const mpz_class m = (Rational(1) / gap).ceil();
            rings[m].push_back(x);
        }
        for (auto& [ring, members] : rings) {
            const Rational hi = ft + Rational(mpq_class(1, ring));
            const Rational lo = ft + Rational(mpq_class(1, 2 * ring));
            const std::string tag = "n" + ring.get_str();
            const NodeId rn = out.add_child(n, PairPayload{n, tag, 1});
            g.set(rn, lo);
            std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
                const Rational fa = f.rational(a);
                const Rational fb = f.rational(b);
                return fa != fb ? fa < fb : a < b;
            });
            // Cantor subdivision of the ring, halving until singletons or the depth cut.
            struct Piece {
                NodeId parent;
                std::string s;
                std::vector<NodeId> members;
            };
            std::vector<Piece> todo{{rn, "", members}};
            while (!todo.empty()) {
                Piece pc = std::move(todo.back());
                todo.pop_back();
                const int level = static_cast<int>(pc.s.size());
                const NodeId cn = out.add_child(pc.parent, PairPayload{n, tag + ":" + pc.s, 2 + level});
                g.set(cn, lo + (hi - lo) * (Rational(1) - Rational::pow2(-(level + 1))));
                if (pc.members.size() >= 2 && pc.s.size() < depth) {
                    const auto half = pc.members.begin() + static_cast<long>(pc.members.size() / 2);
                    todo.push_back({cn, pc.s + "1", std::vector<NodeId>(half, pc.members.end())});
                    todo.push_back({cn, pc.s + "0", std::vector<NodeId>(pc.members.begin(), half)});
                } else {
                    for (NodeId x : pc.members) out.set_parent(x, cn);
                }
            }
        }
    }
    return {std::move(out), std::move(g)};
}

std::vector<std::vector<NodeId>> special_decomposition(const Tree& t, const OrderLabel& h,
                                                       const std::vector<Rational>& eps) {
    if (eps.size() != t.size()) throw BadParams("eps needs one value per node");
    for (NodeId n = 0; n < t.size(); ++n)
        if (eps[n] <= 0) throw PreconditionFailed(n);
    for (NodeId s : t.bfs()) {
        const auto p = t.path(s);
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (h.rational(s) < h.rational(p[i]) + eps[p[i]]) throw PreconditionFailed(p[i], s);
    }
    std::vector<long> cls(t.size());
    for (NodeId n = 0; n < t.size(); ++n) cls[n] = (Rational(1) / eps[n]).ceil().get_si();
    std::map<std::pair<long, std::size_t>, std::vector<NodeId>> parts;
    for (NodeId n : t.bfs()) {
        std::size_t level = 0;
        const auto p = t.path(n);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) level += cls[p[i]] == cls[n] ? 1 : 0;
        parts[{cls[n], level}].push_back(n);
    }
    std::vector<std::vector<NodeId>> out;
    for (auto& [key, a] : parts) {
        if (!is_antichain(t, a)) throw Error("level set within a class is not an antichain");
        out.push_back(std::move(a));
    }
    return out;
}

namespace {

constexpr std::size_t kLimitProbe = 16;

/// Values v0 < v1 < v2 with v2 - v1 = (v1 - v0) / 2.
bool dyadic_run(const Rational& v0, const Rational& v1, const Rational& v2) {
    return v0 < v1 && (v2 - v1) * 2 == v1 - v0;
}

RefutationWitness make_witness(const Candidate& c, WOSet s, WOSet t, std::size_t beta, std::size_t step) {
    const auto cs = c(s);
    const auto ct = c(t);
    if (!cs || !ct || !is_initial_segment(s, t) || s == t || *cs < *ct)
        throw std::logic_error("refutation witness failed re-verification");
    return {std::move(s), std::move(t), beta, step};
}

}  // namespace

RefutationOutcome kurepa_refute(const Candidate& c, std::size_t max_steps) {
    if (max_steps == 0) throw BadParams("max_steps must be at least 1");
    std::vector<WOSet> run;
    std::vector<Rational> vals;
    WOSet cur;
    // After the limit stage: the run t_{base} u {x_0, ..., x_{i-1}} it absorbed.
    std::optional<std::size_t> limit_base;
    Rational x0, limit;
    for (std::size_t k = 0; k < max_steps; ++k) {
        if (!limit_base && k == max_steps / 2 && k >= 3 && dyadic_run(vals[k - 3], vals[k - 2], vals[k - 1])) {
            const Rational v0 = vals[k - 3];
            const Rational L = v0 + (vals[k - 2] - v0) * 2;
            const OmegaBlock run_block{v0, L};
            // Confirm the candidate keeps following the run before closing it off.
            bool follows = true;
            WOSet probe = run[k - 3];
            for (std::size_t i = 0; i < kLimitProbe && follows; ++i) {
                const auto v = c(probe);
                follows = v && *v == run_block.element(i);
                if (follows) probe = probe.appended(*v);
            }
            if (follows) {
                limit_base = k - 3;
                x0 = v0;
                limit = L;
                cur = concat(run[k - 3], {run_block});
            }
        }
        const auto v = c(cur);
        if (!v) throw CandidateNotRational("candidate has no rational value at " + cur.to_string());
        for (std::size_t b = 0; b < vals.size(); ++b)
            if (vals[b] >= *v) return make_witness(c, run[b], cur, b, k);
        if (limit_base && !cur.sup_attained() && *v < limit) {
            // Some absorbed run element x_i lies at or above v; t_{base+i} is the witness.
            const OmegaBlock blk{x0, limit};
            WOSet s = run[*limit_base];
            std::size_t i = 0;
            while (blk.element(i) < *v) s = s.appended(blk.element(i++));
            return make_witness(c, s, cur, *limit_base + i, k);
        }
        run.push_back(cur);
        vals.push_back(*v);
        cur = cur.appended(*v);
    }
    return IncreasingRun{std::move(run)};
}

Candidate builtin_candidate(const std::string& name) {
    if (name == "zero") return [](const WOSet&) -> std::optional<Rational> { return Rational(0); };
    if (name == "sup-plus-one")
        return [](const WOSet& t) -> std::optional<Rational> {
            if (t.empty()) return Rational(0);
            return t.sup().value() + 1;
        };
    if (name == "half-to-one")
        return [](const WOSet& t) -> std::optional<Rational> {
            if (t.empty()) return Rational(0);
            return (t.sup().value() + 1) / 2;
        };
    const std::string capped = "sup-plus-one-capped:";
    if (name.rfind(capped, 0) == 0) {
        Rational cap;
        try {
            cap = Rational::parse(name.substr(capped.size()));
        } catch (const Error&) {
            throw BadParams("bad cap in candidate '" + name + "'");
        }
        return [cap](const WOSet& t) -> std::optional<Rational> {
            if (t.empty()) return min(Rational(0), cap);
            return min(t.sup().value() + 1, cap);
        };
    }
    throw BadParams("unknown candidate '" + name + "'");
}

}  // namespace treetop
