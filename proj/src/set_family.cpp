#include "treetop/set_family.hpp"

#include <algorithm>

#include "treetop/errors.hpp"

namespace treetop {

std::string to_string(const TopologyCert& c) {
    if (std::holds_alternative<Closed>(c)) return "closed";
    if (const auto* r = std::get_if<RelOpenIn>(&c)) return "rel-open-in:" + std::to_string(r->parent);
    if (const auto* r = std::get_if<ClosedIn>(&c)) return "closed-in:" + std::to_string(r->parent);
    return "none";
}

bool SetDescriptor::member(const WOSet& x) const {
    if (!is_initial_segment(base, x)) return false;
    return !constraint || constraint->contains(first_after(x, base));
}

bool disjoint(const SetDescriptor& a, const SetDescriptor& b) {
    const Interval everything{ExtRational::neg_inf(), ExtRational::pos_inf(), true, true};
    const Interval& ia = a.constraint ? *a.constraint : everything;
    const Interval& ib = b.constraint ? *b.constraint : everything;
    if (a.base == b.base) return !ia.intersect(ib).has_value();
    if (is_initial_segment(a.base, b.base)) return !ia.contains(first_after(b.base, a.base));
    if (is_initial_segment(b.base, a.base)) return !ib.contains(first_after(a.base, b.base));
    return true;
}

SetFamily::SetFamily(Tree tree, std::vector<SetDescriptor> descriptors)
    : tree_(std::move(tree)), descriptors_(std::move(descriptors)) {
    if (descriptors_.size() != tree_.size())
        throw BadParams("one descriptor per node required");
    for (const auto& d : descriptors_) certs_.push_back(d.cert);
}

SetFamily::SetFamily(Tree tree, Member member, std::vector<TopologyCert> certs)
    : tree_(std::move(tree)), member_(std::move(member)), certs_(std::move(certs)) {
    if (certs_.size() != tree_.size()) throw BadParams("one certificate per node required");
}

bool SetFamily::member(NodeId t, const WOSet& x) const {
    if (!tree_.contains(t)) throw UnknownNode(t);
    return member_ ? member_(t, x) : descriptors_[t].member(x);
}

SetFamily canonical_set_family(const Tree& tree) {
    std::vector<SetDescriptor> d;
    d.reserve(tree.size());
    for (NodeId t = 0; t < tree.size(); ++t) d.push_back({woset_of(tree, t), std::nullopt, Closed{}});
    return SetFamily(tree, std::move(d));
}

namespace {

constexpr std::size_t kChainTerms = 64;

bool can_append(const WOSet& x, const Rational& q) {
    const ExtRational s = x.sup();
    if (s.is_neg_inf()) return true;
    return x.sup_attained() ? ExtRational(q) > s : ExtRational(q) >= s;
}

/// x without its last block when that block is an omega-run.
std::optional<WOSet> before_last_omega(const WOSet& x) {
    if (x.empty() || !std::holds_alternative<OmegaBlock>(x.blocks().back())) return std::nullopt;
    std::vector<Block> b(x.blocks().begin(), x.blocks().end() - 1);
    return WOSet(std::move(b));
}

class Sampler {
public:
    Sampler(std::vector<WOSet> anchors, std::vector<Rational> pivots, std::mt19937_64& rng)
        : anchors_(std::move(anchors)), pivots_(std::move(pivots)), rng_(rng) {}

    WOSet next() {
        const int mode = pick(anchors_.empty() ? 1 : 6);
        if (anchors_.empty() || mode == 5) return scratch();
        WOSet x = anchors_[pick(static_cast<int>(anchors_.size()))];
        switch (mode) {
            case 0: return x;
            case 1:
            case 2: return extend(x, 1 + pick(3));
            case 3: {
                x = extend(x, pick(2));
                x = with_omega(x);
                if (pick(2) == 0 && x.sup().is_finite()) x = x.appended(x.sup().value() + Rational(pick(3)));
                return x;
            }
            default: {
                const auto head = x.first_elements(static_cast<std::size_t>(pick(4)));
                return extend(WOSet::finite(head), pick(3));
            }
        }
    }

    std::vector<Rational> candidates(const WOSet& x) const {
        std::vector<Rational> c;
        const ExtRational s = x.sup();
        std::vector<Rational> base = pivots_;
        if (s.is_finite()) {
            base.push_back(s.value());
            base.push_back(s.value() + 1);
            base.push_back(s.value() + 2);
        } else {
            for (long k = -2; k <= 3; ++k) base.emplace_back(k);
        }
        for (const auto& p : base) {
            c.push_back(p);
            for (long j = 1; j <= 3; ++j) {
                c.push_back(p + Rational::pow2(-j));
                c.push_back(p - Rational::pow2(-j));
            }
        }
        c.erase(std::remove_if(c.begin(), c.end(), [&](const Rational& q) { return !can_append(x, q); }),
                c.end());
        return c;
    }

private:
    int pick(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_)); }

    WOSet extend(WOSet x, int k) {
        for (int i = 0; i < k; ++i) {
            const auto c = candidates(x);
            if (c.empty()) break;
            x = x.appended(c[static_cast<std::size_t>(pick(static_cast<int>(c.size())))]);
        }
        return x;
    }

    WOSet with_omega(const WOSet& x) {
        const auto c = candidates(x);
        if (c.empty()) return x;
        const Rational a = c[static_cast<std::size_t>(pick(static_cast<int>(c.size())))];
        const Rational width = Rational::pow2(-pick(3));
        std::vector<Block> b = x.blocks();
        b.emplace_back(OmegaBlock{a, a + width});
        try {
            return WOSet(std::move(b));
        } catch (const std::invalid_argument&) {
            return x;
        }
    }

    WOSet scratch() {
        std::vector<Rational> e;
        const int n = pick(5);
        for (int i = 0; i < n; ++i) e.emplace_back(pick(33) - 8, 4);
        WOSet x = WOSet::finite(std::move(e));
        return pick(4) == 0 ? with_omega(x) : x;
    }

    std::vector<WOSet> anchors_;
    std::vector<Rational> pivots_;
    std::mt19937_64& rng_;
};

std::vector<WOSet> anchors_of(const SetFamily& f) {
    std::vector<WOSet> a;
    for (NodeId t = 0; t < f.tree().size(); ++t) {
        try {
            a.push_back(base_woset(f.tree(), t));
        } catch (const PayloadMismatch&) {
        }
    }
    return a;
}

std::vector<Rational> pivots_of(const SetFamily& f) {
    std::vector<Rational> p;
    if (!f.has_descriptors()) return p;
    for (NodeId t = 0; t < f.tree().size(); ++t) {
        const auto& c = f.descriptor(t).constraint;
        if (!c) continue;
        if (c->lo.is_finite()) p.push_back(c->lo.value());
        if (c->hi.is_finite()) p.push_back(c->hi.value());
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

std::string witness(const WOSet& x, NodeId a, NodeId b) {
    return "x=" + x.to_string() + " at (" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

void check_monotone_disjoint(const SetFamily& f, const std::vector<WOSet>& pool, ConditionReport& mono,
                             ConditionReport& disj) {
    const Tree& t = f.tree();
    std::vector<std::vector<NodeId>> paths;
    for (NodeId n = 0; n < t.size(); ++n) paths.push_back(t.path(n));
    for (const auto& x : pool) {
        std::vector<bool> in(t.size());
        std::vector<NodeId> members;
        for (NodeId n = 0; n < t.size(); ++n)
            if ((in[n] = f.member(n, x))) members.push_back(n);
        ++mono.checked;
        ++disj.checked;
        for (NodeId m : members)
            for (NodeId a : paths[m])
                if (!in[a] && mono.counterexamples.size() < 16) mono.counterexamples.push_back(witness(x, a, m));
        bool reported = false;
        for (std::size_t i = 0; i < members.size() && !reported; ++i)
            for (std::size_t j = i + 1; j < members.size() && !reported; ++j)
                if (!t.comparable(members[i], members[j]) && disj.counterexamples.size() < 16) {
                    disj.counterexamples.push_back(witness(x, members[i], members[j]));
                    reported = true;
                }
    }
}

void check_disjoint_exact(const SetFamily& f, ConditionReport& r) {
    const Tree& t = f.tree();
    for (NodeId a = 0; a < t.size(); ++a)
        for (NodeId b = a + 1; b < t.size(); ++b) {
            if (t.comparable(a, b)) continue;
            ++r.checked;
            if (!disjoint(f.descriptor(a), f.descriptor(b)) && r.counterexamples.size() < 16)
                r.counterexamples.push_back("descriptors of (" + std::to_string(a) + ", " +
                                            std::to_string(b) + ") intersect");
        }
}

void check_chain_limits(const SetFamily& f, std::size_t samples, std::mt19937_64& rng, ConditionReport& r) {
    const Tree& t = f.tree();
    std::vector<NodeId> limits;
    for (NodeId n = 0; n < t.size(); ++n)
        if (t.node(n).limit && std::holds_alternative<WOSet>(t.payload(n))) limits.push_back(n);
    if (limits.empty()) return;
    const std::size_t per = std::max<std::size_t>(1, samples / limits.size());
    for (NodeId lim : limits) {
        const WOSet& p = woset_of(t, lim);
        const auto head = before_last_omega(p);
        std::vector<WOSet> prefixes;
        if (head) {
            const auto& o = std::get<OmegaBlock>(p.blocks().back());
            for (std::size_t k = 0; k < kChainTerms; ++k) {
                std::vector<Block> b = head->blocks();
                std::vector<Rational> e;
                for (std::size_t i = 0; i < k; ++i) e.push_back(o.element(i));
                if (!e.empty()) b.emplace_back(FinBlock{e});
                prefixes.emplace_back(std::move(b));
            }
        }
        std::vector<WOSet> anchors = prefixes;
        anchors.push_back(p);
        Sampler s(anchors, pivots_of(f), rng);
        const auto path = t.path(lim);
        for (std::size_t i = 0; i < per; ++i) {
            const WOSet x = s.next();
            ++r.checked;
            bool in_all = true;
            for (std::size_t j = 0; j + 1 < path.size() && in_all; ++j) in_all = f.member(path[j], x);
            // x lies in every A_{prefix} exactly when the whole chain is a common initial segment.
            if (in_all) in_all = meet(x, p) == p;
            if (in_all && !f.member(lim, x) && r.counterexamples.size() < 16)
                r.counterexamples.push_back("x=" + x.to_string() + " in every set below limit node " +
                                            std::to_string(lim));
        }
    }
}

void check_unbounded(const SetFamily& f, std::size_t samples, std::mt19937_64& rng, ConditionReport& r) {
    const Tree& t = f.tree();
    std::vector<NodeId> starts;
    for (NodeId n = 0; n < t.size(); ++n)
        if (std::holds_alternative<WOSet>(t.payload(n))) starts.push_back(n);
    if (starts.empty()) return;
    for (std::size_t i = 0; i < samples; ++i) {
        const NodeId n = starts[i % starts.size()];
        const WOSet& base = woset_of(t, n);
        const ExtRational sup = base.sup();
        const Rational s = sup.is_finite() ? sup.value() : Rational(-1);
        auto chain = [&](std::size_t k) {
            WOSet c = base;
            for (std::size_t j = 1; j <= k; ++j) c = c.appended(s + Rational(static_cast<long>(j)));
            return c;
        };
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, kChainTerms)(rng);
        Sampler smp({chain(k)}, {}, rng);
        const WOSet x = smp.next();
        ++r.checked;
        // The chain leaves every bounded set once its elements pass sup x.
        const ExtRational xs = x.sup();
        std::size_t horizon = kChainTerms;
        if (xs.is_finite() && xs.value() > s)
            horizon = std::max<std::size_t>(horizon, (xs.value() - s).floor().get_ui() + 2);
        bool escaped = false;
        WOSet c = base;
        for (std::size_t j = 1; j <= horizon && !escaped; ++j) {
            c = c.appended(s + Rational(static_cast<long>(j)));
            escaped = !is_initial_segment(c, x);
        }
        if (!escaped && r.counterexamples.size() < 16)
            r.counterexamples.push_back("x=" + x.to_string() + " in every set of the chain above node " +
                                        std::to_string(n));
    }
}

std::vector<std::vector<WOSet>> sequences_to(const WOSet& y, const std::vector<Rational>& pivots) {
    std::vector<std::vector<WOSet>> out;
    const ExtRational s = y.sup();
    const Rational escape = s.is_finite() ? Rational(mpq_class(s.value().floor() + 1)) : Rational(0);
    std::vector<WOSet> esc;
    for (std::size_t k = 0; k < kChainTerms; ++k) esc.push_back(y.appended(escape + Rational(static_cast<long>(k))));
    out.push_back(std::move(esc));

    std::vector<Rational> cs = pivots;
    if (s.is_finite()) {
        cs.push_back(s.value() + 1);
        cs.push_back(s.value() + 2);
    } else {
        cs.emplace_back(0);
        cs.emplace_back(1);
    }
    for (const auto& c : cs) {
        for (int side : {-1, 1}) {
            std::vector<WOSet> seq;
            for (long k = 1; seq.size() < kChainTerms && k < 200; ++k) {
                const Rational q = c + Rational(side) * Rational::pow2(-k);
                if (can_append(y, q)) seq.push_back(y.appended(q));
            }
            if (seq.size() == kChainTerms) out.push_back(std::move(seq));
        }
    }
    if (const auto head = before_last_omega(y)) {
        const auto& o = std::get<OmegaBlock>(y.blocks().back());
        std::vector<WOSet> seq;
        std::vector<Rational> e;
        for (std::size_t k = 0; k < kChainTerms; ++k) {
            e.push_back(o.element(k));
            std::vector<Block> b = head->blocks();
            b.emplace_back(FinBlock{e});
            seq.emplace_back(std::move(b));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

void check_certificates(const SetFamily& f, std::size_t samples, std::mt19937_64& rng, ConditionReport& r) {
    const Tree& t = f.tree();
    std::vector<NodeId> certified;
    for (NodeId n = 0; n < t.size(); ++n)
        if (!std::holds_alternative<NoCert>(f.cert(n))) certified.push_back(n);
    if (certified.empty()) return;
    const auto pivots = pivots_of(f);
    for (std::size_t i = 0; i < samples; ++i) {
        const NodeId n = certified[i % certified.size()];
        std::vector<WOSet> anchors;
        try {
            anchors.push_back(base_woset(t, n));
        } catch (const PayloadMismatch&) {
            continue;
        }
        Sampler smp(anchors, pivots, rng);
        const WOSet y = smp.next();
        const TopologyCert& cert = f.cert(n);
        ++r.checked;
        for (const auto& seq : sequences_to(y, pivots)) {
            std::string failure;
            if (std::holds_alternative<Closed>(cert)) {
                const bool all_in = std::all_of(seq.begin(), seq.end(), [&](const WOSet& x) { return f.member(n, x); });
                if (all_in && !f.member(n, y)) failure = "closed set misses a limit";
            } else if (const auto* c = std::get_if<ClosedIn>(&cert)) {
                const bool all_in = std::all_of(seq.begin(), seq.end(), [&](const WOSet& x) { return f.member(n, x); });
                if (all_in && f.member(c->parent, y) && !f.member(n, y)) failure = "relatively closed set misses a limit";
            } else if (const auto* o = std::get_if<RelOpenIn>(&cert)) {
                const bool all_out = std::all_of(seq.begin(), seq.end(), [&](const WOSet& x) {
                    return f.member(o->parent, x) && !f.member(n, x);
                });
                if (all_out && f.member(o->parent, y) && f.member(n, y)) failure = "relative complement misses a limit";
            }
            if (!failure.empty() && r.counterexamples.size() < 16) {
                r.counterexamples.push_back(failure + ": node " + std::to_string(n) + ", y=" + y.to_string() +
                                            ", first term " + seq.front().to_string());
                break;
            }
        }
    }
}

}  // namespace

std::vector<WOSet> sample_sets(const SetFamily& f, std::size_t count, std::mt19937_64& rng) {
    Sampler s(anchors_of(f), pivots_of(f), rng);
    std::vector<WOSet> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(s.next());
    return out;
}

bool TreeOfSetsReport::ok() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionReport& c) { return c.ok(); });
}

TreeOfSetsReport tree_of_sets_check(const SetFamily& f, std::size_t samples, std::uint64_t seed) {
    TreeOfSetsReport rep;
    rep.seed = seed;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    auto named = [](const char* n) {
        ConditionReport c;
        c.name = n;
        return c;
    };
    ConditionReport mono = named("monotone"), disj = named("disjoint"), exact = named("disjoint-exact"),
                    lim = named("chain-limit"), unb = named("unbounded-chain"), cert = named("certificates");
    const auto pool = sample_sets(f, samples, rng);
    check_monotone_disjoint(f, pool, mono, disj);
    if (f.has_descriptors()) check_disjoint_exact(f, exact);
    check_chain_limits(f, samples, rng, lim);
    check_unbounded(f, samples, rng, unb);
    check_certificates(f, samples, rng, cert);
    rep.conditions = {mono, disj, exact, lim, unb, cert};
    return rep;
}

std::vector<ContinuityResult> continuity_check(const std::vector<TestSequence>& seqs,
                                               const std::function<Enclosure(const Point&)>& f,
                                               const Enclosure& at_infinity, const Rational& tol,
                                               std::size_t n) {
    std::vector<ContinuityResult> out;
    for (const auto& seq : seqs) {
        const Enclosure target = seq.limit ? f(*seq.limit) : at_infinity;
        const std::size_t len = std::min(n, seq.items.size());
        // Smallest n0 such that every item from n0 on is within tol.
        std::size_t n0 = len;
        for (std::size_t i = len; i-- > 0;) {
            const Enclosure v = f(seq.items[i]);
            const Rational dist = max((v.hi - target.lo).abs(), (target.hi - v.lo).abs());
            if (dist > tol) break;
            n0 = i;
        }
        out.push_back(n0 < len ? ContinuityResult{true, n0} : ContinuityResult{false, len});
    }
    return out;
}

}  // namespace treetop
