#include "treetop/renorming.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "treetop/embeddings.hpp"
#include "treetop/errors.hpp"
#include "treetop/expansions.hpp"

namespace treetop {

std::optional<Rational> family_infimum(const OrderLabel& f, NodeId t, std::size_t index, const SuccFamily& fam) {
    if (const auto it = f.family_inf.find({t, index}); it != f.family_inf.end()) return it->second;
    const Affine& v = fam.value;
    if (v.alpha.sign() == 0) return v.beta;
    const ExtRational& end = v.alpha.sign() > 0 ? fam.interval.lo : fam.interval.hi;
    if (!end.is_finite()) return std::nullopt;
    return v.at(end.value());
}

std::vector<GoodnessVerdict> bad_points(const Tree& t, const OrderLabel& f) {
    std::vector<GoodnessVerdict> out;
    for (NodeId n = 0; n < t.size(); ++n) {
        const Rational ft = f.rational(n);
        for (NodeId c : t.children(n))
            if (f.rational(c) < ft) throw NotMonotone(n, c);
        const auto& fams = t.families_of(n);
        std::optional<Rational> least_gap;
        std::optional<Bad> bad;
        for (std::size_t i = 0; i < fams.size(); ++i) {
            const auto inf = family_infimum(f, n, i, fams[i]);
            if (!inf || *inf < ft) throw NotMonotone(n, n);
            const Rational gap = *inf - ft;
            if (gap.sign() == 0 && !bad) bad = Bad{i, fams[i], *inf};
            if (!least_gap || gap < *least_gap) least_gap = gap;
        }
        if (bad) {
            out.push_back({n, *bad});
            continue;
        }
        Good g{least_gap ? *least_gap / 2 : Rational(1), {}};
        for (NodeId c : t.children(n))
            if (f.rational(c) <= ft + g.eps) g.removed.push_back(c);
        out.push_back({n, g});
    }
    return out;
}

bool certifies(const Tree& t, const OrderLabel& f, NodeId node, const Good& g) {
    if (g.eps.sign() <= 0) return false;
    const Rational bound = f.rational(node) + g.eps;
    const auto& fams = t.families_of(node);
    for (std::size_t i = 0; i < fams.size(); ++i) {
        const auto inf = family_infimum(f, node, i, fams[i]);
        if (!inf || *inf <= bound) return false;
    }
    for (NodeId c : t.children(node))
        if (std::find(g.removed.begin(), g.removed.end(), c) == g.removed.end() && f.rational(c) <= bound) return false;
    return true;
}

Rational kadec_value(const Rational& q) {
    const std::uint64_t n = idx(q);
    if (n > kMaxKadecIndex) throw BadParams("enumeration index of " + q.to_string() + " is too large for the Cantor map");
    // Ternary digits of the predecessors, accumulated by Horner's rule.
    mpz_class digits = 0;
    Rational cw(1);
    for (std::uint64_t m = 0; m < n; ++m) {
        Rational qm(0);
        if (m > 0) {
            qm = m % 2 == 1 ? cw : -cw;
            if (m % 2 == 0) cw = Rational(1) / (Rational(mpq_class(2 * cw.floor())) - cw + 1);
        }
        digits = 3 * digits + (qm < q ? 2 : 0);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 3, n + 1);
    return Rational(mpq_class(3 * digits + 1, den));
}

bool right_isolated(const Rational& x) {
    mpz_class den = x.denominator();
    mpz_class num = x.numerator();
    if (num <= 0 || num >= den) return false;
    std::size_t k = 0;
    while (den % 3 == 0) {
        den /= 3;
        ++k;
    }
    if (den != 1 || k == 0) return false;
    if (num % 3 != 1) return false;
    num /= 3;
    for (std::size_t i = 1; i < k; ++i) {
        if (num % 3 == 1) return false;
        num /= 3;
    }
    return true;
}

OrderLabel kadec_witness(const Tree& t, const OrderLabel& f) {
    const LabelCheck chk = verify_order_label(t, f, true);
    if (!chk.ok()) throw NotStrict(chk.violation->first, chk.violation->second);
    OrderLabel h;
    h.codomain = Codomain::R;
    std::map<Rational, Rational> memo;
    for (NodeId n = 0; n < t.size(); ++n) {
        const Rational q = f.rational(n);
        auto it = memo.find(q);
        if (it == memo.end()) it = memo.emplace(q, kadec_value(q)).first;
        h.set(n, it->second);
    }
    return h;
}

std::size_t RhoReport::violations() const {
    return static_cast<std::size_t>(std::count_if(upsets.begin(), upsets.end(), [](const UpSetVerdict& u) {
        return !u.chain || (u.bad_count && *u.bad_count > 1);
    }));
}

RhoReport rho_check(const Tree& t, const OrderLabel& rho, std::size_t cantor_depth) {
    const LabelCheck chk = verify_order_label(t, rho, false);
    if (!chk.ok()) throw NotMonotone(chk.violation->first, chk.violation->second);
    std::vector<Rational> v;
    for (NodeId n = 0; n < t.size(); ++n) v.push_back(rho.rational(n));

    std::optional<std::vector<GoodnessVerdict>> verdicts;
    try {
        verdicts = bad_points(t, rho);
    } catch (const NotMonotone&) {
        verdicts.reset();
    }

    RhoReport rep;
    for (NodeId n = 0; n < t.size(); ++n) {
        UpSetVerdict u;
        u.node = n;
        for (NodeId s = 0; s < t.size(); ++s)
            if (v[s] == v[n] && t.leq(n, s)) u.equal_up_set.push_back(s);
        for (std::size_t i = 0; i < u.equal_up_set.size() && u.chain; ++i)
            for (std::size_t j = i + 1; j < u.equal_up_set.size(); ++j)
                if (!t.comparable(u.equal_up_set[i], u.equal_up_set[j])) {
                    u.chain = false;
                    break;
                }
        if (verdicts)
            u.bad_count = static_cast<std::size_t>(std::count_if(u.equal_up_set.begin(), u.equal_up_set.end(),
                                                                 [&](NodeId s) { return !(*verdicts)[s].good(); }));
        rep.upsets.push_back(std::move(u));
    }

    // can[d][n]: a constant-rho full binary subtree of depth d is rooted at n.
    std::vector<std::vector<bool>> can(cantor_depth + 1, std::vector<bool>(t.size(), true));
    std::vector<std::vector<std::pair<NodeId, NodeId>>> split(cantor_depth + 1, std::vector<std::pair<NodeId, NodeId>>(t.size()));
    for (std::size_t d = 1; d <= cantor_depth; ++d) {
        for (NodeId n = 0; n < t.size(); ++n) {
            std::vector<NodeId> cand;
            for (NodeId s = 0; s < t.size(); ++s)
                if (s != n && v[s] == v[n] && t.leq(n, s) && can[d - 1][s]) cand.push_back(s);
            bool found = false;
            for (std::size_t i = 0; i < cand.size() && !found; ++i)
                for (std::size_t j = i + 1; j < cand.size() && !found; ++j)
                    if (!t.comparable(cand[i], cand[j])) {
                        split[d][n] = {cand[i], cand[j]};
                        found = true;
                    }
            can[d][n] = found;
        }
    }
    for (NodeId n = 0; n < t.size(); ++n) {
        if (!can[cantor_depth][n]) continue;
        CantorWitness w;
        w.depth = cantor_depth;
        std::function<void(NodeId, std::size_t)> collect = [&](NodeId x, std::size_t d) {
            w.nodes.push_back(x);
            if (d == 0) return;
            collect(split[d][x].first, d - 1);
            collect(split[d][x].second, d - 1);
        };
        collect(n, cantor_depth);
        rep.cantor_constant = std::move(w);
        break;
    }
    return rep;
}

OrderLabel t2_rho(const Tree& t2) {
    std::vector<ExtRational> raw;
    for (NodeId n = 0; n < t2.size(); ++n) {
        if (const auto* p = std::get_if<PairPayload>(&t2.payload(n)))
            raw.push_back(t2_interval(woset_of(t2, p->base).sup(), p->s).lo);
        else
            raw.push_back(woset_of(t2, n).sup());
    }
    std::optional<Rational> least;
    for (const auto& x : raw)
        if (x.is_finite() && (!least || x.value() < *least)) least = x.value();
    const Rational floor_value = least ? *least - 1 : Rational(0);
    OrderLabel rho;
    rho.codomain = Codomain::R;
    for (NodeId n = 0; n < t2.size(); ++n) rho.set(n, raw[n].is_finite() ? raw[n].value() : floor_value);
    return rho;
}

}  // namespace treetop
