#include "treetop/compactification.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "treetop/errors.hpp"

namespace treetop {

namespace {

/// x in [0, t]: x <= t in the tree, x = t for a discrete X.
bool below(const CompactificationInstance& inst, NodeId x, NodeId t) {
    return inst.tree ? inst.tree->leq(x, t) : x == t;
}

void check_point(const CompactificationInstance& inst, const SpacePoint& p) {
    const std::size_t bound = p.side == SpacePoint::Side::X ? inst.points_of_x() : inst.points_of_k();
    if (p.index >= bound) throw UnknownPoint("no point " + to_string(p));
}

bool disjoint(const CompactificationInstance& inst, const BasicNbhd& a, const BasicNbhd& b) {
    for (std::size_t i = 0; i < inst.points_of_x(); ++i)
        if (contains(inst, a, SpacePoint::in_x(i)) && contains(inst, b, SpacePoint::in_x(i))) return false;
    for (std::size_t i = 0; i < inst.points_of_k(); ++i)
        if (contains(inst, a, SpacePoint::in_k(i)) && contains(inst, b, SpacePoint::in_k(i))) return false;
    return true;
}

/// The search stock around p, smallest sets first.
std::vector<BasicNbhd> stock(const CompactificationInstance& inst, const SpacePoint& p, const std::vector<Rational>& radii) {
    std::vector<BasicNbhd> out;
    if (p.side == SpacePoint::Side::X) {
        out.push_back(af_basis(inst, p, Rational(1)));
        return out;
    }
    std::vector<std::vector<NodeId>> compacts{{}};
    for (NodeId t = 0; t < inst.points_of_x(); ++t) compacts.push_back({t});
    for (NodeId t = 0; t < inst.points_of_x(); ++t)
        for (NodeId u = t + 1; u < inst.points_of_x(); ++u) compacts.push_back({t, u});
    for (const Rational& r : radii)
        for (const auto& c : compacts) out.push_back(Glued{p.index, r, c});
    return out;
}

}  // namespace

void check_instance(const CompactificationInstance& inst) {
    const std::size_t k = inst.points_of_k();
    if (inst.f.size() != inst.points_of_x()) throw BadParams("f needs one value per point of X");
    for (std::size_t y : inst.f)
        if (y >= k) throw BadParams("f maps outside K");
    for (const auto& row : inst.dist)
        if (row.size() != k) throw BadParams("distance matrix is not square");
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            const Rational& d = inst.dist[a][b];
            if (d != inst.dist[b][a] || (a == b) != (d.sign() == 0) || d.sign() < 0)
                throw BadParams("distances are not a metric at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
            for (std::size_t c = 0; c < k; ++c)
                if (inst.dist[a][c] > d + inst.dist[b][c]) throw BadParams("triangle inequality fails");
        }
    for (const Rational& r : inst.radii)
        if (r.sign() <= 0) throw BadParams("radii must be positive");
}

CompactificationInstance discrete_instance(std::vector<std::size_t> f, std::vector<std::vector<Rational>> dist) {
    CompactificationInstance inst;
    inst.x_size = f.size();
    inst.f = std::move(f);
    inst.dist = std::move(dist);
    check_instance(inst);
    return inst;
}

CompactificationInstance tree_instance(const Tree& t, const std::vector<Rational>& coords) {
    CompactificationInstance inst;
    inst.tree = t;
    std::map<std::vector<bool>, std::size_t> index;
    std::vector<std::vector<bool>> points;
    for (NodeId n = 0; n < t.size(); ++n) {
        const WOSet w = woset_of(t, n);
        std::vector<bool> v;
        for (const Rational& q : coords) v.push_back(w.contains(q));
        auto [it, fresh] = index.emplace(v, points.size());
        if (fresh) points.push_back(v);
        inst.f.push_back(it->second);
    }
    inst.dist.assign(points.size(), std::vector<Rational>(points.size(), Rational(0)));
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = 0; b < points.size(); ++b) {
            if (a == b) continue;
            std::size_t i = 0;
            while (points[a][i] == points[b][i]) ++i;
            inst.dist[a][b] = Rational::pow2(-static_cast<long>(i));
        }
    check_instance(inst);
    return inst;
}

CompactificationInstance random_instance(std::mt19937_64& rng, std::size_t x_points, std::size_t k_points, bool injective) {
    if (k_points == 0 && x_points > 0) throw BadParams("a nonempty X needs a nonempty K");
    if (injective && x_points > k_points) throw BadParams("an injective f needs |X| <= |K|");
    std::vector<long> slots(3 * k_points + 1);
    std::iota(slots.begin(), slots.end(), 0L);
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(k_points);
    std::vector<std::vector<Rational>> dist(k_points, std::vector<Rational>(k_points));
    for (std::size_t a = 0; a < k_points; ++a)
        for (std::size_t b = 0; b < k_points; ++b) dist[a][b] = Rational(std::abs(slots[a] - slots[b]));
    std::vector<std::size_t> f;
    if (injective) {
        std::vector<std::size_t> ks(k_points);
        std::iota(ks.begin(), ks.end(), 0U);
        std::shuffle(ks.begin(), ks.end(), rng);
        f.assign(ks.begin(), ks.begin() + static_cast<long>(x_points));
    } else {
        for (std::size_t i = 0; i < x_points; ++i) f.push_back(rng() % k_points);
    }
    return discrete_instance(std::move(f), std::move(dist));
}

std::string to_string(const SpacePoint& p) {
    return (p.side == SpacePoint::Side::X ? "x" : "k") + std::to_string(p.index);
}

std::string to_string(const BasicNbhd& n) {
    if (const auto* i = std::get_if<InX>(&n))
        return i->lower ? "(" + std::to_string(*i->lower) + ", " + std::to_string(i->top) + "]"
                        : "[0, " + std::to_string(i->top) + "]";
    const auto& g = std::get<Glued>(n);
    std::string f;
    for (NodeId t : g.compact) f += (f.empty() ? "" : " u ") + std::string("[0, ") + std::to_string(t) + "]";
    return "B(k" + std::to_string(g.center) + ", " + g.radius.to_string() + ") glued minus {" + f + "}";
}

bool contains(const CompactificationInstance& inst, const BasicNbhd& n, const SpacePoint& p) {
    check_point(inst, p);
    if (const auto* i = std::get_if<InX>(&n)) {
        if (p.side == SpacePoint::Side::K) return false;
        if (!inst.tree) return p.index == i->top;
        const auto x = static_cast<NodeId>(p.index);
        return inst.tree->leq(x, i->top) && (!i->lower || (inst.tree->lt(*i->lower, x)));
    }
    const auto& g = std::get<Glued>(n);
    if (p.side == SpacePoint::Side::K) return inst.dist[g.center][p.index] < g.radius;
    if (!(inst.dist[g.center][inst.f[p.index]] < g.radius)) return false;
    return std::none_of(g.compact.begin(), g.compact.end(), [&](NodeId t) { return below(inst, p.index, t); });
}

BasicNbhd af_basis(const CompactificationInstance& inst, const SpacePoint& p, const Rational& radius) {
    check_point(inst, p);
    if (radius.sign() <= 0) throw BadParams("radius must be positive");
    if (p.side == SpacePoint::Side::K) return Glued{p.index, radius, {}};
    const auto x = static_cast<NodeId>(p.index);
    if (!inst.tree) return InX{std::nullopt, x};
    return InX{inst.tree->parent(x), x};
}

std::size_t HausdorffReport::separated() const {
    return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const PairSeparation& s) {
        return !s.skipped && s.found();
    }));
}

std::size_t HausdorffReport::checked() const {
    return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const PairSeparation& s) {
        return !s.skipped;
    }));
}

HausdorffReport hausdorff_check(const CompactificationInstance& inst, const std::vector<std::pair<SpacePoint, SpacePoint>>& pairs) {
    std::set<Rational> rs(inst.radii.begin(), inst.radii.end());
    for (const auto& row : inst.dist)
        for (const Rational& d : row)
            if (d.sign() > 0) rs.insert(d / 3);
    if (rs.empty()) rs.insert(Rational(1));
    const std::vector<Rational> radii(rs.begin(), rs.end());

    HausdorffReport rep;
    for (const auto& [a, b] : pairs) {
        PairSeparation s{a, b, false, std::nullopt, std::nullopt};
        check_point(inst, a);
        check_point(inst, b);
        if (a == b) {
            s.skipped = true;
            rep.pairs.push_back(s);
            continue;
        }
        const auto sa = stock(inst, a, radii);
        const auto sb = stock(inst, b, radii);
        for (std::size_t i = 0; i < sa.size() && !s.found(); ++i)
            for (std::size_t j = 0; j < sb.size(); ++j)
                if (contains(inst, sa[i], a) && contains(inst, sb[j], b) && disjoint(inst, sa[i], sb[j])) {
                    s.around_a = sa[i];
                    s.around_b = sb[j];
                    break;
                }
        rep.pairs.push_back(std::move(s));
    }
    return rep;
}

std::map<std::size_t, std::size_t> retraction_fibers(const CompactificationInstance& inst) {
    std::map<std::size_t, std::size_t> out;
    for (std::size_t y = 0; y < inst.points_of_k(); ++y) out[y] = 1;
    for (std::size_t y : inst.f) ++out[y];
    return out;
}

std::vector<NodeId> infinity_neighborhood(const Tree& t, const std::vector<NodeId>& tops) {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < t.size(); ++n)
        if (std::none_of(tops.begin(), tops.end(), [&](NodeId top) { return t.leq(n, top); })) out.push_back(n);
    return out;
}

}  // namespace treetop
