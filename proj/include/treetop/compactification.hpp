#pragma once

// The compactification A(X, f) of a locally compact X glued along f : X -> K
// onto a finite metric sample K, and the one-point compactification of a tree.
//
// X is either the interval topology of a materialized tree or a finite
// discrete set. Compact subsets of X are finite unions of intervals [0, t].

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "treetop/tree.hpp"

namespace treetop {

struct CompactificationInstance {
    /// Interval topology on the tree when present, else X = {0, ..., x_size - 1} discrete.
    std::optional<Tree> tree;
    std::size_t x_size = 0;
    /// Symmetric distance matrix of K.
    std::vector<std::vector<Rational>> dist;
    /// f(x) as an index into K, one entry per point of X.
    std::vector<std::size_t> f;
    /// Extra radii offered to the Hausdorff search.
    std::vector<Rational> radii;

    std::size_t points_of_x() const { return tree ? tree->size() : x_size; }
    std::size_t points_of_k() const { return dist.size(); }
};

/// Throws BadParams when f is not total into K or dist violates the metric axioms.
void check_instance(const CompactificationInstance& inst);

/// A discrete X with the given map into K.
CompactificationInstance discrete_instance(std::vector<std::size_t> f, std::vector<std::vector<Rational>> dist);

/// K = the distinct characteristic vectors of the payloads on `coords`, with the Cantor metric
/// d(a, b) = 2^-i for the first coordinate i where a and b differ; f(t) = the vector of woset_of(t).
CompactificationInstance tree_instance(const Tree& t, const std::vector<Rational>& coords);

/// Seeded random instance: a discrete X mapped into a K with integer distances on a line.
CompactificationInstance random_instance(std::mt19937_64& rng, std::size_t x_points, std::size_t k_points, bool injective);

struct SpacePoint {
    enum class Side { X, K };
    Side side = Side::X;
    std::size_t index = 0;

    static SpacePoint in_x(std::size_t i) { return {Side::X, i}; }
    static SpacePoint in_k(std::size_t i) { return {Side::K, i}; }
    friend bool operator==(const SpacePoint&, const SpacePoint&) = default;
};

std::string to_string(const SpacePoint& p);

/// (lower, top] in the tree, [root, top] without a lower end; {top} for a discrete X.
struct InX {
    std::optional<NodeId> lower;
    NodeId top = 0;
};

/// (U u f^-1 U) \ F for U the open ball of `radius` at `center` and F = union of [0, t] over `compact`.
struct Glued {
    std::size_t center = 0;
    Rational radius;
    std::vector<NodeId> compact;
};

using BasicNbhd = std::variant<InX, Glued>;

std::string to_string(const BasicNbhd& n);

bool contains(const CompactificationInstance& inst, const BasicNbhd& n, const SpacePoint& p);

/// For p in X the least interval neighborhood, for p in K the glued ball with F empty.
/// Throws UnknownPoint, BadParams for a nonpositive radius.
BasicNbhd af_basis(const CompactificationInstance& inst, const SpacePoint& p, const Rational& radius);

struct PairSeparation {
    SpacePoint a;
    SpacePoint b;
    bool skipped = false;
    std::optional<BasicNbhd> around_a;
    std::optional<BasicNbhd> around_b;
    bool found() const { return around_a.has_value(); }
};

struct HausdorffReport {
    std::vector<PairSeparation> pairs;
    std::size_t separated() const;
    std::size_t checked() const;
    bool ok() const { return separated() == checked(); }
};

/// Searches balls at a third of each K-distance and at inst.radii, with F empty, one interval
/// or two intervals, for disjoint neighborhoods. Identical pairs are skipped.
HausdorffReport hausdorff_check(const CompactificationInstance& inst, const std::vector<std::pair<SpacePoint, SpacePoint>>& pairs);

/// |{y} u f^-1(y)| for every y in K.
std::map<std::size_t, std::size_t> retraction_fibers(const CompactificationInstance& inst);

/// The neighborhood of infinity in the one-point compactification of t: nodes outside every [0, t_i].
std::vector<NodeId> infinity_neighborhood(const Tree& t, const std::vector<NodeId>& tops);

}  // namespace treetop
