#pragma once

// Families {A_t} of subsets of the Cantor space P(Q), indexed by tree nodes,
// with the tree-of-sets axioms checked by seeded sampling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "treetop/tree.hpp"

namespace treetop {

struct Closed {
    friend bool operator==(const Closed&, const Closed&) = default;
};
struct RelOpenIn {
    NodeId parent = 0;
    friend bool operator==(const RelOpenIn&, const RelOpenIn&) = default;
};
struct ClosedIn {
    NodeId parent = 0;
    friend bool operator==(const ClosedIn&, const ClosedIn&) = default;
};
struct NoCert {
    friend bool operator==(const NoCert&, const NoCert&) = default;
};
using TopologyCert = std::variant<Closed, RelOpenIn, ClosedIn, NoCert>;

std::string to_string(const TopologyCert& c);

/// {x : base is an initial segment of x and inf(x \ base) lies in the constraint}.
struct SetDescriptor {
    WOSet base;
    std::optional<Interval> constraint;
    TopologyCert cert = Closed{};

    bool member(const WOSet& x) const;
};

/// Exact disjointness of two descriptor sets.
bool disjoint(const SetDescriptor& a, const SetDescriptor& b);

class SetFamily {
public:
    using Member = std::function<bool(NodeId, const WOSet&)>;

    SetFamily(Tree tree, std::vector<SetDescriptor> descriptors);
    SetFamily(Tree tree, Member member, std::vector<TopologyCert> certs);

    const Tree& tree() const { return tree_; }
    bool member(NodeId t, const WOSet& x) const;
    bool has_descriptors() const { return !member_; }
    /// Precondition: has_descriptors().
    const SetDescriptor& descriptor(NodeId t) const { return descriptors_.at(t); }
    const TopologyCert& cert(NodeId t) const { return certs_.at(t); }

private:
    Tree tree_;
    std::vector<SetDescriptor> descriptors_;
    Member member_;
    std::vector<TopologyCert> certs_;
};

/// A_t = {x : payload(t) is an initial segment of x}; every A_t is Closed.
/// Throws PayloadMismatch for nodes without a WOSet payload.
SetFamily canonical_set_family(const Tree& tree);

/// Seeded pool of test sets concentrated near the family's base sets.
std::vector<WOSet> sample_sets(const SetFamily& f, std::size_t count, std::mt19937_64& rng);

struct ConditionReport {
    std::string name;
    std::size_t checked = 0;
    std::vector<std::string> counterexamples;
    bool ok() const { return counterexamples.empty(); }
};

struct TreeOfSetsReport {
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    /// monotone, disjoint, disjoint-exact, chain-limit, unbounded-chain, certificates.
    std::vector<ConditionReport> conditions;
    bool ok() const;
};

TreeOfSetsReport tree_of_sets_check(const SetFamily& f, std::size_t samples, std::uint64_t seed);

using Point = std::variant<NodeId, WOSet>;

enum class SeqKind { Chain, Antichain };

struct TestSequence {
    SeqKind kind = SeqKind::Chain;
    /// The limit of a chain; nullopt means the point at infinity.
    std::optional<Point> limit;
    std::vector<Point> items;
};

struct ContinuityResult {
    bool converged = false;
    /// n0 when converged, otherwise the number of items examined.
    std::size_t index = 0;
};

/// Checks |f(t_n) - f(limit)| <= tol for all n0 <= n < N, the distance bounded via enclosures.
/// Sequences without a limit are compared with `at_infinity`.
std::vector<ContinuityResult> continuity_check(const std::vector<TestSequence>& seqs,
                                               const std::function<Enclosure(const Point&)>& f,
                                               const Enclosure& at_infinity, const Rational& tol,
                                               std::size_t n);

}  // namespace treetop
