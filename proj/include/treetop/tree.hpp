#pragma once

// Finitely presented rooted trees.
//
// Nodes carry a payload and two flags: `frontier` marks nodes whose successors
// were cut off by truncation, and `limit` marks a node whose parent link stands
// for an unmaterialized omega-chain (the node sits at a limit level).  Infinite
// successor sets are kept symbolically as interval families.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "treetop/rational.hpp"
#include "treetop/woset.hpp"

namespace treetop {

using NodeId = std::uint32_t;

/// Expansion node <base, s>; s is the S-index as a string ("0", "01", ...).
struct PairPayload {
    NodeId base = 0;
    std::string s;
    int rank = 0;
    friend bool operator==(const PairPayload&, const PairPayload&) = default;
};

struct IntSeq {
    std::vector<std::uint64_t> seq;
    friend bool operator==(const IntSeq&, const IntSeq&) = default;
};

struct Abstract {
    std::string name;
    friend bool operator==(const Abstract&, const Abstract&) = default;
};

using Payload = std::variant<WOSet, PairPayload, IntSeq, Abstract>;

/// q -> alpha * q + beta.
struct Affine {
    Rational alpha{1};
    Rational beta{0};
    Rational at(const Rational& q) const { return alpha * q + beta; }
    friend bool operator==(const Affine&, const Affine&) = default;
};

/// The successors {t u {q} : q in interval} not materialized explicitly.
struct SuccFamily {
    Interval interval;
    std::string rule = "t+{q}";
    Affine value;
    friend bool operator==(const SuccFamily&, const SuccFamily&) = default;
};

enum class Codomain { Q, R, RlexR };

struct LexPair {
    Rational first;
    Rational second;
    friend auto operator<=>(const LexPair&, const LexPair&) = default;
};

using LabelValue = std::variant<Rational, Enclosure, LexPair>;

enum class Cmp { Less, Equal, Greater, Unknown };

/// Certified comparison. Enclosures compare only when they are disjoint or both exact.
Cmp compare(const LabelValue& a, const LabelValue& b);
std::string to_string(const LabelValue& v);

struct OrderLabel {
    Codomain codomain = Codomain::Q;
    std::vector<std::optional<LabelValue>> values;
    /// Exact infimum of a symbolic family's values, overriding the affine map.
    std::map<std::pair<NodeId, std::size_t>, Rational> family_inf;

    static OrderLabel of_rationals(Codomain c, const std::vector<Rational>& v);

    bool has(NodeId t) const { return t < values.size() && values[t].has_value(); }
    /// Throws PartialLabel when t carries no value.
    const LabelValue& at(NodeId t) const;
    void set(NodeId t, LabelValue v);
    /// Exact rational value at t (a Rational or an exact Enclosure); throws PartialLabel otherwise.
    Rational rational(NodeId t) const;
};

struct Node {
    NodeId id = 0;
    std::optional<NodeId> parent;
    Payload payload;
    bool frontier = false;
    bool limit = false;
};

class Tree {
public:
    /// Appends a node; the parent need not exist yet (validate_tree reports dangling links).
    NodeId add_node(std::optional<NodeId> parent, Payload payload, bool frontier = false,
                    bool limit = false);
    NodeId add_child(NodeId parent, Payload payload, bool frontier = false, bool limit = false) {
        return add_node(parent, std::move(payload), frontier, limit);
    }
    void set_parent(NodeId t, std::optional<NodeId> parent);
    void set_payload(NodeId t, Payload p);
    void set_frontier(NodeId t, bool v);
    void set_limit(NodeId t, bool v);

    std::size_t size() const { return nodes_.size(); }
    bool contains(NodeId t) const { return t < nodes_.size(); }
    const Node& node(NodeId t) const;
    const Payload& payload(NodeId t) const { return node(t).payload; }
    std::optional<NodeId> parent(NodeId t) const { return node(t).parent; }
    const std::vector<NodeId>& children(NodeId t) const;
    /// The unique parentless node; throws Error when there is not exactly one.
    NodeId root() const;

    /// Path root..t inclusive. Throws Error on a parent cycle.
    std::vector<NodeId> path(NodeId t) const;
    /// Number of edges from the root.
    std::size_t depth(NodeId t) const { return path(t).size() - 1; }
    /// s <= t in the tree order.
    bool leq(NodeId s, NodeId t) const;
    bool lt(NodeId s, NodeId t) const { return s != t && leq(s, t); }
    bool comparable(NodeId s, NodeId t) const { return leq(s, t) || leq(t, s); }
    NodeId meet(NodeId s, NodeId t) const;
    /// Root first, then level by level, children in insertion order.
    std::vector<NodeId> bfs() const;

    const std::map<NodeId, std::vector<SuccFamily>>& families() const { return families_; }
    const std::vector<SuccFamily>& families_of(NodeId t) const;
    void add_family(NodeId t, SuccFamily f);

    std::map<std::string, OrderLabel>& labels() { return labels_; }
    const std::map<std::string, OrderLabel>& labels() const { return labels_; }
    /// Throws PartialLabel when no label of that name exists.
    const OrderLabel& label(const std::string& name) const;

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> children_;
    std::map<NodeId, std::vector<SuccFamily>> families_;
    std::map<std::string, OrderLabel> labels_;
};

struct TreeReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

TreeReport validate_tree(const Tree& t);

/// Order type of the strict predecessors of t.
OrdinalRep height(const Tree& t, NodeId node);

bool is_antichain(const Tree& t, const std::vector<NodeId>& a);

enum class TreeKind { SigmaQ, WQ, Gamma };

struct GenParams {
    std::size_t depth = 2;
    std::size_t branching = 2;
    /// Denominator of the successor grid for SigmaQ/WQ, alphabet size for Gamma.
    std::size_t grid = 1;
    /// Length of the materialized dyadic run {0}, {0,1/2}, ... ending in Omega(0,1); 0 for none.
    std::size_t omega_run = 0;
};

/// SigmaQ and WQ agree on finite truncations (every finite set is bounded).
/// Gamma carries the label "h".
Tree gen_tree(TreeKind kind, const GenParams& p);

/// The WOSet payload of t; throws PayloadMismatch for other payloads.
const WOSet& woset_of(const Tree& t, NodeId node);

/// For a WOSet node, its underlying set; for a Pair node, the payload of its base.
const WOSet& base_woset(const Tree& t, NodeId node);

}  // namespace treetop
