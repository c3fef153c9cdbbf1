#pragma once

// S-expansions of trees and the expanded trees T1, T2 and Upsilon.
//
// An index tree S has Abstract payloads naming each node's S-index ("" for
// the root, then "0", "1", "01", ...).  A partition scheme assigns to each
// S-index a subset D_s(t) of the successors of t, either explicitly or as an
// interval on the successor parameter inf(u \ t).

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "treetop/set_family.hpp"
#include "treetop/tree.hpp"

namespace treetop {

using SuccessorSubset = std::variant<std::vector<NodeId>, Interval>;
using PartitionScheme = std::map<NodeId, std::map<std::string, SuccessorSubset>>;

/// {root, 0, 1}.
Tree index_tree_s2();
/// All binary strings of length at most depth.
Tree index_tree_binary(std::size_t depth);
/// S-index of an index-tree node.
const std::string& s_index(const Tree& s, NodeId n);

/// Checks that each D(t) is a tree of subsets of suc(t) indexed by S.
TreeReport validate_partition_scheme(const Tree& t, const Tree& s, const PartitionScheme& d);

/// T u (T' x (S \ {root})) with T' the nodes that have an entry in d, t < <t,s> < <t,s'> for
/// s < s', and each successor r of t moved above the deepest <t,s> with r in D_s(t). Original
/// nodes keep their ids; <t,s> nodes follow in order of t, then S in BFS order.
/// Throws InvalidScheme.
Tree s_expansion(const Tree& t, const Tree& s, const PartitionScheme& d);

struct ExpandedTree {
    Tree tree;
    SetFamily family;
};

/// The S2-expansion of a sigma-Q truncation with r(t) = sup t + 1 (r({}) = 0),
/// I_0(t) = [sup t, r), I_1(t) = [r, +inf]. Throws BadParams.
ExpandedTree build_T1(const GenParams& p);

/// The interval I_s(t) of the Cantor splitting of [sup t, +inf] used by T2.
Interval t2_interval(const ExtRational& sup, const std::string& s);

/// The binary expansion of a sigma-Q truncation, S cut at s_depth. Original successors land at
/// the cut and are marked frontier and limit. Throws BadParams.
ExpandedTree build_T2(const GenParams& p, std::size_t s_depth);

/// S2-expansion of the non-frontier nodes of a Gamma truncation, split at h(t) + 2^-depth.
/// Carries label "h" on the original nodes and its lexicographic extension "g". Throws BadParams.
Tree build_upsilon(const GenParams& p);

/// k + 1 - 2^-n on original nodes whose WOSet has order type omega*k + n.
OrderLabel order_type_label(const Tree& t);

/// (f(t), 0) on original nodes and (f(base), rank) on expansion nodes. Throws NotBaseLabeled.
OrderLabel lex_label(const Tree& t, const OrderLabel& f);

}  // namespace treetop
