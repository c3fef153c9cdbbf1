#pragma once

// Good and bad points of a label, the Cantor-set Kadec witness of a rational
// label, and the equal-value up-set check for an increasing rho.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "treetop/tree.hpp"

namespace treetop {

/// f(s) > f(t) + eps for every successor s outside `removed`.
struct Good {
    Rational eps;
    std::vector<NodeId> removed;
};

/// A symbolic family whose values accumulate at f(t).
struct Bad {
    std::size_t family = 0;
    SuccFamily offending;
    Rational inf;
};

struct GoodnessVerdict {
    NodeId node = 0;
    std::variant<Good, Bad> verdict;
    bool good() const { return std::holds_alternative<Good>(verdict); }
};

/// Infimum of v over the closure of the family's interval, honoring label overrides.
/// nullopt when the infimum is -inf.
std::optional<Rational> family_infimum(const OrderLabel& f, NodeId t, std::size_t index, const SuccFamily& fam);

/// One verdict per node. eps is half the least family gap (1 without families); removed holds
/// the explicit successors not above f(t) + eps. Throws NotMonotone.
std::vector<GoodnessVerdict> bad_points(const Tree& t, const OrderLabel& f);

/// Re-checks a Good verdict against the definition.
bool certifies(const Tree& t, const OrderLabel& f, NodeId node, const Good& g);

/// Largest enumeration index kadec_value accepts.
inline constexpr std::uint64_t kMaxKadecIndex = std::uint64_t{1} << 14;

/// Left endpoint of the middle gap of the Cantor interval addressed by q's predecessors in the
/// enumeration: ternary digits 2 or 0 as q_m < q or q_m > q for m < idx(q), then 0, then 2 forever.
/// Strictly increasing on Q. Throws BadParams past kMaxKadecIndex.
Rational kadec_value(const Rational& q);

/// kadec_value composed with f. Throws NotStrict, BadParams.
OrderLabel kadec_witness(const Tree& t, const OrderLabel& f);

/// True when x is a left endpoint of a removed middle-third gap.
bool right_isolated(const Rational& x);

struct UpSetVerdict {
    NodeId node = 0;
    /// {s >= t : rho(s) = rho(t)}, sorted.
    std::vector<NodeId> equal_up_set;
    bool chain = true;
    /// Bad points of rho inside the up-set; nullopt when the tree's families are incompatible with rho.
    std::optional<std::size_t> bad_count;
};

/// A full binary subtree of constant rho, nodes listed in preorder from its root.
struct CantorWitness {
    std::size_t depth = 0;
    std::vector<NodeId> nodes;
};

struct RhoReport {
    std::vector<UpSetVerdict> upsets;
    std::optional<CantorWitness> cantor_constant;
    /// Finite truncations can refute Cantor-freeness but never confirm it.
    bool refutation_only = true;
    /// Up-sets that are not chains or hold more than one bad point.
    std::size_t violations() const;
};

/// Throws NotMonotone.
RhoReport rho_check(const Tree& t, const OrderLabel& rho, std::size_t cantor_depth = 4);

/// rho on a T2 truncation: sup t on original nodes and inf I_s(t) on <t, s>; -inf is replaced
/// by one less than the least finite value.
OrderLabel t2_rho(const Tree& t2);

}  // namespace treetop
