#pragma once

// Closed families on the one-point compactification T u {inf} whose maximal
// intersections have at most two (2-determined) or three (3-determined) points,
// built from order labels and verified by brute force.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treetop/tree.hpp"

namespace treetop {

struct CertSet {
    /// Sorted node ids.
    std::vector<NodeId> members;
    bool infinity = true;
    std::map<std::string, std::string> provenance;

    bool contains(NodeId t) const;
};

struct Certificate {
    std::size_t arity = 2;
    std::vector<CertSet> sets;
};

struct Intersection {
    NodeId at = 0;
    std::vector<NodeId> members;
    bool infinity = false;
    /// Number of points, counting infinity.
    std::size_t size() const { return members.size() + (infinity ? 1 : 0); }
};

struct SeparationReport {
    std::size_t max_intersection_size = 0;
    /// Distinct intersections of the maximal size (at most 64).
    std::vector<Intersection> witness_intersections;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Sets F' = {inf} u {t in h^-1(I) : s <= t} for I = [a, b] with a <= b drawn from the h-values and
/// their midpoints, and s a minimal element of h^-1(I). Throws NotStrict, NotContinuous, and
/// PartialLabel for inexact values.
Certificate build_2det_network(const Tree& t, const OrderLabel& h);

/// The network of the first coordinate f together with the sets F_n, each the union over the fibers
/// f^-1(lambda) of the fiber network's set with key n, closed up at limit nodes. Throws NotLexStrict.
Certificate build_3det_family(const Tree& t, const OrderLabel& g);

/// For every node t, the intersection of the sets containing t; checks its size against the arity,
/// and for arity 2 that every pair of non-frontier nodes is separated.
SeparationReport verify_separation(const Tree& t, const Certificate& cert);

/// {n : [0, t] misses sets[n]}. Throws UnknownNode.
std::set<std::size_t> phi_signature(const Tree& t, const Certificate& cert, NodeId node);

/// h(t) = -sum over phi_signature(t) of 2^-n.
OrderLabel signature_label(const Tree& t, const Certificate& cert);

}  // namespace treetop
