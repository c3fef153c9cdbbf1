#pragma once

// Order labels into R, embeddings into sigma-Q, and the constructions that
// produce or refute them.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "treetop/tree.hpp"

namespace treetop {

struct LabelCheck {
    std::optional<std::pair<NodeId, NodeId>> violation;
    bool ok() const { return !violation; }
};

/// Checks f(s) < f(t) (or f(s) <= f(t)) on every comparable pair; the first failing pair
/// in BFS order of the upper node is reported. Enclosures count only when certified.
/// Throws PartialLabel if f misses a node.
LabelCheck verify_order_label(const Tree& t, const OrderLabel& f, bool strict);

struct EmbeddingWitness {
    std::vector<WOSet> psi;
};

struct WitnessCheck {
    bool order_both_ways = false;
    bool image_initial = false;
    bool sup_bound = false;
    bool ok() const { return order_both_ways && image_initial && sup_bound; }
};

/// psi(root) = {}, psi(r) = psi(s) u {j(r)} on successor edges with j(r) in (sup psi(s), f(r)]
/// picked by the dyadic rule; limit-flagged nodes get psi(parent) u Omega(a, f(node)).
/// Throws NotStrict, PickExhausted.
EmbeddingWitness embed_into_sigmaQ(const Tree& t, const OrderLabel& f);

/// Shrinks psi at limit-flagged nodes to the shortest initial segment of limit type
/// extending psi(parent), carrying descendants along.
EmbeddingWitness close_image(const EmbeddingWitness& w, const Tree& t);

WitnessCheck check_witness(const Tree& t, const OrderLabel& f, const EmbeddingWitness& w);

/// Rings P_n(t) = {x in suc t : 1/n <= f(x) - f(t) < 1/(n-1)} become nodes <t,n> labelled
/// f(t) + 1/(2n); each ring is halved (sorted by (f, id)) into a Cantor tree of subsets up to
/// `depth` levels, labelled inside (f(t) + 1/(2n), f(t) + 1/n). Original nodes keep their ids.
std::pair<Tree, OrderLabel> countably_branching_expansion(const Tree& t, const OrderLabel& f,
                                                          std::size_t depth);

/// Antichain cover: t goes to T_n with n = ceil(1/eps(t)), and T_n is split by height within T_n.
/// Throws PreconditionFailed.
std::vector<std::vector<NodeId>> special_decomposition(const Tree& t, const OrderLabel& h,
                                                       const std::vector<Rational>& eps);

using Candidate = std::function<std::optional<Rational>(const WOSet&)>;

struct IncreasingRun {
    std::vector<WOSet> run;
};

struct RefutationWitness {
    WOSet s;
    WOSet t;
    /// Positions of s and t in the iteration (the limit stage counts as one position).
    std::size_t beta = 0;
    std::size_t step = 0;
};

using RefutationOutcome = std::variant<IncreasingRun, RefutationWitness>;

/// Iterates t_0 = {}, t_{k+1} = t_k u {c(t_k)} looking for beta < k with c(t_beta) >= c(t_k).
/// At step max_steps/2 a dyadic run of values is closed off by one omega-limit stage.
/// Throws CandidateNotRational.
RefutationOutcome kurepa_refute(const Candidate& c, std::size_t max_steps);

/// "zero", "sup-plus-one", "sup-plus-one-capped:N", "half-to-one"; throws BadParams.
Candidate builtin_candidate(const std::string& name);

}  // namespace treetop
