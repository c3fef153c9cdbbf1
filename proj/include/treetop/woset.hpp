#pragma once

// Well-ordered subsets of Q of order type below omega^2, in finite block form.
//
// A set is a sequence of blocks: finite strictly increasing runs and dyadic
// omega-runs {limit - (limit - start) * 2^-i : i >= 0}.  Sets are kept in a
// canonical form (adjacent finite runs merged, finite tails that continue a
// following omega-run absorbed into it), so structural equality is set equality.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "treetop/rational.hpp"

namespace treetop {

struct FinBlock {
    std::vector<Rational> elems;
    friend bool operator==(const FinBlock&, const FinBlock&) = default;
};

struct OmegaBlock {
    Rational start;
    Rational limit;

    Rational element(std::uint64_t i) const;
    bool contains(const Rational& q) const;
    /// Position of q in the run, if q is a member.
    std::optional<std::uint64_t> position(const Rational& q) const;
    friend bool operator==(const OmegaBlock&, const OmegaBlock&) = default;
};

using Block = std::variant<FinBlock, OmegaBlock>;

/// omega * k + n.
struct OrdinalRep {
    std::uint64_t k = 0;
    std::uint64_t n = 0;

    bool is_limit() const { return k > 0 && n == 0; }
    std::string to_string() const;
    friend auto operator<=>(const OrdinalRep&, const OrdinalRep&) = default;
};

/// A real value v with lo <= v <= hi.
struct Enclosure {
    Rational lo;
    Rational hi;

    static Enclosure exact(const Rational& v) { return {v, v}; }
    bool is_exact() const { return lo == hi; }
    friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

class WOSet {
public:
    WOSet() = default;
    /// Validates the block invariants and normalizes; throws std::invalid_argument.
    explicit WOSet(std::vector<Block> blocks);

    /// The finite set of the given values (any order, duplicates removed).
    static WOSet finite(std::vector<Rational> elems);
    static WOSet omega(const Rational& start, const Rational& limit);

    const std::vector<Block>& blocks() const { return blocks_; }
    bool empty() const { return blocks_.empty(); }
    bool is_finite() const;
    /// Number of elements; precondition is_finite().
    std::size_t size() const;

    bool contains(const Rational& q) const;
    /// Least element, +inf when empty.
    ExtRational inf() const;
    /// Supremum, -inf when empty.
    ExtRational sup() const;
    bool sup_attained() const;

    /// First n elements in increasing order (omega-runs expanded lazily).
    std::vector<Rational> first_elements(std::size_t n) const;

    /// this u {q}; requires q above every element (q >= sup when sup is not attained).
    WOSet appended(const Rational& q) const;
    /// this u {q} when that union is still representable in block form.
    std::optional<WOSet> inserted(const Rational& q) const;

    std::string to_string() const;

    friend bool operator==(const WOSet&, const WOSet&) = default;

private:
    void normalize();
    std::vector<Block> blocks_;
};

/// x is an initial segment of y: x subset of y and inf(y \ x) >= sup(x).
bool is_initial_segment(const WOSet& x, const WOSet& y);

/// Longest common initial segment.
WOSet meet(const WOSet& x, const WOSet& y);

/// inf(x \ prefix) for prefix an initial segment of x; +inf when they are equal.
/// Throws NotAnExtension if prefix is not an initial segment of x.
ExtRational first_after(const WOSet& x, const WOSet& prefix);

OrdinalRep order_type(const WOSet& t);

/// Index of q in the fixed enumeration q_0 = 0, q_{2k-1} = CW(k), q_{2k} = -CW(k)
/// of Q, CW being the Calkin-Wilf sequence. Throws std::overflow_error past 2^62.
std::uint64_t idx(const Rational& q);
std::optional<std::uint64_t> try_idx(const Rational& q);
/// Inverse of idx.
Rational enumerate_rational(std::uint64_t n);

/// Enclosure of sum over q in t of 2^-idx(q). Exact for finite sets whose indices are
/// at most 2^16; omega-runs contribute their first `omega_terms` elements with
/// small enough indices to lo.
Enclosure phi(const WOSet& t, std::size_t omega_terms = 64);

/// Certificate that phi(t) - phi(s) >= gap > 0 for s a proper initial segment of t.
struct PhiGap {
    Rational witness;
    std::uint64_t index = 0;
    Rational gap;
};

PhiGap certify_phi_lt(const WOSet& s, const WOSet& t);

}  // namespace treetop
