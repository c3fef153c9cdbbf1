#include "treetop/woset.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "treetop/errors.hpp"

namespace treetop {

Rational OmegaBlock::element(std::uint64_t i) const {
    return limit - (limit - start) * Rational::pow2(-static_cast<long>(i));
}

std::optional<std::uint64_t> OmegaBlock::position(const Rational& q) const {
    if (q < start || !(q < limit)) return std::nullopt;
    const auto e = ((limit - q) / (limit - start)).log2_exact();
    if (!e || *e > 0) return std::nullopt;
    return static_cast<std::uint64_t>(-*e);
}

bool OmegaBlock::contains(const Rational& q) const { return position(q).has_value(); }

std::string OrdinalRep::to_string() const {
    if (k == 0) return std::to_string(n);
    std::string s = k == 1 ? "w" : "w*" + std::to_string(k);
    if (n > 0) s += "+" + std::to_string(n);
    return s;
}

namespace {

const Rational& block_min(const Block& b) {
    if (const auto* f = std::get_if<FinBlock>(&b)) return f->elems.front();
    return std::get<OmegaBlock>(b).start;
}

// Walks the elements of a WOSet in increasing order.
class Cursor {
public:
    explicit Cursor(const WOSet& s) : blocks_(&s.blocks()) {}

    bool at_end() const { return block_ >= blocks_->size(); }
    bool in_omega() const { return std::holds_alternative<OmegaBlock>((*blocks_)[block_]); }
    const OmegaBlock& omega() const { return std::get<OmegaBlock>((*blocks_)[block_]); }

    Rational current() const {
        const Block& b = (*blocks_)[block_];
        if (const auto* f = std::get_if<FinBlock>(&b)) return f->elems[pos_];
        return std::get<OmegaBlock>(b).element(pos_);
    }

    void advance() {
        const Block& b = (*blocks_)[block_];
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            if (++pos_ == f->elems.size()) next_block();
        } else {
            ++pos_;
        }
    }

    void next_block() {
        ++block_;
        pos_ = 0;
    }

private:
    const std::vector<Block>* blocks_;
    std::size_t block_ = 0;
    std::uint64_t pos_ = 0;
};

struct PrefixWalk {
    std::vector<Block> common;
    bool x_exhausted = false;
    ExtRational next_in_y = ExtRational::pos_inf();
};

// Longest common initial segment of x and y, viewed as well-ordered sequences.
PrefixWalk walk_common_prefix(const WOSet& x, const WOSet& y) {
    PrefixWalk out;
    std::vector<Rational> pending;
    auto flush = [&] {
        if (!pending.empty()) out.common.emplace_back(FinBlock{std::move(pending)});
        pending.clear();
    };
    Cursor cx(x);
    Cursor cy(y);
    while (!cx.at_end() && !cy.at_end()) {
        const Rational ex = cx.current();
        const Rational ey = cy.current();
        if (ex != ey) break;
        if (cx.in_omega() && cy.in_omega() && cx.omega().limit == cy.omega().limit) {
            // Same limit and same current element: the remaining runs coincide.
            flush();
            out.common.emplace_back(OmegaBlock{ex, cx.omega().limit});
            cx.next_block();
            cy.next_block();
            continue;
        }
        pending.push_back(ex);
        cx.advance();
        cy.advance();
    }
    flush();
    out.x_exhausted = cx.at_end();
    if (!cy.at_end()) out.next_in_y = ExtRational(cy.current());
    return out;
}

}  // namespace

WOSet::WOSet(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (const auto* f = std::get_if<FinBlock>(&blocks_[i])) {
            if (f->elems.empty()) throw std::invalid_argument("empty finite block");
            for (std::size_t j = 1; j < f->elems.size(); ++j)
                if (!(f->elems[j - 1] < f->elems[j]))
                    throw std::invalid_argument("finite block not strictly increasing");
        } else {
            const auto& o = std::get<OmegaBlock>(blocks_[i]);
            if (!(o.start < o.limit)) throw std::invalid_argument("omega block needs start < limit");
        }
        if (i == 0) continue;
        const Block& prev = blocks_[i - 1];
        const Rational& next_min = block_min(blocks_[i]);
        if (const auto* f = std::get_if<FinBlock>(&prev)) {
            if (!(f->elems.back() < next_min))
                throw std::invalid_argument("blocks overlap or are out of order");
        } else if (next_min < std::get<OmegaBlock>(prev).limit) {
            throw std::invalid_argument("block starts below the preceding omega limit");
        }
    }
    normalize();
}

void WOSet::normalize() {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Block> out;
        for (auto& b : blocks_) {
            if (!out.empty()) {
                auto* last_fin = std::get_if<FinBlock>(&out.back());
                if (last_fin) {
                    if (auto* f = std::get_if<FinBlock>(&b)) {
                        last_fin->elems.insert(last_fin->elems.end(), f->elems.begin(), f->elems.end());
                        changed = true;
                        continue;
                    }
                    auto o = std::get<OmegaBlock>(b);
                    // Pull preceding elements that extend the run backwards.
                    while (!last_fin->elems.empty() &&
                           last_fin->elems.back() == Rational(2) * o.start - o.limit) {
                        o.start = last_fin->elems.back();
                        last_fin->elems.pop_back();
                        changed = true;
                    }
                    if (last_fin->elems.empty()) out.pop_back();
                    out.emplace_back(o);
                    continue;
                }
            }
            out.push_back(std::move(b));
        }
        blocks_ = std::move(out);
    }
}

WOSet WOSet::finite(std::vector<Rational> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty()) return {};
    return WOSet({FinBlock{std::move(elems)}});
}

WOSet WOSet::omega(const Rational& start, const Rational& limit) {
    return WOSet({OmegaBlock{start, limit}});
}

bool WOSet::is_finite() const {
    return std::all_of(blocks_.begin(), blocks_.end(),
                       [](const Block& b) { return std::holds_alternative<FinBlock>(b); });
}

std::size_t WOSet::size() const {
    if (!is_finite()) throw std::logic_error("size() of an infinite WOSet");
    std::size_t n = 0;
    for (const auto& b : blocks_) n += std::get<FinBlock>(b).elems.size();
    return n;
}

bool WOSet::contains(const Rational& q) const {
    for (const auto& b : blocks_) {
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            if (std::binary_search(f->elems.begin(), f->elems.end(), q)) return true;
        } else if (std::get<OmegaBlock>(b).contains(q)) {
            return true;
        }
    }
    return false;
}

ExtRational WOSet::inf() const {
    if (blocks_.empty()) return ExtRational::pos_inf();
    return ExtRational(block_min(blocks_.front()));
}

ExtRational WOSet::sup() const {
    if (blocks_.empty()) return ExtRational::neg_inf();
    const Block& b = blocks_.back();
    if (const auto* f = std::get_if<FinBlock>(&b)) return ExtRational(f->elems.back());
    return ExtRational(std::get<OmegaBlock>(b).limit);
}

bool WOSet::sup_attained() const {
    return !blocks_.empty() && std::holds_alternative<FinBlock>(blocks_.back());
}

std::vector<Rational> WOSet::first_elements(std::size_t n) const {
    std::vector<Rational> out;
    Cursor c(*this);
    while (out.size() < n && !c.at_end()) {
        out.push_back(c.current());
        c.advance();
    }
    return out;
}

WOSet WOSet::appended(const Rational& q) const {
    if (!blocks_.empty()) {
        const ExtRational s = sup();
        if (sup_attained() ? !(s < ExtRational(q)) : ExtRational(q) < s)
            throw std::invalid_argument("appended element must lie above the set");
    }
    std::vector<Block> b = blocks_;
    b.emplace_back(FinBlock{{q}});
    return WOSet(std::move(b));
}

std::optional<WOSet> WOSet::inserted(const Rational& q) const {
    if (contains(q)) return *this;
    std::vector<Block> out;
    bool placed = false;
    for (const auto& b : blocks_) {
        if (placed) {
            out.push_back(b);
            continue;
        }
        if (q < block_min(b)) {
            out.emplace_back(FinBlock{{q}});
            out.push_back(b);
            placed = true;
            continue;
        }
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            if (q < f->elems.back()) {
                FinBlock g = *f;
                g.elems.insert(std::upper_bound(g.elems.begin(), g.elems.end(), q), q);
                out.emplace_back(std::move(g));
                placed = true;
                continue;
            }
        } else if (q < std::get<OmegaBlock>(b).limit) {
            return std::nullopt;
        }
        out.push_back(b);
    }
    if (!placed) out.emplace_back(FinBlock{{q}});
    return WOSet(std::move(out));
}

std::string WOSet::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& b : blocks_) {
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            for (const auto& e : f->elems) {
                os << (first ? "" : ", ") << e.to_string();
                first = false;
            }
        } else {
            const auto& o = std::get<OmegaBlock>(b);
            os << (first ? "" : ", ") << "w[" << o.start.to_string() << "->" << o.limit.to_string() << ")";
            first = false;
        }
    }
    os << '}';
    return os.str();
}

bool is_initial_segment(const WOSet& x, const WOSet& y) {
    return walk_common_prefix(x, y).x_exhausted;
}

WOSet meet(const WOSet& x, const WOSet& y) { return WOSet(walk_common_prefix(x, y).common); }

ExtRational first_after(const WOSet& x, const WOSet& prefix) {
    const PrefixWalk w = walk_common_prefix(prefix, x);
    if (!w.x_exhausted) throw NotAnExtension(prefix.to_string() + " is not an initial segment of " + x.to_string());
    return w.next_in_y;
}

OrdinalRep order_type(const WOSet& t) {
    OrdinalRep r;
    for (const auto& b : t.blocks()) {
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            r.n += f->elems.size();
        } else {
            ++r.k;
            r.n = 0;
        }
    }
    return r;
}

namespace {

constexpr unsigned kMaxIndexBits = 62;
/// Terms 2^-n are summed exactly only up to this index; beyond it they are bounded.
constexpr std::uint64_t kMaxExactIndex = std::uint64_t{1} << 16;

// Index k >= 1 of a positive rational in the Calkin-Wilf sequence.
std::optional<std::uint64_t> calkin_wilf_index(const Rational& q) {
    mpz_class a = q.numerator();
    mpz_class b = q.denominator();
    struct Run {
        bool one;
        unsigned long count;
    };
    std::vector<Run> runs;  // bottom-up
    unsigned long total = 0;
    while (!(a == 1 && b == 1)) {
        const bool right = a > b;
        mpz_class& big = right ? a : b;
        const mpz_class& small = right ? b : a;
        mpz_class m = big / small;
        if (big % small == 0) m -= 1;
        if (m > kMaxIndexBits || total + m.get_ui() > kMaxIndexBits) return std::nullopt;
        total += m.get_ui();
        runs.push_back({right, m.get_ui()});
        big -= m * small;
    }
    std::uint64_t k = 1;
    for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
        k <<= it->count;
        if (it->one) k |= (std::uint64_t{1} << it->count) - 1;
    }
    return k;
}

Rational calkin_wilf(std::uint64_t k) {
    mpz_class a = 1;
    mpz_class b = 1;
    int top = 63;
    while (top >= 0 && !((k >> top) & 1U)) --top;
    for (int bit = top - 1; bit >= 0; --bit) {
        if ((k >> bit) & 1U)
            a += b;
        else
            b += a;
    }
    return Rational(mpq_class(a, b));
}

}  // namespace

std::optional<std::uint64_t> try_idx(const Rational& q) {
    if (q.sign() == 0) return 0;
    const auto k = calkin_wilf_index(q.abs());
    if (!k) return std::nullopt;
    return q.sign() > 0 ? 2 * *k - 1 : 2 * *k;
}

std::uint64_t idx(const Rational& q) {
    const auto i = try_idx(q);
    if (!i) throw std::overflow_error("enumeration index of " + q.to_string() + " exceeds 2^62");
    return *i;
}

Rational enumerate_rational(std::uint64_t n) {
    if (n == 0) return Rational(0);
    const std::uint64_t k = (n + 1) / 2;
    const Rational cw = calkin_wilf(k);
    return n % 2 == 1 ? cw : -cw;
}

Enclosure phi(const WOSet& t, std::size_t omega_terms) {
    Rational lo;
    Rational slack;
    bool exact = true;
    for (const auto& b : t.blocks()) {
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            for (const auto& e : f->elems) {
                const std::uint64_t n = idx(e);
                if (n <= kMaxExactIndex)
                    lo += Rational::pow2(-static_cast<long>(n));
                else
                    slack += Rational::pow2(-static_cast<long>(kMaxExactIndex));
            }
        } else {
            exact = false;
            const auto& o = std::get<OmegaBlock>(b);
            for (std::size_t i = 0; i < omega_terms; ++i) {
                const auto n = try_idx(o.element(i));
                if (n && *n <= kMaxExactIndex) lo += Rational::pow2(-static_cast<long>(*n));
            }
        }
    }
    if (exact) return {lo, lo + slack};
    // Every accounted index contributes to lo, and sum_n 2^-n = 2.
    return {lo, Rational(2)};
}

PhiGap certify_phi_lt(const WOSet& s, const WOSet& t) {
    if (s == t) throw NotAnExtension("phi certificate needs a proper extension");
    if (!is_initial_segment(s, t))
        throw NotAnExtension(s.to_string() + " is not an initial segment of " + t.to_string());
    // t \ s consists of the elements of t at or above first_after(t, s).
    const Rational first = first_after(t, s).value();
    constexpr std::size_t kTail = 64;
    std::vector<Rational> tail;
    for (const auto& b : t.blocks()) {
        if (tail.size() >= kTail) break;
        if (const auto* f = std::get_if<FinBlock>(&b)) {
            for (const auto& e : f->elems)
                if (e >= first && tail.size() < kTail) tail.push_back(e);
            continue;
        }
        const auto& o = std::get<OmegaBlock>(b);
        if (o.limit <= first) continue;
        const std::uint64_t from = o.start >= first ? 0 : *o.position(first);
        for (std::uint64_t i = from; tail.size() < kTail; ++i) tail.push_back(o.element(i));
    }
    std::optional<PhiGap> best;
    for (const auto& w : tail) {
        auto n = try_idx(w);
        if (n && *n > kMaxExactIndex) n.reset();
        if (n && (!best || *n < best->index)) best = PhiGap{w, *n, Rational::pow2(-static_cast<long>(*n))};
    }
    if (!best) throw std::overflow_error("no element of t \\ s has a computable enumeration index");
    return *best;
}

}  // namespace treetop
