#include "treetop/rational.hpp"

#include <stdexcept>

#include "treetop/errors.hpp"

namespace treetop {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw SchemaError("empty rational");
    const auto slash = text.find('/');
    auto digits_ok = [](std::string_view s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && s[0] == '-') i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw SchemaError("malformed rational '" + std::string(text) + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
    return Rational(mpq_class(n, d));
}

Rational Rational::pow2(long exponent) {
    mpz_class p = 1;
    const unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                         : static_cast<unsigned long>(exponent);
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), e);
    return exponent < 0 ? Rational(mpq_class(mpz_class(1), p)) : Rational(mpq_class(p));
}

std::string Rational::to_string() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

mpz_class Rational::floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
}

mpz_class Rational::ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
}

std::optional<long> Rational::log2_exact() const {
    if (sign() <= 0) return std::nullopt;
    const mpz_class& n = v_.get_num();
    const mpz_class& d = v_.get_den();
    auto power_of_two = [](const mpz_class& z) { return mpz_popcount(z.get_mpz_t()) == 1; };
    if (d == 1 && power_of_two(n)) return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
    if (n == 1 && power_of_two(d)) return -(static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 1);
    return std::nullopt;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

ExtRational ExtRational::parse(std::string_view text) {
    if (text == "-inf") return neg_inf();
    if (text == "+inf" || text == "inf") return pos_inf();
    return ExtRational(Rational::parse(text));
}

const Rational& ExtRational::value() const {
    if (kind_ != Kind::Fin) throw std::logic_error("value() of an infinite ExtRational");
    return value_;
}

std::string ExtRational::to_string() const {
    switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "+inf";
        case Kind::Fin: break;
    }
    return value_.to_string();
}

bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != ExtRational::Kind::Fin || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ != ExtRational::Kind::Fin) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
}

bool Interval::contains(const ExtRational& x) const {
    const bool above = lo_closed ? lo <= x : lo < x;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

bool Interval::has_rational() const {
    if (lo < hi) return !(lo.is_pos_inf() || hi.is_neg_inf());
    return lo == hi && lo.is_finite() && lo_closed && hi_closed;
}

namespace {

bool is_empty(const Interval& i) {
    if (i.hi < i.lo) return true;
    return i.lo == i.hi && !(i.lo_closed && i.hi_closed);
}

}  // namespace

bool Interval::contains_interval(const Interval& other) const {
    if (is_empty(other)) return true;
    const bool lower = lo < other.lo || (lo == other.lo && (lo_closed || !other.lo_closed));
    const bool upper = other.hi < hi || (hi == other.hi && (hi_closed || !other.hi_closed));
    return lower && upper;
}

std::optional<Interval> Interval::intersect(const Interval& other) const {
    Interval r;
    if (lo == other.lo) {
        r.lo = lo;
        r.lo_closed = lo_closed && other.lo_closed;
    } else if (lo < other.lo) {
        r.lo = other.lo;
        r.lo_closed = other.lo_closed;
    } else {
        r.lo = lo;
        r.lo_closed = lo_closed;
    }
    if (hi == other.hi) {
        r.hi = hi;
        r.hi_closed = hi_closed && other.hi_closed;
    } else if (hi < other.hi) {
        r.hi = hi;
        r.hi_closed = hi_closed;
    } else {
        r.hi = other.hi;
        r.hi_closed = other.hi_closed;
    }
    if (is_empty(r)) return std::nullopt;
    return r;
}

std::string Interval::to_string() const {
    return std::string(lo_closed ? "[" : "(") + lo.to_string() + ", " + hi.to_string() +
           (hi_closed ? "]" : ")");
}

}  // namespace treetop
