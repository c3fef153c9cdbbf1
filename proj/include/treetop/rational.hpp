#pragma once

// Exact rationals, the extended line Q u {-inf, +inf}, and rational intervals.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace treetop {

class Rational {
public:
    Rational() = default;
    Rational(long num) : v_(num) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class v);

    /// Parses "p", "-p" or "p/q" (no decimal point, no whitespace).
    static Rational parse(std::string_view text);
    /// Exact 2^exponent for any (possibly negative) exponent.
    static Rational pow2(long exponent);

    std::string to_string() const;

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }
    Rational abs() const { return Rational(::abs(v_)); }
    mpz_class floor() const;
    mpz_class ceil() const;
    /// If the value is 2^e for an integer e, returns e.
    std::optional<long> log2_exact() const;
    double to_double() const { return v_.get_d(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class v_{0};
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational midpoint(const Rational& a, const Rational& b);

/// Q extended by -inf and +inf, totally ordered.
class ExtRational {
public:
    enum class Kind : std::uint8_t { NegInf, Fin, PosInf };

    ExtRational(const Rational& q) : kind_(Kind::Fin), value_(q) {}  // NOLINT
    ExtRational(long q) : kind_(Kind::Fin), value_(q) {}  // NOLINT
    static ExtRational neg_inf() { return ExtRational(Kind::NegInf); }
    static ExtRational pos_inf() { return ExtRational(Kind::PosInf); }
    /// "-inf", "+inf"/"inf", or a rational.
    static ExtRational parse(std::string_view text);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Fin; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    /// Precondition: is_finite().
    const Rational& value() const;
    std::string to_string() const;

    friend bool operator==(const ExtRational& a, const ExtRational& b);
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

private:
    explicit ExtRational(Kind k) : kind_(k) {}
    Kind kind_;
    Rational value_;
};

/// An interval of the extended line with independent endpoint closedness.
/// Closedness at an infinite endpoint means the infinite value itself is a member.
struct Interval {
    ExtRational lo = ExtRational::neg_inf();
    ExtRational hi = ExtRational::pos_inf();
    bool lo_closed = true;
    bool hi_closed = false;

    static Interval closed(const ExtRational& a, const ExtRational& b) { return {a, b, true, true}; }
    static Interval closed_open(const ExtRational& a, const ExtRational& b) { return {a, b, true, false}; }

    bool contains(const ExtRational& x) const;
    /// True iff the interval contains some finite rational.
    bool has_rational() const;
    bool contains_interval(const Interval& other) const;
    std::optional<Interval> intersect(const Interval& other) const;
    std::string to_string() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace treetop
