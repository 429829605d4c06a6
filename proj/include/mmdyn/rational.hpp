#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mmdyn {

/// Exact rational number in canonical form: denominator > 0 and
/// gcd(|numerator|, denominator) == 1. All arithmetic is exact; there is
/// no floating point anywhere in the library.
class Rational {
public:
    using Int = boost::multiprecision::cpp_int;

    Rational() : value_(0) {}
    Rational(long long n) : value_(n) {}
    Rational(const Int& numerator, const Int& denominator)
        : value_(numerator, denominator) {}

    /// Parses "p/q" or "p" with optional leading '-'. The denominator, when
    /// present, must be a positive integer literal. Returns nullopt on any
    /// other shape (whitespace, '+', empty fields, zero denominator).
    static std::optional<Rational> parse(std::string_view text);

    Int numerator() const { return boost::multiprecision::numerator(value_); }
    Int denominator() const { return boost::multiprecision::denominator(value_); }

    /// Renders "p/q", or just "p" when the denominator is 1.
    std::string str() const;

    bool is_integer() const { return denominator() == 1; }
    bool is_zero() const { return value_.is_zero(); }
    int sign() const { return value_.sign(); }

    Rational abs() const { return value_ < 0 ? Rational(-value_) : *this; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.value_ + b.value_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.value_ - b.value_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.value_ * b.value_); }
    friend Rational operator/(const Rational& a, const Rational& b) { return Rational(a.value_ / b.value_); }
    Rational operator-() const { return Rational(-value_); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) { value_ /= o.value_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

private:
    using Backend = boost::multiprecision::cpp_rational;

    explicit Rational(Backend v) : value_(std::move(v)) {}

    Backend value_;
};

/// a^n for n >= 0.
Rational pow(const Rational& base, unsigned exponent);

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace mmdyn
