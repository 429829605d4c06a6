#pragma once

#include <cassert>
#include <optional>
#include <string>

#include "mmdyn/rational.hpp"

namespace mmdyn {

/// Closed interval [lo, hi] with rational endpoints. Degenerate intervals
/// (lo == hi) are permitted and stand for single points.
struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational a, Rational b) : lo(std::move(a)), hi(std::move(b)) {
        assert(lo <= hi);
    }

    static Interval point(const Rational& p) { return Interval(p, p); }

    Rational length() const { return hi - lo; }
    bool degenerate() const { return lo == hi; }

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    /// Strict interior; empty for degenerate intervals.
    bool contains_interior(const Rational& x) const { return lo < x && x < hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

    std::string str() const {
        if (degenerate()) return "{" + lo.str() + "}";
        return "[" + lo.str() + ", " + hi.str() + "]";
    }
};

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    Rational lo = max(a.lo, b.lo);
    Rational hi = min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return Interval(lo, hi);
}

}  // namespace mmdyn
