#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmdyn/interval.hpp"
#include "mmdyn/rational.hpp"

namespace mmdyn {

/// Branch classes of a Markov multi-map: slanted interval branches,
/// vertical segments over a single partition point, and single points.
enum class SymbolClass { interval, vertical, point };

enum class Orientation { increasing, decreasing };

std::string_view to_string(SymbolClass cls);
std::string_view to_string(Orientation o);

/// Grid of points 0 = p_0 < p_1 < ... < p_r = 1. Cells are the closed
/// intervals between consecutive points. Well-formedness is checked by
/// validate_definition, not on construction, so a freshly parsed document
/// may carry an arbitrary point list.
struct Partition {
    std::vector<Rational> points;

    std::size_t cell_count() const { return points.empty() ? 0 : points.size() - 1; }
    Interval cell(std::size_t i) const { return Interval(points[i], points[i + 1]); }
    bool is_point(const Rational& x) const;
    /// Index i such that cell(i) == [c.lo, c.hi], if the endpoints are
    /// adjacent partition points.
    std::optional<std::size_t> cell_index(const Interval& c) const;
};

struct BranchSymbol {
    std::string name;
    SymbolClass cls = SymbolClass::interval;
    Interval domain;  // one cell for interval class, degenerate otherwise
    Interval range;   // degenerate for point class
    Orientation orientation = Orientation::increasing;  // interval class only
};

struct MarkovMultiMap {
    Partition partition;
    std::vector<BranchSymbol> symbols;

    const BranchSymbol& symbol(std::size_t i) const { return symbols[i]; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<std::size_t> indices_of(SymbolClass cls) const;
};

/// Affine map x -> slope*x + intercept restricted to a closed interval.
struct AffineBranch {
    Rational slope;
    Rational intercept;
    Interval domain;

    Rational eval(const Rational& x) const {
        assert(domain.contains(x));
        return slope * x + intercept;
    }

    /// Exact image of the domain (an interval; degenerate when slope == 0
    /// or the domain is a point).
    Interval image() const;

    /// Image of a sub-interval of the domain.
    Interval image(const Interval& sub) const;

    /// this(other(x)) with domain = other.domain. The caller is responsible
    /// for other's image landing inside this->domain.
    AffineBranch after(const AffineBranch& other) const;
};

/// The affine homeomorphism D(a) -> R(a) determined by (domain, range,
/// orientation). Only meaningful for interval-class symbols.
AffineBranch forward_branch(const BranchSymbol& symbol);

/// g_a: the inverse of f_a for interval branches; the constant map
/// R(a) -> D(a) for vertical and point symbols.
AffineBranch inverse_branch(const BranchSymbol& symbol);

struct Violation {
    int condition = 0;     // 1..6, the defining conditions of a Markov multi-map
    std::string symbol;    // empty for partition-level violations
    std::string message;
};

/// Checks the six defining conditions. Empty result means the tuple is a
/// Markov multi-map. Violations are sorted by (condition, symbol, message)
/// so the result does not depend on symbol order.
std::vector<Violation> validate_definition(const MarkovMultiMap& mm);

struct Graphlet {
    enum class Kind { slanted_segment, vertical_segment, point };
    std::string owner;
    Kind kind = Kind::point;
    // Closed geometry; for points both endpoints coincide.
    Rational x0, y0, x1, y1;
    // The open part excludes both endpoints for segments; points have no
    // exclusions.
    bool open_excludes_endpoints = false;
};

std::string_view to_string(Graphlet::Kind kind);

/// One graphlet per symbol, in symbol order. Closed parts union to the
/// graph of the multi-map.
std::vector<Graphlet> graph_pieces(const MarkovMultiMap& mm);

struct PointXY {
    Rational x, y;
    friend bool operator==(const PointXY& a, const PointXY& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(const PointXY& a, const PointXY& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
    std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }
};

struct ProperParametrization {
    bool holds = false;
    /// For overlap failures: the offending pair (names sorted) and a common
    /// point of the two open parts. For coverage failures: the
    /// lexicographically smallest graph point lying in no open part.
    std::optional<std::pair<std::string, std::string>> overlap;
    std::optional<PointXY> witness;
    std::string message;
};

/// Decides whether the open parts of the branch graphs partition the full
/// graph. Evidence is chosen lexicographically so the verdict does not
/// depend on symbol order.
ProperParametrization check_proper_parametrization(const MarkovMultiMap& mm);

/// Raised by complete_parametrization when the closed graph admits no
/// proper parametrization at all (overlapping or crossing branch interiors).
struct CompletionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Returns a multi-map with the same closed graph whose open parts
/// partition it: drops point symbols swallowed by other open parts,
/// deduplicates identical pieces, and adds one point symbol per uncovered
/// arc endpoint. Idempotent on already-proper inputs.
MarkovMultiMap complete_parametrization(const MarkovMultiMap& mm);

/// F(x) as a finite union of disjoint closed intervals, sorted; degenerate
/// intervals are single points.
std::vector<Interval> evaluate(const MarkovMultiMap& mm, const Rational& x);

/// Membership y in F(x), tested symbol by symbol.
bool multimap_contains(const MarkovMultiMap& mm, const Rational& x, const Rational& y);

/// Membership of (x, y) in the open part of a single symbol's graph.
bool open_part_contains(const BranchSymbol& symbol, const Rational& x, const Rational& y);

/// Membership of (x, y) in the closed graph of a single symbol.
bool closed_part_contains(const BranchSymbol& symbol, const Rational& x, const Rational& y);

}  // namespace mmdyn
