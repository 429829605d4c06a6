#include "mmdyn/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace mmdyn {

std::string_view to_string(SymbolClass cls) {
    switch (cls) {
        case SymbolClass::interval: return "interval";
        case SymbolClass::vertical: return "vertical";
        case SymbolClass::point: return "point";
    }
    return "?";
}

std::string_view to_string(Orientation o) {
    return o == Orientation::increasing ? "increasing" : "decreasing";
}

std::string_view to_string(Graphlet::Kind kind) {
    switch (kind) {
        case Graphlet::Kind::slanted_segment: return "segment";
        case Graphlet::Kind::vertical_segment: return "vertical";
        case Graphlet::Kind::point: return "point";
    }
    return "?";
}

bool Partition::is_point(const Rational& x) const {
    return std::find(points.begin(), points.end(), x) != points.end();
}

std::optional<std::size_t> Partition::cell_index(const Interval& c) const {
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i] == c.lo && points[i + 1] == c.hi) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> MarkovMultiMap::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i].name == name) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> MarkovMultiMap::indices_of(SymbolClass cls) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i].cls == cls) out.push_back(i);
    }
    return out;
}

Interval AffineBranch::image() const { return image(domain); }

Interval AffineBranch::image(const Interval& sub) const {
    assert(domain.contains(sub));
    Rational a = eval(sub.lo);
    Rational b = eval(sub.hi);
    if (a <= b) return Interval(a, b);
    return Interval(b, a);
}

AffineBranch AffineBranch::after(const AffineBranch& other) const {
    return AffineBranch{slope * other.slope, slope * other.intercept + intercept, other.domain};
}

AffineBranch forward_branch(const BranchSymbol& symbol) {
    assert(symbol.cls == SymbolClass::interval);
    Rational dlen = symbol.domain.length();
    assert(!dlen.is_zero());
    Rational slope = symbol.range.length() / dlen;
    Rational intercept;
    if (symbol.orientation == Orientation::increasing) {
        intercept = symbol.range.lo - slope * symbol.domain.lo;
    } else {
        slope = -slope;
        intercept = symbol.range.hi - slope * symbol.domain.lo;
    }
    return AffineBranch{slope, intercept, symbol.domain};
}

AffineBranch inverse_branch(const BranchSymbol& symbol) {
    if (symbol.cls == SymbolClass::interval) {
        AffineBranch f = forward_branch(symbol);
        Rational slope = Rational(1) / f.slope;
        return AffineBranch{slope, -f.intercept * slope, symbol.range};
    }
    // Vertical and point symbols invert to the constant map onto D(a).
    return AffineBranch{Rational(0), symbol.domain.lo, symbol.range};
}

namespace {

bool partition_well_formed(const Partition& p) {
    if (p.points.size() < 2) return false;
    if (p.points.front() != Rational(0) || p.points.back() != Rational(1)) return false;
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
        if (!(p.points[i] < p.points[i + 1])) return false;
    }
    return true;
}

}  // namespace

std::vector<Violation> validate_definition(const MarkovMultiMap& mm) {
    std::vector<Violation> out;
    const Partition& p = mm.partition;

    bool grid_ok = partition_well_formed(p);
    if (!grid_ok) {
        out.push_back({1, "", "partition must be strictly increasing from 0 to 1"});
    }

    {
        std::set<std::string> seen;
        for (const auto& s : mm.symbols) {
            if (!seen.insert(s.name).second) {
                out.push_back({2, s.name, "duplicate symbol name"});
            }
        }
    }

    for (const auto& s : mm.symbols) {
        if (s.domain.lo > s.domain.hi || s.range.lo > s.range.hi) {
            out.push_back({3, s.name, "interval endpoints out of order"});
            continue;
        }
        switch (s.cls) {
            case SymbolClass::interval:
                if (!grid_ok || !p.cell_index(s.domain)) {
                    out.push_back({3, s.name, "domain is not a partition cell"});
                }
                break;
            case SymbolClass::vertical:
            case SymbolClass::point:
                if (!s.domain.degenerate() || !p.is_point(s.domain.lo)) {
                    out.push_back({3, s.name, "domain is not a single partition point"});
                }
                break;
        }

        bool ends_on_grid = p.is_point(s.range.lo) && p.is_point(s.range.hi);
        switch (s.cls) {
            case SymbolClass::interval:
                if (!ends_on_grid || s.range.degenerate()) {
                    out.push_back({4, s.name, "range must be [u, v] with u < v and u, v partition points"});
                }
                break;
            case SymbolClass::vertical: {
                if (!ends_on_grid || s.range.degenerate()) {
                    out.push_back({4, s.name, "range must be [u, v] with u < v and u, v partition points"});
                    break;
                }
                for (const auto& q : p.points) {
                    if (s.range.contains_interior(q)) {
                        out.push_back({4, s.name,
                                       "range contains interior partition point " + q.str()});
                        break;
                    }
                }
                break;
            }
            case SymbolClass::point:
                if (!s.range.degenerate() || !p.is_point(s.range.lo)) {
                    out.push_back({4, s.name, "range must be a single partition point"});
                }
                break;
        }

        if (s.cls == SymbolClass::interval && s.domain.degenerate()) {
            out.push_back({5, s.name, "no homeomorphism exists from a degenerate domain"});
        }
    }

    if (grid_ok) {
        for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
            bool covered = false;
            for (const auto& s : mm.symbols) {
                if (s.cls == SymbolClass::interval && s.domain == p.cell(i)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                out.push_back({6, "", "cell " + p.cell(i).str() + " is not the domain of any interval branch"});
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.condition, a.symbol, a.message) < std::tie(b.condition, b.symbol, b.message);
    });
    return out;
}

std::vector<Graphlet> graph_pieces(const MarkovMultiMap& mm) {
    std::vector<Graphlet> out;
    out.reserve(mm.symbols.size());
    for (const auto& s : mm.symbols) {
        Graphlet g;
        g.owner = s.name;
        switch (s.cls) {
            case SymbolClass::interval: {
                AffineBranch f = forward_branch(s);
                g.kind = Graphlet::Kind::slanted_segment;
                g.x0 = s.domain.lo;
                g.y0 = f.eval(s.domain.lo);
                g.x1 = s.domain.hi;
                g.y1 = f.eval(s.domain.hi);
                g.open_excludes_endpoints = true;
                break;
            }
            case SymbolClass::vertical:
                g.kind = Graphlet::Kind::vertical_segment;
                g.x0 = g.x1 = s.domain.lo;
                g.y0 = s.range.lo;
                g.y1 = s.range.hi;
                g.open_excludes_endpoints = true;
                break;
            case SymbolClass::point:
                g.kind = Graphlet::Kind::point;
                g.x0 = g.x1 = s.domain.lo;
                g.y0 = g.y1 = s.range.lo;
                g.open_excludes_endpoints = false;
                break;
        }
        out.push_back(std::move(g));
    }
    return out;
}

bool open_part_contains(const BranchSymbol& symbol, const Rational& x, const Rational& y) {
    switch (symbol.cls) {
        case SymbolClass::interval:
            return symbol.domain.contains_interior(x) && forward_branch(symbol).eval(x) == y;
        case SymbolClass::vertical:
            return symbol.domain.lo == x && symbol.range.contains_interior(y);
        case SymbolClass::point:
            return symbol.domain.lo == x && symbol.range.lo == y;
    }
    return false;
}

bool closed_part_contains(const BranchSymbol& symbol, const Rational& x, const Rational& y) {
    switch (symbol.cls) {
        case SymbolClass::interval:
            return symbol.domain.contains(x) && forward_branch(symbol).eval(x) == y;
        case SymbolClass::vertical:
            return symbol.domain.lo == x && symbol.range.contains(y);
        case SymbolClass::point:
            return symbol.domain.lo == x && symbol.range.lo == y;
    }
    return false;
}

bool multimap_contains(const MarkovMultiMap& mm, const Rational& x, const Rational& y) {
    for (const auto& s : mm.symbols) {
        if (closed_part_contains(s, x, y)) return true;
    }
    return false;
}

namespace {

/// A common point of the open parts of two symbols, if any. The returned
/// point picks the midpoint of overlap regions so it is always rational.
std::optional<PointXY> open_parts_overlap(const BranchSymbol& a, const BranchSymbol& b) {
    if (a.cls == SymbolClass::interval && b.cls == SymbolClass::interval) {
        if (a.domain != b.domain) return std::nullopt;  // distinct cells have disjoint interiors
        AffineBranch fa = forward_branch(a);
        AffineBranch fb = forward_branch(b);
        if (fa.slope == fb.slope) {
            if (fa.intercept != fb.intercept) return std::nullopt;
            Rational xm = (a.domain.lo + a.domain.hi) / Rational(2);
            return PointXY{xm, fa.eval(xm)};
        }
        Rational cross = (fb.intercept - fa.intercept) / (fa.slope - fb.slope);
        if (a.domain.contains_interior(cross)) return PointXY{cross, fa.eval(cross)};
        return std::nullopt;
    }
    if (a.cls == SymbolClass::interval || b.cls == SymbolClass::interval) {
        // Slanted interiors live over open cells; vertical/point pieces
        // live over partition points, so they never meet.
        return std::nullopt;
    }
    if (a.cls == SymbolClass::vertical && b.cls == SymbolClass::vertical) {
        if (a.domain.lo != b.domain.lo) return std::nullopt;
        Rational lo = max(a.range.lo, b.range.lo);
        Rational hi = min(a.range.hi, b.range.hi);
        if (lo < hi) {
            Rational ym = (lo + hi) / Rational(2);
            return PointXY{a.domain.lo, ym};
        }
        return std::nullopt;
    }
    if (a.cls == SymbolClass::point && b.cls == SymbolClass::point) {
        if (a.domain.lo == b.domain.lo && a.range.lo == b.range.lo) {
            return PointXY{a.domain.lo, a.range.lo};
        }
        return std::nullopt;
    }
    // vertical vs point (either order)
    const BranchSymbol& v = a.cls == SymbolClass::vertical ? a : b;
    const BranchSymbol& q = a.cls == SymbolClass::vertical ? b : a;
    if (v.domain.lo == q.domain.lo && v.range.contains_interior(q.range.lo)) {
        return PointXY{q.domain.lo, q.range.lo};
    }
    return std::nullopt;
}

/// Closed-graph endpoints that the open part of a symbol does not cover.
std::vector<PointXY> excluded_endpoints(const BranchSymbol& s) {
    switch (s.cls) {
        case SymbolClass::interval: {
            AffineBranch f = forward_branch(s);
            return {PointXY{s.domain.lo, f.eval(s.domain.lo)},
                    PointXY{s.domain.hi, f.eval(s.domain.hi)}};
        }
        case SymbolClass::vertical:
            return {PointXY{s.domain.lo, s.range.lo}, PointXY{s.domain.lo, s.range.hi}};
        case SymbolClass::point:
            return {};
    }
    return {};
}

bool covered_by_any_open_part(const MarkovMultiMap& mm, const PointXY& pt) {
    for (const auto& s : mm.symbols) {
        if (open_part_contains(s, pt.x, pt.y)) return true;
    }
    return false;
}

}  // namespace

ProperParametrization check_proper_parametrization(const MarkovMultiMap& mm) {
    ProperParametrization result;

    // Disjointness: pick the lexicographically smallest evidence over all
    // overlapping pairs so symbol order does not matter.
    std::optional<std::tuple<PointXY, std::string, std::string>> best_overlap;
    for (std::size_t i = 0; i < mm.symbols.size(); ++i) {
        for (std::size_t j = i + 1; j < mm.symbols.size(); ++j) {
            auto pt = open_parts_overlap(mm.symbols[i], mm.symbols[j]);
            if (!pt) continue;
            std::string na = mm.symbols[i].name;
            std::string nb = mm.symbols[j].name;
            if (nb < na) std::swap(na, nb);
            auto cand = std::make_tuple(*pt, na, nb);
            if (!best_overlap || cand < *best_overlap) best_overlap = cand;
        }
    }
    if (best_overlap) {
        auto& [pt, na, nb] = *best_overlap;
        result.holds = false;
        result.overlap = std::make_pair(na, nb);
        result.witness = pt;
        result.message = "overlap(" + na + "," + nb + ") at " + pt.str();
        return result;
    }

    // Coverage: the closed graph exceeds the open parts only at arc and
    // segment endpoints, so those are the only candidates.
    std::optional<PointXY> worst;
    for (const auto& s : mm.symbols) {
        for (const auto& pt : excluded_endpoints(s)) {
            if (covered_by_any_open_part(mm, pt)) continue;
            if (!worst || pt < *worst) worst = pt;
        }
    }
    if (worst) {
        result.holds = false;
        result.witness = *worst;
        result.message = "uncovered point " + worst->str();
        return result;
    }

    result.holds = true;
    result.message = "open parts partition the graph";
    return result;
}

MarkovMultiMap complete_parametrization(const MarkovMultiMap& mm) {
    MarkovMultiMap out;
    out.partition = mm.partition;

    // Interval branches must already have pairwise disjoint interiors;
    // nothing that completion may add can fix a slanted overlap.
    std::vector<const BranchSymbol*> intervals;
    for (const auto& s : mm.symbols) {
        if (s.cls == SymbolClass::interval) intervals.push_back(&s);
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        for (std::size_t j = i + 1; j < intervals.size(); ++j) {
            if (auto pt = open_parts_overlap(*intervals[i], *intervals[j])) {
                throw CompletionError("branches " + intervals[i]->name + " and " +
                                      intervals[j]->name +
                                      " share the interior point " + pt->str() +
                                      "; no symbol assignment can partition this graph");
            }
        }
    }

    // Vertical segments: deduplicate identical pieces, reject partial
    // overlaps (completion never splits or invents vertical segments).
    std::vector<const BranchSymbol*> verticals;
    for (const auto& s : mm.symbols) {
        if (s.cls != SymbolClass::vertical) continue;
        bool duplicate = false;
        for (const auto* v : verticals) {
            if (v->domain.lo == s.domain.lo && v->range == s.range) {
                duplicate = true;
                break;
            }
            if (auto pt = open_parts_overlap(*v, s)) {
                throw CompletionError("vertical segments " + v->name + " and " + s.name +
                                      " overlap at " + pt->str() +
                                      " without being identical");
            }
        }
        if (!duplicate) verticals.push_back(&s);
    }

    for (const auto* s : intervals) out.symbols.push_back(*s);
    for (const auto* s : verticals) out.symbols.push_back(*s);

    // Point symbols: drop duplicates and points swallowed by another open
    // part; both leave the closed graph unchanged.
    std::set<PointXY> kept_points;
    for (const auto& s : mm.symbols) {
        if (s.cls != SymbolClass::point) continue;
        PointXY pt{s.domain.lo, s.range.lo};
        if (kept_points.count(pt)) continue;
        bool swallowed = false;
        for (const auto& other : out.symbols) {
            if (open_part_contains(other, pt.x, pt.y)) {
                swallowed = true;
                break;
            }
        }
        if (swallowed) continue;
        kept_points.insert(pt);
        out.symbols.push_back(s);
    }

    // Every arc endpoint must land in some open part; add a point symbol
    // for each one that does not, smallest first for reproducibility.
    std::set<PointXY> missing;
    for (const auto& s : out.symbols) {
        for (const auto& pt : excluded_endpoints(s)) {
            if (kept_points.count(pt)) continue;
            bool covered = false;
            for (const auto& other : out.symbols) {
                if (open_part_contains(other, pt.x, pt.y)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) missing.insert(pt);
        }
    }

    std::set<std::string> names;
    for (const auto& s : out.symbols) names.insert(s.name);
    std::size_t counter = 0;
    for (const auto& pt : missing) {
        std::string name;
        do {
            name = "e" + std::to_string(counter++);
        } while (names.count(name));
        names.insert(name);
        BranchSymbol s;
        s.name = name;
        s.cls = SymbolClass::point;
        s.domain = Interval::point(pt.x);
        s.range = Interval::point(pt.y);
        out.symbols.push_back(std::move(s));
    }

    return out;
}

std::vector<Interval> evaluate(const MarkovMultiMap& mm, const Rational& x) {
    assert(Rational(0) <= x && x <= Rational(1));
    std::vector<Interval> pieces;
    for (const auto& s : mm.symbols) {
        if (!s.domain.contains(x)) continue;
        if (s.cls == SymbolClass::interval) {
            pieces.push_back(Interval::point(forward_branch(s).eval(x)));
        } else {
            pieces.push_back(s.range);
        }
    }
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });
    std::vector<Interval> merged;
    for (const auto& piece : pieces) {
        if (!merged.empty() && piece.lo <= merged.back().hi) {
            if (piece.hi > merged.back().hi) merged.back().hi = piece.hi;
        } else {
            merged.push_back(piece);
        }
    }
    return merged;
}

}  // namespace mmdyn
