#include <doctest.h>

#include <algorithm>

#include "mmdyn/model.hpp"
#include "mmdyn/spec_io.hpp"
#include "test_helpers.hpp"

using namespace mmdyn;
using mmtest::load_fixture;
using mmtest::rat;

namespace {

MarkovMultiMap identity_map() {
    return parse_spec(R"({
        "partition": ["0", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
             "orientation": "increasing"}
        ]
    })");
}

MarkovMultiMap without_symbol(const MarkovMultiMap& mm, const std::string& name) {
    MarkovMultiMap out;
    out.partition = mm.partition;
    for (const auto& s : mm.symbols) {
        if (s.name != name) out.symbols.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("fixture 7-1 parses to seven symbols over {0, 1/2, 1}") {
    auto mm = load_fixture("example-7-1.json");
    CHECK(mm.symbols.size() == 7);
    REQUIRE(mm.partition.points.size() == 3);
    CHECK(mm.partition.points[1] == rat("1/2"));
    CHECK(mm.indices_of(SymbolClass::interval).size() == 3);
    CHECK(mm.indices_of(SymbolClass::point).size() == 4);
    CHECK(validate_definition(mm).empty());
}

TEST_CASE("derived branches match the fixture geometry") {
    auto mm = load_fixture("example-7-1.json");
    auto f1 = forward_branch(mm.symbols[*mm.index_of("a1")]);
    CHECK(f1.slope == Rational(2));
    CHECK(f1.intercept == Rational(0));
    auto f2 = forward_branch(mm.symbols[*mm.index_of("a2")]);
    CHECK(f2.slope == Rational(-1));
    CHECK(f2.intercept == rat("3/2"));
    // The increasing branch of [1/2,1] onto [0,1/2] is x - 1/2.
    auto f3 = forward_branch(mm.symbols[*mm.index_of("a3")]);
    CHECK(f3.slope == Rational(1));
    CHECK(f3.intercept == rat("-1/2"));
}

TEST_CASE("inverse branches undo forward branches exactly") {
    for (const char* fixture : {"example-7-1.json", "example-7-2.json"}) {
        auto mm = load_fixture(fixture);
        for (const auto& s : mm.symbols) {
            if (s.cls != SymbolClass::interval) continue;
            auto f = forward_branch(s);
            auto g = inverse_branch(s);
            for (int i = 0; i <= 16; ++i) {
                Rational x = s.domain.lo + s.domain.length() * Rational(i) / Rational(16);
                CHECK(g.eval(f.eval(x)) == x);
            }
        }
    }
}

TEST_CASE("validation pinpoints missing coverage") {
    auto mm = load_fixture("example-7-1.json");
    // Remove both branches over [1/2, 1].
    auto broken = without_symbol(without_symbol(mm, "a2"), "a3");
    auto violations = validate_definition(broken);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].condition == 6);
}

TEST_CASE("validation rejects a vertical range with an interior grid point") {
    auto mm = parse_spec(R"({
        "partition": ["0", "1/2", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1/2"], "range": ["0","1"],
             "orientation": "increasing"},
            {"name": "b", "class": "interval", "domain": ["1/2","1"], "range": ["0","1"],
             "orientation": "decreasing"},
            {"name": "v", "class": "vertical", "domain": "1/2", "range": ["0","1"]}
        ]
    })");
    auto violations = validate_definition(mm);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].condition == 4);
    CHECK(violations[0].symbol == "v");
}

TEST_CASE("validation accepts an empty symbol list only as a coverage failure") {
    auto mm = parse_spec(R"({"partition": ["0", "1"], "symbols": []})");
    auto violations = validate_definition(mm);
    REQUIRE(!violations.empty());
    for (const auto& v : violations) CHECK(v.condition == 6);
}

TEST_CASE("validation is invariant under symbol permutation") {
    auto mm = load_fixture("example-7-1.json");
    auto broken = without_symbol(without_symbol(mm, "a2"), "a3");
    auto base = validate_definition(broken);
    std::reverse(broken.symbols.begin(), broken.symbols.end());
    auto flipped = validate_definition(broken);
    REQUIRE(base.size() == flipped.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].condition == flipped[i].condition);
        CHECK(base[i].message == flipped[i].message);
    }
}

TEST_CASE("graph pieces per fixture") {
    auto g1 = graph_pieces(load_fixture("example-7-1.json"));
    int segments = 0, points = 0;
    for (const auto& g : g1) {
        if (g.kind == Graphlet::Kind::slanted_segment) ++segments;
        if (g.kind == Graphlet::Kind::point) ++points;
    }
    CHECK(segments == 3);
    CHECK(points == 4);

    auto g2 = graph_pieces(load_fixture("example-7-2.json"));
    segments = points = 0;
    for (const auto& g : g2) {
        if (g.kind == Graphlet::Kind::slanted_segment) ++segments;
        if (g.kind == Graphlet::Kind::point) ++points;
    }
    CHECK(segments == 4);
    CHECK(points == 4);

    auto gi = graph_pieces(identity_map());
    REQUIRE(gi.size() == 1);
    CHECK(gi[0].kind == Graphlet::Kind::slanted_segment);
    CHECK(gi[0].x0 == Rational(0));
    CHECK(gi[0].y0 == Rational(0));
    CHECK(gi[0].x1 == Rational(1));
    CHECK(gi[0].y1 == Rational(1));
}

TEST_CASE("graph pieces agree with evaluate on a rational grid") {
    for (const char* fixture : {"example-7-1.json", "example-7-2.json"}) {
        auto mm = load_fixture(fixture);
        auto pieces = graph_pieces(mm);
        const int q = 64;
        for (int i = 0; i <= q; ++i) {
            Rational x(i, q);
            for (int j = 0; j <= q; ++j) {
                Rational y(j, q);
                bool in_eval = false;
                for (const auto& iv : evaluate(mm, x)) {
                    if (iv.contains(y)) in_eval = true;
                }
                bool on_piece = false;
                for (std::size_t s = 0; s < mm.symbols.size(); ++s) {
                    if (closed_part_contains(mm.symbols[s], x, y)) on_piece = true;
                }
                CHECK(in_eval == on_piece);
                (void)pieces;
            }
        }
    }
}

TEST_CASE("proper parametrization holds on the fixtures") {
    CHECK(check_proper_parametrization(load_fixture("example-7-1.json")).holds);
    CHECK(check_proper_parametrization(load_fixture("example-7-2.json")).holds);
}

TEST_CASE("deleting the point symbol at the origin uncovers (0, 0)") {
    auto mm = without_symbol(load_fixture("example-7-1.json"), "a4");
    auto verdict = check_proper_parametrization(mm);
    CHECK(!verdict.holds);
    REQUIRE(verdict.witness);
    CHECK(verdict.witness->x == Rational(0));
    CHECK(verdict.witness->y == Rational(0));
    CHECK(!verdict.overlap);
}

TEST_CASE("duplicating an interval branch reports an overlapping pair") {
    auto mm = load_fixture("example-7-1.json");
    auto copy = mm.symbols[*mm.index_of("a1")];
    copy.name = "a1x";
    mm.symbols.push_back(copy);
    auto verdict = check_proper_parametrization(mm);
    CHECK(!verdict.holds);
    REQUIRE(verdict.overlap);
    CHECK(verdict.overlap->first == "a1");
    CHECK(verdict.overlap->second == "a1x");
    REQUIRE(verdict.witness);
    CHECK(closed_part_contains(mm.symbols[*mm.index_of("a1")], verdict.witness->x,
                               verdict.witness->y));
}

TEST_CASE("proper parametrization evidence is permutation independent") {
    auto mm = without_symbol(load_fixture("example-7-1.json"), "a6");
    auto base = check_proper_parametrization(mm);
    std::reverse(mm.symbols.begin(), mm.symbols.end());
    auto flipped = check_proper_parametrization(mm);
    CHECK(base.holds == flipped.holds);
    REQUIRE(base.witness);
    REQUIRE(flipped.witness);
    CHECK(*base.witness == *flipped.witness);
}

TEST_CASE("completion rebuilds the four endpoint symbols") {
    auto mm = load_fixture("example-7-1.json");
    for (const char* name : {"a4", "a5", "a6", "a7"}) mm = without_symbol(mm, name);
    auto completed = complete_parametrization(mm);
    CHECK(check_proper_parametrization(completed).holds);
    CHECK(completed.symbols.size() == 7);
    std::vector<PointXY> added;
    for (const auto& s : completed.symbols) {
        if (s.cls == SymbolClass::point) added.push_back({s.domain.lo, s.range.lo});
    }
    std::sort(added.begin(), added.end());
    std::vector<PointXY> expected = {{Rational(0), Rational(0)},
                                     {rat("1/2"), Rational(0)},
                                     {rat("1/2"), Rational(1)},
                                     {Rational(1), rat("1/2")}};
    CHECK(added == expected);
}

TEST_CASE("completion preserves the closed graph on a rational grid") {
    auto original = load_fixture("example-7-1.json");
    auto stripped = original;
    for (const char* name : {"a4", "a5", "a6", "a7"}) stripped = without_symbol(stripped, name);
    auto completed = complete_parametrization(stripped);

    const int q = 64;
    for (int i = 0; i <= q; ++i) {
        Rational x(i, q);
        for (int j = 0; j <= q; ++j) {
            Rational y(j, q);
            bool in_completed = multimap_contains(completed, x, y);
            CHECK(multimap_contains(stripped, x, y) == in_completed);
            CHECK(multimap_contains(original, x, y) == in_completed);
        }
    }
}

TEST_CASE("completion is idempotent on proper fixtures") {
    for (const char* fixture : {"example-7-1.json", "example-7-2.json"}) {
        auto mm = load_fixture(fixture);
        auto completed = complete_parametrization(mm);
        REQUIRE(completed.symbols.size() == mm.symbols.size());
        for (std::size_t i = 0; i < mm.symbols.size(); ++i) {
            CHECK(completed.symbols[i].name == mm.symbols[i].name);
            CHECK(completed.symbols[i].domain == mm.symbols[i].domain);
            CHECK(completed.symbols[i].range == mm.symbols[i].range);
        }
    }
}

TEST_CASE("completion adds one point per distinct segment endpoint of the diamond") {
    auto mm = load_fixture("example-7-2.json");
    for (const char* name : {"b1", "b2", "b3", "b4"}) mm = without_symbol(mm, name);
    auto completed = complete_parametrization(mm);
    CHECK(check_proper_parametrization(completed).holds);
    CHECK(completed.symbols.size() == 8);  // four corners, shared endpoints deduplicated
}

TEST_CASE("completion rejects branches crossing at an off-grid interior point") {
    auto mm = parse_spec(R"({
        "partition": ["0", "1"],
        "symbols": [
            {"name": "up", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
             "orientation": "increasing"},
            {"name": "down", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
             "orientation": "decreasing"}
        ]
    })");
    REQUIRE(validate_definition(mm).empty());
    CHECK(!check_proper_parametrization(mm).holds);
    CHECK_THROWS_AS(complete_parametrization(mm), CompletionError);
}

TEST_CASE("evaluate on the first fixture") {
    auto mm = load_fixture("example-7-1.json");

    auto at_quarter = evaluate(mm, rat("1/4"));
    REQUIRE(at_quarter.size() == 1);
    CHECK(at_quarter[0] == Interval::point(rat("1/2")));

    // Both branches at the shared endpoint plus the point symbols: {0, 1}.
    auto at_half = evaluate(mm, rat("1/2"));
    REQUIRE(at_half.size() == 2);
    CHECK(at_half[0] == Interval::point(Rational(0)));
    CHECK(at_half[1] == Interval::point(Rational(1)));

    auto single = evaluate(identity_map(), rat("1/3"));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == Interval::point(rat("1/3")));
}

TEST_CASE("evaluate merges adjacent vertical ranges") {
    auto mm = parse_spec(R"({
        "partition": ["0", "1/2", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1/2"], "range": ["0","1/2"],
             "orientation": "increasing"},
            {"name": "b", "class": "interval", "domain": ["1/2","1"], "range": ["1/2","1"],
             "orientation": "increasing"},
            {"name": "v1", "class": "vertical", "domain": "1/2", "range": ["0","1/2"]},
            {"name": "v2", "class": "vertical", "domain": "1/2", "range": ["1/2","1"]}
        ]
    })");
    auto out = evaluate(mm, rat("1/2"));
    REQUIRE(out.size() == 1);
    CHECK(out[0] == Interval(Rational(0), Rational(1)));
}
