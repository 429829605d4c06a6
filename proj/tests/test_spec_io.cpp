#include <doctest.h>

#include "mmdyn/spec_io.hpp"
#include "test_helpers.hpp"

using namespace mmdyn;
using mmtest::load_fixture;

TEST_CASE("rationals are stored canonically") {
    auto mm = parse_spec(R"({
        "partition": ["0", "2/4", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","2/4"], "range": ["0","4/4"],
             "orientation": "increasing"}
        ]
    })");
    CHECK(mm.partition.points[1].str() == "1/2");
    CHECK(mm.symbols[0].range.hi.str() == "1");
}

TEST_CASE("parse / serialize / parse is the identity on canonical documents") {
    for (const char* fixture : {"example-7-1.json", "example-7-2.json"}) {
        auto mm = load_fixture(fixture);
        std::string text = serialize_spec(mm);
        auto again = parse_spec(text);
        CHECK(serialize_spec(again) == text);
        REQUIRE(again.symbols.size() == mm.symbols.size());
        for (std::size_t i = 0; i < mm.symbols.size(); ++i) {
            CHECK(again.symbols[i].name == mm.symbols[i].name);
            CHECK(again.symbols[i].cls == mm.symbols[i].cls);
            CHECK(again.symbols[i].domain == mm.symbols[i].domain);
            CHECK(again.symbols[i].range == mm.symbols[i].range);
            CHECK(again.symbols[i].orientation == mm.symbols[i].orientation);
        }
    }
}

TEST_CASE("parse errors carry locations") {
    auto expect_error = [](const char* text, const char* location_fragment) {
        try {
            parse_spec(text);
            FAIL_CHECK("expected a parse error for: " << text);
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(location_fragment) != std::string::npos);
        }
    };

    expect_error(R"({"partition": ["0", "1/x", "1"], "symbols": []})", "partition[1]");
    expect_error(R"({"partition": ["0","1"], "symbols": [
        {"name": "a", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
         "orientation": "sideways"}]})",
                 "symbols[0].orientation");
    expect_error(R"({"partition": ["0","1"], "symbols": [
        {"name": "a", "class": "wiggly", "domain": ["0","1"], "range": ["0","1"]}]})",
                 "unknown class tag");
    expect_error(R"({"partition": ["0","1"], "symbols": [
        {"name": "a", "class": "point", "domain": "0", "range": "0"},
        {"name": "a", "class": "point", "domain": "1", "range": "1"}]})",
                 "duplicate symbol name");
    expect_error(R"({"partition": ["0","1"]})", "symbols");
    expect_error("{not json", "invalid JSON");
}

TEST_CASE("comment keys are ignored") {
    auto mm = parse_spec(R"({
        "comment": "anything",
        "partition": ["0", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
             "orientation": "increasing", "comment": "also anything"}
        ]
    })");
    CHECK(mm.symbols.size() == 1);
}
