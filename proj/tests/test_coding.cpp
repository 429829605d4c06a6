#include <doctest.h>

#include "mmdyn/coding.hpp"
#include "mmdyn/spec_io.hpp"
#include "test_helpers.hpp"
#include "test_oracles.hpp"

using namespace mmdyn;
using mmtest::load_fixture;
using mmtest::rat;
using mmtest::window_language;

namespace {

Word word_of(const TransitionMatrix& m, std::initializer_list<const char*> names) {
    Word out;
    for (const char* n : names) out.push_back(*m.index_of(n));
    return out;
}

}  // namespace

TEST_CASE("inverse branches of the first fixture") {
    auto mm = load_fixture("example-7-1.json");
    auto g1 = inverse_branch(mm.symbols[*mm.index_of("a1")]);
    CHECK(g1.slope == rat("1/2"));
    CHECK(g1.intercept == Rational(0));
    CHECK(g1.domain == Interval(Rational(0), Rational(1)));

    auto g2 = inverse_branch(mm.symbols[*mm.index_of("a2")]);
    CHECK(g2.slope == Rational(-1));
    CHECK(g2.intercept == rat("3/2"));
    CHECK(g2.domain == Interval(rat("1/2"), Rational(1)));

    auto g5 = inverse_branch(mm.symbols[*mm.index_of("a5")]);
    CHECK(g5.slope == Rational(0));
    CHECK(g5.eval(Rational(1)) == rat("1/2"));
}

TEST_CASE("inverse composites and their coded intervals") {
    auto mm = load_fixture("example-7-1.json");
    auto m = build_transition_matrix(mm);

    auto two_a1 = compose_inverse(mm, m, word_of(m, {"a1", "a1"}));
    CHECK(two_a1.map.slope == rat("1/4"));
    CHECK(two_a1.interval == Interval(Rational(0), rat("1/4")));

    auto a1a2 = compose_inverse(mm, m, word_of(m, {"a1", "a2"}));
    CHECK(a1a2.interval == Interval(rat("1/4"), rat("1/2")));

    auto single = compose_inverse(mm, m, word_of(m, {"a3"}));
    CHECK(single.interval == mm.symbols[*mm.index_of("a3")].domain);

    CHECK_THROWS_AS(compose_inverse(mm, m, word_of(m, {"a2", "a1"})), InadmissibleWord);
    CHECK_THROWS_AS(compose_inverse(mm, m, {}), InadmissibleWord);
}

TEST_CASE("contraction data of the fixtures") {
    auto mm1 = load_fixture("example-7-1.json");
    auto m1 = build_transition_matrix(mm1);
    auto rate1 = contraction_rate(mm1, m1);
    REQUIRE(rate1.d_set.size() == 1);
    CHECK(m1.alphabet[rate1.d_set[0]] == "a1");
    CHECK(rate1.gamma == rat("1/2"));

    auto mm2 = load_fixture("example-7-2.json");
    auto m2 = build_transition_matrix(mm2);
    auto rate2 = contraction_rate(mm2, m2);
    CHECK(rate2.d_set.empty());
    CHECK(rate2.gamma == Rational(1));

    auto full = parse_spec(R"({
        "partition": ["0", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
             "orientation": "increasing"}
        ]
    })");
    auto rate3 = contraction_rate(full, build_transition_matrix(full));
    CHECK(rate3.d_set.empty());
}

TEST_CASE("coding condition trichotomy") {
    auto mm1 = load_fixture("example-7-1.json");
    auto m1 = build_transition_matrix(mm1);
    auto cc1 = check_coding_condition(mm1, m1, components(m1));
    CHECK(cc1.status == Status::holds);
    CHECK(cc1.gamma == rat("1/2"));
    CHECK(cc1.window == 2u);
    REQUIRE(cc1.component);

    auto mm2 = load_fixture("example-7-2.json");
    auto m2 = build_transition_matrix(mm2);
    auto cc2 = check_coding_condition(mm2, m2, components(m2));
    CHECK(cc2.status == Status::fails);
    CHECK(cc2.min_cell_length == rat("1/2"));
    CHECK(cc2.detail.find("I_u = I_{u_0}") != std::string::npos);

    // Contraction available but the interval symbols split across components.
    auto split = complete_parametrization(parse_spec(R"({
        "partition": ["0", "1/2", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1/2"], "range": ["0","1"],
             "orientation": "increasing"},
            {"name": "b", "class": "interval", "domain": ["1/2","1"], "range": ["1/2","1"],
             "orientation": "increasing"}
        ]
    })"));
    auto ms = build_transition_matrix(split);
    auto ccs = check_coding_condition(split, ms, components(ms));
    CHECK(ccs.status == Status::unknown);
    CHECK(!ccs.d_set.empty());
}

TEST_CASE("equicontinuity constants") {
    CHECK(equicontinuity_modulus(load_fixture("example-7-1.json")).constant == Rational(1));
    CHECK(equicontinuity_modulus(load_fixture("example-7-2.json")).constant == Rational(1));
    auto full = parse_spec(R"({
        "partition": ["0", "1"],
        "symbols": [
            {"name": "a", "class": "interval", "domain": ["0","1"], "range": ["0","1"],
             "orientation": "increasing"}
        ]
    })");
    CHECK(equicontinuity_modulus(full).constant == Rational(1));
    CHECK(equicontinuity_modulus(full).delta(rat("1/8")) == rat("1/8"));
}

TEST_CASE("coded intervals nest along every admissible word") {
    for (const char* fixture : {"example-7-1.json", "example-7-2.json"}) {
        auto mm = load_fixture(fixture);
        auto m = build_transition_matrix(mm);
        for (std::size_t len = 2; len <= 8; ++len) {
            for (const auto& w : language(m, len)) {
                auto whole = compose_inverse(mm, m, w);
                Word prefix(w.begin(), w.end() - 1);
                auto parent = compose_inverse(mm, m, prefix);
                CHECK(parent.interval.contains(whole.interval));
            }
        }
    }
}

TEST_CASE("composite slopes obey the telescoping bound") {
    for (const char* fixture : {"example-7-1.json", "example-7-2.json"}) {
        auto mm = load_fixture(fixture);
        auto m = build_transition_matrix(mm);
        for (std::size_t len = 1; len <= 8; ++len) {
            for (const auto& w : language(m, len)) {
                auto comp = compose_inverse(mm, m, w);
                const auto& first = mm.symbols[w.front()];
                const auto& last = mm.symbols[w.back()];
                if (last.range.degenerate()) {
                    CHECK(comp.map.slope == Rational(0));
                } else {
                    CHECK(comp.map.slope.abs() <=
                          first.domain.length() / last.range.length());
                }
            }
        }
    }
}

TEST_CASE("window language contracts geometrically") {
    auto mm = load_fixture("example-7-1.json");
    auto m = build_transition_matrix(mm);
    auto cc = check_coding_condition(mm, m, components(m));
    REQUIRE(cc.status == Status::holds);
    const unsigned window = *cc.window;
    auto core = mm.indices_of(SymbolClass::interval);

    // Words of length at least j * window + 1 shrink by at least gamma^j.
    for (unsigned j = 1; j <= 3; ++j) {
        Rational bound = pow(cc.gamma, j);
        for (std::size_t extra = 0; extra <= 2; ++extra) {
            std::size_t length = static_cast<std::size_t>(j) * window + 1 + extra;
            auto words = window_language(m, core, cc.d_set, window, length);
            REQUIRE(!words.empty());
            for (const auto& w : words) {
                CHECK(compose_inverse(mm, m, w).interval.length() <= bound);
            }
        }
    }
}

TEST_CASE("the equicontinuity delta genuinely works") {
    auto mm = load_fixture("example-7-1.json");
    auto m = build_transition_matrix(mm);
    auto modulus = equicontinuity_modulus(mm);
    Rational eps = rat("1/7");
    Rational delta = modulus.delta(eps);

    mmtest::TestRng rng(7711);
    auto words = language(m, 5);
    int tested = 0;
    int attempts = 0;
    while (tested < 100) {
        REQUIRE(++attempts < 10000);
        const auto& w = words[rng.below(words.size())];
        auto comp = compose_inverse(mm, m, w);
        const Interval& dom = comp.map.domain;
        if (dom.degenerate()) continue;
        Rational x = dom.lo + dom.length() * Rational(static_cast<long long>(rng.below(97)), 97);
        Rational step = delta * Rational(static_cast<long long>(1 + rng.below(95)), 97);
        Rational y = x + step <= dom.hi ? x + step : x - step;
        if (y < dom.lo || y > dom.hi) continue;
        CHECK((x - y).abs() < delta);
        CHECK((comp.map.eval(x) - comp.map.eval(y)).abs() < eps);
        ++tested;
    }
}
