#include <doctest.h>

#include "mmdyn/interval.hpp"
#include "mmdyn/rational.hpp"

using mmdyn::Interval;
using mmdyn::Rational;

TEST_CASE("parsing canonicalizes") {
    CHECK(Rational::parse("2/4")->str() == "1/2");
    CHECK(Rational::parse("-6/4")->str() == "-3/2");
    CHECK(Rational::parse("7")->str() == "7");
    CHECK(Rational::parse("0/5")->str() == "0");
    CHECK(Rational::parse("007")->str() == "7");
}

TEST_CASE("parsing rejects junk") {
    CHECK(!Rational::parse(""));
    CHECK(!Rational::parse("1/0"));
    CHECK(!Rational::parse("1/-2"));
    CHECK(!Rational::parse("+1"));
    CHECK(!Rational::parse(" 1"));
    CHECK(!Rational::parse("1.5"));
    CHECK(!Rational::parse("a/b"));
    CHECK(!Rational::parse("1/"));
    CHECK(!Rational::parse("/2"));
}

TEST_CASE("arithmetic is exact") {
    Rational a = *Rational::parse("1/3");
    Rational b = *Rational::parse("1/6");
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2");
    CHECK((-a).str() == "-1/3");
    CHECK(a.abs() == a);
    CHECK((-a).abs() == a);

    // No drift over many accumulations.
    Rational sum(0);
    for (int i = 0; i < 300; ++i) sum += *Rational::parse("1/300");
    CHECK(sum == Rational(1));
}

TEST_CASE("comparisons follow the number line") {
    CHECK(*Rational::parse("1/3") < *Rational::parse("1/2"));
    CHECK(*Rational::parse("-1/2") < *Rational::parse("-1/3"));
    CHECK(*Rational::parse("2/6") == *Rational::parse("1/3"));
    CHECK(mmdyn::pow(*Rational::parse("1/2"), 5).str() == "1/32");
    CHECK(mmdyn::pow(*Rational::parse("3/2"), 0) == Rational(1));
}

TEST_CASE("intervals") {
    Interval iv(*Rational::parse("1/4"), *Rational::parse("3/4"));
    CHECK(iv.length().str() == "1/2");
    CHECK(iv.contains(*Rational::parse("1/4")));
    CHECK(!iv.contains_interior(*Rational::parse("1/4")));
    CHECK(iv.contains_interior(*Rational::parse("1/2")));
    CHECK(Interval::point(Rational(1)).degenerate());
    CHECK(!mmdyn::intersect(Interval(Rational(0), *Rational::parse("1/4")),
                            Interval(*Rational::parse("1/2"), Rational(1))));
    auto meet = mmdyn::intersect(iv, Interval(Rational(0), *Rational::parse("1/2")));
    REQUIRE(meet);
    CHECK(meet->lo.str() == "1/4");
    CHECK(meet->hi.str() == "1/2");
}
