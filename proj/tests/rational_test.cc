#include "rational.h"

#include <doctest.h>

#include <stdexcept>

using rationals::Rational;

TEST_CASE("make canonicalizes and validates") {
    CHECK(rationals::to_string(rationals::make(4, 8)) == "1/2");
    CHECK(rationals::to_string(rationals::make(-4, 8)) == "-1/2");
    CHECK(rationals::to_string(rationals::make(4, -8)) == "-1/2");
    CHECK(rationals::to_string(rationals::make(0, 5)) == "0");
    CHECK(rationals::make(3) == rationals::make(6, 2));
    CHECK_THROWS_AS(rationals::make(1, 0), std::invalid_argument);
}

TEST_CASE("parse accepts integers, fractions and decimals") {
    CHECK(rationals::parse("3") == rationals::make(3));
    CHECK(rationals::parse("-4/5") == rationals::make(-4, 5));
    CHECK(rationals::parse("0.25") == rationals::make(1, 4));
    CHECK(rationals::parse(".5") == rationals::make(1, 2));
    CHECK(rationals::parse("-1.5") == rationals::make(-3, 2));
    CHECK(rationals::parse("4/8") == rationals::make(1, 2));
    CHECK(rationals::parse("  9/10 ") == rationals::make(9, 10));
}

TEST_CASE("parse rejects malformed literals") {
    for (const char *bad : {"", " ", "x", "1/", "/2", "1/0", "1.2.3", "1e5", "2-3"})
        CHECK_THROWS_AS(rationals::parse(bad), std::invalid_argument);
}

TEST_CASE("exact arithmetic survives round trips") {
    Rational third = rationals::make(1, 3);
    CHECK(third + third + third == 1);
    CHECK(rationals::parse(rationals::to_string(rationals::make(36, 41))) == rationals::make(36, 41));
    CHECK(rationals::to_double(rationals::make(9, 10)) == doctest::Approx(0.9));
}
