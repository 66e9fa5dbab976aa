#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysched/rational.hpp"

using ds::Rat;

TEST_CASE("construction normalizes") {
    CHECK(Rat(6, 4) == Rat(3, 2));
    CHECK(Rat(-6, 4) == Rat(-3, 2));
    CHECK(Rat(6, -4) == Rat(-3, 2));
    CHECK(Rat(0, 7) == Rat(0));
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
    CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
    CHECK(Rat(3) - Rat(1, 2) == Rat(5, 2));
    CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
    CHECK(Rat(1, 2) / Rat(1, 4) == Rat(2));
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
    // Associativity survives mixed denominators without drift.
    Rat acc(0);
    for (int i = 0; i < 7 * 11 * 13; ++i) acc += Rat(1, 7 * 11 * 13);
    CHECK(acc == Rat(1));
}

TEST_CASE("comparison is exact, not float-based") {
    CHECK(Rat(1, 3) < Rat(34, 100));
    CHECK(Rat(1, 3) > Rat(33, 100));
    CHECK(Rat(10000000000LL, 3) > Rat(9999999999LL, 3));
    CHECK(Rat(1, 2) <= Rat(2, 4));
    CHECK(Rat(1, 2) >= Rat(2, 4));
}

TEST_CASE("floor") {
    CHECK(Rat(7, 2).floor() == 3);
    CHECK(Rat(-7, 2).floor() == -4);
    CHECK(Rat(4).floor() == 4);
}

TEST_CASE("double round trip is exact for dyadics") {
    for (double x : {0.0, 1.0, 0.5, 0.375, 13.625, 1e6 + 0.25}) {
        CHECK(Rat::from_double(x).to_double() == x);
    }
    // 1/3 is not a dyadic rational; conversion captures the double exactly.
    Rat third = Rat::from_double(1.0 / 3.0);
    CHECK(third.to_double() == 1.0 / 3.0);
    CHECK(third != Rat(1, 3));
}

TEST_CASE("string round trip") {
    CHECK(Rat(5, 3).str() == "5/3");
    CHECK(Rat(4).str() == "4");
    CHECK(Rat::parse("5/3") == Rat(5, 3));
    CHECK(Rat::parse("-7/2") == Rat(-7, 2));
    CHECK(Rat::parse("12") == Rat(12));
}

TEST_CASE("overflow is detected, not wrapped") {
    Rat big(INT64_MAX / 2);
    CHECK_THROWS_AS(big * big, ds::overflow_error);
}
