#include <doctest.h>

#include "jsw/bigint.hpp"

using namespace jsw;

TEST_CASE("bigint arithmetic against 64-bit references") {
    // deterministic pseudo-random pairs
    uint64_t state = 12345;
    auto next = [&state] {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    for (int i = 0; i < 2000; ++i) {
        long long a = static_cast<long long>(next() % 2000001) - 1000000;
        long long b = static_cast<long long>(next() % 2000001) - 1000000;
        BigInt ba(a), bb(b);
        CHECK((ba + bb).to_i64() == a + b);
        CHECK((ba - bb).to_i64() == a - b);
        CHECK((ba * bb).to_i64() == a * b);
        if (b != 0) {
            CHECK((ba / bb).to_i64() == a / b);
            CHECK((ba % bb).to_i64() == a % b);
        }
        CHECK(BigInt::cmp(ba, bb) == (a < b ? -1 : a > b ? 1 : 0));
    }
}

TEST_CASE("bigint decimal round trip and big magnitudes") {
    BigInt x = BigInt::from_decimal("123456789012345678901234567890");
    CHECK(x.to_string() == "123456789012345678901234567890");
    CHECK((x * BigInt(0)).to_string() == "0");
    CHECK((-x).to_string() == "-123456789012345678901234567890");
    BigInt y = BigInt::pow10(30);
    CHECK(y.to_string() == "1" + std::string(30, '0'));
    BigInt q, r;
    BigInt::divmod(y, x, q, r);
    CHECK((q * x + r) == y);
}

TEST_CASE("gcd and lcm") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(-12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::lcm(BigInt(4), BigInt(6)) == BigInt(12));
    CHECK(BigInt::gcd(BigInt(0), BigInt(7)) == BigInt(7));
}

TEST_CASE("rational parsing is exact") {
    CHECK(Rational::from_decimal_string("0.10") == Rational(BigInt(1), BigInt(10)));
    CHECK(Rational::from_decimal_string("1") == Rational(1));
    CHECK(Rational::from_decimal_string("1.0") == Rational(1));
    CHECK(Rational::from_decimal_string("-2.5") == Rational(BigInt(-5), BigInt(2)));
    CHECK(Rational::from_decimal_string("1e3") == Rational(1000));
    CHECK(Rational::from_decimal_string("1.5e-2") == Rational(BigInt(3), BigInt(200)));
    CHECK(Rational::from_decimal_string("0.0075") ==
          Rational(BigInt(75), BigInt(10000)));
}

TEST_CASE("rational ordering and multiples") {
    Rational a = Rational::from_decimal_string("0.0075");
    Rational b = Rational::from_decimal_string("0.0001");
    CHECK(a.is_multiple_of(b));
    CHECK(!b.is_multiple_of(a));
    CHECK(Rational(9).is_multiple_of(Rational(3)));
    CHECK(!Rational(10).is_multiple_of(Rational(3)));
    CHECK(Rational(3) < Rational(BigInt(10), BigInt(3)));
    CHECK(Rational::from_decimal_string("1.5").is_multiple_of(Rational::from_decimal_string("0.5")));
}

TEST_CASE("rational lcm matches the smallest common multiple") {
    Rational l = Rational::lcm(Rational::from_decimal_string("0.5"),
                               Rational::from_decimal_string("0.2"));
    CHECK(l == Rational(1));
    CHECK(Rational::lcm(Rational(4), Rational(6)) == Rational(12));
    Rational t = Rational::lcm(Rational(BigInt(3), BigInt(4)), Rational(BigInt(5), BigInt(6)));
    CHECK(t.is_multiple_of(Rational(BigInt(3), BigInt(4))));
    CHECK(t.is_multiple_of(Rational(BigInt(5), BigInt(6))));
}

TEST_CASE("decimal rendering is shortest and exact") {
    CHECK(Rational(BigInt(1), BigInt(10)).to_decimal_string() == "0.1");
    CHECK(Rational(5).to_decimal_string() == "5");
    CHECK(Rational(BigInt(-3), BigInt(4)).to_decimal_string() == "-0.75");
    CHECK(Rational(BigInt(1), BigInt(8)).to_decimal_string() == "0.125");
    CHECK(Rational(BigInt(1), BigInt(10)).is_decimal());
    CHECK(!Rational(BigInt(1), BigInt(3)).is_decimal());
    CHECK(Rational(BigInt(100), BigInt(4)).to_decimal_string() == "25");
}

TEST_CASE("floor and ceil") {
    CHECK(Rational(BigInt(7), BigInt(2)).floor() == BigInt(3));
    CHECK(Rational(BigInt(7), BigInt(2)).ceil() == BigInt(4));
    CHECK(Rational(BigInt(-7), BigInt(2)).floor() == BigInt(-4));
    CHECK(Rational(BigInt(-7), BigInt(2)).ceil() == BigInt(-3));
    CHECK(Rational(3).floor() == BigInt(3));
    CHECK(Rational(3).ceil() == BigInt(3));
}
