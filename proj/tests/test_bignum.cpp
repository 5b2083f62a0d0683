#include <doctest.h>

#include <cmath>

#include "veerflow/bignum.hpp"

using namespace veerflow;

TEST_CASE("bignat arithmetic against 64-bit reference") {
    std::uint64_t s = 88172645463325252ull;
    auto rnd = [&] {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s >> 34;  // keep products in range
    };
    for (int i = 0; i < 500; ++i) {
        std::uint64_t a = rnd(), b = rnd() + 1;
        CHECK(BigNat(a) + BigNat(b) == BigNat(a + b));
        CHECK(BigNat(a) * BigNat(b) == BigNat(a * b));
        CHECK(BigNat(a) / BigNat(b) == BigNat(a / b));
        CHECK(BigNat(a) % BigNat(b) == BigNat(a % b));
        CHECK(BigNat::cmp(BigNat(a), BigNat(b)) == (a < b ? -1 : (a > b ? 1 : 0)));
    }
}

TEST_CASE("bignat decimal round trip and big powers") {
    BigNat x(1);
    for (int i = 0; i < 40; ++i) x = x * BigNat(12);  // 12^40, past 128 bits
    CHECK(BigNat::from_string(x.to_string()) == x);
    CHECK(x.to_string() == "14697715679690864505827555550150426126974976");
    CHECK(std::abs(x.log() - 40.0 * std::log(12.0)) < 1e-12);
    BigNat rem;
    BigNat q = BigNat::divmod(x, BigNat(1000000007), rem);
    CHECK(q * BigNat(1000000007) + rem == x);
}

TEST_CASE("bigint and rational normalization") {
    CHECK(BigInt(-5) + BigInt(7) == BigInt(2));
    CHECK(BigInt(-5) * BigInt(-3) == BigInt(15));
    CHECK(BigInt::gcd(BigInt(-12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::from_string("-123456789123456789").to_string() == "-123456789123456789");

    Rational r(6, -4);
    CHECK(r.num() == BigInt(-3));
    CHECK(r.den() == BigInt(2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK((Rational(5, 7) / Rational(5, 7)) == Rational(1));
}
