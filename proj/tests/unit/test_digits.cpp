#include <doctest.h>

#include <numeric>
#include <random>

#include "flowlab/digits.hpp"
#include "oracles/oracles.hpp"

using flowlab::digits::DigitError;
using flowlab::digits::DigitStream;
using flowlab::digits::Tail;
namespace dg = flowlab::digits;

namespace {

DigitStream rational(std::uint64_t p, std::uint64_t q) {
    auto [prefix, block] = oracle::periodic_bits(p, q);
    if (block == std::vector<std::uint8_t>{0}) return DigitStream::terminating(2, prefix);
    return DigitStream::repeating(2, prefix, block);
}

}  // namespace

TEST_CASE("parse accepts the documented spellings") {
    CHECK(DigitStream::parse("0.0101").tail() == Tail::TerminatingZeros);
    const auto a = DigitStream::parse("0.01(10)");
    const auto b = DigitStream::parse("0.01(rep=10)");
    CHECK(a == b);
    CHECK(a.tail() == Tail::Repeating);
    CHECK(DigitStream::parse("0.0101...").tail() == Tail::Unspecified);
    CHECK(DigitStream::parse("0.(0110)").to_string() == "0.(rep=0110)");
    CHECK_THROWS_AS(DigitStream::parse("0.0201"), DigitError);
    CHECK_THROWS_AS(DigitStream::parse("1.01"), DigitError);
    CHECK(DigitStream::parse("0.(12)", 4).base() == 4);
}

TEST_CASE("unspecified tails refuse digits they do not have") {
    const auto s = DigitStream::parse("0.0110...");
    CHECK(s.available() == 4);
    CHECK(s.digit(4) == 0);
    CHECK_THROWS_WITH_AS(s.digit(5), doctest::Contains("undecidable at depth"), DigitError);
    CHECK_THROWS_AS(dg::in_Z(s), DigitError);
}

TEST_CASE("in_Z examples") {
    CHECK(dg::in_Z(DigitStream::parse("0.101")));
    CHECK_FALSE(dg::in_Z(DigitStream::parse("0.(01)")));
    CHECK_FALSE(dg::in_Z(DigitStream::parse("0.(0110)")));
    // 0.0(1) = 1/4 written with a tail of ones
    CHECK(dg::in_Z(DigitStream::parse("0.0(1)")));
}

TEST_CASE("in_Z agrees with rational reduction for all j / 2^i, i <= 10") {
    for (std::uint64_t i = 1; i <= 10; ++i) {
        const std::uint64_t q = 1ULL << i;
        for (std::uint64_t j = 1; j < q; ++j) CHECK(dg::in_Z(rational(j, q)));
    }
    for (std::uint64_t q : {3, 5, 6, 7, 9, 11, 12, 13, 15, 24, 96})
        for (std::uint64_t p = 1; p < q; ++p) {
            const bool dyadic = (q / std::gcd(p, q) & (q / std::gcd(p, q) - 1)) == 0;
            CHECK(dg::in_Z(rational(p, q)) == dyadic);
        }
}

TEST_CASE("base conversion examples") {
    CHECK(dg::base4_to_base2(DigitStream::parse("0.(1)", 4)).normalized() == DigitStream::parse("0.(01)"));
    CHECK(dg::base4_to_base2(DigitStream::parse("0.2", 4)).normalized() == DigitStream::parse("0.1"));
    CHECK(dg::base4_to_base2(DigitStream::parse("0.(12)", 4)).normalized() == DigitStream::parse("0.(0110)"));
}

TEST_CASE("base 4 and base 2 round trip at every depth") {
    std::mt19937_64 eng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint8_t> pre(eng() % 6), blk(1 + eng() % 5);
        for (auto& d : pre) d = eng() % 4;
        for (auto& d : blk) d = eng() % 4;
        const auto s4 = DigitStream::repeating(4, pre, blk);
        const auto s2 = dg::base4_to_base2(s4);
        const auto back = dg::base2_to_base4(s2);
        for (std::size_t n = 1; n <= 20; ++n) {
            CHECK(s2.value(2 * n) == s4.value(n));
            CHECK(back.value(n) == s4.value(n));
        }
    }
}

TEST_CASE("value converges within base^-n") {
    const auto s = rational(2, 5);
    for (std::size_t n = 1; n < 50; ++n) {
        const long double err = 0.4L - s.value(n);
        CHECK(err >= 0);
        CHECK(err <= std::ldexp(1.0L, -static_cast<int>(n)));
    }
}

TEST_CASE("long division oracle matches the parsed streams") {
    const auto bits = oracle::long_division_bits(2, 5, 40);
    const auto s = DigitStream::parse("0.(0110)");
    for (std::size_t k = 1; k <= 40; ++k) CHECK(s.digit(k) == bits[k - 1]);
}

TEST_CASE("deinterleave examples") {
    auto [o1, e1] = dg::deinterleave(DigitStream::parse("0.(0110)"), 20);
    CHECK(o1.normalized() == DigitStream::parse("0.(01)"));
    CHECK(e1.normalized() == DigitStream::parse("0.(10)"));
    auto [o2, e2] = dg::deinterleave(DigitStream::parse("0.0000"), 20);
    CHECK(dg::in_Z(o2));
    CHECK(o2.value(20) == 0);
    CHECK(e2.value(20) == 0);
    auto [o3, e3] = dg::deinterleave(DigitStream::parse("0.(01)"), 20);
    CHECK(o3.value(20) == 0);
    CHECK(e3.normalized() == DigitStream::parse("0.(1)"));
    CHECK(dg::has_degenerate_interleave_tail(DigitStream::parse("0.(01)")));
    CHECK_FALSE(dg::has_degenerate_interleave_tail(DigitStream::parse("0.(0110)")));
}

TEST_CASE("deinterleave needs 2 * depth digits of an unspecified stream") {
    const auto s = DigitStream::parse("0.011010...");
    CHECK_NOTHROW(dg::deinterleave(s, 3));
    CHECK_THROWS_AS(dg::deinterleave(s, 4), DigitError);
}

TEST_CASE("interleave inverts deinterleave on all bit strings up to length 16") {
    for (std::size_t len = 2; len <= 16; len += 2) {
        for (std::uint64_t code = 0; code < (1ULL << len); ++code) {
            std::vector<std::uint8_t> bits(len);
            for (std::size_t k = 0; k < len; ++k) bits[k] = (code >> (len - 1 - k)) & 1;
            const auto s = DigitStream::terminating(2, bits);
            auto [odd, even] = dg::deinterleave(s, len / 2);
            const auto back = dg::interleave(odd, even, len / 2);
            bool same = true;
            for (std::size_t k = 1; k <= len; ++k) same = same && back.digit(k) == bits[k - 1];
            if (!same) FAIL("round trip broke for length " << len << " code " << code);
        }
    }
}

TEST_CASE("repeating streams interleave with the lcm period") {
    const auto s = dg::interleave(DigitStream::parse("0.(01)"), DigitStream::parse("0.(10)"), 0);
    CHECK(s.normalized() == DigitStream::parse("0.(0110)"));
    const auto t = dg::interleave(DigitStream::parse("0.(011)"), DigitStream::parse("0.(1)"), 0);
    auto [o, e] = dg::deinterleave(t, 0);
    CHECK(o.normalized() == DigitStream::parse("0.(011)"));
    CHECK(e.normalized() == DigitStream::parse("0.(1)"));
}

TEST_CASE("from_binary is exact for doubles") {
    CHECK(DigitStream::from_binary(0.625L) == DigitStream::parse("0.101"));
    const double x = 0.1;
    CHECK(DigitStream::from_binary(x).value(200) == static_cast<long double>(x));
    CHECK(dg::in_Z(DigitStream::from_binary(x)));
}

TEST_CASE("representative of a truncated stream is the interval midpoint") {
    const auto s = DigitStream::parse("0.01...");
    CHECK(s.representative() == doctest::Approx(0.375));
    CHECK(DigitStream::parse("0.(01)").representative() == doctest::Approx(1.0 / 3).epsilon(1e-15));
}
