#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bealab/minifloat.hpp"

using namespace bealab;

namespace {
const double qnan = std::numeric_limits<double>::quiet_NaN();
const double inf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("unit-interval population counts") {
    CHECK(FloatFormat(3, 4).count_in_unit_interval() == 49);
    CHECK(FloatFormat::parse("binary16").count_in_unit_interval() == 15361);
    CHECK(FloatFormat(4, 3).count_in_unit_interval() == 57);

    const std::vector<std::pair<int, int>> layouts = {{3, 4}, {4, 3}, {5, 2},
                                                      {2, 5}, {4, 5}, {5, 10}};
    for (auto [e, m] : layouts) {
        FloatFormat f(e, m);
        const uint64_t closed = (((uint64_t)1 << (e - 1)) - 1) * ((uint64_t)1 << m) + 1;
        CHECK(f.count_in_unit_interval() == closed);
        CHECK(enumerate_unit_interval(f).size() == closed);
    }
}

TEST_CASE("the descending enumeration is strict and self-consistent") {
    FloatFormat f(3, 4);
    auto vals = enumerate_unit_interval(f);
    REQUIRE(vals.size() == 49);
    CHECK(vals.front().value == 1.0);
    CHECK(vals.back().value == 0.0);
    for (size_t i = 1; i < vals.size(); ++i) CHECK(vals[i].value < vals[i - 1].value);
    for (size_t i = 0; i < vals.size(); ++i) {
        CHECK(round_to_format(vals[i].value, f) == vals[i].value);
        CHECK(descending_index(vals[i].value, f) == (int64_t)i + 1);
        CHECK(decode(vals[i].bits, f) == vals[i].value);
        CHECK(encode(vals[i].value, f) == vals[i].bits);
    }
}

TEST_CASE("rounding is to nearest with ties to even") {
    FloatFormat f(3, 4);
    // spacing above 1.0 is 1/16; halfway cases pick the even mantissa
    CHECK(round_to_format(1.03125, f) == 1.0);
    CHECK(round_to_format(1.09375, f) == 1.125);
    CHECK(round_to_format(1.04, f) == 1.0625);
    CHECK(round_to_format(-1.03125, f) == -1.0);
}

TEST_CASE("rounding is monotone and idempotent on a fine sweep") {
    FloatFormat f(3, 4);
    double prev = -1.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = i * (1.0 / 2000.0);
        const double r = round_to_format(x, f);
        CHECK(r >= prev);
        CHECK(round_to_format(r, f) == r);
        prev = r;
    }
}

TEST_CASE("overflow lands on infinity at the standard boundary") {
    FloatFormat h = FloatFormat::parse("binary16");
    CHECK(h.max_finite() == 65504.0);
    CHECK(round_to_format(65504.0, h) == 65504.0);
    CHECK(round_to_format(65519.0, h) == 65504.0);
    CHECK(round_to_format(65520.0, h) == inf);
    CHECK(round_to_format(65536.0, h) == inf);
    CHECK(round_to_format(-65536.0, h) == -inf);
}

TEST_CASE("unit roundoff follows the mantissa width") {
    CHECK(unit_roundoff(FloatFormat(3, 4)) == 0x1p-5);
    CHECK(unit_roundoff(FloatFormat::parse("binary16")) == 0x1p-11);
    CHECK(unit_roundoff(FloatFormat::parse("binary64")) == 0x1p-53);
}

TEST_CASE("map steps at exactly representable points") {
    FloatFormat f(3, 4);
    CHECK(map_eval(0.0, MapId::gauss, f) == 0.0);
    CHECK(map_eval(1.0, MapId::gauss, f) == 0.0);   // 1/1 = 1, frac -> 0
    CHECK(map_eval(0.5, MapId::gauss, f) == 0.0);   // 1/0.5 = 2, frac -> 0
    CHECK(map_eval(0.5, MapId::logistic, f) == 1.0);
    CHECK(map_eval(0.75, MapId::bernoulli, f) == 0.5);
    CHECK(map_eval(0.5, MapId::identity, f) == 0.5);
    CHECK(std::isnan(map_eval(qnan, MapId::gauss, f)));
    CHECK(std::isnan(map_eval(qnan, MapId::logistic, f)));
}

TEST_CASE("gauss step equals the two-rounding oracle on every format point") {
    FloatFormat f(3, 4);
    for (const auto& mf : enumerate_unit_interval(f)) {
        const double got = map_eval(mf.value, MapId::gauss, f);
        if (mf.value == 0.0) {
            CHECK(got == 0.0);
            continue;
        }
        const double r = round_to_format(1.0 / mf.value, f);
        double want;
        if (std::isinf(r) || std::isnan(r))
            want = qnan;
        else
            want = round_to_format(r - std::floor(r), f);
        if (std::isnan(want))
            CHECK(std::isnan(got));
        else
            CHECK(got == want);
    }
}

TEST_CASE("format parsing and validation") {
    FloatFormat f = FloatFormat::parse("e3m4");
    CHECK(f.exponent_bits == 3);
    CHECK(f.mantissa_bits == 4);
    CHECK(FloatFormat::parse("binary32").exponent_bits == 8);
    CHECK(FloatFormat::parse("binary64").mantissa_bits == 52);
    CHECK_THROWS_AS((void)FloatFormat::parse("e1m4"), std::invalid_argument);
    CHECK_THROWS_AS((void)FloatFormat::parse("e3m0"), std::invalid_argument);
    CHECK_THROWS_AS((void)FloatFormat::parse("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS((void)FloatFormat(12, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)FloatFormat(6, 60), std::invalid_argument);
}

TEST_CASE("oversized enumerations are refused") {
    CHECK_THROWS_AS((void)enumerate_unit_interval(FloatFormat::parse("binary64")),
                    std::invalid_argument);
}
