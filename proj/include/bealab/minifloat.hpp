#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bealab {

// parameterized binary float layout with IEEE-style conventions: hidden bit,
// gradual underflow, all-ones exponent reserved for inf/NaN
struct FloatFormat {
    int exponent_bits = 5;
    int mantissa_bits = 10;

    FloatFormat() = default;
    FloatFormat(int e, int m);

    int bias() const { return (1 << (exponent_bits - 1)) - 1; }
    int emin() const { return 1 - bias(); }  // smallest normal exponent
    int emax() const { return bias(); }
    double max_finite() const;
    double min_subnormal() const;
    uint64_t count_in_unit_interval() const {
        return ((uint64_t)bias() << mantissa_bits) + 1;
    }
    uint64_t bits_of_one() const { return (uint64_t)bias() << mantissa_bits; }
    std::string str() const;

    // accepts "e3m4" style strings and the names binary16/binary32/binary64
    static FloatFormat parse(const std::string& s);
};

// round-to-nearest, ties-to-even; overflow to infinity, gradual underflow
double round_to_format(double x, const FloatFormat& f);

// bit pattern of round_to_format(x)
uint64_t encode(double x, const FloatFormat& f);
double decode(uint64_t bits, const FloatFormat& f);

// 2^(-mantissa_bits - 1)
double unit_roundoff(const FloatFormat& f);

struct MiniFloat {
    uint64_t bits = 0;
    double value = 0.0;
};

// all representable values from exactly 1.0 down to 0.0, strictly decreasing;
// length = bias * 2^mantissa_bits + 1
std::vector<MiniFloat> enumerate_unit_interval(const FloatFormat& f);

// 1-based position of an in-format value of [0,1] in the descending
// enumeration (1 -> value 1.0)
int64_t descending_index(double x, const FloatFormat& f);

enum class MapId { gauss, logistic, bernoulli, identity };
MapId parse_map(const std::string& s);
std::string map_name(MapId m);

// evaluates one map step with every elementary operation rounded into the
// format; NaN propagates, and gauss overflow of 1/x lands on NaN
double map_eval(double x, MapId map, const FloatFormat& f);

}  // namespace bealab
