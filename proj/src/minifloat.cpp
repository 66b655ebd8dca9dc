#include "bealab/minifloat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bealab {

FloatFormat::FloatFormat(int e, int m) : exponent_bits(e), mantissa_bits(m) {
    if (e < 2 || m < 1) throw std::invalid_argument("float format: need e >= 2 and m >= 1");
    if (e + m + 1 > 64) throw std::invalid_argument("float format: too wide");
    if (e > 11 || m > 52)
        throw std::invalid_argument("float format: exceeds double-precision emulation range");
}

double FloatFormat::max_finite() const {
    return std::ldexp(2.0 - std::ldexp(1.0, -mantissa_bits), emax());
}

double FloatFormat::min_subnormal() const {
    return std::ldexp(1.0, emin() - mantissa_bits);
}

std::string FloatFormat::str() const {
    return "e" + std::to_string(exponent_bits) + "m" + std::to_string(mantissa_bits);
}

FloatFormat FloatFormat::parse(const std::string& s) {
    if (s == "binary16") return FloatFormat(5, 10);
    if (s == "binary32") return FloatFormat(8, 23);
    if (s == "binary64") return FloatFormat(11, 52);
    if (s.size() >= 4 && (s[0] == 'e' || s[0] == 'E')) {
        const size_t mpos = s.find_first_of("mM", 1);
        if (mpos != std::string::npos && mpos > 1 && mpos + 1 < s.size()) {
            try {
                const int e = std::stoi(s.substr(1, mpos - 1));
                const int m = std::stoi(s.substr(mpos + 1));
                return FloatFormat(e, m);
            } catch (const std::logic_error&) {
            }
        }
    }
    throw std::invalid_argument("cannot parse float format: " + s);
}

namespace {

// exact for v <= 2^53; independent of the processor rounding mode
double round_half_even(double v) {
    const double fl = std::floor(v);
    const double diff = v - fl;
    if (diff > 0.5) return fl + 1.0;
    if (diff < 0.5) return fl;
    return std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
}

}  // namespace

double round_to_format(double x, const FloatFormat& f) {
    if (std::isnan(x)) return x;
    if (std::isinf(x)) return x;
    if (x == 0.0) return x;

    const double ax = std::abs(x);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    int k = 0;
    std::frexp(ax, &k);
    int E = k - 1;  // ax in [2^E, 2^(E+1))
    if (E < f.emin()) E = f.emin();

    // scaling by a power of two is exact, so the half-ulp comparison below is
    // the true one; the double has enough spare precision for every supported
    // format that this single rounding equals rounding the real value directly
    const double q = std::ldexp(1.0, E - f.mantissa_bits);
    const double r = round_half_even(ax / q);
    const double w = r * q;
    if (w > f.max_finite()) return sign * std::numeric_limits<double>::infinity();
    return sign * w;
}

uint64_t encode(double x, const FloatFormat& f) {
    const int m = f.mantissa_bits;
    const uint64_t exp_all1 = (1ull << f.exponent_bits) - 1;
    const uint64_t sign = std::signbit(x) ? 1ull << (f.exponent_bits + m) : 0ull;
    if (std::isnan(x)) return (exp_all1 << m) | 1ull;
    if (std::isinf(x)) return sign | (exp_all1 << m);

    const double v = round_to_format(x, f);
    if (std::isinf(v)) return sign | (exp_all1 << m);
    const double av = std::abs(v);
    if (av == 0.0) return sign;

    int k = 0;
    std::frexp(av, &k);
    const int E = k - 1;
    if (E < f.emin()) {
        const auto mant = (uint64_t)(av / f.min_subnormal());
        return sign | mant;
    }
    const auto full = (uint64_t)(av / std::ldexp(1.0, E - m));  // in [2^m, 2^(m+1))
    const uint64_t mant = full - (1ull << m);
    const auto code = (uint64_t)(E + f.bias());
    return sign | (code << m) | mant;
}

double decode(uint64_t bits, const FloatFormat& f) {
    const int m = f.mantissa_bits;
    const uint64_t exp_all1 = (1ull << f.exponent_bits) - 1;
    const uint64_t mant = bits & ((1ull << m) - 1);
    const uint64_t code = (bits >> m) & exp_all1;
    const double sign = (bits >> (f.exponent_bits + m)) & 1ull ? -1.0 : 1.0;
    if (code == exp_all1) {
        if (mant != 0) return std::numeric_limits<double>::quiet_NaN();
        return sign * std::numeric_limits<double>::infinity();
    }
    if (code == 0) return sign * (double)mant * f.min_subnormal();
    return sign * std::ldexp((double)((1ull << m) + mant), (int)code - f.bias() - m);
}

double unit_roundoff(const FloatFormat& f) {
    return std::ldexp(1.0, -f.mantissa_bits - 1);
}

std::vector<MiniFloat> enumerate_unit_interval(const FloatFormat& f) {
    if (f.count_in_unit_interval() > (1ull << 26))
        throw std::invalid_argument("enumeration too large for " + f.str());
    const uint64_t start = f.bits_of_one();
    std::vector<MiniFloat> out;
    out.reserve(start + 1);
    for (uint64_t b = start;; --b) {
        out.push_back({b, decode(b, f)});
        if (b == 0) break;
    }
    return out;
}

int64_t descending_index(double x, const FloatFormat& f) {
    return (int64_t)f.bits_of_one() - (int64_t)encode(x, f) + 1;
}

MapId parse_map(const std::string& s) {
    if (s == "gauss") return MapId::gauss;
    if (s == "logistic") return MapId::logistic;
    if (s == "bernoulli") return MapId::bernoulli;
    if (s == "identity") return MapId::identity;
    throw std::invalid_argument("unknown map: " + s);
}

std::string map_name(MapId m) {
    switch (m) {
        case MapId::gauss: return "gauss";
        case MapId::logistic: return "logistic";
        case MapId::bernoulli: return "bernoulli";
        case MapId::identity: return "identity";
    }
    return "?";
}

double map_eval(double x, MapId map, const FloatFormat& f) {
    if (std::isnan(x)) return x;
    switch (map) {
        case MapId::identity:
            return x;
        case MapId::gauss: {
            if (x == 0.0) return 0.0;
            const double r = round_to_format(1.0 / x, f);
            return round_to_format(r - std::floor(r), f);  // inf - inf lands on NaN
        }
        case MapId::logistic: {
            const double a = round_to_format(4.0 * x, f);
            const double b = round_to_format(1.0 - x, f);
            return round_to_format(a * b, f);
        }
        case MapId::bernoulli: {
            const double a = round_to_format(2.0 * x, f);
            return round_to_format(a - std::floor(a), f);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace bealab
