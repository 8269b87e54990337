#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bbs {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline int sign_of(const Rat& x) {
    if (x > 0) return 1;
    if (x < 0) return -1;
    return 0;
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// floor(x) as a big integer
inline BigInt rat_floor(const Rat& x) {
    BigInt q = numerator(x) / denominator(x);
    if (x < 0 && q * denominator(x) != numerator(x)) --q;
    return q;
}

// ceil(x) as a big integer
inline BigInt rat_ceil(const Rat& x) { return -rat_floor(Rat(-x)); }

inline long long to_ll(const BigInt& x) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
        throw std::overflow_error("bigint out of int64 range: " + x.str());
    return static_cast<long long>(x);
}

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

inline std::string rat_to_string(const Rat& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

// parses "a" or "a/b" (b > 0 after normalization)
inline Rat parse_rat(const std::string& s) {
    auto pos = s.find('/');
    try {
        if (pos == std::string::npos) return Rat(BigInt(s));
        BigInt num(s.substr(0, pos));
        BigInt den(s.substr(pos + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline double to_double(const Rat& x) { return static_cast<double>(x); }

// deterministic rational approximation of v with denominator 2^24
inline Rat rat_from_double(double v) {
    const long long den = 1LL << 24;
    return Rat(BigInt(static_cast<long long>(v * static_cast<double>(den))), BigInt(den));
}

}  // namespace bbs
