#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cfl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) { return Rational(BigInt(num), BigInt(den)); }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_fraction_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

/// Parses "p", "p/q" or a terminating decimal such as "0.125".
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

}  // namespace cfl
