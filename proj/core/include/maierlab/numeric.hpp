#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

namespace maierlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 50 decimal digits; products over primes are accumulated here so the
// double-precision values handed out are correctly rounded.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

/// Euler-Mascheroni constant, 30+ digits.
inline constexpr const char* kEulerGammaDigits =
    "0.577215664901532860606512090082402431";

double euler_gamma();

}  // namespace maierlab
