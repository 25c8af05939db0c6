#pragma once

#include <cstddef>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rpqshap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(std::size_t n);
BigInt binomial(std::size_t n, std::size_t k);

/// Probability that a uniformly random ordering of `players` players puts
/// exactly a fixed coalition of size `coalition` in front of a fixed outside
/// player: coalition! * (players - coalition - 1)! / players!.
Rational shapley_weight(std::size_t coalition, std::size_t players);

/// Renders "num/den", or just "num" for integers.
std::string to_string(const Rational& value);

/// Parses the output of to_string.
Rational parse_rational(const std::string& text);

}  // namespace rpqshap
