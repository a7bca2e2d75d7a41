#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace distlab {

// Exact rational; mpq_class keeps values canonical after every operation.
using Rational = mpq_class;

// Accepts "p", "-p" or "p/q". Throws InvalidParam on malformed text or q == 0.
Rational parse_rational(std::string_view text);

// "p" for integers, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& q);

// Display-only decimal with the given number of significant digits.
std::string to_decimal(const Rational& q, int significant = 6);

bool is_power_of_two(const Rational& q, long* exponent = nullptr);

}  // namespace distlab
