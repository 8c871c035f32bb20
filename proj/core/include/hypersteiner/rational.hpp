#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hypersteiner {

/// Exact rational number. All costs, LP values and potentials use it.
using Rational = mpq_class;

/// Parses "3", "-2", "1.5", "3/4" or "2.5e-1" exactly. Throws InvalidArgument.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" (or "num" when den == 1).
std::string to_string(const Rational& value);

/// Decimal rendering rounded to `digits` fractional digits.
std::string to_decimal(const Rational& value, int digits = 6);

double to_double(const Rational& value);

/// H(n) = 1 + 1/2 + ... + 1/n, with H(0) = 0. Memoized.
Rational harmonic(int n);

/// Least common multiple of the denominators (1 for an empty span).
mpz_class lcm_of_denominators(std::span<const Rational> values);

/// Converts an integral rational to int64; throws InvariantViolation otherwise.
std::int64_t to_int64(const Rational& value);

}  // namespace hypersteiner
