#pragma once

#include <gmpxx.h>

#include <string>

#include "radsum/ball.hpp"

namespace radsum {

/// Parses "a/b", an integer, or a decimal with optional exponent
/// ("-0.125", "1e-3", "2.5E+4") into the exact rational it denotes.
mpq_class parse_rational(const std::string& text);

/// parse_rational restricted to integers.
mpz_class parse_integer(const std::string& text);

enum class Rounding { nearest, up };

/// x to the given number of significant digits.  Rounding::up rounds the
/// magnitude away from zero.
std::string format_decimal(const mpq_class& x, int significant, Rounding mode = Rounding::nearest);

/// A decimal midpoint and radius whose interval encloses the ball.
struct DecimalInterval {
    std::string mid;
    std::string rad;
};

DecimalInterval to_decimal(const Ball& b, int min_digits = 6);

}  // namespace radsum
