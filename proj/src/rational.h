#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rationals {

/*
  Exact rational arithmetic for probabilities, weights and rewards.
  Everything the checkers compare is compared with these, never with
  floating point. Values are kept canonical (reduced, denominator > 0),
  which mpq_class guarantees for arithmetic results; construction goes
  through make()/parse() so user-supplied values are canonical too.
*/
using Rational = mpq_class;

// num/den in canonical form. den must not be zero.
Rational make(long long num, long long den = 1);

// Accepts "3", "-4/5", "0.25", ".5". Decimal forms convert exactly.
// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse(std::string_view text);

// Canonical rendering: "num" or "num/den".
std::string to_string(const Rational &q);

double to_double(const Rational &q);

}  // namespace rationals
