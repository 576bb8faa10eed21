#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rotkit {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p" or "-p/q"; the result is canonicalized.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);

// num/den in lowest terms.
Rational ratio(long num, long den);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);
long to_ll(const Integer& value);

Rational abs_of(const Rational& value);
const Rational& min_of(const Rational& a, const Rational& b);
const Rational& max_of(const Rational& a, const Rational& b);

}  // namespace rotkit
