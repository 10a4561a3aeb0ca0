#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nilgraph {

/// Exact rational scalar used by all algebraic code. Always canonical
/// (reduced, positive denominator) after arithmetic.
using Rational = mpq_class;

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

/// Accepts "p" or "p/q" with optional sign. Throws Error(InvalidArgument).
Rational parse_rational(std::string_view text);

}  // namespace nilgraph
