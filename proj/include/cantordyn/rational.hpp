#pragma once

#include <gmpxx.h>

#include <string>

namespace cdyn {

using Rational = mpq_class;

// 2^(-k)
Rational pow2_neg(std::size_t k);

// p/q, or p when q = 1
std::string to_string(const Rational& q);

// accepts "p", "p/q", "-p/q"; throws std::invalid_argument otherwise
Rational parse_rational(const std::string& text);

}  // namespace cdyn
