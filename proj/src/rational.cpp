#include "cantordyn/rational.hpp"

#include <stdexcept>

namespace cdyn {

Rational pow2_neg(std::size_t k) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  Rational r(mpz_class(1), den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::size_t i = 0;
  if (text[0] == '-') i = 1;
  bool slash = false;
  bool digit_before = false, digit_after = false;
  for (std::size_t j = i; j < text.size(); ++j) {
    char c = text[j];
    if (c == '/') {
      if (slash) throw std::invalid_argument("bad rational: " + text);
      slash = true;
    } else if (c >= '0' && c <= '9') {
      (slash ? digit_after : digit_before) = true;
    } else {
      throw std::invalid_argument("bad rational: " + text);
    }
  }
  if (!digit_before || (slash && !digit_after)) throw std::invalid_argument("bad rational: " + text);
  Rational r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  r.canonicalize();
  return r;
}

}  // namespace cdyn
