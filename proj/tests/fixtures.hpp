#pragma once

#include "cantordyn/homeo.hpp"

namespace cdyn::fx {

inline Signature dy() { return Signature(); }
inline ClopenSet cyl(const char* w) { return ClopenSet::cylinder(dy(), parse_word(dy(), w)); }
inline ClopenSet set(std::initializer_list<const char*> ws) {
  std::vector<Word> v;
  for (const char* w : ws) v.push_back(parse_word(dy(), w));
  return ClopenSet::from_words(dy(), v);
}
inline Point pt(const char* s) { return parse_point(dy(), s); }
inline Homeo tp(std::initializer_list<std::pair<const char*, const char*>> br, const Signature& sig = Signature()) {
  std::vector<Branch> b;
  for (auto& [u, v] : br) b.push_back({parse_word(sig, u), parse_word(sig, v)});
  return tree_pair(sig, b);
}
// 0 -> 00, 10 -> 01, 11 -> 1
inline Homeo dissipative() { return tp({{"0", "00"}, {"10", "01"}, {"11", "1"}}); }
// cyclic truncation of the odometer at depth t: x -> x+1 on words of length t, carry dropped
inline Homeo truncation(const Signature& sig, std::size_t t) {
  std::vector<Branch> b;
  const std::uint64_t p = sig.count(t);
  for (std::uint64_t v = 0; v < p; ++v) b.push_back({value_word(sig, v, t), value_word(sig, (v + 1) % p, t)});
  return tree_pair(sig, b);
}

}  // namespace cdyn::fx
