#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantordyn/rational.hpp"

namespace cdyn {

struct SignatureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Eventually periodic level sizes lambda_t >= 2.
class Signature {
 public:
  Signature();  // dyadic
  Signature(std::vector<int> preperiod, std::vector<int> period);

  static Signature dyadic() { return Signature(); }

  int radix(std::size_t level) const;
  // number of words of the given length; throws when it exceeds 2^62
  std::uint64_t count(std::size_t length) const;
  // do the level sequences starting at a and at b coincide
  bool tail_equal(std::size_t a, std::size_t b) const;
  bool is_dyadic() const;
  // word strings need separators
  bool wide() const;
  std::size_t max_radix() const;

  const std::vector<int>& preperiod() const { return pre_; }
  const std::vector<int>& period() const { return per_; }

  std::string name() const;

  bool operator==(const Signature& o) const { return pre_ == o.pre_ && per_ == o.per_; }
  bool operator!=(const Signature& o) const { return !(*this == o); }

 private:
  std::vector<int> pre_;
  std::vector<int> per_;
};

using Word = std::vector<int>;

bool is_prefix(const Word& p, const Word& w);
bool comparable(const Word& a, const Word& b);
std::size_t lcp(const Word& a, const Word& b);
Word concat(const Word& a, const Word& b);
Word suffix(const Word& w, std::size_t from);
bool valid_word(const Signature& sig, const Word& w);
std::vector<Word> children(const Signature& sig, const Word& w);
// all words of the given total length extending w (lex order)
std::vector<Word> extensions(const Signature& sig, const Word& w, std::size_t length);
std::vector<Word> all_words(const Signature& sig, std::size_t length);

std::string word_to_string(const Signature& sig, const Word& w);
Word parse_word(const Signature& sig, const std::string& text);

// Mixed-radix value with digit 0 least significant, and its inverse.
std::uint64_t word_value(const Signature& sig, const Word& w);
Word value_word(const Signature& sig, std::uint64_t v, std::size_t length);

// Eventually periodic stream pre . rep rep rep ...; stored in canonical form.
class Point {
 public:
  Point() : rep_{0} {}
  Point(Word pre, Word rep);

  int digit(std::size_t i) const;
  const Word& pre() const { return pre_; }
  const Word& rep() const { return rep_; }
  Word prefix(std::size_t n) const;
  Point drop(std::size_t n) const;
  Point prepend(const Word& w) const;
  bool valid(const Signature& sig) const;
  // index of the first differing digit, or nullopt when equal
  std::optional<std::size_t> first_difference(const Point& o) const;

  bool operator==(const Point& o) const { return pre_ == o.pre_ && rep_ == o.rep_; }
  bool operator!=(const Point& o) const { return !(*this == o); }
  bool operator<(const Point& o) const;

 private:
  Word pre_;
  Word rep_;
};

std::string point_to_string(const Signature& sig, const Point& x);
Point parse_point(const Signature& sig, const std::string& text);

// Canonical finite union of cylinders.
class ClopenSet {
 public:
  explicit ClopenSet(Signature sig = Signature()) : sig_(std::move(sig)) {}

  static ClopenSet empty_set(const Signature& sig) { return ClopenSet(sig); }
  static ClopenSet full(const Signature& sig);
  static ClopenSet cylinder(const Signature& sig, const Word& w);
  // normalizes an arbitrary word list: drops covered words, merges sibling families
  static ClopenSet from_words(const Signature& sig, std::vector<Word> words);
  // throws std::invalid_argument naming the violated rule
  static ClopenSet from_canonical(const Signature& sig, std::vector<Word> words);
  // nullopt when the list is canonical
  static std::optional<std::string> canonical_violation(const Signature& sig, const std::vector<Word>& words);

  const Signature& signature() const { return sig_; }
  const std::vector<Word>& words() const { return words_; }
  bool empty() const { return words_.empty(); }
  bool is_full() const { return words_.size() == 1 && words_[0].empty(); }

  bool contains(const Point& x) const;
  bool contains_cylinder(const Word& c) const;
  bool meets_cylinder(const Word& c) const;
  // this set intersected with [c], as words extending c
  std::vector<Word> words_within(const Word& c) const;
  // words refined so every word has length >= depth
  std::vector<Word> refined(std::size_t depth) const;
  std::size_t max_length() const;

  bool operator==(const ClopenSet& o) const { return sig_ == o.sig_ && words_ == o.words_; }
  bool operator!=(const ClopenSet& o) const { return !(*this == o); }
  bool operator<(const ClopenSet& o) const { return words_ < o.words_; }

 private:
  Signature sig_;
  std::vector<Word> words_;
};

enum class SetOp { Union, Intersect, Complement, Difference };
ClopenSet clopen_algebra(SetOp op, const ClopenSet& a, const ClopenSet* b = nullptr);
ClopenSet unite(const ClopenSet& a, const ClopenSet& b);
ClopenSet intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const ClopenSet& a);
ClopenSet difference(const ClopenSet& a, const ClopenSet& b);
ClopenSet sym_difference(const ClopenSet& a, const ClopenSet& b);
bool subset(const ClopenSet& a, const ClopenSet& b);
bool disjoint(const ClopenSet& a, const ClopenSet& b);
bool is_partition(const std::vector<ClopenSet>& parts, const Signature& sig);

std::string clopen_to_string(const ClopenSet& a);

// d(x,y) = 2^(-first differing level)
Rational point_distance(const Point& x, const Point& y);
Rational diameter(const ClopenSet& a);
Rational set_distance(const ClopenSet& a, const ClopenSet& b);

struct MetricData {
  Rational diameter;
  std::size_t cylinders = 0;
  std::size_t min_depth = 0;
  std::size_t max_depth = 0;
};
MetricData metric_data(const ClopenSet& a);

// Canonical split into m nonempty disjoint parts.
std::vector<ClopenSet> split(const ClopenSet& a, std::size_t m);

}  // namespace cdyn
