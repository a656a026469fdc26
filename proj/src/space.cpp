#include "cantordyn/space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cdyn {

namespace {

template <class T>
std::vector<T> primitive_root(const std::vector<T>& v) {
  const std::size_t n = v.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = v[i] == v[i - d];
    if (ok) return std::vector<T>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return v;
}

template <class T>
void trim_preperiod(std::vector<T>& pre, std::vector<T>& per) {
  while (!pre.empty() && pre.back() == per.back()) {
    std::rotate(per.begin(), per.end() - 1, per.end());
    pre.pop_back();
  }
}

void require_same(const Signature& a, const Signature& b) {
  if (a != b) throw SignatureError("signature mismatch: " + a.name() + " vs " + b.name());
}

ClopenSet make_raw(const Signature& sig, std::vector<Word> words);

// merge complete sibling families in a sorted prefix-free list
std::vector<Word> merge_siblings(const Signature& sig, const std::vector<Word>& words) {
  std::vector<Word> st;
  st.reserve(words.size());
  for (const Word& w : words) {
    st.push_back(w);
    for (;;) {
      const Word& t = st.back();
      if (t.empty()) break;
      const std::size_t level = t.size() - 1;
      const int lam = sig.radix(level);
      if (t.back() != lam - 1 || st.size() < static_cast<std::size_t>(lam)) break;
      bool family = true;
      const std::size_t base = st.size() - static_cast<std::size_t>(lam);
      for (int d = 0; d < lam && family; ++d) {
        const Word& s = st[base + static_cast<std::size_t>(d)];
        family = s.size() == t.size() && s.back() == d && std::equal(s.begin(), s.end() - 1, t.begin());
      }
      if (!family) break;
      Word parent(t.begin(), t.end() - 1);
      st.resize(base);
      st.push_back(std::move(parent));
    }
  }
  return st;
}

void complement_rec(const Signature& sig, Word& prefix, const std::vector<Word>& w, std::size_t lo, std::size_t hi,
                    std::vector<Word>& out) {
  if (lo == hi) {
    out.push_back(prefix);
    return;
  }
  if (w[lo].size() == prefix.size()) return;  // the whole cylinder is in the set
  const int lam = sig.radix(prefix.size());
  std::size_t i = lo;
  for (int d = 0; d < lam; ++d) {
    std::size_t j = i;
    while (j < hi && w[j][prefix.size()] == d) ++j;
    prefix.push_back(d);
    complement_rec(sig, prefix, w, i, j, out);
    prefix.pop_back();
    i = j;
  }
}

}  // namespace

// ---------------------------------------------------------------- Signature

Signature::Signature() : per_{2} {}

Signature::Signature(std::vector<int> preperiod, std::vector<int> period)
    : pre_(std::move(preperiod)), per_(std::move(period)) {
  if (per_.empty()) throw SignatureError("signature period must be nonempty");
  for (int v : pre_)
    if (v < 2) throw SignatureError("level size below 2");
  for (int v : per_)
    if (v < 2) throw SignatureError("level size below 2");
  per_ = primitive_root(per_);
  trim_preperiod(pre_, per_);
}

int Signature::radix(std::size_t level) const {
  if (level < pre_.size()) return pre_[level];
  return per_[(level - pre_.size()) % per_.size()];
}

std::uint64_t Signature::count(std::size_t length) const {
  std::uint64_t c = 1;
  for (std::size_t t = 0; t < length; ++t) {
    const auto r = static_cast<std::uint64_t>(radix(t));
    if (c > (std::uint64_t{1} << 62) / r) throw std::overflow_error("word count overflow");
    c *= r;
  }
  return c;
}

bool Signature::tail_equal(std::size_t a, std::size_t b) const {
  if (a == b) return true;
  const std::size_t n = pre_.size() + per_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (radix(a + i) != radix(b + i)) return false;
  return true;
}

bool Signature::is_dyadic() const { return pre_.empty() && per_.size() == 1 && per_[0] == 2; }

std::size_t Signature::max_radix() const {
  int m = 0;
  for (int v : pre_) m = std::max(m, v);
  for (int v : per_) m = std::max(m, v);
  return static_cast<std::size_t>(m);
}

bool Signature::wide() const { return max_radix() > 10; }

std::string Signature::name() const {
  if (is_dyadic()) return "dyadic";
  std::ostringstream os;
  os << "sig(";
  for (std::size_t i = 0; i < pre_.size(); ++i) os << (i ? "," : "") << pre_[i];
  os << ";";
  for (std::size_t i = 0; i < per_.size(); ++i) os << (i ? "," : "") << per_[i];
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------- words

bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

bool comparable(const Word& a, const Word& b) { return is_prefix(a, b) || is_prefix(b, a); }

std::size_t lcp(const Word& a, const Word& b) {
  std::size_t n = std::min(a.size(), b.size()), i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word suffix(const Word& w, std::size_t from) {
  return from >= w.size() ? Word{} : Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.end());
}

bool valid_word(const Signature& sig, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] < 0 || w[i] >= sig.radix(i)) return false;
  return true;
}

std::vector<Word> children(const Signature& sig, const Word& w) {
  std::vector<Word> out;
  const int lam = sig.radix(w.size());
  out.reserve(static_cast<std::size_t>(lam));
  for (int d = 0; d < lam; ++d) {
    Word c = w;
    c.push_back(d);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Word> extensions(const Signature& sig, const Word& w, std::size_t length) {
  std::vector<Word> cur{w};
  for (std::size_t l = w.size(); l < length; ++l) {
    std::vector<Word> next;
    next.reserve(cur.size() * static_cast<std::size_t>(sig.radix(l)));
    for (const Word& c : cur)
      for (int d = 0; d < sig.radix(l); ++d) {
        Word e = c;
        e.push_back(d);
        next.push_back(std::move(e));
      }
    cur.swap(next);
  }
  return cur;
}

std::vector<Word> all_words(const Signature& sig, std::size_t length) { return extensions(sig, {}, length); }

std::string word_to_string(const Signature& sig, const Word& w) {
  if (w.empty()) return "ε";
  std::string s;
  const bool wide = sig.wide();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

Word parse_word(const Signature& sig, const std::string& text) {
  if (text == "ε" || text == "e") return {};
  Word w;
  if (sig.wide()) {
    std::size_t i = 0;
    while (i <= text.size()) {
      std::size_t j = text.find('.', i);
      if (j == std::string::npos) j = text.size();
      const std::string tok = text.substr(i, j - i);
      if (tok.empty() || tok.size() > 9 || !std::all_of(tok.begin(), tok.end(), ::isdigit))
        throw std::invalid_argument("bad word: " + text);
      w.push_back(std::stoi(tok));
      i = j + 1;
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad word: " + text);
      w.push_back(c - '0');
    }
  }
  if (!valid_word(sig, w)) throw std::invalid_argument("digit out of range in word: " + text);
  return w;
}

std::uint64_t word_value(const Signature& sig, const Word& w) {
  std::uint64_t v = 0, place = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    v += place * static_cast<std::uint64_t>(w[i]);
    place *= static_cast<std::uint64_t>(sig.radix(i));
  }
  return v;
}

Word value_word(const Signature& sig, std::uint64_t v, std::size_t length) {
  Word w(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto r = static_cast<std::uint64_t>(sig.radix(i));
    w[i] = static_cast<int>(v % r);
    v /= r;
  }
  return w;
}

// ---------------------------------------------------------------- Point

Point::Point(Word pre, Word rep) : pre_(std::move(pre)), rep_(std::move(rep)) {
  if (rep_.empty()) throw std::invalid_argument("point needs a nonempty repeating word");
  rep_ = primitive_root(rep_);
  trim_preperiod(pre_, rep_);
}

int Point::digit(std::size_t i) const {
  if (i < pre_.size()) return pre_[i];
  return rep_[(i - pre_.size()) % rep_.size()];
}

Word Point::prefix(std::size_t n) const {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = digit(i);
  return w;
}

Point Point::drop(std::size_t n) const {
  if (n <= pre_.size()) return Point(suffix(pre_, n), rep_);
  Word r = rep_;
  std::rotate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>((n - pre_.size()) % r.size()), r.end());
  return Point({}, r);
}

Point Point::prepend(const Word& w) const { return Point(concat(w, pre_), rep_); }

bool Point::valid(const Signature& sig) const {
  const std::size_t l = std::lcm(rep_.size(), sig.period().size());
  const std::size_t n = pre_.size() + sig.preperiod().size() + l;
  for (std::size_t i = 0; i < n; ++i) {
    const int d = digit(i);
    if (d < 0 || d >= sig.radix(i)) return false;
  }
  return true;
}

std::optional<std::size_t> Point::first_difference(const Point& o) const {
  const std::size_t n = std::max(pre_.size(), o.pre_.size()) + std::lcm(rep_.size(), o.rep_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (digit(i) != o.digit(i)) return i;
  return std::nullopt;
}

bool Point::operator<(const Point& o) const {
  if (pre_ != o.pre_) return pre_ < o.pre_;
  return rep_ < o.rep_;
}

std::string point_to_string(const Signature& sig, const Point& x) {
  auto join = [&](const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (sig.wide() && i) s += '.';
      s += std::to_string(w[i]);
    }
    return s;
  };
  return join(x.pre()) + "(" + join(x.rep()) + ")";
}

Point parse_point(const Signature& sig, const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.empty() || text.back() != ')')
    throw std::invalid_argument("bad point (expected pre(rep)): " + text);
  auto digits = [&](const std::string& s) -> Word {
    Word w;
    if (s.empty()) return w;
    if (sig.wide()) {
      std::size_t i = 0;
      while (i <= s.size()) {
        std::size_t j = s.find('.', i);
        if (j == std::string::npos) j = s.size();
        const std::string tok = s.substr(i, j - i);
        if (tok.empty() || tok.size() > 9 || !std::all_of(tok.begin(), tok.end(), ::isdigit))
          throw std::invalid_argument("bad point: " + text);
        w.push_back(std::stoi(tok));
        i = j + 1;
      }
    } else {
      for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad point: " + text);
        w.push_back(c - '0');
      }
    }
    return w;
  };
  Word pre = digits(text.substr(0, open));
  Word rep = digits(text.substr(open + 1, text.size() - open - 2));
  if (rep.empty()) throw std::invalid_argument("bad point (empty period): " + text);
  Point p(pre, rep);
  if (!p.valid(sig)) throw std::invalid_argument("digit out of range in point: " + text);
  return p;
}

// ---------------------------------------------------------------- ClopenSet

namespace {
ClopenSet make_raw(const Signature& sig, std::vector<Word> words) {
  return ClopenSet::from_words(sig, std::move(words));
}
}  // namespace

ClopenSet ClopenSet::full(const Signature& sig) {
  ClopenSet s(sig);
  s.words_.push_back({});
  return s;
}

ClopenSet ClopenSet::cylinder(const Signature& sig, const Word& w) {
  if (!valid_word(sig, w)) throw std::invalid_argument("digit out of range");
  ClopenSet s(sig);
  s.words_.push_back(w);
  return s;
}

ClopenSet ClopenSet::from_words(const Signature& sig, std::vector<Word> words) {
  for (const Word& w : words)
    if (!valid_word(sig, w)) throw std::invalid_argument("digit out of range");
  std::sort(words.begin(), words.end());
  std::vector<Word> kept;
  kept.reserve(words.size());
  for (Word& w : words)
    if (kept.empty() || !is_prefix(kept.back(), w)) kept.push_back(std::move(w));
  ClopenSet s(sig);
  s.words_ = merge_siblings(sig, kept);
  return s;
}

std::optional<std::string> ClopenSet::canonical_violation(const Signature& sig, const std::vector<Word>& words) {
  for (const Word& w : words)
    if (!valid_word(sig, w)) return std::string("digit out of range");
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (words[i] == words[i - 1]) return std::string("not canonical: duplicate word");
    if (words[i] < words[i - 1]) return std::string("not canonical: unsorted");
    if (is_prefix(words[i - 1], words[i])) return std::string("not canonical: prefix-comparable");
  }
  if (merge_siblings(sig, words) != words) return std::string("not canonical: sibling-complete");
  return std::nullopt;
}

ClopenSet ClopenSet::from_canonical(const Signature& sig, std::vector<Word> words) {
  if (auto v = canonical_violation(sig, words)) throw std::invalid_argument(*v);
  ClopenSet s(sig);
  s.words_ = std::move(words);
  return s;
}

namespace {
// index of the word that is a prefix of w, if any
std::optional<std::size_t> covering(const std::vector<Word>& words, const Word& w) {
  auto it = std::upper_bound(words.begin(), words.end(), w);
  if (it == words.begin()) return std::nullopt;
  --it;
  if (is_prefix(*it, w)) return static_cast<std::size_t>(it - words.begin());
  return std::nullopt;
}
}  // namespace

bool ClopenSet::contains(const Point& x) const {
  if (words_.empty()) return false;
  return covering(words_, x.prefix(max_length())).has_value();
}

bool ClopenSet::contains_cylinder(const Word& c) const { return covering(words_, c).has_value(); }

bool ClopenSet::meets_cylinder(const Word& c) const {
  if (contains_cylinder(c)) return true;
  auto it = std::lower_bound(words_.begin(), words_.end(), c);
  return it != words_.end() && is_prefix(c, *it);
}

std::vector<Word> ClopenSet::words_within(const Word& c) const {
  if (contains_cylinder(c)) return {c};
  std::vector<Word> out;
  for (auto it = std::lower_bound(words_.begin(), words_.end(), c); it != words_.end() && is_prefix(c, *it); ++it)
    out.push_back(*it);
  return out;
}

std::vector<Word> ClopenSet::refined(std::size_t depth) const {
  std::vector<Word> out;
  for (const Word& w : words_) {
    if (w.size() >= depth) {
      out.push_back(w);
    } else {
      auto ext = extensions(sig_, w, depth);
      out.insert(out.end(), ext.begin(), ext.end());
    }
  }
  return out;
}

std::size_t ClopenSet::max_length() const {
  std::size_t m = 0;
  for (const Word& w : words_) m = std::max(m, w.size());
  return m;
}

ClopenSet unite(const ClopenSet& a, const ClopenSet& b) {
  require_same(a.signature(), b.signature());
  std::vector<Word> out = a.words();
  out.insert(out.end(), b.words().begin(), b.words().end());
  return make_raw(a.signature(), std::move(out));
}

ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) {
  require_same(a.signature(), b.signature());
  const auto& x = a.words();
  const auto& y = b.words();
  std::vector<Word> out;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (is_prefix(x[i], y[j])) {
      out.push_back(y[j++]);
    } else if (is_prefix(y[j], x[i])) {
      out.push_back(x[i++]);
    } else if (x[i] < y[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return make_raw(a.signature(), std::move(out));
}

ClopenSet complement(const ClopenSet& a) {
  std::vector<Word> out;
  Word prefix;
  complement_rec(a.signature(), prefix, a.words(), 0, a.words().size(), out);
  return make_raw(a.signature(), std::move(out));
}

ClopenSet difference(const ClopenSet& a, const ClopenSet& b) { return intersect(a, complement(b)); }

ClopenSet sym_difference(const ClopenSet& a, const ClopenSet& b) {
  return unite(difference(a, b), difference(b, a));
}

ClopenSet clopen_algebra(SetOp op, const ClopenSet& a, const ClopenSet* b) {
  if (op != SetOp::Complement && b == nullptr) throw std::invalid_argument("binary set operation needs two operands");
  switch (op) {
    case SetOp::Union:
      return unite(a, *b);
    case SetOp::Intersect:
      return intersect(a, *b);
    case SetOp::Complement:
      return complement(a);
    case SetOp::Difference:
      return difference(a, *b);
  }
  throw std::logic_error("unreachable");
}

bool subset(const ClopenSet& a, const ClopenSet& b) { return difference(a, b).empty(); }

bool disjoint(const ClopenSet& a, const ClopenSet& b) { return intersect(a, b).empty(); }

bool is_partition(const std::vector<ClopenSet>& parts, const Signature& sig) {
  ClopenSet acc(sig);
  for (const ClopenSet& p : parts) {
    if (p.signature() != sig || p.empty()) return false;
    if (!disjoint(acc, p)) return false;
    acc = unite(acc, p);
  }
  return acc.is_full();
}

std::string clopen_to_string(const ClopenSet& a) {
  std::string s = "{";
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    if (i) s += ",";
    s += word_to_string(a.signature(), a.words()[i]);
  }
  return s + "}";
}

// ---------------------------------------------------------------- metric

Rational point_distance(const Point& x, const Point& y) {
  auto d = x.first_difference(y);
  return d ? pow2_neg(*d) : Rational(0);
}

Rational diameter(const ClopenSet& a) {
  if (a.empty()) throw std::invalid_argument("diameter of the empty set");
  const auto& w = a.words();
  if (w.size() == 1) return pow2_neg(w[0].size());
  return pow2_neg(lcp(w.front(), w.back()));
}

Rational set_distance(const ClopenSet& a, const ClopenSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("distance to the empty set");
  require_same(a.signature(), b.signature());
  if (!disjoint(a, b)) return 0;
  // for disjoint prefix-free lists the deepest common prefix occurs between neighbours
  std::vector<std::pair<const Word*, int>> merged;
  for (const Word& w : a.words()) merged.emplace_back(&w, 0);
  for (const Word& w : b.words()) merged.emplace_back(&w, 1);
  std::sort(merged.begin(), merged.end(), [](const auto& l, const auto& r) { return *l.first < *r.first; });
  std::size_t best = 0;
  for (std::size_t i = 1; i < merged.size(); ++i)
    if (merged[i].second != merged[i - 1].second) best = std::max(best, lcp(*merged[i].first, *merged[i - 1].first));
  return pow2_neg(best);
}

MetricData metric_data(const ClopenSet& a) {
  MetricData m;
  m.diameter = diameter(a);
  m.cylinders = a.words().size();
  m.min_depth = a.words().front().size();
  for (const Word& w : a.words()) {
    m.min_depth = std::min(m.min_depth, w.size());
    m.max_depth = std::max(m.max_depth, w.size());
  }
  return m;
}

std::vector<ClopenSet> split(const ClopenSet& a, std::size_t m) {
  if (a.empty()) throw std::invalid_argument("split of the empty set");
  if (m == 0) throw std::invalid_argument("split into zero parts");
  std::vector<Word> cyl = a.words();
  while (cyl.size() < m) {
    Word last = cyl.back();
    cyl.pop_back();
    for (Word& c : children(a.signature(), last)) cyl.push_back(std::move(c));
  }
  // the last m-1 cylinders become singleton parts, the rest forms the first part
  const std::size_t head = cyl.size() - (m - 1);
  std::vector<ClopenSet> parts;
  parts.push_back(ClopenSet::from_words(a.signature(), std::vector<Word>(cyl.begin(), cyl.begin() + static_cast<std::ptrdiff_t>(head))));
  for (std::size_t i = head; i < cyl.size(); ++i) parts.push_back(ClopenSet::cylinder(a.signature(), cyl[i]));
  return parts;
}

}  // namespace cdyn
