#include "cantordyn/io.hpp"

#include <algorithm>
#include <map>
#include "json.hpp"
#include <set>
#include <sstream>

namespace cdyn {

namespace {

const std::string kEpsilon = "\xCE\xB5";  // ε
const std::string kArrow = "\xE2\x86\x92";  // →

class Cursor {
 public:
  explicit Cursor(std::string_view s, std::size_t line = 1) : s_(s), line_(line) {}

  void ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    ws();
    return pos_ >= s_.size();
  }
  bool peek(std::string_view tok) {
    ws();
    return s_.substr(pos_, tok.size()) == tok;
  }
  bool eat(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  void finish() {
    if (!at_end()) fail("unexpected trailing text");
  }
  std::string ident() {
    ws();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && ((s_[pos_] >= 'a' && s_[pos_] <= 'z') || s_[pos_] == '-')) ++pos_;
    if (b == pos_) fail("expected a keyword");
    return std::string(s_.substr(b, pos_ - b));
  }
  // digits and level separators, or the empty word
  std::string word_token() {
    ws();
    if (eat(kEpsilon)) return "e";
    const std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (b == pos_) {
      if (pos_ < s_.size() && s_[pos_] == 'e') {
        ++pos_;
        return "e";
      }
      fail("expected a word");
    }
    return std::string(s_.substr(b, pos_ - b));
  }
  std::string rational_token() {
    ws();
    const std::size_t b = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
    if (b == pos_) fail("expected a number");
    return std::string(s_.substr(b, pos_ - b));
  }
  std::int64_t integer() {
    const std::string t = rational_token();
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) fail("expected an integer");
      return v;
    } catch (const std::logic_error&) {
      fail("expected an integer");
    }
  }
  Rational rational() {
    const std::string t = rational_token();
    try {
      return parse_rational(t);
    } catch (const std::invalid_argument&) {
      fail("bad rational '" + t + "'");
    }
  }
  // pre(rep)
  std::string point_token() {
    ws();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(') ++pos_;
    while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
    if (pos_ >= s_.size()) fail("expected a point pre(rep)");
    ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }
  // balanced text up to the next top-level delimiter
  std::string until_any(std::string_view stops) {
    ws();
    const std::size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (depth == 0 && stops.find(c) != std::string_view::npos) break;
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      ++pos_;
    }
    std::size_t e = pos_;
    while (e > b && s_[e - 1] == ' ') --e;
    return std::string(s_.substr(b, e - b));
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }
  template <class F>
  auto guard(F&& f) -> decltype(f()) {
    const std::size_t at = pos_;
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_, at + 1);
    }
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

Word word_of(const Signature& sig, Cursor& c) {
  const std::string t = c.word_token();
  return c.guard([&] { return parse_word(sig, t); });
}

ClopenSet clopen_of(const Signature& sig, Cursor& c) {
  c.expect("{");
  std::vector<Word> ws;
  if (!c.eat("}")) {
    do ws.push_back(word_of(sig, c));
    while (c.eat(","));
    c.expect("}");
  }
  if (auto v = ClopenSet::canonical_violation(sig, ws)) c.fail(*v);
  return ClopenSet::from_canonical(sig, std::move(ws));
}

std::vector<Branch> branches_of(const Signature& sig, Cursor& c) {
  c.expect("{");
  std::vector<Branch> br;
  if (!c.eat("}")) {
    do {
      Word u = word_of(sig, c);
      if (!c.eat("->") && !c.eat(kArrow)) c.fail("expected '->'");
      br.push_back({std::move(u), word_of(sig, c)});
    } while (c.eat(","));
    c.expect("}");
  }
  return br;
}

std::vector<Measure::Weights> weight_lists(Cursor& c) {
  std::vector<Measure::Weights> out;
  while (c.peek("[")) {
    c.expect("[");
    Measure::Weights w;
    do w.push_back(c.rational());
    while (c.eat(","));
    c.expect("]");
    out.push_back(std::move(w));
    if (!c.eat(",")) break;
  }
  return out;
}

Measure measure_of(const Signature& sig, Cursor& c) {
  const std::string head = c.ident();
  if (head == "uniform") return Measure::uniform(sig);
  if (head == "product") {
    c.expect("(");
    auto pre = weight_lists(c);
    c.expect(";");
    auto per = weight_lists(c);
    c.expect(")");
    return c.guard([&] { return Measure::product(sig, pre, per); });
  }
  if (head == "dirac") {
    c.expect("(");
    const std::string p = c.point_token();
    c.expect(")");
    return c.guard([&] { return Measure::dirac(sig, parse_point(sig, p)); });
  }
  if (head == "mixture") {
    c.expect("(");
    std::vector<std::pair<Rational, Measure>> parts;
    do {
      Rational q = c.rational();
      c.expect("*");
      parts.emplace_back(q, measure_of(sig, c));
    } while (c.eat("+"));
    c.expect(")");
    return c.guard([&] { return Measure::mixture(sig, parts); });
  }
  c.fail("unknown measure '" + head + "'");
}

Homeo homeo_of(const Signature& sig, Cursor& c) {
  const std::string head = c.ident();
  if (head == "id") return identity(sig);
  if (head == "tree-pair" || head == "fragment") {
    auto br = branches_of(sig, c);
    return c.guard([&] { return head == "tree-pair" ? tree_pair(sig, br) : fragment(sig, br); });
  }
  if (head == "odometer") {
    c.expect("(");
    const std::int64_t k = c.integer();
    c.expect(")");
    return odometer(sig, k);
  }
  if (head == "compose") {
    c.expect("(");
    std::vector<Homeo> fs;
    do fs.push_back(homeo_of(sig, c));
    while (c.eat(","));
    c.expect(")");
    return Homeo(std::make_shared<Composite>(std::move(fs)));
  }
  if (head == "restrict") {
    c.expect("(");
    Homeo base = homeo_of(sig, c);
    c.expect(",");
    ClopenSet dom = clopen_of(sig, c);
    c.expect(")");
    return Homeo(std::make_shared<Restriction>(std::move(base), std::move(dom)));
  }
  if (head == "tower") {
    c.expect("(");
    std::vector<TowerComponent> comps;
    do {
      TowerComponent t;
      c.expect("cycle");
      c.expect("[");
      do t.cycle.push_back(clopen_of(sig, c));
      while (c.eat(","));
      c.expect("]");
      c.expect("steps");
      c.expect("[");
      if (!c.eat("]")) {
        do t.steps.push_back(homeo_of(sig, c));
        while (c.eat(","));
        c.expect("]");
      }
      c.expect("chart");
      t.chart = homeo_of(sig, c);
      c.expect("shift");
      t.shift = c.integer();
      comps.push_back(std::move(t));
    } while (c.eat(";"));
    c.expect(")");
    return c.guard([&] { return Homeo(TowerSystem::make(sig, comps)); });
  }
  c.fail("unknown map '" + head + "'");
}

std::string weights_to_string(const std::vector<Measure::Weights>& ws) {
  std::string s;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < ws[i].size(); ++j) s += (j ? "," : "") + to_string(ws[i][j]);
    s += "]";
  }
  return s;
}

std::string branches_to_string(const Signature& sig, const std::vector<Branch>& br) {
  std::string s = "{";
  for (std::size_t i = 0; i < br.size(); ++i)
    s += (i ? "," : "") + word_to_string(sig, br[i].u) + "->" + word_to_string(sig, br[i].v);
  return s + "}";
}

bool is_list_key(const std::string& k) {
  static const std::set<std::string> keys{"set",   "measure", "tower",   "bound",       "entry", "part",
                                          "point", "index",   "witness", "exceptional", "value", "cell"};
  return keys.count(k) > 0;
}

template <class T, class F>
T decode(const Document& d, const std::string& kind, F&& f) {
  if (d.kind != kind) throw std::invalid_argument("expected a " + kind + " document, got " + d.kind);
  return f();
}

Document typed(std::string kind, const Signature& sig) {
  Document d;
  d.kind = std::move(kind);
  d.add("signature", sig.name());
  return d;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void validate(const Document& d) {
  if (d.kind == "signature") signature_from(d);
  if (d.kind == "clopen") clopen_from(d);
  if (d.kind == "measure") measure_from(d);
  if (d.kind == "homeo") homeo_from(d);
  if (d.kind == "neighborhood") neighborhood_from(d);
}

// per-field checks report the line of the offending field
void validate_fields(const Document& d, const std::vector<std::size_t>& lines, std::size_t header_line) {
  static const std::set<std::string> typed_kinds{"signature", "clopen", "measure", "homeo", "neighborhood"};
  if (!typed_kinds.count(d.kind)) return;
  std::optional<Signature> sig;
  for (std::size_t i = 0; i < d.fields.size(); ++i) {
    const auto& [k, v] = d.fields[i];
    const std::size_t off = k.size() + 2;
    try {
      if (k == "signature") sig = parse_signature(v);
      if (!sig) continue;
      if (k == "words" || k == "set") parse_clopen(*sig, v);
      if (k == "map" || k == "base") parse_homeo(*sig, v);
      if (k == "measure") parse_measure(*sig, v);
      if (k == "epsilon" || k == "radius") parse_rational(v);
    } catch (const ParseError& e) {
      throw ParseError(e.detail, lines[i], off + e.column);
    } catch (const std::exception& e) {
      throw ParseError(e.what(), lines[i], off + 1);
    }
  }
  try {
    validate(d);
  } catch (const ParseError& e) {
    throw ParseError(e.detail, header_line, 1);
  } catch (const std::exception& e) {
    throw ParseError(e.what(), header_line, 1);
  }
}

Document parse_one_liner(const std::string& line) {
  Cursor c(line);
  const std::string kind = c.ident();
  std::string rest = trim(c.until_any(""));
  auto take_sig = [&](std::string& text) {
    const std::size_t sp = text.find(' ');
    const std::string sig = text.substr(0, sp);
    text = sp == std::string::npos ? "" : trim(text.substr(sp));
    return sig;
  };
  auto looks_like_sig = [](const std::string& t) { return t.rfind("dyadic", 0) == 0 || t.rfind("sig(", 0) == 0; };
  Document d;
  d.kind = kind;
  if (kind == "signature") {
    d.add("signature", rest);
  } else if (kind == "clopen" || kind == "measure") {
    const std::string sig = take_sig(rest);
    d.add("signature", sig);
    d.add(kind == "clopen" ? "words" : "measure", rest);
  } else if (kind == "homeo") {
    std::string sig;
    if (looks_like_sig(rest)) {
      sig = take_sig(rest);
    } else {
      // "homeo tree-pair dyadic {...}"
      const std::string head = take_sig(rest);
      sig = take_sig(rest);
      rest = head + (rest.empty() ? "" : " " + rest);
    }
    d.add("signature", sig);
    d.add("map", rest);
  } else {
    throw ParseError("unknown document kind '" + kind + "'", 1, 1);
  }
  validate(d);
  if (kind == "homeo") return to_document(homeo_from(d));
  if (kind == "measure") return to_document(measure_from(d));
  return d;
}

}  // namespace

// ---------------------------------------------------------------- documents

std::optional<std::string> Document::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  return std::nullopt;
}

std::string Document::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw std::invalid_argument(kind + " document lacks field '" + key + "'");
  return *v;
}

std::vector<std::string> Document::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields)
    if (k == key) out.push_back(v);
  return out;
}

Document parse_document(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) lines.push_back(l);
  }
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw ParseError("empty document", 1, 1);
  const std::string first = trim(lines[i]);
  if (first.rfind("cdyn", 0) != 0) {
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (!trim(lines[j]).empty()) throw ParseError("one-line form takes a single line", j + 1, 1);
    return parse_one_liner(first);
  }
  Document d;
  std::vector<std::size_t> field_lines;
  const std::size_t header_line = i + 1;
  {
    std::istringstream hs(first);
    std::string magic, version, kind, extra;
    hs >> magic >> version >> kind;
    if (magic != "cdyn" || kind.empty() || (hs >> extra)) throw ParseError("bad header, expected 'cdyn <version> <kind>'", i + 1, 1);
    if (version != std::to_string(kFormatVersion)) throw ParseError("unsupported version " + version, i + 1, 6);
    d.kind = kind;
  }
  for (++i; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (trim(l).empty()) continue;
    const std::size_t colon = l.find(':');
    if (colon == std::string::npos || colon == 0) throw ParseError("expected 'key: value'", i + 1, 1);
    const std::string key = l.substr(0, colon);
    for (std::size_t k = 0; k < key.size(); ++k) {
      const char ch = key[k];
      if (!((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '-'))
        throw ParseError("bad character in key", i + 1, k + 1);
    }
    std::string value = l.substr(colon + 1);
    if (!value.empty() && value[0] == ' ') value.erase(0, 1);
    if (!value.empty() && value.back() == '\r') value.pop_back();
    d.add(key, value);
    field_lines.push_back(i + 1);
  }
  validate_fields(d, field_lines, header_line);
  return d;
}

std::string print_document(const Document& d) {
  std::string s = "cdyn " + std::to_string(kFormatVersion) + " " + d.kind + "\n";
  for (const auto& [k, v] : d.fields) s += k + ": " + v + "\n";
  return s;
}

std::string document_to_json(const Document& d) {
  nlohmann::ordered_json j;
  j["version"] = kFormatVersion;
  j["kind"] = d.kind;
  std::map<std::string, int> count;
  for (const auto& [k, v] : d.fields) ++count[k];
  for (const auto& [k, v] : d.fields) {
    if (is_list_key(k) || count[k] > 1) {
      if (!j.contains(k)) j[k] = nlohmann::ordered_json::array();
      j[k].push_back(v);
    } else {
      j[k] = v;
    }
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- values

Signature parse_signature(const std::string& text) {
  const std::string t = trim(text);
  if (t == "dyadic") return Signature();
  if (t.rfind("sig(", 0) != 0 || t.back() != ')') throw ParseError("expected 'dyadic' or 'sig(pre;period)'", 1, 1);
  const std::string body = t.substr(4, t.size() - 5);
  const std::size_t semi = body.find(';');
  if (semi == std::string::npos) throw ParseError("signature needs ';' between preperiod and period", 1, 5);
  auto nums = [&](const std::string& s, std::size_t off) {
    std::vector<int> v;
    Cursor c(s);
    if (c.at_end()) return v;
    do {
      const std::int64_t x = c.integer();
      if (x < 2 || x > 1000000) throw ParseError("radix out of range", 1, off);
      v.push_back(static_cast<int>(x));
    } while (c.eat(","));
    c.finish();
    return v;
  };
  return Signature(nums(body.substr(0, semi), 5), nums(body.substr(semi + 1), 6 + semi));
}

ClopenSet parse_clopen(const Signature& sig, const std::string& text) {
  Cursor c(text);
  ClopenSet a = clopen_of(sig, c);
  c.finish();
  return a;
}

std::vector<ClopenSet> parse_clopen_list(const Signature& sig, const std::string& text) {
  Cursor c(text);
  const bool bracket = c.eat("[");
  std::vector<ClopenSet> out;
  if (!(bracket && c.peek("]"))) {
    do out.push_back(clopen_of(sig, c));
    while (c.eat(","));
  }
  if (bracket) c.expect("]");
  c.finish();
  return out;
}

std::string print_clopen_list(const std::vector<ClopenSet>& sets) {
  std::string s = "[";
  for (std::size_t i = 0; i < sets.size(); ++i) s += (i ? "," : "") + clopen_to_string(sets[i]);
  return s + "]";
}

Measure parse_measure(const Signature& sig, const std::string& text) {
  Cursor c(text);
  Measure m = measure_of(sig, c);
  c.finish();
  return m;
}

std::string print_measure(const Measure& mu) {
  switch (mu.kind()) {
    case Measure::Kind::Product:
      if (mu.is_uniform()) return "uniform";
      return "product(" + weights_to_string(mu.pre_weights()) + ";" + weights_to_string(mu.period_weights()) + ")";
    case Measure::Kind::Dirac:
      return "dirac(" + point_to_string(mu.signature(), mu.atom()) + ")";
    case Measure::Kind::Mixture: {
      std::string s = "mixture(";
      for (std::size_t i = 0; i < mu.parts().size(); ++i)
        s += (i ? "+" : "") + to_string(mu.parts()[i].first) + "*" + print_measure(mu.parts()[i].second);
      return s + ")";
    }
  }
  return "";
}

Homeo parse_homeo(const Signature& sig, const std::string& text) {
  Cursor c(text);
  Homeo h = homeo_of(sig, c);
  c.finish();
  return h;
}

std::string print_homeo(const Homeo& h) {
  const Signature& sig = h.signature();
  if (auto c = h.as<CylinderHomeo>()) {
    if (c->is_identity()) return "id";
    return std::string(c->is_total() ? "tree-pair " : "fragment ") + branches_to_string(sig, c->branches());
  }
  if (auto o = h.as<Odometer>()) return "odometer(" + std::to_string(o->shift()) + ")";
  if (auto m = h.as<Composite>()) {
    std::string s = "compose(";
    for (std::size_t i = 0; i < m->factors().size(); ++i) s += (i ? "," : "") + print_homeo(m->factors()[i]);
    return s + ")";
  }
  if (auto r = h.as<Restriction>()) return "restrict(" + print_homeo(r->base()) + "," + clopen_to_string(r->domain()) + ")";
  if (auto t = h.as<TowerSystem>()) {
    std::string s = "tower(";
    for (std::size_t i = 0; i < t->components().size(); ++i) {
      const TowerComponent& c = t->components()[i];
      s += i ? ";" : "";
      s += "cycle[";
      for (std::size_t j = 0; j < c.cycle.size(); ++j) s += (j ? "," : "") + clopen_to_string(c.cycle[j]);
      s += "] steps[";
      for (std::size_t j = 0; j < c.steps.size(); ++j) s += (j ? "," : "") + print_homeo(c.steps[j]);
      s += "] chart " + print_homeo(c.chart) + " shift " + std::to_string(c.shift);
    }
    return s + ")";
  }
  throw std::logic_error("unprintable map");
}

// ---------------------------------------------------------------- typed documents

Document to_document(const Signature& sig) {
  Document d;
  d.kind = "signature";
  d.add("signature", sig.name());
  return d;
}

Document to_document(const ClopenSet& a) {
  Document d = typed("clopen", a.signature());
  d.add("words", clopen_to_string(a));
  return d;
}

Document to_document(const Measure& mu) {
  Document d = typed("measure", mu.signature());
  d.add("measure", print_measure(mu));
  return d;
}

Document to_document(const Homeo& h) {
  Document d = typed("homeo", h.signature());
  d.add("map", print_homeo(h));
  return d;
}

Document to_document(const Neighborhood& n) {
  Document d = typed("neighborhood", n.base.signature());
  static const char* names[] = {"p", "uniform", "bar-p", "weak-ball"};
  d.add("type", names[static_cast<int>(n.kind)]);
  d.add("base", print_homeo(n.base));
  for (const ClopenSet& a : n.sets) d.add("set", clopen_to_string(a));
  for (const Measure& mu : n.measures) d.add("measure", print_measure(mu));
  if (n.kind == Neighborhood::Kind::Uniform || n.kind == Neighborhood::Kind::BarP) d.add("epsilon", to_string(n.epsilon));
  if (n.kind == Neighborhood::Kind::WeakBall) d.add("radius", to_string(n.radius));
  return d;
}

Document to_document(const Castle& c, std::size_t n, const Rational& eps) {
  Document d = typed("castle", c.marked.signature());
  d.add("n", std::to_string(n));
  d.add("epsilon", to_string(eps));
  d.add("threshold", std::to_string(c.threshold));
  d.add("offset", std::to_string(c.offset));
  for (const Tower& t : c.towers) d.add("tower", clopen_to_string(t.base) + " " + std::to_string(t.height));
  d.add("marked", clopen_to_string(c.marked));
  for (const Rational& b : c.bounds) d.add("bound", to_string(b) + " > " + to_string(1 - eps));
  return d;
}

Signature signature_from(const Document& d) { return parse_signature(d.require("signature")); }

ClopenSet clopen_from(const Document& d) {
  return decode<ClopenSet>(d, "clopen", [&] { return parse_clopen(signature_from(d), d.require("words")); });
}

Measure measure_from(const Document& d) {
  return decode<Measure>(d, "measure", [&] { return parse_measure(signature_from(d), d.require("measure")); });
}

Homeo homeo_from(const Document& d) {
  return decode<Homeo>(d, "homeo", [&] { return parse_homeo(signature_from(d), d.require("map")); });
}

Neighborhood neighborhood_from(const Document& d) {
  return decode<Neighborhood>(d, "neighborhood", [&] {
    const Signature sig = signature_from(d);
    const std::string type = d.require("type");
    Homeo base = parse_homeo(sig, d.require("base"));
    std::vector<ClopenSet> sets;
    for (const std::string& s : d.all("set")) sets.push_back(parse_clopen(sig, s));
    std::vector<Measure> ms;
    for (const std::string& s : d.all("measure")) ms.push_back(parse_measure(sig, s));
    auto rat = [&](const std::string& k) { return parse_rational(d.require(k)); };
    if (type == "p") return Neighborhood::p(base, sets);
    if (type == "uniform") return Neighborhood::uniform(base, ms, rat("epsilon"));
    if (type == "bar-p") return Neighborhood::bar_p(base, sets, ms, rat("epsilon"));
    if (type == "weak-ball") return Neighborhood::weak_ball(base, rat("radius"));
    throw std::invalid_argument("unknown neighborhood type '" + type + "'");
  });
}

std::optional<Homeo> named_homeo(const std::string& name) {
  std::vector<std::string> parts;
  {
    std::size_t b = 0;
    for (;;) {
      const std::size_t e = name.find(':', b);
      parts.push_back(name.substr(b, e == std::string::npos ? std::string::npos : e - b));
      if (e == std::string::npos) break;
      b = e + 1;
    }
  }
  const std::string& head = parts[0];
  auto sig_at = [&](std::size_t i) { return parts.size() > i ? parse_signature(parts[i]) : Signature(); };
  auto int_at = [&](std::size_t i, std::int64_t dflt) -> std::int64_t {
    if (parts.size() <= i) return dflt;
    Cursor c(parts[i]);
    const std::int64_t v = c.integer();
    c.finish();
    return v;
  };
  if (head == "id" && parts.size() <= 2) return identity(sig_at(1));
  if (head == "swap" && parts.size() == 1) return swap_map();
  if (head == "dissipative" && parts.size() == 1)
    return tree_pair(Signature(), {{{0}, {0, 0}}, {{1, 0}, {0, 1}}, {{1, 1}, {1}}});
  if (head == "odometer" && parts.size() <= 3) return odometer(sig_at(1), int_at(2, 1));
  if (head == "truncation" && parts.size() >= 3 && parts.size() <= 4) {
    const std::int64_t t = int_at(2, 0);
    if (t < 0) throw std::invalid_argument("truncation depth must be nonnegative");
    return odometer_truncation(sig_at(1), static_cast<std::size_t>(t), int_at(3, 1));
  }
  return std::nullopt;
}

}  // namespace cdyn
