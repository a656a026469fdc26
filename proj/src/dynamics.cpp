#include "cantordyn/dynamics.hpp"

#include <algorithm>
#include <numeric>

namespace cdyn {

namespace {

struct IdAnalysis {
  std::vector<Word> fixed, moved, unresolved;
  std::vector<Point> points;  // isolated fixed points inside moved
};

Point tail_fixed_point(const Word& dom, const Word& img) {
  const Word& longer = dom.size() > img.size() ? dom : img;
  const Word& shorter = dom.size() > img.size() ? img : dom;
  return Point(dom, suffix(longer, shorter.size()));
}

// classify [c] against the identity: fixed, moved (up to isolated points) or undecided
void analyze(const Homeo& u, const Word& c, std::size_t depth, IdAnalysis& out) {
  for (const Piece& p : u.pieces(c, c.size())) {
    if (p.exact) {
      if (p.dom == p.img) {
        out.fixed.push_back(p.dom);
      } else {
        out.moved.push_back(p.dom);
        if (comparable(p.dom, p.img)) {
          Point z = tail_fixed_point(p.dom, p.img);
          if (u.apply(z) == z) out.points.push_back(z);
        }
      }
    } else if (!comparable(p.dom, p.img)) {
      out.moved.push_back(p.dom);
    } else if (p.dom.size() < depth) {
      for (const Word& ch : children(u.signature(), p.dom)) analyze(u, ch, depth, out);
    } else {
      out.unresolved.push_back(p.dom);
    }
  }
}

IdAnalysis analyze_all(const Homeo& u, std::size_t depth) {
  IdAnalysis a;
  const ClopenSet dom = u.domain();
  for (const Word& w : dom.words()) analyze(u, w, depth, a);
  std::sort(a.points.begin(), a.points.end());
  a.points.erase(std::unique(a.points.begin(), a.points.end()), a.points.end());
  return a;
}

bool has_point(const std::vector<Point>& v, const Point& x) { return std::binary_search(v.begin(), v.end(), x); }

std::vector<int> power_order(int bound) {
  std::vector<int> order{0};
  for (int i = 1; i <= bound; ++i) {
    order.push_back(i);
    order.push_back(-i);
  }
  return order;
}

}  // namespace

bool OpenDiffSet::contains(const Point& x) const {
  return core.contains(x) && std::find(exceptional.begin(), exceptional.end(), x) == exceptional.end();
}

OpenDiffSet one_sided_difference(const Homeo& s, const Homeo& t, std::size_t depth) {
  const Signature& sig = s.signature();
  if (sig != t.signature()) throw SignatureError("signature mismatch");
  if (s.ptr() == t.ptr()) return {ClopenSet(sig), {}, ClopenSet(sig)};
  IdAnalysis a = analyze_all(compose(t.inverse(), s), depth);
  return {ClopenSet::from_words(sig, std::move(a.moved)), std::move(a.points),
          ClopenSet::from_words(sig, std::move(a.unresolved))};
}

OpenDiffSet difference_set(const Homeo& s, const Homeo& t, std::size_t depth) {
  OpenDiffSet f = one_sided_difference(s, t, depth);
  OpenDiffSet b = one_sided_difference(s.inverse(), t.inverse(), depth);
  OpenDiffSet e;
  e.core = unite(f.core, b.core);
  e.unresolved = difference(unite(f.unresolved, b.unresolved), e.core);
  std::sort(f.exceptional.begin(), f.exceptional.end());
  std::sort(b.exceptional.begin(), b.exceptional.end());
  // an exceptional point of one side stays exceptional unless the other side moves it
  for (const Point& z : f.exceptional)
    if (!b.core.contains(z) || has_point(b.exceptional, z)) e.exceptional.push_back(z);
  for (const Point& z : b.exceptional)
    if (!f.core.contains(z) || has_point(f.exceptional, z)) e.exceptional.push_back(z);
  std::sort(e.exceptional.begin(), e.exceptional.end());
  e.exceptional.erase(std::unique(e.exceptional.begin(), e.exceptional.end()), e.exceptional.end());
  return e;
}

Interval measure_bounds(const Measure& mu, const OpenDiffSet& e) {
  Rational lo = mu.of(e.core);
  for (const Point& z : e.exceptional) lo -= mu.of_point(z);
  if (e.unresolved.empty()) return {lo, lo};
  return {lo, mu.of(e.core) + mu.of(e.unresolved)};
}

FixedPoints fixed_points(const Homeo& t, std::size_t depth) {
  IdAnalysis a = analyze_all(t, depth);
  const Signature& sig = t.signature();
  return {ClopenSet::from_words(sig, std::move(a.fixed)), std::move(a.points),
          ClopenSet::from_words(sig, std::move(a.unresolved))};
}

PeriodStructure period_structure(const Homeo& t, std::size_t max_power, std::size_t depth) {
  if (max_power < 1) throw std::invalid_argument("period bound must be at least 1");
  const Signature& sig = t.signature();
  PeriodStructure ps;
  ps.max_power = max_power;
  ps.unresolved = ClopenSet(sig);
  std::vector<FixedPoints> fix;
  Homeo tp = t;
  for (std::size_t p = 1; p <= max_power; ++p) {
    if (p > 1) tp = compose(t, tp);
    fix.push_back(fixed_points(tp, depth));
    const FixedPoints& f = fix.back();
    ClopenSet part = f.clopen;
    for (std::size_t d = 1; d < p; ++d)
      if (p % d == 0) part = difference(part, fix[d - 1].clopen);
    ps.parts.push_back(part);
    ps.unresolved = unite(ps.unresolved, f.unresolved);
    if (!ps.order && f.clopen.is_full()) ps.order = p;
    for (const Point& z : f.isolated) {
      bool seen = false;
      for (const auto& [y, q] : ps.isolated) seen = seen || y == z;
      if (seen) continue;
      std::size_t q = 1;
      for (Point y = t.apply(z); y != z; y = t.apply(y)) ++q;
      ps.isolated.emplace_back(z, q);
    }
  }
  ClopenSet covered(sig);
  for (const ClopenSet& a : ps.parts) covered = unite(covered, a);
  ps.residual = complement(covered);
  ps.aperiodic_up_to_n = covered.empty() && ps.isolated.empty() && ps.unresolved.empty();
  return ps;
}

FullGroupResult full_group_membership(const Homeo& s, const Homeo& t, int bound, std::size_t depth) {
  if (bound < 0) throw std::invalid_argument("negative power bound");
  const Signature& sig = s.signature();
  std::vector<int> order = power_order(bound);
  std::vector<Homeo> d;
  for (int i : order) d.push_back(compose(power(t, -i), s));
  std::map<int, std::vector<Word>> parts;
  FullGroupResult res;

  // returns false on refusal
  auto assign = [&](auto&& self, const Word& c) -> bool {
    bool all_moving = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
      std::vector<Piece> ps;
      try {
        ps = d[k].pieces(c, c.size());
      } catch (const ResolutionError&) {
        all_moving = false;
        continue;
      }
      bool ident = true;
      for (const Piece& p : ps) {
        ident = ident && p.exact && p.dom == p.img;
        const bool moving = !comparable(p.dom, p.img) || (p.exact && p.dom != p.img);
        all_moving = all_moving && moving;
      }
      if (ident) {
        parts[order[k]].push_back(c);
        return true;
      }
    }
    if (all_moving) {
      res.certain = true;
      res.witness = c;
      res.reason = "no power of T agrees with S on an open subset of the witness cylinder";
      return false;
    }
    if (c.size() >= depth) {
      res.witness = c;
      res.reason = "undetermined at depth " + std::to_string(depth);
      return false;
    }
    for (const Word& ch : children(sig, c))
      if (!self(self, ch)) return false;
    return true;
  };
  if (!assign(assign, Word{})) return res;
  res.member = true;
  for (auto& [i, ws] : parts) res.parts.emplace(i, ClopenSet::from_words(sig, std::move(ws)));
  return res;
}

namespace {

std::int64_t floor_mod(__int128 a, std::uint64_t m) {
  __int128 r = a % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

// all i in [0,m) with k*i = v (mod m)
std::vector<std::int64_t> solve_linear(std::int64_t k, std::uint64_t v, std::uint64_t m) {
  const auto km = static_cast<std::uint64_t>(floor_mod(k, m));
  const std::uint64_t g = std::gcd(km, m);
  if (v % g != 0) return {};
  const std::uint64_t m2 = m / g;
  // inverse of km/g modulo m2 by extended Euclid
  __int128 a = static_cast<__int128>(km / g), b = m2, x0 = 1, x1 = 0;
  while (b != 0) {
    __int128 q = a / b, t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  const std::int64_t base = m2 == 1 ? 0 : floor_mod(x0 * static_cast<__int128>(v / g), m2);
  std::vector<std::int64_t> out;
  for (std::uint64_t j = 0; j < g; ++j) out.push_back(base + static_cast<std::int64_t>(j * m2));
  return out;
}

}  // namespace

CentralizerResult centralizer_index_sequence(const Homeo& r, const Homeo& s, std::size_t depth) {
  auto odo = s.as<Odometer>();
  if (!odo) throw std::invalid_argument("centralizer test needs an odometer");
  const Signature& sig = s.signature();
  if (r.signature() != sig) throw SignatureError("signature mismatch");
  const std::int64_t k = odo->shift();
  CentralizerResult res;
  for (std::size_t lev = 0; lev <= depth; ++lev) {
    const std::size_t len = lev + 1;
    const std::uint64_t p = sig.count(len);
    auto fail = [&](const Word& c, ClopenSet img) {
      res.fail_level = lev;
      res.witness = c;
      res.witness_image = std::move(img);
      return res;
    };
    const Word zero(len, 0);
    ClopenSet img0 = image(r, ClopenSet::cylinder(sig, zero));
    if (img0.words().size() != 1 || img0.words()[0].size() != len) return fail(zero, img0);
    auto sols = solve_linear(k, word_value(sig, img0.words()[0]), p);
    if (sols.empty()) return fail(zero, img0);
    std::int64_t i = sols.front();
    if (!res.indices.empty())
      for (std::int64_t cand : sols)
        if (floor_mod(cand - res.indices.back(), res.moduli.back()) == 0) {
          i = cand;
          break;
        }
    for (const Word& c : all_words(sig, len)) {
      ClopenSet img = image(r, ClopenSet::cylinder(sig, c));
      const auto target = static_cast<std::uint64_t>(
          floor_mod(static_cast<__int128>(word_value(sig, c)) + static_cast<__int128>(i) * k, p));
      if (img != ClopenSet::cylinder(sig, value_word(sig, target, len))) return fail(c, img);
    }
    res.indices.push_back(i);
    res.moduli.push_back(p);
  }
  res.ok = true;
  return res;
}

}  // namespace cdyn
