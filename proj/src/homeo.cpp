#include "cantordyn/homeo.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace cdyn {

namespace {

std::optional<std::size_t> covering_index(const std::vector<Word>& sorted, const Word& w) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), w);
  if (it == sorted.begin()) return std::nullopt;
  --it;
  if (is_prefix(*it, w)) return static_cast<std::size_t>(it - sorted.begin());
  return std::nullopt;
}

void emit_refined(const Signature& sig, const Word& dom, const Word& img, bool exact, std::size_t min_depth,
                  std::vector<Piece>& out) {
  if (dom.size() >= min_depth) {
    out.push_back({dom, img, exact});
    return;
  }
  if (!exact) {
    // an inexact piece cannot be split without knowing the map
    throw ResolutionError("inexact piece cannot be refined by prefix extension");
  }
  for (Word& e : extensions(sig, dom, min_depth)) {
    Word im = concat(img, suffix(e, dom.size()));
    out.push_back({std::move(e), std::move(im), true});
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void require_same(const Signature& a, const Signature& b) {
  if (a != b) throw SignatureError("signature mismatch: " + a.name() + " vs " + b.name());
}

std::vector<Homeo> factors_of(const Homeo& h) {
  if (auto c = h.as<Composite>()) return c->factors();
  return {h};
}

}  // namespace

// ---------------------------------------------------------------- Homeo handle

Homeo::Kind Homeo::kind() const { return p_->kind(); }
const Signature& Homeo::signature() const { return p_->signature(); }
ClopenSet Homeo::domain() const { return p_->domain(); }
void Homeo::pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  p_->pieces(c, min_depth, out);
}
std::vector<Piece> Homeo::pieces(const Word& c, std::size_t min_depth) const {
  std::vector<Piece> out;
  p_->pieces(c, min_depth, out);
  return out;
}
Point Homeo::apply(const Point& x) const { return p_->apply(x); }
Homeo Homeo::inverse() const { return p_->inverse(); }

// ---------------------------------------------------------------- CylinderHomeo

std::shared_ptr<const CylinderHomeo> CylinderHomeo::make(const Signature& sig, std::vector<Branch> branches,
                                                         bool require_total) {
  if (branches.empty()) throw std::invalid_argument("prefix exchange needs at least one branch");
  for (const Branch& b : branches) {
    if (!valid_word(sig, b.u) || !valid_word(sig, b.v)) throw std::invalid_argument("digit out of range in branch");
    if (!sig.tail_equal(b.u.size(), b.v.size()))
      throw std::invalid_argument("branch " + word_to_string(sig, b.u) + "->" + word_to_string(sig, b.v) +
                                  " joins levels with different tails");
  }
  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) { return a.u < b.u; });
  for (std::size_t i = 1; i < branches.size(); ++i)
    if (is_prefix(branches[i - 1].u, branches[i].u)) throw std::invalid_argument("domain words are not prefix-free");
  std::vector<Word> vs;
  for (const Branch& b : branches) vs.push_back(b.v);
  std::sort(vs.begin(), vs.end());
  for (std::size_t i = 1; i < vs.size(); ++i)
    if (is_prefix(vs[i - 1], vs[i])) throw std::invalid_argument("range words are not prefix-free");

  std::vector<Word> us;
  for (const Branch& b : branches) us.push_back(b.u);
  const bool dom_full = ClopenSet::from_words(sig, us).is_full();
  const bool ran_full = ClopenSet::from_words(sig, vs).is_full();
  if (require_total && !(dom_full && ran_full)) throw std::invalid_argument("branch words do not cover the space");

  // merge complete sibling families u.d -> v.d
  std::vector<Branch> st;
  for (Branch& b : branches) {
    st.push_back(std::move(b));
    for (;;) {
      const Branch& t = st.back();
      if (t.u.empty() || t.v.empty()) break;
      const int lam = sig.radix(t.u.size() - 1);
      if (t.u.back() != lam - 1 || t.v.back() != lam - 1 || st.size() < static_cast<std::size_t>(lam)) break;
      const std::size_t base = st.size() - static_cast<std::size_t>(lam);
      Word pu(t.u.begin(), t.u.end() - 1), pv(t.v.begin(), t.v.end() - 1);
      bool family = true;
      for (int d = 0; d < lam && family; ++d) {
        const Branch& s = st[base + static_cast<std::size_t>(d)];
        family = s.u.size() == t.u.size() && s.v.size() == t.v.size() && s.u.back() == d && s.v.back() == d &&
                 is_prefix(pu, s.u) && is_prefix(pv, s.v);
      }
      if (!family) break;
      st.resize(base);
      st.push_back({std::move(pu), std::move(pv)});
    }
  }

  auto h = std::shared_ptr<CylinderHomeo>(new CylinderHomeo());
  h->sig_ = sig;
  h->branches_ = std::move(st);
  h->total_ = dom_full && ran_full;
  for (const Branch& b : h->branches_) {
    h->us_.push_back(b.u);
    h->max_u_ = std::max(h->max_u_, b.u.size());
  }
  return h;
}

ClopenSet CylinderHomeo::domain() const { return ClopenSet::from_words(sig_, us_); }

ClopenSet CylinderHomeo::range() const {
  std::vector<Word> vs;
  for (const Branch& b : branches_) vs.push_back(b.v);
  return ClopenSet::from_words(sig_, vs);
}

void CylinderHomeo::pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  if (auto i = covering_index(us_, c)) {
    const Branch& b = branches_[*i];
    emit_refined(sig_, c, concat(b.v, suffix(c, b.u.size())), true, min_depth, out);
    return;
  }
  bool any = false;
  for (auto it = std::lower_bound(us_.begin(), us_.end(), c); it != us_.end() && is_prefix(c, *it); ++it) {
    const Branch& b = branches_[static_cast<std::size_t>(it - us_.begin())];
    emit_refined(sig_, b.u, b.v, true, min_depth, out);
    any = true;
  }
  if (!any) throw DomainError("cylinder " + word_to_string(sig_, c) + " outside the domain");
}

Point CylinderHomeo::apply(const Point& x) const {
  auto i = covering_index(us_, x.prefix(max_u_));
  if (!i) throw DomainError("point outside the domain");
  const Branch& b = branches_[*i];
  return x.drop(b.u.size()).prepend(b.v);
}

Homeo CylinderHomeo::inverse() const {
  std::vector<Branch> inv;
  for (const Branch& b : branches_) inv.push_back({b.v, b.u});
  return Homeo(make(sig_, std::move(inv), false));
}

// ---------------------------------------------------------------- Odometer

void Odometer::pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  const std::size_t depth = std::max(c.size(), min_depth);
  for (Word& e : extensions(sig_, c, depth)) {
    // digit-wise addition; a carry out of the last digit makes the piece inexact
    Word img(e.size());
    std::int64_t carry = k_;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::int64_t r = sig_.radix(i);
      const std::int64_t d = e[i] + carry;
      carry = floor_div(d, r);
      img[i] = static_cast<int>(d - carry * r);
    }
    out.push_back({std::move(e), std::move(img), carry == 0});
  }
}

Point Odometer::apply(const Point& x) const {
  Word out;
  std::int64_t carry = k_;
  const std::size_t base = std::max(x.pre().size(), sig_.preperiod().size());
  const std::size_t span = std::lcm(x.rep().size(), sig_.period().size());
  std::map<std::pair<std::size_t, std::int64_t>, std::size_t> seen;
  for (std::size_t i = 0;; ++i) {
    if (carry == 0 && i >= x.pre().size()) return x.drop(i).prepend(out);
    if (i >= base) {
      auto key = std::make_pair((i - base) % span, carry);
      auto it = seen.find(key);
      if (it != seen.end()) {
        Word pre(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(it->second));
        Word rep(out.begin() + static_cast<std::ptrdiff_t>(it->second), out.end());
        return Point(pre, rep);
      }
      seen.emplace(key, i);
    }
    const std::int64_t r = sig_.radix(i);
    const std::int64_t d = x.digit(i) + carry;
    carry = floor_div(d, r);
    out.push_back(static_cast<int>(d - carry * r));
  }
}

Homeo Odometer::inverse() const { return odometer(sig_, -k_); }

// ---------------------------------------------------------------- Composite

Composite::Composite(std::vector<Homeo> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("empty composite");
  for (const Homeo& f : factors_) require_same(f.signature(), factors_.front().signature());
}

void Composite::compose_from(std::size_t i, const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  if (i + 1 == factors_.size()) {
    factors_[i].pieces(c, min_depth, out);
    return;
  }
  std::vector<Piece> inner;
  compose_from(i + 1, c, min_depth, inner);
  std::vector<Piece> qs;
  for (const Piece& p : inner) {
    qs.clear();
    factors_[i].pieces(p.img, p.img.size(), qs);
    if (p.exact) {
      for (Piece& q : qs) out.push_back({concat(p.dom, suffix(q.dom, p.img.size())), std::move(q.img), q.exact});
    } else if (qs.size() == 1 && qs[0].dom == p.img) {
      out.push_back({p.dom, std::move(qs[0].img), false});
    } else {
      if (p.dom.size() > c.size() + kRefineCap) throw ResolutionError("composite does not resolve within the depth cap");
      for (const Word& ch : children(signature(), p.dom)) compose_from(i, ch, ch.size(), out);
    }
  }
}

void Composite::pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  compose_from(0, c, min_depth, out);
}

Point Composite::apply(const Point& x) const {
  Point y = x;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) y = it->apply(y);
  return y;
}

Homeo Composite::inverse() const {
  std::vector<Homeo> inv;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) inv.push_back(it->inverse());
  return Homeo(std::make_shared<Composite>(std::move(inv)));
}

// ---------------------------------------------------------------- Restriction

void Restriction::pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  if (!dom_.contains_cylinder(c)) {
    if (!dom_.meets_cylinder(c)) throw DomainError("cylinder outside the restricted domain");
    for (const Word& w : dom_.words_within(c)) base_.pieces(w, min_depth, out);
    return;
  }
  base_.pieces(c, min_depth, out);
}

Homeo Restriction::inverse() const {
  return Homeo(std::make_shared<Restriction>(base_.inverse(), image(base_, dom_)));
}

// ---------------------------------------------------------------- TowerSystem

std::shared_ptr<const TowerSystem> TowerSystem::make(const Signature& sig, std::vector<TowerComponent> components) {
  if (components.empty()) throw std::invalid_argument("tower system without components");
  std::vector<ClopenSet> atoms;
  for (const TowerComponent& c : components) {
    if (c.cycle.empty()) throw std::invalid_argument("empty tower cycle");
    if (c.steps.size() + 1 != c.cycle.size()) throw std::invalid_argument("tower needs one step per non-top atom");
    if (!c.chart) throw std::invalid_argument("tower without base chart");
    if (c.shift != 1 && c.shift != -1) throw std::invalid_argument("tower return shift must be +1 or -1");
    for (const ClopenSet& a : c.cycle) {
      if (a.empty()) throw std::invalid_argument("empty tower atom");
      require_same(a.signature(), sig);
      atoms.push_back(a);
    }
    for (std::size_t i = 0; i < c.steps.size(); ++i)
      if (image(c.steps[i], c.cycle[i]) != c.cycle[i + 1])
        throw std::invalid_argument("tower step does not carry an atom onto its successor");
    if (!image(c.chart, c.cycle[0]).is_full()) throw std::invalid_argument("tower chart does not cover the space");
  }
  if (!is_partition(atoms, sig)) throw std::invalid_argument("tower atoms do not partition the space");

  auto t = std::shared_ptr<TowerSystem>(new TowerSystem());
  t->sig_ = sig;
  t->comps_ = std::move(components);
  for (std::size_t k = 0; k < t->comps_.size(); ++k) {
    const TowerComponent& c = t->comps_[k];
    std::vector<Homeo> f{c.chart.inverse(), odometer(sig, c.shift), c.chart};
    for (const Homeo& s : c.steps) f.push_back(s.inverse());
    t->tops_.push_back(Homeo(std::make_shared<Composite>(std::move(f))));
    for (std::size_t i = 0; i < c.cycle.size(); ++i)
      for (const Word& w : c.cycle[i].words()) {
        t->index_.push_back({w, k, i});
        t->max_len_ = std::max(t->max_len_, w.size());
      }
  }
  std::sort(t->index_.begin(), t->index_.end());
  return t;
}

const Homeo& TowerSystem::map_for(std::size_t comp, std::size_t index) const {
  const TowerComponent& c = comps_[comp];
  return index + 1 < c.cycle.size() ? c.steps[index] : tops_[comp];
}

std::optional<std::pair<std::size_t, std::size_t>> TowerSystem::locate(const Word& c) const {
  AtomRef key{c, 0, 0};
  auto it = std::upper_bound(index_.begin(), index_.end(), key);
  if (it == index_.begin()) return std::nullopt;
  --it;
  if (is_prefix(it->w, c)) return std::make_pair(it->comp, it->index);
  return std::nullopt;
}

void TowerSystem::pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const {
  if (auto loc = locate(c)) {
    map_for(loc->first, loc->second).pieces(c, min_depth, out);
    return;
  }
  if (c.size() >= max_len_) throw DomainError("tower atoms do not cover a cylinder");
  for (const Word& ch : children(sig_, c)) pieces(ch, min_depth, out);
}

Point TowerSystem::apply(const Point& x) const {
  auto loc = locate(x.prefix(max_len_));
  if (!loc) throw DomainError("point outside the tower atoms");
  return map_for(loc->first, loc->second).apply(x);
}

Homeo TowerSystem::inverse() const {
  std::vector<TowerComponent> inv;
  for (const TowerComponent& c : comps_) {
    TowerComponent r;
    r.cycle.assign(c.cycle.rbegin(), c.cycle.rend());
    for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) r.steps.push_back(it->inverse());
    std::vector<Homeo> chart{c.chart};
    for (const Homeo& s : c.steps) chart.push_back(s.inverse());
    r.chart = chart.size() == 1 ? c.chart : Homeo(std::make_shared<Composite>(std::move(chart)));
    r.shift = -c.shift;
    inv.push_back(std::move(r));
  }
  return Homeo(make(sig_, std::move(inv)));
}

std::vector<ClopenSet> TowerSystem::level(std::size_t component, std::size_t t) const {
  const TowerComponent& c = comps_.at(component);
  const std::uint64_t p = sig_.count(t);
  const Homeo chart_inv = c.chart.inverse();
  std::vector<ClopenSet> out;
  out.reserve(static_cast<std::size_t>(p) * c.cycle.size());
  for (std::uint64_t j = 0; j < p; ++j) {
    const std::uint64_t v = c.shift > 0 ? j : (p - j) % p;
    ClopenSet a = image(chart_inv, ClopenSet::cylinder(sig_, value_word(sig_, v, t)));
    out.push_back(a);
    for (const Homeo& s : c.steps) {
      a = image(s, a);
      out.push_back(a);
    }
  }
  return out;
}

std::vector<std::size_t> TowerSystem::heights(std::size_t component, std::size_t levels) const {
  std::vector<std::size_t> h;
  for (std::size_t t = 0; t < levels; ++t)
    h.push_back(comps_.at(component).cycle.size() * static_cast<std::size_t>(sig_.count(t)));
  return h;
}

// ---------------------------------------------------------------- constructors and group operations

Homeo identity(const Signature& sig) { return tree_pair(sig, {{{}, {}}}); }

Homeo swap_map() { return tree_pair(Signature::dyadic(), {{{0}, {1}}, {{1}, {0}}}); }

Homeo odometer(const Signature& sig, std::int64_t shift) {
  if (shift == 0) return identity(sig);
  return Homeo(std::make_shared<Odometer>(sig, shift));
}

Homeo tree_pair(const Signature& sig, std::vector<Branch> branches) {
  return Homeo(CylinderHomeo::make(sig, std::move(branches), true));
}

Homeo fragment(const Signature& sig, std::vector<Branch> branches) {
  return Homeo(CylinderHomeo::make(sig, std::move(branches), false));
}

Homeo restrict_exact(const Homeo& t, const ClopenSet& domain) {
  std::vector<Branch> br;
  std::vector<Piece> ps;
  for (const Word& c : domain.words()) {
    ps.clear();
    t.pieces(c, c.size(), ps);
    for (Piece& p : ps) {
      if (!p.exact) throw ResolutionError("map is not a prefix exchange on the requested domain");
      br.push_back({std::move(p.dom), std::move(p.img)});
    }
  }
  return fragment(t.signature(), std::move(br));
}

Homeo restrict_to(const Homeo& t, const ClopenSet& domain) {
  if (t.kind() == Homeo::Kind::Cylinder) return restrict_exact(t, domain);
  return Homeo(std::make_shared<Restriction>(t, domain));
}

namespace {

Homeo compose_cylinders(const Homeo& s, const Homeo& t) {
  Composite c({s, t});
  std::vector<Piece> ps;
  const ClopenSet dom = t.domain();
  for (const Word& w : dom.words()) c.pieces(w, w.size(), ps);
  std::vector<Branch> br;
  br.reserve(ps.size());
  for (Piece& p : ps) br.push_back({std::move(p.dom), std::move(p.img)});
  return fragment(s.signature(), std::move(br));
}

bool is_identity_map(const Homeo& h) {
  auto c = h.as<CylinderHomeo>();
  return c && c->is_identity();
}

}  // namespace

Homeo compose(const Homeo& s, const Homeo& t) {
  require_same(s.signature(), t.signature());
  std::vector<Homeo> f = factors_of(s);
  for (Homeo& g : factors_of(t)) f.push_back(std::move(g));
  // merge neighbours that have a closed form
  std::vector<Homeo> out;
  for (Homeo& g : f) {
    if (!out.empty()) {
      Homeo& a = out.back();
      if (a.kind() == Homeo::Kind::Cylinder && g.kind() == Homeo::Kind::Cylinder) {
        a = compose_cylinders(a, g);
        continue;
      }
      auto oa = a.as<Odometer>();
      auto og = g.as<Odometer>();
      if (oa && og) {
        a = odometer(a.signature(), oa->shift() + og->shift());
        continue;
      }
    }
    out.push_back(std::move(g));
  }
  if (out.size() > 1) {
    std::vector<Homeo> kept;
    for (Homeo& g : out)
      if (!is_identity_map(g)) kept.push_back(std::move(g));
    if (kept.empty()) return identity(s.signature());
    out.swap(kept);
  }
  if (out.size() == 1) return out.front();
  return Homeo(std::make_shared<Composite>(std::move(out)));
}

Homeo inverse(const Homeo& t) { return t.inverse(); }

Homeo power(const Homeo& t, std::int64_t n) {
  if (n == 0) return identity(t.signature());
  if (n < 0) return power(t.inverse(), -n);
  if (auto o = t.as<Odometer>()) return odometer(t.signature(), o->shift() * n);
  if (t.kind() == Homeo::Kind::Cylinder) {
    Homeo result = identity(t.signature()), base = t;
    for (std::int64_t e = n; e > 0; e >>= 1) {
      if (e & 1) result = compose(result, base);
      if (e > 1) base = compose(base, base);
    }
    return result;
  }
  std::vector<Homeo> f(static_cast<std::size_t>(n), t);
  return Homeo(std::make_shared<Composite>(std::move(f)));
}

ClopenSet image(const Homeo& t, const ClopenSet& a) {
  require_same(t.signature(), a.signature());
  std::vector<Word> out;
  std::vector<Piece> ps;
  for (const Word& c : a.words()) {
    ps.clear();
    t.pieces(c, c.size(), ps);
    for (Piece& p : ps) out.push_back(std::move(p.img));
  }
  return ClopenSet::from_words(a.signature(), std::move(out));
}

ClopenSet preimage(const Homeo& t, const ClopenSet& a) { return image(t.inverse(), a); }

std::vector<std::pair<Word, ClopenSet>> tabulate(const Homeo& t, std::size_t depth) {
  std::map<Word, std::vector<Word>> groups;
  for (Piece& p : t.pieces({}, depth)) groups[Word(p.dom.begin(), p.dom.begin() + static_cast<std::ptrdiff_t>(depth))].push_back(std::move(p.img));
  std::vector<std::pair<Word, ClopenSet>> out;
  for (auto& [w, imgs] : groups) out.emplace_back(w, ClopenSet::from_words(t.signature(), std::move(imgs)));
  return out;
}

std::vector<Piece> table(const Homeo& t, std::size_t depth) { return t.pieces({}, depth); }

std::optional<std::shared_ptr<const CylinderHomeo>> to_cylinder(const Homeo& t) {
  if (auto c = t.as<CylinderHomeo>()) return std::static_pointer_cast<const CylinderHomeo>(t.ptr());
  std::vector<Piece> ps;
  const ClopenSet dom = t.domain();
  for (const Word& w : dom.words()) t.pieces(w, w.size(), ps);
  std::vector<Branch> br;
  for (Piece& p : ps) {
    if (!p.exact) return std::nullopt;
    br.push_back({std::move(p.dom), std::move(p.img)});
  }
  return CylinderHomeo::make(t.signature(), std::move(br), false);
}

bool same_action(const Homeo& s, const Homeo& t, std::size_t depth) { return tabulate(s, depth) == tabulate(t, depth); }

}  // namespace cdyn
