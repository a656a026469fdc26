#include "cantordyn/topology.hpp"

#include <algorithm>
#include <numeric>

namespace cdyn {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::False:
      return "false";
    case Verdict::True:
      return "true";
    case Verdict::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

namespace {

struct SupAcc {
  Homeo rel;  // t^-1 o s, consulted where the pieces alone cannot decide
  Rational lo = 0, hi = 0;
  void certain(const Rational& v) {
    lo = std::max(lo, v);
    hi = std::max(hi, v);
  }
};

void sup_pair(const Homeo& s, const Homeo& t, const Word& d, const Piece& a, const Piece& b, std::size_t depth,
              SupAcc& acc);

void sup_rec(const Homeo& s, const Homeo& t, const Word& c, std::size_t depth, SupAcc& acc) {
  for (const Piece& p : s.pieces(c, c.size())) {
    for (const Piece& q : t.pieces(p.dom, p.dom.size())) {
      if (q.dom == p.dom) {
        sup_pair(s, t, p.dom, p, q, depth, acc);
      } else if (p.exact) {
        Piece r{q.dom, concat(p.img, suffix(q.dom, p.dom.size())), true};
        sup_pair(s, t, q.dom, r, q, depth, acc);
      } else {
        sup_rec(s, t, q.dom, depth, acc);
      }
    }
  }
}

void sup_pair(const Homeo& s, const Homeo& t, const Word& d, const Piece& a, const Piece& b, std::size_t depth,
              SupAcc& acc) {
  if (!comparable(a.img, b.img)) {
    acc.certain(pow2_neg(lcp(a.img, b.img)));
    return;
  }
  if (a.exact && b.exact) {
    // comparable distinct images: a free digit right after the shorter one separates them
    if (a.img != b.img) acc.certain(pow2_neg(std::min(a.img.size(), b.img.size())));
    return;
  }
  try {
    bool ident = true;
    for (const Piece& p : acc.rel.pieces(d, d.size())) ident = ident && p.exact && p.dom == p.img;
    if (ident) return;
  } catch (const ResolutionError&) {
  }
  if (d.size() < depth) {
    for (const Word& ch : children(s.signature(), d)) sup_rec(s, t, ch, depth, acc);
    return;
  }
  const Point x(d, {0});
  acc.certain(point_distance(s.apply(x), t.apply(x)));
  acc.hi = std::max(acc.hi, pow2_neg(std::min(a.img.size(), b.img.size())));
}

Interval sup_distance(const Homeo& s, const Homeo& t, std::size_t depth) {
  if (s.ptr() == t.ptr()) return {0, 0};
  SupAcc acc;
  acc.rel = compose(t.inverse(), s);
  sup_rec(s, t, {}, depth, acc);
  return {acc.lo, acc.hi};
}

Verdict below(const Interval& v, const Rational& eps) {
  if (v.hi < eps) return Verdict::True;
  if (v.lo >= eps) return Verdict::False;
  return Verdict::Indeterminate;
}

}  // namespace

WeakDistance weak_distance(const Homeo& s, const Homeo& t, std::size_t depth) {
  if (s.signature() != t.signature()) throw SignatureError("signature mismatch");
  WeakDistance w;
  w.forward = sup_distance(s, t, depth);
  w.backward = sup_distance(s.inverse(), t.inverse(), depth);
  w.total = {w.forward.lo + w.backward.lo, w.forward.hi + w.backward.hi};
  return w;
}

Neighborhood Neighborhood::p(Homeo base, std::vector<ClopenSet> sets) {
  Neighborhood n;
  n.kind = Kind::P;
  n.base = std::move(base);
  n.sets = std::move(sets);
  return n;
}

Neighborhood Neighborhood::uniform(Homeo base, std::vector<Measure> measures, Rational eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  Neighborhood n;
  n.kind = Kind::Uniform;
  n.base = std::move(base);
  n.measures = std::move(measures);
  n.epsilon = eps;
  return n;
}

Neighborhood Neighborhood::bar_p(Homeo base, std::vector<ClopenSet> sets, std::vector<Measure> measures, Rational eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  Neighborhood n;
  n.kind = Kind::BarP;
  n.base = std::move(base);
  n.sets = std::move(sets);
  n.measures = std::move(measures);
  n.epsilon = eps;
  return n;
}

Neighborhood Neighborhood::weak_ball(Homeo base, Rational radius) {
  if (radius <= 0) throw std::invalid_argument("radius must be positive");
  Neighborhood n;
  n.kind = Kind::WeakBall;
  n.base = std::move(base);
  n.radius = radius;
  return n;
}

Membership in_neighborhood(const Homeo& s, const Neighborhood& n, std::size_t depth) {
  const Homeo& t = n.base;
  for (const ClopenSet& f : n.sets)
    if (f.empty()) throw std::invalid_argument("neighborhood sets must be nonempty");
  Membership m;
  switch (n.kind) {
    case Neighborhood::Kind::P: {
      m.verdict = Verdict::True;
      for (std::size_t i = 0; i < n.sets.size(); ++i)
        if (image(s, n.sets[i]) != image(t, n.sets[i])) {
          m.verdict = Verdict::False;
          m.failing = i;
          break;
        }
      return m;
    }
    case Neighborhood::Kind::Uniform: {
      const OpenDiffSet e = difference_set(s, t, depth);
      m.verdict = Verdict::True;
      for (std::size_t j = 0; j < n.measures.size(); ++j) {
        m.values.push_back(measure_bounds(n.measures[j], e));
        const Verdict v = below(m.values.back(), n.epsilon);
        if (v == Verdict::False && m.verdict != Verdict::False) {
          m.verdict = Verdict::False;
          m.failing = j;
        } else if (v == Verdict::Indeterminate && m.verdict == Verdict::True) {
          m.verdict = Verdict::Indeterminate;
        }
      }
      if (m.verdict == Verdict::Indeterminate) m.note = "indeterminate at depth " + std::to_string(depth);
      return m;
    }
    case Neighborhood::Kind::BarP: {
      const Homeo si = s.inverse(), ti = t.inverse();
      m.verdict = Verdict::True;
      for (std::size_t i = 0; i < n.sets.size(); ++i) {
        const ClopenSet fwd = sym_difference(image(s, n.sets[i]), image(t, n.sets[i]));
        const ClopenSet bwd = sym_difference(image(si, n.sets[i]), image(ti, n.sets[i]));
        for (const Measure& mu : n.measures) {
          const Rational v = mu.of(fwd) + mu.of(bwd);
          m.values.push_back({v, v});
          if (v >= n.epsilon && m.verdict == Verdict::True) {
            m.verdict = Verdict::False;
            m.failing = m.values.size() - 1;
          }
        }
      }
      return m;
    }
    case Neighborhood::Kind::WeakBall: {
      const WeakDistance w = weak_distance(s, t, depth);
      m.values.push_back(w.total);
      m.verdict = below(w.total, n.radius);
      if (m.verdict == Verdict::Indeterminate) m.note = "indeterminate at depth " + std::to_string(depth);
      return m;
    }
  }
  return m;
}

Defect defect_over_partition(DefectKind kind, const Homeo& s, const Homeo& t, const Measure& mu,
                             const std::vector<ClopenSet>& partition, bool allow_heuristic) {
  const Signature& sig = mu.signature();
  if (!is_partition(partition, sig)) throw std::invalid_argument("defect needs a clopen partition");
  const std::size_t n = partition.size();
  std::vector<ClopenSet> tf, sf;
  for (const ClopenSet& f : partition) {
    tf.push_back(image(t, f));
    sf.push_back(image(s, f));
  }
  auto union_of = [&](std::uint64_t mask) {
    std::vector<Word> w;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w.insert(w.end(), partition[i].words().begin(), partition[i].words().end());
    return ClopenSet::from_words(sig, std::move(w));
  };
  Defect d;
  d.value = 0;
  d.argmax = ClopenSet(sig);

  if (kind == DefectKind::BarTau) {
    // |mu(TF) - mu(SF)| is additive over atoms: take all positive or all negative terms
    std::uint64_t pos = 0, neg = 0;
    Rational ps = 0, ns = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Rational diff = mu.of(tf[i]) - mu.of(sf[i]);
      if (diff > 0) {
        ps += diff;
        pos |= std::uint64_t{1} << i;
      } else if (diff < 0) {
        ns -= diff;
        neg |= std::uint64_t{1} << i;
      }
    }
    if (n > 64) throw std::invalid_argument("partition too large");
    d.value = std::max(ps, ns);
    d.argmax = union_of(ps >= ns ? pos : neg);
    return d;
  }

  // mu(TF delta SF) = mu(TF) + mu(SF) - 2 sum_{i,j in F} mu(TF_i cap SF_j)
  std::vector<Rational> a(n), b(n);
  std::vector<std::vector<Rational>> c(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = mu.of(tf[i]);
    b[i] = mu.of(sf[i]);
    for (std::size_t j = 0; j < n; ++j) c[i][j] = mu.of(intersect(tf[i], sf[j]));
  }
  if (n <= kExhaustiveAtoms) {
    // Gray-code walk over all unions, updating the value incrementally
    std::uint64_t mask = 0, best_mask = 0;
    Rational value = 0;
    for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
      const auto k = static_cast<std::size_t>(__builtin_ctzll(step));
      const bool adding = !(mask >> k & 1);
      Rational delta = a[k] + b[k] - 2 * c[k][k];
      for (std::size_t j = 0; j < n; ++j)
        if (j != k && (mask >> j & 1)) delta -= 2 * (c[k][j] + c[j][k]);
      if (adding) {
        value += delta;
      } else {
        // removing k: undo its contribution computed against the remaining set
        value -= delta;
      }
      mask ^= std::uint64_t{1} << k;
      if (value > d.value) {
        d.value = value;
        best_mask = mask;
      }
    }
    d.argmax = union_of(best_mask);
    return d;
  }
  if (!allow_heuristic)
    throw std::invalid_argument("partition has " + std::to_string(n) + " atoms; exhaustive search is limited to " +
                                std::to_string(kExhaustiveAtoms) + " (pass the heuristic flag)");
  // greedy ascent: add the atom with the best gain until nothing improves
  d.heuristic = true;
  std::vector<bool> in(n, false);
  Rational value = 0;
  for (;;) {
    std::optional<std::size_t> best;
    Rational best_gain = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (in[k]) continue;
      Rational g = a[k] + b[k] - 2 * c[k][k];
      for (std::size_t j = 0; j < n; ++j)
        if (in[j]) g -= 2 * (c[k][j] + c[j][k]);
      if (g > best_gain) {
        best_gain = g;
        best = k;
      }
    }
    if (!best) break;
    in[*best] = true;
    value += best_gain;
  }
  std::vector<Word> w;
  for (std::size_t i = 0; i < n; ++i)
    if (in[i]) w.insert(w.end(), partition[i].words().begin(), partition[i].words().end());
  d.value = value;
  d.argmax = ClopenSet::from_words(sig, std::move(w));
  return d;
}

LimsupResult limsup_check(const std::vector<Homeo>& seq, const ClopenSet& f, std::size_t horizon) {
  if (horizon >= seq.size()) throw std::invalid_argument("horizon must be below the sequence length");
  LimsupResult r;
  r.forward = ClopenSet::full(f.signature());
  r.backward = ClopenSet::full(f.signature());
  for (std::size_t n = horizon; n < seq.size(); ++n) {
    r.forward = intersect(r.forward, image(seq[n], f));
    r.backward = intersect(r.backward, preimage(seq[n], f));
  }
  r.holds = r.forward == f && r.backward == f;
  return r;
}

Rational image_gap(const Homeo& t, const std::vector<ClopenSet>& partition) {
  std::vector<ClopenSet> img;
  for (const ClopenSet& f : partition) img.push_back(image(t, f));
  Rational gap = 2;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j) gap = std::min(gap, set_distance(img[i], img[j]));
  return gap;
}

}  // namespace cdyn
