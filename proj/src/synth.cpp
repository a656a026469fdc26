#include "cantordyn/synth.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace cdyn {

namespace {

std::size_t next_phased(const Signature& sig, std::size_t len) {
  const std::size_t pre = sig.preperiod().size(), per = sig.period().size();
  if (len < pre) return pre;
  return len + (per - (len - pre) % per) % per;
}

ClopenSet union_of(const Signature& sig, const std::vector<ClopenSet>& sets, const std::vector<std::size_t>& idx) {
  std::vector<Word> w;
  for (std::size_t i : idx) w.insert(w.end(), sets[i].words().begin(), sets[i].words().end());
  return ClopenSet::from_words(sig, std::move(w));
}

struct Edge {
  std::size_t from, to;
  std::int64_t copy;
};

// Hierholzer from `start`, arcs taken in lexicographic (target, copy) order
std::vector<Edge> euler_circuit(const Matrix& mult, std::size_t start) {
  const std::size_t n = mult.size();
  std::vector<std::vector<Edge>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::int64_t k = 0; k < mult[i][j]; ++k) adj[i].push_back({i, j, k});
  std::vector<std::size_t> next(n, 0);
  std::vector<std::pair<std::size_t, std::optional<Edge>>> stack{{start, std::nullopt}};
  std::vector<Edge> circuit;
  while (!stack.empty()) {
    const std::size_t v = stack.back().first;
    if (next[v] < adj[v].size()) {
      const Edge e = adj[v][next[v]++];
      stack.push_back({e.to, e});
    } else {
      if (stack.back().second) circuit.push_back(*stack.back().second);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

// pieces visited by an Euler circuit: consecutive pieces pass through a common atom
std::vector<ClopenSet> circuit_pieces(const OverlapGraph& g, const std::vector<Edge>& circuit) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ClopenSet>> parts;
  std::vector<ClopenSet> out;
  for (const Edge& e : circuit) {
    auto key = std::make_pair(e.from, e.to);
    auto it = parts.find(key);
    if (it == parts.end())
      it = parts.emplace(key, split(g.cells[e.from][e.to], static_cast<std::size_t>(g.mult[e.from][e.to]))).first;
    out.push_back(it->second[static_cast<std::size_t>(e.copy)]);
  }
  return out;
}

ClopenSet orbit_segment(const Homeo& t, const Homeo& ti, const ClopenSet& a, std::size_t h) {
  ClopenSet o = a, fwd = a, back = a;
  for (std::size_t j = 1; j < h; ++j) {
    fwd = image(t, fwd);
    back = image(ti, back);
    o = unite(o, unite(fwd, back));
  }
  return o;
}

// cylinders c with T^j[c] disjoint from [c] for 1 <= j < h, covering Omega
std::vector<Word> separated_cover(const Homeo& t, std::size_t h) {
  const Signature& sig = t.signature();
  std::vector<Word> cover;
  auto rec = [&](auto&& self, const Word& c) -> void {
    const ClopenSet cc = ClopenSet::cylinder(sig, c);
    ClopenSet img = cc;
    bool good = true;
    for (std::size_t j = 1; j < h && good; ++j) {
      img = image(t, img);
      good = disjoint(img, cc);
    }
    if (good) {
      cover.push_back(c);
      return;
    }
    if (c.size() >= kCoverDepthCap)
      throw SynthesisError("no separated cylinder cover within depth " + std::to_string(kCoverDepthCap));
    for (const Word& ch : children(sig, c)) self(self, ch);
  };
  rec(rec, Word{});
  return cover;
}

// clopen A meeting every orbit segment of length 2h-1, with T^j A disjoint from A for 0 < |j| < h
ClopenSet marker_set(const Homeo& t, std::size_t h) {
  const Signature& sig = t.signature();
  const Homeo ti = t.inverse();
  ClopenSet a(sig), covered(sig);
  for (const Word& u : separated_cover(t, h)) {
    const ClopenSet delta = difference(ClopenSet::cylinder(sig, u), covered);
    if (delta.empty()) continue;
    a = unite(a, delta);
    covered = unite(covered, orbit_segment(t, ti, delta, h));
  }
  return a;
}

void require_aperiodic(const Homeo& t, std::size_t bound) {
  const PeriodStructure ps = period_structure(t, bound);
  if (!ps.isolated.empty()) throw PeriodicPointError(ps.isolated.front().first, ps.isolated.front().second);
  for (std::size_t p = 1; p <= ps.parts.size(); ++p)
    if (!ps.parts[p - 1].empty()) throw PeriodicPointError(Point(ps.parts[p - 1].words().front(), {0}), p);
  if (!ps.unresolved.empty()) throw SynthesisError("periodic points undetermined at the working depth");
}

std::vector<ClopenSet> tower_levels(const Homeo& t, const ClopenSet& base, std::size_t h) {
  std::vector<ClopenSet> lv{base};
  for (std::size_t j = 1; j < h; ++j) lv.push_back(image(t, lv.back()));
  return lv;
}

Rational min_measure(const std::vector<Measure>& ms, const ClopenSet& a) {
  Rational m = 1;
  for (const Measure& mu : ms) m = std::min(m, mu.of(a));
  return m;
}

}  // namespace

// ---------------------------------------------------------------- canonical homeomorphism

Homeo canonical_clopen_homeo(const ClopenSet& a, const ClopenSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("canonical homeomorphism needs nonempty sets");
  if (a.signature() != b.signature()) throw SignatureError("signature mismatch");
  const Signature& sig = a.signature();
  // bring every word to a length where the level sequence is in phase
  auto phased = [&](const std::vector<Word>& ws) {
    std::vector<Word> out;
    for (const Word& w : ws) {
      const std::size_t len = next_phased(sig, w.size());
      if (len == w.size()) {
        out.push_back(w);
      } else {
        auto ext = extensions(sig, w, len);
        out.insert(out.end(), ext.begin(), ext.end());
      }
    }
    return out;
  };
  std::vector<Word> x = phased(a.words()), y = phased(b.words());
  std::uint64_t block = 1;
  for (int r : sig.period()) block *= static_cast<std::uint64_t>(r);
  const std::uint64_t diff = x.size() > y.size() ? x.size() - y.size() : y.size() - x.size();
  if (diff % (block - 1) != 0)
    throw SynthesisError("no prefix exchange from " + clopen_to_string(a) + " onto " + clopen_to_string(b) +
                         ": cylinder counts are incompatible with the level sizes");
  const std::size_t per = sig.period().size();
  while (x.size() != y.size()) {
    std::vector<Word>& small = x.size() < y.size() ? x : y;
    Word last = small.back();
    small.pop_back();
    auto ext = extensions(sig, last, last.size() + per);
    small.insert(small.end(), ext.begin(), ext.end());
  }
  std::vector<Branch> br;
  for (std::size_t i = 0; i < x.size(); ++i) br.push_back({x[i], y[i]});
  return fragment(sig, std::move(br));
}

// ---------------------------------------------------------------- fundamental domain

ClopenSet fundamental_domain(const Homeo& p_map, std::size_t period) {
  if (period < 1) throw std::invalid_argument("period must be at least 1");
  const Signature& sig = p_map.signature();
  auto cyl = to_cylinder(p_map);
  if (!cyl || !(*cyl)->is_total()) throw std::invalid_argument("fundamental domain needs a total prefix exchange");
  const Homeo p(*cyl);
  std::vector<Homeo> pw{identity(sig)};
  for (std::size_t i = 1; i <= period; ++i) pw.push_back(compose(p, pw.back()));
  if (!pw[period].as<CylinderHomeo>()->is_identity())
    throw SynthesisError("map is not exactly " + std::to_string(period) + "-periodic");
  if (period == 1) return ClopenSet::full(sig);
  const PeriodStructure ps = period_structure(p, period);
  if (!ps.parts[period - 1].is_full()) throw SynthesisError("points of smaller period are present");

  // separation constant: least 2^-lcp(u,v) over the branches of P^i, 0 < i < period
  std::size_t k = 0;
  for (std::size_t i = 1; i < period; ++i)
    for (const Branch& b : pw[i].as<CylinderHomeo>()->branches()) {
      if (comparable(b.u, b.v)) throw SynthesisError("power of the map has a fixed point");
      k = std::max(k, lcp(b.u, b.v));
    }
  const std::size_t depth = k + 1;  // ceil(log2(2/c)) with c = 2^-k

  ClopenSet e(sig), orbit(sig);
  for (const Word& w : all_words(sig, depth)) {
    const ClopenSet add = difference(ClopenSet::cylinder(sig, w), orbit);
    if (add.empty()) continue;
    e = unite(e, add);
    for (std::size_t j = 0; j < period; ++j) orbit = unite(orbit, image(pw[j], add));
  }
  std::vector<ClopenSet> images;
  for (std::size_t j = 0; j < period; ++j) images.push_back(image(pw[j], e));
  if (!is_partition(images, sig)) throw std::logic_error("fundamental domain images do not partition the space");
  return e;
}

// ---------------------------------------------------------------- overlap graph and circulation

std::optional<Matrix> min_circulation(const std::vector<std::vector<bool>>& arcs) {
  const std::size_t n = arcs.size();
  Matrix f(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::int64_t> b(n, 0);  // in-degree minus out-degree with unit multiplicities
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (arcs[i][j]) {
        --b[i];
        ++b[j];
      }
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  for (;;) {
    std::size_t s = n;
    for (std::size_t v = 0; v < n && s == n; ++v)
      if (b[v] > 0) s = v;
    if (s == n) break;
    // Bellman-Ford on the residual graph: forward arcs cost 1, reverse arcs cost -1 with capacity f
    std::vector<std::int64_t> dist(n, inf);
    std::vector<std::size_t> pred(n, n);
    std::vector<bool> pred_forward(n, true);
    dist[s] = 0;
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] == inf) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (arcs[i][j] && dist[i] + 1 < dist[j]) {
            dist[j] = dist[i] + 1;
            pred[j] = i;
            pred_forward[j] = true;
            changed = true;
          }
          if (f[j][i] > 0 && dist[i] - 1 < dist[j]) {
            dist[j] = dist[i] - 1;
            pred[j] = i;
            pred_forward[j] = false;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t t = n;
    for (std::size_t v = 0; v < n; ++v)
      if (b[v] < 0 && dist[v] != inf && (t == n || dist[v] < dist[t])) t = v;
    if (t == n) return std::nullopt;
    std::int64_t amount = std::min(b[s], -b[t]);
    for (std::size_t v = t; v != s; v = pred[v])
      if (!pred_forward[v]) amount = std::min(amount, f[v][pred[v]]);
    for (std::size_t v = t; v != s; v = pred[v]) {
      if (pred_forward[v])
        f[pred[v]][v] += amount;
      else
        f[v][pred[v]] -= amount;
    }
    b[s] -= amount;
    b[t] += amount;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f[i][j] = arcs[i][j] ? f[i][j] + 1 : 0;
  return f;
}

std::vector<std::size_t> OverlapGraph::reachable_from(std::size_t v) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> st{v}, out;
  seen[v] = true;
  while (!st.empty()) {
    const std::size_t u = st.back();
    st.pop_back();
    out.push_back(u);
    for (std::size_t w = 0; w < size(); ++w)
      if (arcs[u][w] && !seen[w]) {
        seen[w] = true;
        st.push_back(w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> OverlapGraph::reaching(std::size_t v) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> st{v}, out;
  seen[v] = true;
  while (!st.empty()) {
    const std::size_t u = st.back();
    st.pop_back();
    out.push_back(u);
    for (std::size_t w = 0; w < size(); ++w)
      if (arcs[w][u] && !seen[w]) {
        seen[w] = true;
        st.push_back(w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool OverlapGraph::strongly_connected() const {
  if (atoms.empty()) return true;
  return reachable_from(0).size() == size() && reaching(0).size() == size();
}

OverlapGraph overlap_graph(const Homeo& t, const std::vector<ClopenSet>& partition) {
  const Signature& sig = t.signature();
  if (partition.empty() || !is_partition(partition, sig))
    throw std::invalid_argument("overlap graph needs a clopen partition into nonempty sets");
  OverlapGraph g;
  g.atoms = partition;
  const std::size_t n = partition.size();
  g.cells.assign(n, std::vector<ClopenSet>(n, ClopenSet(sig)));
  g.arcs.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    const ClopenSet tf = image(t, partition[i]);
    for (std::size_t j = 0; j < n; ++j) {
      g.cells[i][j] = intersect(tf, partition[j]);
      g.arcs[i][j] = !g.cells[i][j].empty();
    }
  }
  auto m = min_circulation(g.arcs);
  g.balanced = m.has_value();
  g.mult = m ? *m : Matrix(n, std::vector<std::int64_t>(n, 0));
  return g;
}

std::string to_dot(const OverlapGraph& g) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << "digraph overlap {\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    os << "  v" << i << " [label=" << quote(std::to_string(i) + ": " + clopen_to_string(g.atoms[i])) << "];\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g.arcs[i][j])
        os << "  v" << i << " -> v" << j << " [label=" << quote(std::to_string(g.mult[i][j])) << "];\n";
  os << "}\n";
  return os.str();
}

bool verify_witness(const Homeo& t, const Witness& w) {
  if (w.f.empty() || w.f.is_full()) return false;
  const ClopenSet tf = image(t, w.f);
  return w.forward_closed ? subset(tf, w.f) : subset(w.f, tf);
}

// ---------------------------------------------------------------- odometer and periodic synthesis

Homeo extend_cyclic_partition_to_odometer(const std::vector<ClopenSet>& cycle) {
  if (cycle.empty()) throw std::invalid_argument("empty cycle");
  const Signature& sig = cycle.front().signature();
  for (const ClopenSet& c : cycle)
    if (c.empty()) throw std::invalid_argument("empty atom in cycle");
  TowerComponent comp;
  comp.cycle = cycle;
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) comp.steps.push_back(canonical_clopen_homeo(cycle[i], cycle[i + 1]));
  comp.chart = canonical_clopen_homeo(cycle.front(), ClopenSet::full(sig));
  comp.shift = 1;
  return Homeo(TowerSystem::make(sig, {comp}));
}

OdometerSynthesis odometer_in_weak_neighborhood(const Homeo& t, const std::vector<ClopenSet>& partition) {
  const Signature& sig = t.signature();
  OdometerSynthesis res;
  res.graph = overlap_graph(t, partition);
  const OverlapGraph& g = res.graph;
  if (!g.strongly_connected()) {
    const auto fwd = g.reachable_from(0);
    if (fwd.size() < g.size())
      res.witness = Witness{union_of(sig, g.atoms, fwd), true};
    else
      res.witness = Witness{union_of(sig, g.atoms, g.reaching(0)), false};
    return res;
  }
  res.cycle = circuit_pieces(g, euler_circuit(g.mult, 0));
  res.s = extend_cyclic_partition_to_odometer(res.cycle);
  for (const ClopenSet& f : partition)
    if (image(res.s, f) != image(t, f)) throw std::logic_error("odometer synthesis certificate failed");
  res.ok = true;
  return res;
}

PeriodicSynthesis periodic_in_weak_neighborhood(const Homeo& t, const std::vector<ClopenSet>& partition) {
  const Signature& sig = t.signature();
  PeriodicSynthesis res;
  res.graph = overlap_graph(t, partition);
  const OverlapGraph& g = res.graph;
  const std::size_t n = g.size();
  // weakly connected components, labelled by their least vertex
  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] != n) continue;
    comps.emplace_back();
    std::vector<std::size_t> st{v};
    comp[v] = comps.size() - 1;
    while (!st.empty()) {
      const std::size_t u = st.back();
      st.pop_back();
      comps.back().push_back(u);
      for (std::size_t w = 0; w < n; ++w)
        if ((g.arcs[u][w] || g.arcs[w][u]) && comp[w] == n) {
          comp[w] = comps.size() - 1;
          st.push_back(w);
        }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  for (const auto& k : comps)
    for (std::size_t v : k) {
      const auto r = g.reachable_from(v);
      if (r.size() != k.size()) {
        res.witness = Witness{union_of(sig, g.atoms, r), true};
        return res;
      }
    }

  std::vector<Branch> branches;
  res.order = 1;
  for (const auto& k : comps) {
    const std::vector<ClopenSet> pieces = circuit_pieces(g, euler_circuit(g.mult, k.front()));
    const std::size_t m = pieces.size();
    Homeo chain;  // Phi: pieces[0] -> pieces[r]
    for (std::size_t r = 0; r + 1 < m; ++r) {
      const Homeo step = canonical_clopen_homeo(pieces[r], pieces[r + 1]);
      for (const Branch& b : step.as<CylinderHomeo>()->branches()) branches.push_back(b);
      chain = r == 0 ? step : compose(step, chain);
    }
    if (m == 1) {
      for (const Word& w : pieces[0].words()) branches.push_back({w, w});
    } else {
      const Homeo close = chain.inverse();
      for (const Branch& b : close.as<CylinderHomeo>()->branches()) branches.push_back(b);
    }
    res.order = std::lcm(res.order, m);
  }
  res.p = tree_pair(sig, std::move(branches));
  for (const ClopenSet& f : partition)
    if (image(res.p, f) != image(t, f)) throw std::logic_error("periodic synthesis certificate failed");
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------- castles

std::vector<std::pair<std::size_t, ClopenSet>> first_return(const Homeo& t, const ClopenSet& a, std::size_t max_time) {
  const Homeo ti = t.inverse();
  std::vector<std::pair<std::size_t, ClopenSet>> out;
  ClopenSet moving = a;  // T^h of the points of a not yet returned
  for (std::size_t h = 1; h <= max_time && !moving.empty(); ++h) {
    moving = image(t, moving);
    const ClopenSet back = intersect(moving, a);
    if (back.empty()) continue;
    ClopenSet base = back;
    for (std::size_t j = 0; j < h; ++j) base = image(ti, base);
    out.emplace_back(h, base);
    moving = difference(moving, back);
  }
  if (!moving.empty()) throw SynthesisError("return time exceeds " + std::to_string(max_time));
  return out;
}

Castle rokhlin_castle(const Homeo& t, std::size_t n, const std::vector<Measure>& measures, const Rational& eps,
                      std::size_t period_bound) {
  if (n < 1) throw std::invalid_argument("tower height must be at least 1");
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  if (period_bound < n) throw std::invalid_argument("period bound must be at least the tower height");
  const Signature& sig = t.signature();
  require_aperiodic(t, period_bound);
  const Homeo ti = t.inverse();
  for (std::size_t h = n; h <= kCastleMaxThreshold; h *= 2) {
    const ClopenSet a = marker_set(t, h);
    const auto markers = first_return(t, a, 2 * h);
    std::size_t hmin = markers.front().first;
    for (const auto& [ht, base] : markers) hmin = std::min(hmin, ht);
    // cut each marker tower every n levels starting at offset r
    std::optional<std::pair<Rational, std::size_t>> best;
    ClopenSet best_b(sig);
    for (std::size_t r = 0; r <= std::min(n - 1, hmin - n); ++r) {
      ClopenSet b(sig);
      for (const auto& [ht, base] : markers) {
        const std::size_t q = (ht - r) / n;
        ClopenSet lv = base;
        for (std::size_t j = 0; j < r; ++j) lv = image(t, lv);
        for (std::size_t s = 0; s < q; ++s) {
          b = unite(b, lv);
          if (s + 1 < q)
            for (std::size_t j = 0; j < n; ++j) lv = image(t, lv);
        }
      }
      ClopenSet u = b, back = b;
      for (std::size_t j = 1; j < n; ++j) {
        back = image(ti, back);
        u = unite(u, back);
      }
      const Rational score = min_measure(measures, u);
      if (!best || score >= best->first) {
        best = std::make_pair(score, r);
        best_b = b;
      }
    }
    if (best->first <= 1 - eps) continue;
    Castle c;
    c.marked = best_b;
    c.offset = best->second;
    c.threshold = h;
    for (const auto& [ht, base] : first_return(t, best_b, 4 * h)) c.towers.push_back({base, ht, tower_levels(t, base, ht)});
    ClopenSet u = best_b, back = best_b;
    for (std::size_t j = 1; j < n; ++j) {
      back = image(ti, back);
      u = unite(u, back);
    }
    for (const Measure& mu : measures) c.bounds.push_back(mu.of(u));
    return c;
  }
  throw SynthesisError("castle bound not reached with marker separation up to " + std::to_string(kCastleMaxThreshold));
}

std::optional<std::string> check_castle(const Homeo& t, const Castle& c, std::size_t n,
                                        const std::vector<Measure>& measures, const Rational& eps) {
  const Signature& sig = t.signature();
  std::vector<ClopenSet> all;
  ClopenSet bases(sig), tops(sig);
  for (const Tower& tw : c.towers) {
    if (tw.height < n) return "tower height below n";
    if (tw.levels.size() != tw.height) return "level count differs from height";
    if (tw.levels.front() != tw.base) return "first level is not the base";
    for (std::size_t j = 1; j < tw.height; ++j)
      if (image(t, tw.levels[j - 1]) != tw.levels[j]) return "levels are not successive images";
    all.insert(all.end(), tw.levels.begin(), tw.levels.end());
    bases = unite(bases, tw.base);
    tops = unite(tops, tw.levels.back());
  }
  if (!is_partition(all, sig)) return "levels do not partition the space";
  if (bases != c.marked) return "bases differ from the marked set";
  if (image(t, tops) != bases) return "tops do not return to the bases";
  ClopenSet u = c.marked, back = c.marked;
  const Homeo ti = t.inverse();
  for (std::size_t j = 1; j < n; ++j) {
    back = image(ti, back);
    u = unite(u, back);
  }
  if (c.bounds.size() != measures.size()) return "bound count differs from measure count";
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (measures[i].of(u) != c.bounds[i]) return "stated bound differs from the recomputed measure";
    if (c.bounds[i] <= 1 - eps) return "measure bound not above 1 - epsilon";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- rank one

Rank1Result rank1_in_uniform_neighborhood(const Homeo& t, const std::vector<Measure>& measures, const Rational& eps,
                                          std::size_t period_bound) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Signature& sig = t.signature();
  Rank1Result res;
  res.bound_set = ClopenSet(sig);
  if (auto o = t.as<Odometer>(); o && (o->shift() == 1 || o->shift() == -1)) {
    TowerComponent c{{ClopenSet::full(sig)}, {}, identity(sig), o->shift()};
    res.s = Homeo(TowerSystem::make(sig, {c}));
    res.bound_values.assign(measures.size(), 0);
    res.towers = 1;
    return res;
  }
  if (auto tw = t.as<TowerSystem>(); tw && tw->single_cycle()) {
    res.s = t;
    res.bound_values.assign(measures.size(), 0);
    res.towers = 1;
    return res;
  }
  require_aperiodic(t, std::max<std::size_t>(period_bound, 2));
  const Homeo ti = t.inverse();
  for (std::size_t h = 2; h <= kCastleMaxThreshold; h *= 2) {
    const ClopenSet a = marker_set(t, h);
    const ClopenSet w = unite(a, image(ti, a));  // bases and tops
    bool small = true;
    for (const Measure& mu : measures) small = small && mu.of(w) < eps;
    if (!small) continue;

    // one cycle through every level; tops are rerouted to the next base
    const auto towers = first_return(t, a, 2 * h);
    TowerComponent comp;
    std::vector<ClopenSet> tops;
    for (const auto& [ht, base] : towers) {
      auto lv = tower_levels(t, base, ht);
      if (!comp.cycle.empty()) comp.steps.push_back(canonical_clopen_homeo(comp.cycle.back(), base));
      for (std::size_t j = 0; j < lv.size(); ++j) {
        if (j > 0) comp.steps.push_back(restrict_to(t, lv[j - 1]));
        comp.cycle.push_back(lv[j]);
      }
    }
    comp.chart = canonical_clopen_homeo(comp.cycle.front(), ClopenSet::full(sig));
    res.s = Homeo(TowerSystem::make(sig, {comp}));
    const OpenDiffSet e = difference_set(res.s, t);
    if (!subset(e.core, w)) throw std::logic_error("rank-one difference set escapes the tower tops and bases");
    for (const Measure& mu : measures)
      if (!(measure_bounds(mu, e).hi < eps)) throw SynthesisError("rank-one certificate not below epsilon");
    res.bound_set = w;
    for (const Measure& mu : measures) res.bound_values.push_back(mu.of(w));
    res.threshold = h;
    res.towers = towers.size();
    return res;
  }
  throw SynthesisError("marker sets stay heavy up to separation " + std::to_string(kCastleMaxThreshold));
}

// ---------------------------------------------------------------- periodic approximation of odometers

Homeo odometer_truncation(const Signature& sig, std::size_t t, std::int64_t shift) {
  const std::uint64_t p = sig.count(t);
  std::vector<Branch> br;
  for (std::uint64_t v = 0; v < p; ++v) {
    __int128 w = (static_cast<__int128>(v) + shift) % static_cast<__int128>(p);
    if (w < 0) w += p;
    br.push_back({value_word(sig, v, t), value_word(sig, static_cast<std::uint64_t>(w), t)});
  }
  return tree_pair(sig, std::move(br));
}

namespace {

const Odometer& require_odometer(const Homeo& s) {
  auto o = s.as<Odometer>();
  if (!o) throw std::invalid_argument("periodic approximation needs an odometer");
  return *o;
}

// cylinders where x -> x+k and its inverse carry past depth t
ClopenSet carry_set(const Signature& sig, std::size_t t, std::int64_t k) {
  const std::uint64_t p = sig.count(t);
  const auto a = static_cast<std::uint64_t>(k < 0 ? -k : k);
  std::vector<Word> w;
  for (std::uint64_t i = 0; i < a; ++i) {
    w.push_back(value_word(sig, i, t));
    w.push_back(value_word(sig, p - 1 - i, t));
  }
  return ClopenSet::from_words(sig, std::move(w));
}

void collect_atoms(const Measure& mu, std::vector<Point>& out) {
  if (mu.kind() == Measure::Kind::Dirac) out.push_back(mu.atom());
  for (const auto& [q, m] : mu.parts()) collect_atoms(m, out);
}

}  // namespace

PeriodicApprox periodic_approx_weak(const Homeo& s, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Odometer& o = require_odometer(s);
  const Signature& sig = s.signature();
  const auto k = static_cast<std::uint64_t>(o.shift() < 0 ? -o.shift() : o.shift());
  PeriodicApprox res;
  std::size_t t = 1;
  while (!(pow2_neg(t - 1) < eps && sig.count(t) > k)) ++t;
  res.depth = t;
  res.order = sig.count(t);
  res.q = odometer_truncation(sig, t, o.shift());
  res.weak = weak_distance(s, res.q).total;
  res.ok = res.weak.hi < eps;
  return res;
}

PeriodicApprox periodic_approx_uniform(const Homeo& s, const std::vector<Measure>& measures, const Rational& eps,
                                       std::size_t max_depth) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Odometer& o = require_odometer(s);
  const Signature& sig = s.signature();
  const auto k = static_cast<std::uint64_t>(o.shift() < 0 ? -o.shift() : o.shift());
  PeriodicApprox res;
  ClopenSet last(sig);
  for (std::size_t t = 1; t <= max_depth; ++t) {
    if (sig.count(t) <= 2 * k) continue;
    last = carry_set(sig, t, o.shift());
    bool small = true;
    for (const Measure& mu : measures) small = small && mu.of(last) < eps;
    if (!small) continue;
    res.depth = t;
    res.order = sig.count(t);
    res.q = odometer_truncation(sig, t, o.shift());
    const OpenDiffSet e = difference_set(res.q, s);
    res.ok = true;
    for (const Measure& mu : measures) {
      res.measures.push_back(measure_bounds(mu, e));
      res.ok = res.ok && res.measures.back().hi < eps;
    }
    return res;
  }
  // every canonical base up to max_depth carries too much mass: report the heavy atoms on the carry set
  for (const Measure& mu : measures) {
    std::vector<Point> atoms;
    collect_atoms(mu, atoms);
    for (const Point& z : atoms)
      if (last.contains(z) && std::find(res.obstruction.begin(), res.obstruction.end(), z) == res.obstruction.end())
        res.obstruction.push_back(z);
  }
  res.note = "no canonical truncation up to depth " + std::to_string(max_depth) +
             " keeps the carry cylinders below epsilon";
  return res;
}

// ---------------------------------------------------------------- aperiodization

Aperiodized aperiodize_periodic(const Homeo& p_map, const Rational& eps, std::optional<std::size_t> period) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Signature& sig = p_map.signature();
  auto cyl = to_cylinder(p_map);
  if (!cyl || !(*cyl)->is_total()) throw std::invalid_argument("aperiodization needs a total prefix exchange");
  const Homeo p(*cyl);
  if (!period) {
    Homeo q = p;
    for (std::size_t m = 1; m <= 64 && !period; ++m, q = compose(p, q))
      if (q.as<CylinderHomeo>()->is_identity()) period = m;
    if (!period) throw SynthesisError("map is not periodic with period at most 64");
  }
  Aperiodized res;
  res.domain = fundamental_domain(p, *period);
  std::vector<Homeo> pw{identity(sig)};
  for (std::size_t i = 1; i < *period; ++i) pw.push_back(compose(p, pw.back()));
  const Rational half = eps / 2;
  std::vector<Word> todo(res.domain.words().rbegin(), res.domain.words().rend());
  std::vector<ClopenSet> bases;
  while (!todo.empty()) {
    const Word w = todo.back();
    todo.pop_back();
    const ClopenSet f = ClopenSet::cylinder(sig, w);
    bool fine = true;
    for (const Homeo& q : pw) fine = fine && diameter(image(q, f)) < half;
    if (fine) {
      bases.push_back(f);
      continue;
    }
    auto ch = children(sig, w);
    todo.insert(todo.end(), ch.rbegin(), ch.rend());
  }
  std::vector<TowerComponent> comps;
  for (const ClopenSet& f : bases) {
    TowerComponent c;
    for (const Homeo& q : pw) c.cycle.push_back(image(q, f));
    for (std::size_t i = 0; i + 1 < c.cycle.size(); ++i) c.steps.push_back(restrict_exact(p, c.cycle[i]));
    c.chart = canonical_clopen_homeo(f, ClopenSet::full(sig));
    comps.push_back(std::move(c));
  }
  res.bases = bases;
  res.t = Homeo(TowerSystem::make(sig, std::move(comps)));
  const WeakDistance d = weak_distance(res.t, p);
  res.distance = d.total;
  if (!(d.total.hi < eps)) throw SynthesisError("weak-distance certificate not below epsilon");
  return res;
}

}  // namespace cdyn
