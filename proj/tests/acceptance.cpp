// One PASS/FAIL line per acceptance criterion.
#include <array>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "cantordyn/cli.hpp"
#include "cantordyn/dynamics.hpp"
#include "cantordyn/io.hpp"
#include "cantordyn/synth.hpp"
#include "cantordyn/topology.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace cdyn;
using namespace cdyn::fx;

namespace {

using Clock = std::chrono::steady_clock;
using Failure = std::optional<std::string>;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<ClopenSet> as_sets(const Signature& sig, const std::vector<Word>& ws) {
  std::vector<ClopenSet> v;
  for (const Word& w : ws) v.push_back(ClopenSet::cylinder(sig, w));
  return v;
}

std::vector<ClopenSet> xi(const Signature& sig, std::size_t t) { return as_sets(sig, all_words(sig, t)); }

bool starts_with(const Word& w, const Word& p) {
  return w.size() >= p.size() && std::equal(p.begin(), p.end(), w.begin());
}

// image of a clopen set under a tree pair, straight from the branch list
ClopenSet branch_image(const Homeo& t, const ClopenSet& a) {
  auto c = to_cylinder(t);
  if (!c) throw std::logic_error("not a cylinder map");
  std::vector<Word> out;
  const std::vector<Word> ws = a.words();
  for (const Branch& br : (*c)->branches())
    for (const Word& w : ws) {
      if (starts_with(w, br.u)) {
        Word v = br.v;
        v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(br.u.size()), w.end());
        out.push_back(v);
      } else if (starts_with(br.u, w)) {
        out.push_back(br.v);
      }
    }
  return ClopenSet::from_words(a.signature(), out);
}

bool exact_identity(const Homeo& h) {
  auto c = to_cylinder(h);
  return c && (*c)->is_identity();
}

ClopenSet union_of(const Signature& sig, const std::vector<ClopenSet>& v) {
  ClopenSet u(sig);
  for (const ClopenSet& a : v) u = unite(u, a);
  return u;
}

Failure witness_ok(const Homeo& t, const ClopenSet& f) {
  if (f.empty() || f.is_full()) return "witness is not proper";
  const ClopenSet tf = branch_image(t, f);
  if (!subset(tf, f) && !subset(f, tf)) return "witness is neither forward nor backward closed";
  return std::nullopt;
}

Failure criterion1() {
  const auto t0 = Clock::now();
  testgen::Rng r(2024);
  int built = 0, refused = 0;
  for (int k = 0; k < 200; ++k) {
    Homeo t = testgen::random_tree_pair(r, dy(), 2 + testgen::below(r, 8), 4);
    auto parts = as_sets(dy(), testgen::random_partition(r, dy(), 2 + testgen::below(r, 15), 4));
    auto res = odometer_in_weak_neighborhood(t, parts);
    if (res.ok) {
      ++built;
      const Homeo inv = res.s.inverse();
      for (const ClopenSet& f : parts) {
        const ClopenSet tf = branch_image(t, f);
        if (image(res.s, f) != tf || image(inv, tf) != f) return "S F differs from T F on case " + std::to_string(k);
      }
    } else {
      ++refused;
      if (!res.witness) return "refusal without witness on case " + std::to_string(k);
      if (auto e = witness_ok(t, res.witness->f)) return *e;
    }
  }
  const double s = seconds_since(t0);
  if (s >= 10) return "took " + std::to_string(s) + " s";
  std::cout << "  (" << built << " built, " << refused << " refused, " << s << " s)\n";
  return std::nullopt;
}

Failure criterion2() {
  const std::vector<ClopenSet> halves{cyl("0"), cyl("1")};
  auto od = odometer_in_weak_neighborhood(dissipative(), halves);
  auto pd = periodic_in_weak_neighborhood(dissipative(), halves);
  for (const auto* w : {&od.witness, &pd.witness}) {
    if (!*w || (*w)->f != cyl("0")) return "dissipative fixture did not yield witness [0]";
    if (auto e = witness_ok(dissipative(), (*w)->f)) return *e;
  }
  if (od.ok || pd.ok) return "dissipative fixture synthesized";
  std::vector<std::pair<Homeo, std::vector<ClopenSet>>> good{{swap_map(), halves}};
  for (std::size_t t = 1; t <= 5; ++t) good.emplace_back(odometer(dy()), xi(dy(), t));
  for (auto& [t, parts] : good) {
    auto a = odometer_in_weak_neighborhood(t, parts);
    auto b = periodic_in_weak_neighborhood(t, parts);
    if (!a.ok || !b.ok) return "synthesis failed on a moving fixture";
    for (const ClopenSet& f : parts) {
      const ClopenSet tf = image(t, f);
      if (image(a.s, f) != tf || image(b.p, f) != tf) return "synthesized map leaves the neighborhood";
    }
    if (!exact_identity(power(b.p, static_cast<std::int64_t>(b.order)))) return "periodic map has wrong order";
  }
  return std::nullopt;
}

Homeo block_permutation(const Signature& sig, std::size_t t, std::size_t p) {
  auto ws = all_words(sig, t);
  std::vector<Branch> br;
  for (std::size_t s = 0; s < ws.size(); s += p)
    for (std::size_t i = 0; i < p; ++i) br.push_back({ws[s + i], ws[s + (i + 1) % p]});
  return tree_pair(sig, br);
}

Failure criterion3() {
  const Signature d2 = dy(), d3({}, {3}), d23({}, {2, 3});
  struct Case {
    Homeo p;
    std::size_t period;
  };
  const std::vector<Case> cases{{identity(d2), 1},
                                {swap_map(), 2},
                                {truncation(d3, 1), 3},
                                {truncation(d2, 2), 4},
                                {truncation(d23, 2), 6},
                                {truncation(d2, 3), 8},
                                {block_permutation(d2, 2, 1), 1},
                                {block_permutation(d2, 3, 2), 2},
                                {block_permutation(d23, 2, 3), 3},
                                {block_permutation(d2, 3, 4), 4},
                                {block_permutation(d23, 3, 6), 6},
                                {block_permutation(d2, 4, 8), 8}};
  for (const Case& c : cases) {
    const Signature& sig = c.p.signature();
    const ClopenSet e = fundamental_domain(c.p, c.period);
    std::vector<ClopenSet> imgs{e};
    for (std::size_t i = 1; i < c.period; ++i) imgs.push_back(branch_image(c.p, imgs.back()));
    if (branch_image(c.p, imgs.back()) != e) return "P^p E differs from E";
    if (!is_partition(imgs, sig)) return "translates of E do not partition, p = " + std::to_string(c.period);
    for (std::size_t i = 0; i < imgs.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!disjoint(imgs[i], imgs[j])) return "translates overlap, p = " + std::to_string(c.period);
    if (!union_of(sig, imgs).is_full()) return "translates miss points, p = " + std::to_string(c.period);
  }
  return std::nullopt;
}

Failure criterion4() {
  const auto t0 = Clock::now();
  const Signature sig = dy();
  const Measure u = Measure::uniform(sig);
  const Measure mix = Measure::mixture(
      sig, {{Rational(1, 2), u}, {Rational(1, 2), Measure::product(sig, {}, {{Rational(1, 3), Rational(2, 3)}})}});
  const std::vector<Measure> ms{u, mix};
  for (std::int64_t k : {1, 3, -1, 5, -3})
    for (std::size_t n : {2u, 3u, 4u})
      for (const Rational& eps : {Rational(1, 4), Rational(1, 8)}) {
        const std::string where = " (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")";
        const Homeo t = odometer(sig, k);
        const Castle c = rokhlin_castle(t, n, ms, eps, n);
        std::vector<ClopenSet> levels, bases;
        for (const Tower& tw : c.towers) {
          if (tw.height < n || tw.levels.size() != tw.height) return "tower too short" + where;
          ClopenSet lev = tw.base;
          for (std::size_t j = 0; j < tw.height; ++j, lev = image(t, lev)) {
            if (tw.levels[j] != lev) return "level is not an iterate of the base" + where;
            levels.push_back(lev);
          }
          bases.push_back(tw.base);
        }
        for (std::size_t i = 0; i < levels.size(); ++i)
          for (std::size_t j = 0; j < i; ++j)
            if (!disjoint(levels[i], levels[j])) return "levels overlap" + where;
        if (!union_of(sig, levels).is_full()) return "levels do not cover" + where;
        const ClopenSet& b = c.marked;
        ClopenSet hit = b;
        Homeo back = identity(sig);
        const Homeo tinv = t.inverse();
        for (std::size_t j = 1; j < n; ++j) {
          back = compose(tinv, back);
          hit = unite(hit, image(back, b));
        }
        for (const Measure& mu : ms)
          if (!(mu.of(hit) > 1 - eps)) return "marked sweep too small" + where;
      }
  const double s = seconds_since(t0);
  if (s >= 5) return "took " + std::to_string(s) + " s";
  std::cout << "  (" << s << " s)\n";
  return std::nullopt;
}

Failure criterion5() {
  for (const Signature& sig : {Signature(), Signature({}, {2, 3})})
    for (std::size_t t = 1; t <= 6; ++t) {
      const Homeo q = odometer_truncation(sig, t);
      const auto d = weak_distance(odometer(sig), q);
      if (!d.exact()) return "inexact distance at t = " + std::to_string(t);
      if (d.total.hi > pow2_neg(t - 1)) return "bound exceeded at t = " + std::to_string(t);
      if (!exact_identity(power(q, static_cast<std::int64_t>(sig.count(t)))))
        return "Q^p is not the identity at t = " + std::to_string(t);
    }
  return std::nullopt;
}

// a map that permutes the words under a random cylinder deeper than `depth`
Homeo small_move(testgen::Rng& r, std::size_t depth) {
  Word w;
  for (std::size_t i = 0; i < depth; ++i) w.push_back(static_cast<int>(testgen::below(r, 2)));
  Homeo local = testgen::random_tree_pair(r, dy(), 2 + testgen::below(r, 4), 3);
  auto c = to_cylinder(local);
  std::vector<Branch> br;
  for (const Branch& b : (*c)->branches()) br.push_back({concat(w, b.u), concat(w, b.v)});
  for (std::size_t i = 0; i < depth; ++i) {
    Word side(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    side.push_back(1 - w[i]);
    br.push_back({side, side});
  }
  return tree_pair(dy(), br);
}

// a map fixing each atom of the partition setwise
Homeo atom_preserving(testgen::Rng& r, const std::vector<Word>& atoms) {
  std::vector<Branch> br;
  for (const Word& a : atoms) {
    auto c = to_cylinder(testgen::random_tree_pair(r, dy(), 1 + testgen::below(r, 4), 3));
    for (const Branch& b : (*c)->branches()) br.push_back({concat(a, b.u), concat(a, b.v)});
  }
  return tree_pair(dy(), br);
}

Failure criterion6() {
  testgen::Rng r(66);
  int premises = 0, agreements = 0;
  for (int k = 0; k < 200; ++k) {
    const Homeo t = testgen::random_tree_pair(r, dy(), 2 + testgen::below(r, 6), 4);
    const std::vector<Word> atoms = testgen::random_partition(r, dy(), 2 + testgen::below(r, 6), 4);
    const std::vector<ClopenSet> parts = as_sets(dy(), atoms);

    // d_w(S,T) < gap  =>  S in the P-neighborhood of T
    const Homeo s = k % 2 ? compose(small_move(r, 2 + testgen::below(r, 5)), t) : testgen::random_tree_pair(r, dy(), 4, 4);
    const auto d = weak_distance(s, t);
    if (!d.exact()) return "inexact distance between tree pairs";
    if (d.total.hi < image_gap(t, parts)) {
      ++premises;
      for (const ClopenSet& f : parts)
        if (branch_image(s, f) != branch_image(t, f)) return "close map leaves the P-neighborhood, case " + std::to_string(k);
      if (in_neighborhood(s, Neighborhood::p(t, parts)).verdict != Verdict::True) return "membership test disagrees";
    }

    // agreement on a partition whose atoms and images have diameter <= delta  =>  d_w <= 2 delta
    const Homeo s2 = compose(t, atom_preserving(r, atoms));
    Rational delta = 0;
    for (const ClopenSet& f : parts) {
      if (branch_image(s2, f) != branch_image(t, f)) return "constructed map does not agree on the partition";
      delta = std::max({delta, diameter(f), diameter(branch_image(t, f))});
    }
    ++agreements;
    const auto d2 = weak_distance(s2, t);
    if (!d2.exact() || d2.total.hi > 2 * delta) return "agreeing map is too far, case " + std::to_string(k);
  }
  if (premises < 20) return "too few close pairs generated";
  std::cout << "  (" << premises << " close pairs, " << agreements << " agreeing pairs)\n";
  return std::nullopt;
}

Failure criterion7() {
  testgen::Rng r(77);
  auto pick = [&]() -> Homeo {
    if (testgen::below(r, 5) == 0) return odometer_truncation(dy(), 1 + testgen::below(r, 4), 1);
    return testgen::random_tree_pair(r, dy(), 2 + testgen::below(r, 7), 4);
  };
  for (int k = 0; k < 500; ++k) {
    const Homeo a = pick(), b = pick(), c = pick();
    const auto ab = weak_distance(a, b), ba = weak_distance(b, a), bc = weak_distance(b, c),
               ac = weak_distance(a, c), aa = weak_distance(a, a);
    for (const auto* w : {&ab, &ba, &bc, &ac, &aa})
      if (!w->exact()) return "inexact distance";
    if (aa.total.hi != 0) return "d(S,S) != 0";
    if ((ab.total.hi == 0) != same_action(a, b, 6)) return "zero distance between distinct maps";
    if (ab.total.hi != ba.total.hi) return "asymmetric";
    if (ac.total.hi > ab.total.hi + bc.total.hi) return "triangle inequality fails";
  }
  return std::nullopt;
}

Failure criterion8() {
  const Homeo s = odometer(dy());
  for (std::int64_t k = -3; k <= 5; ++k) {
    auto res = centralizer_index_sequence(power(s, k), s, 4);
    if (!res.ok || res.indices.size() != 5) return "odometer power rejected, k = " + std::to_string(k);
    for (std::size_t t = 0; t < res.indices.size(); ++t) {
      const auto p = static_cast<std::int64_t>(res.moduli[t]);
      if (p != (std::int64_t{2} << t)) return "wrong modulus";
      if (((res.indices[t] - k) % p + p) % p != 0) return "index not congruent to k";
    }
  }
  const Homeo r = swap_map();
  auto res = centralizer_index_sequence(r, s, 4);
  if (res.ok || !res.fail_level || *res.fail_level + 1 > 2) return "swap not rejected by level 2";
  const std::size_t t = *res.fail_level + 1;
  const ClopenSet c = ClopenSet::cylinder(dy(), res.witness), z = ClopenSet::cylinder(dy(), Word(t, 0));
  if (res.witness.size() != t || branch_image(r, c) != res.witness_image) return "witness image mismatch";
  for (std::int64_t i = 0; i < (std::int64_t{1} << t); ++i) {
    const Homeo si = power(s, i);
    if (image(si, z) == branch_image(r, z) && image(si, c) == branch_image(r, c))
      return "witness consistent with S^" + std::to_string(i);
  }
  return std::nullopt;
}

// relabeling tables for the off-diagonal bits of five-vertex digraphs
struct Relabel {
  static constexpr std::size_t n = 5;
  std::vector<std::array<std::uint8_t, 20>> perms;
  Relabel() {
    auto bit = [](std::size_t i, std::size_t j) { return i * (n - 1) + (j < i ? j : j - 1); };
    std::array<std::size_t, n> p{0, 1, 2, 3, 4};
    do {
      std::array<std::uint8_t, 20> m{};
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) m[bit(i, j)] = static_cast<std::uint8_t>(bit(p[i], p[j]));
      perms.push_back(m);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::uint32_t canonical(std::uint32_t mask) const {
    std::uint32_t best = ~0u;
    for (const auto& m : perms) {
      std::uint32_t v = 0;
      for (std::size_t b = 0; b < 20; ++b)
        if ((mask >> b) & 1u) v |= 1u << m[b];
      best = std::min(best, v);
    }
    return best;
  }
};

Failure check_circulation(const oracle::Arcs& a, std::int64_t expected) {
  auto m = min_circulation(a);
  if (!m) return "no circulation on a strongly connected graph";
  const std::size_t n = a.size();
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t out = 0, in = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (((*m)[i][j] >= 1) != a[i][j] || (*m)[i][j] < 0) return "flow off the arc set or below 1";
      out += (*m)[i][j];
      in += (*m)[j][i];
    }
    if (out != in) return "unbalanced vertex";
    total += out;
  }
  if (total != expected) return "total " + std::to_string(total) + " vs optimum " + std::to_string(expected);
  return std::nullopt;
}

Failure criterion9() {
  const auto t0 = Clock::now();
  std::size_t graphs = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto off = static_cast<std::uint32_t>(n * (n - 1));
    for (std::uint32_t mask = 0; mask < (1u << off); ++mask)
      for (std::uint32_t loops = 0; loops < (1u << n); ++loops) {
        auto a = oracle::arcs_from_mask(n, mask, loops);
        if (!oracle::strongly_connected(a)) continue;
        ++graphs;
        if (auto e = check_circulation(a, oracle::min_circulation_total(a))) return *e;
      }
  }
  // five vertices: every loopless graph, and each with a loop at every vertex; the oracle
  // value depends only on the isomorphism class
  const Relabel rel;
  std::map<std::pair<std::uint32_t, bool>, std::int64_t> cache;
  for (std::uint32_t mask = 0; mask < (1u << 20); ++mask) {
    auto a = oracle::arcs_from_mask(5, mask, 0);
    if (!oracle::strongly_connected(a)) continue;
    const std::uint32_t key = rel.canonical(mask);
    for (bool loops : {false, true}) {
      if (loops)
        for (std::size_t i = 0; i < 5; ++i) a[i][i] = true;
      auto it = cache.find({key, loops});
      if (it == cache.end()) it = cache.emplace(std::pair{key, loops}, oracle::min_circulation_total(a)).first;
      ++graphs;
      if (auto e = check_circulation(a, it->second)) return *e + " (n = 5, mask " + std::to_string(mask) + ")";
    }
  }
  const double s = seconds_since(t0);
  if (s >= 30) return "took " + std::to_string(s) + " s";
  std::cout << "  (" << graphs << " graphs, " << cache.size() / 2 << " classes on five vertices, " << s << " s)\n";
  return std::nullopt;
}

Failure criterion10() {
  const Measure u = Measure::uniform(dy());
  const Rational eps(1, 2);
  const auto ap = aperiodize_periodic(swap_map(), 1);
  const auto res = rank1_in_uniform_neighborhood(ap.t, {u}, eps, 2);
  const OpenDiffSet e = difference_set(res.s, ap.t);
  if (!subset(e.core, res.bound_set)) return "E-core escapes the bound set";
  if (!(measure_bounds(u, e).hi < eps)) return "certificate bound not below 1/2";
  if (!(u.of(res.bound_set) < eps)) return "bound set too heavy";
  // pointwise: S and T agree off the bound set
  testgen::Rng r(10);
  const Homeo sinv = res.s.inverse(), tinv = ap.t.inverse();
  int checked = 0;
  for (int k = 0; k < 4000 && checked < 1000; ++k) {
    const Point x = testgen::random_point(r, dy());
    if (res.bound_set.contains(x)) continue;
    ++checked;
    if (res.s.apply(x) != ap.t.apply(x)) return "S and T differ at " + point_to_string(dy(), x);
  }
  for (int k = 0; k < 1000; ++k) {
    const Point x = testgen::random_point(r, dy());
    if (!res.bound_set.contains(tinv.apply(x)) && sinv.apply(x) != tinv.apply(x)) return "inverses differ off the bound set";
  }
  std::cout << "  (mu(E) <= " << to_string(measure_bounds(u, e).hi) << ")\n";
  return std::nullopt;
}

std::string run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return std::to_string(code) + "\n" + out.str() + "\n--\n" + err.str();
}

Failure criterion11() {
  const std::vector<std::vector<std::string>> fixtures{
      {"dist", "id", "swap"},
      {"dist", "odometer", "truncation:dyadic:3", "--format", "json"},
      {"member", "swap", "--kind", "p", "--base", "swap", "--partition", "{0},{1}"},
      {"defect", "swap", "id", "--measure", "uniform", "--partition", "{00},{01},{1}"},
      {"compose", "swap", "odometer"},
      {"diff", "odometer", "truncation:dyadic:2"},
      {"periods", "truncation:dyadic:2", "--n", "4"},
      {"fullgroup", "swap", "odometer"},
      {"fullgroup", "dissipative", "odometer"},
      {"centralizer", "odometer:dyadic:3", "odometer", "--depth", "4"},
      {"centralizer", "swap", "odometer", "--depth", "4"},
      {"synth", "odometer", "--target", "id", "--partition", "{0},{1}"},
      {"synth", "odometer", "--target", "odometer", "--partition", "{00},{01},{10},{11}"},
      {"synth", "periodic", "--target", "dissipative", "--partition", "{0},{1}"},
      {"synth", "fundamental", "--target", "truncation:dyadic:3", "--period", "8"},
      {"synth", "rank1", "--target", "odometer:dyadic:3", "--measure", "uniform", "--epsilon", "1/2"},
      {"synth", "aperiodize", "--target", "swap", "--epsilon", "1"},
      {"synth", "approx", "--target", "odometer", "--epsilon", "1/4", "--measure", "uniform"},
      {"rokhlin", "--target", "odometer:dyadic", "--n", "3", "--measure", "uniform", "--epsilon", "1/8"},
      {"graph-dot", "--target", "swap", "--partition", "{00},{01},{1}"},
      {"measure", "product(;[1/3,2/3])", "{0,10}"},
      {"sample", "--seed", "7", "--kind", "homeo"},
      {"dist", "tree-pair {0->1"}};
  std::size_t identical = 0;
  for (const auto& args : fixtures) {
    const std::string a = run_cli(args), b = run_cli(args), c = run_cli(args);
    if (a != b || b != c) return "output differs across runs for " + args[0];
    ++identical;
  }

  testgen::Rng r(11);
  const std::vector<Signature> sigs{Signature(), Signature({}, {3}), Signature({3}, {2, 2}), Signature({}, {2, 3})};
  for (int k = 0; k < 1000; ++k) {
    const Signature& sig = sigs[testgen::below(r, sigs.size())];
    Document d;
    switch (k % 6) {
      case 0:
        d = to_document(sig);
        break;
      case 1:
        d = to_document(testgen::random_clopen(r, sig));
        break;
      case 2:
        d = to_document(testgen::random_measure(r, sig));
        break;
      case 3:
        d = to_document(testgen::random_homeo(r, sig));
        break;
      case 4:
        d = to_document(Neighborhood::uniform(testgen::random_homeo(r, sig), {testgen::random_measure(r, sig)},
                                              Rational(1, 1 + static_cast<long>(testgen::below(r, 9)))));
        break;
      default:
        d = to_document(Neighborhood::p(testgen::random_homeo(r, sig),
                                        as_sets(sig, testgen::random_partition(r, sig, 2 + testgen::below(r, 4), 3))));
    }
    const std::string text = print_document(d);
    const Document back = parse_document(text);
    if (!(back == d) || print_document(back) != text) return "round trip changed document " + std::to_string(k);
    if (d.kind == "homeo" && !same_action(homeo_from(d), homeo_from(back), 3)) return "round trip changed a map";
  }
  std::cout << "  (" << identical << " commands, 1000 documents)\n";
  return std::nullopt;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Failure()>>> criteria{
      {"euler synthesis soundness", criterion1},     {"moving dichotomy", criterion2},
      {"fundamental domain", criterion3},            {"rokhlin castle", criterion4},
      {"periodic approximation bound", criterion5},  {"weak metric and p-topology", criterion6},
      {"metric axioms", criterion7},                 {"centralizer test", criterion8},
      {"circulation optimality", criterion9},        {"end-to-end rank-1", criterion10},
      {"cli determinism and round trip", criterion11}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Failure f;
    try {
      f = criteria[i].second();
    } catch (const std::exception& e) {
      f = std::string("exception: ") + e.what();
    }
    std::cout << (f ? "FAIL" : "PASS") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (f) std::cout << ": " << *f;
    std::cout << std::endl;
    failed += f.has_value();
  }
  return failed == 0 ? 0 : 1;
}
