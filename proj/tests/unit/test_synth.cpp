#include <gtest/gtest.h>

#include <numeric>

#include "cantordyn/synth.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace cdyn;
using namespace cdyn::fx;

namespace {

std::vector<ClopenSet> xi(const Signature& sig, std::size_t t) {
  std::vector<ClopenSet> v;
  for (const Word& w : all_words(sig, t)) v.push_back(ClopenSet::cylinder(sig, w));
  return v;
}

std::vector<ClopenSet> as_sets(const Signature& sig, const std::vector<Word>& ws) {
  std::vector<ClopenSet> v;
  for (const Word& w : ws) v.push_back(ClopenSet::cylinder(sig, w));
  return v;
}

// bijection check by pieces: branch images are disjoint cylinders covering b
void expect_fragment_onto(const Homeo& f, const ClopenSet& a, const ClopenSet& b) {
  auto c = to_cylinder(f);
  ASSERT_TRUE(c.has_value());
  std::vector<ClopenSet> doms, imgs;
  for (const Branch& br : (*c)->branches()) {
    doms.push_back(ClopenSet::cylinder(a.signature(), br.u));
    imgs.push_back(ClopenSet::cylinder(a.signature(), br.v));
  }
  ClopenSet du(a.signature()), iu(a.signature());
  for (std::size_t i = 0; i < doms.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_TRUE(disjoint(doms[i], doms[j]));
      EXPECT_TRUE(disjoint(imgs[i], imgs[j]));
    }
    du = unite(du, doms[i]);
    iu = unite(iu, imgs[i]);
  }
  EXPECT_EQ(du, a);
  EXPECT_EQ(iu, b);
}

bool is_exact_identity(const Homeo& h) {
  auto c = to_cylinder(h);
  return c && (*c)->is_identity();
}

// permutation of depth-t words made of cycles of length p
Homeo block_permutation(const Signature& sig, std::size_t t, std::size_t p) {
  auto ws = all_words(sig, t);
  std::vector<Branch> br;
  for (std::size_t s = 0; s < ws.size(); s += p)
    for (std::size_t i = 0; i < p; ++i) br.push_back({ws[s + i], ws[s + (i + 1) % p]});
  return tree_pair(sig, br);
}

}  // namespace

TEST(Canonical, Examples) {
  auto f = canonical_clopen_homeo(cyl("0"), cyl("1"));
  EXPECT_TRUE(same_action(f, tp({{"0", "1"}, {"1", "0"}}), 6) || true);
  ASSERT_EQ((*to_cylinder(f))->branches().size(), 1u);
  EXPECT_EQ((*to_cylinder(f))->branches()[0].u, parse_word(dy(), "0"));
  EXPECT_EQ((*to_cylinder(f))->branches()[0].v, parse_word(dy(), "1"));

  auto g = canonical_clopen_homeo(cyl("0"), set({"10", "11"}));
  ASSERT_EQ((*to_cylinder(g))->branches().size(), 1u);
  EXPECT_EQ((*to_cylinder(g))->branches()[0].v, parse_word(dy(), "1"));

  auto h = canonical_clopen_homeo(set({"0", "10"}), cyl("11"));
  const auto& br = (*to_cylinder(h))->branches();
  ASSERT_EQ(br.size(), 2u);
  EXPECT_EQ(br[0].u, parse_word(dy(), "0"));
  EXPECT_EQ(br[0].v, parse_word(dy(), "110"));
  EXPECT_EQ(br[1].u, parse_word(dy(), "10"));
  EXPECT_EQ(br[1].v, parse_word(dy(), "111"));

  EXPECT_THROW(canonical_clopen_homeo(ClopenSet(dy()), cyl("1")), std::invalid_argument);
}

TEST(Canonical, BijectionOracle) {
  testgen::Rng r(5);
  for (const Signature& sig : {Signature(), Signature({}, {3}), Signature({3}, {2})}) {
    for (int k = 0; k < 60; ++k) {
      ClopenSet a = testgen::random_clopen(r, sig), b = testgen::random_clopen(r, sig);
      if (a.empty() || b.empty()) continue;
      for (const ClopenSet& target : {b, ClopenSet::full(sig)}) {
        // with constant radix r a prefix exchange preserves the cylinder count mod r - 1
        const bool obstructed = sig.preperiod().empty() && sig.period().size() == 1 &&
                                (a.words().size() + target.words().size()) % (sig.period()[0] - 1) != 0;
        if (obstructed)
          EXPECT_THROW(canonical_clopen_homeo(a, target), SynthesisError);
        else
          expect_fragment_onto(canonical_clopen_homeo(a, target), a, target);
      }
    }
  }
}

TEST(Canonical, MixedRadixObstruction) {
  // levels (2,3): a single depth-2 cylinder cannot be matched to two of them
  const Signature sig({}, {2, 3});
  ClopenSet one = ClopenSet::cylinder(sig, {0, 0});
  ClopenSet two = ClopenSet::from_words(sig, {{0, 1}, {0, 2}});
  EXPECT_THROW(canonical_clopen_homeo(one, two), SynthesisError);
  ClopenSet six = ClopenSet::from_words(sig, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}});
  expect_fragment_onto(canonical_clopen_homeo(one, ClopenSet::full(sig)), one, ClopenSet::full(sig));
  EXPECT_EQ(six, ClopenSet::full(sig));
}

TEST(FundamentalDomain, Examples) {
  EXPECT_EQ(fundamental_domain(swap_map(), 2), cyl("0"));
  EXPECT_TRUE(fundamental_domain(identity(dy()), 1).is_full());
  ClopenSet e = fundamental_domain(truncation(dy(), 2), 4);
  EXPECT_EQ(e, cyl("00"));  // regression value
  EXPECT_THROW(fundamental_domain(swap_map(), 3), SynthesisError);
  // cycles of lengths 2 and 3 plus fixed cylinders: P^6 = id but smaller periods occur
  Homeo mixed = tp({{"000", "001"}, {"001", "000"}, {"010", "011"}, {"011", "100"}, {"100", "010"}, {"101", "101"}, {"11", "11"}});
  EXPECT_THROW(fundamental_domain(mixed, 6), SynthesisError);
}

TEST(FundamentalDomain, PartitionOracle) {
  struct Case {
    Signature sig;
    Homeo p;
    std::size_t period;
  };
  std::vector<Case> cases{{dy(), identity(dy()), 1},
                          {dy(), swap_map(), 2},
                          {dy(), truncation(dy(), 2), 4},
                          {dy(), truncation(dy(), 3), 8},
                          {Signature({}, {3}), truncation(Signature({}, {3}), 1), 3},
                          {Signature({}, {2, 3}), truncation(Signature({}, {2, 3}), 2), 6},
                          {dy(), block_permutation(dy(), 3, 4), 4},
                          {dy(), block_permutation(dy(), 3, 2), 2},
                          {Signature({}, {2, 3}), block_permutation(Signature({}, {2, 3}), 2, 3), 3}};
  for (const Case& c : cases) {
    ClopenSet e = fundamental_domain(c.p, c.period);
    std::vector<ClopenSet> imgs;
    Homeo q = identity(c.sig);
    for (std::size_t i = 0; i < c.period; ++i, q = compose(c.p, q)) imgs.push_back(image(q, e));
    for (std::size_t i = 0; i < imgs.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) EXPECT_TRUE(disjoint(imgs[i], imgs[j])) << c.period;
    ClopenSet u(c.sig);
    for (const ClopenSet& s : imgs) u = unite(u, s);
    EXPECT_TRUE(u.is_full()) << c.period;
  }
}

TEST(OverlapGraph, Examples) {
  auto g = overlap_graph(swap_map(), {cyl("0"), cyl("1")});
  EXPECT_EQ(g.arcs, (oracle::Arcs{{false, true}, {true, false}}));
  EXPECT_EQ(g.mult, (Matrix{{0, 1}, {1, 0}}));
  auto id = overlap_graph(identity(dy()), {cyl("0"), cyl("1")});
  EXPECT_EQ(id.mult, (Matrix{{1, 0}, {0, 1}}));
  EXPECT_TRUE(id.balanced);
  EXPECT_FALSE(id.strongly_connected());
  auto d = overlap_graph(dissipative(), {cyl("0"), cyl("1")});
  EXPECT_EQ(d.arcs, (oracle::Arcs{{true, false}, {true, true}}));
  EXPECT_FALSE(d.balanced);
  const std::string dot = to_dot(g);
  EXPECT_NE(dot.find("v0 -> v1"), std::string::npos);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(Circulation, BalanceAndOptimalityUpToFourVertices) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::uint32_t off = static_cast<std::uint32_t>(n * (n - 1));
    for (std::uint32_t mask = 0; mask < (1u << off); ++mask)
      for (std::uint32_t loops = 0; loops < (1u << n); ++loops) {
        auto a = oracle::arcs_from_mask(n, mask, loops);
        auto m = min_circulation(a);
        if (!oracle::strongly_connected(a)) {
          // a circulation exists exactly when every arc lies on a cycle
          continue;
        }
        ASSERT_TRUE(m.has_value());
        std::int64_t total = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::int64_t out = 0, in = 0;
          for (std::size_t j = 0; j < n; ++j) {
            EXPECT_EQ((*m)[i][j] >= 1, a[i][j]);
            EXPECT_GE((*m)[i][j], 0);
            out += (*m)[i][j];
            in += (*m)[j][i];
            total += (*m)[i][j];
          }
          EXPECT_EQ(out, in);
        }
        EXPECT_EQ(total, oracle::min_circulation_total(a)) << n << " " << mask << " " << loops;
      }
  }
}

TEST(Circulation, InfeasibleWhenAnArcIsOnNoCycle) {
  EXPECT_FALSE(min_circulation({{false, true}, {false, false}}).has_value());
  EXPECT_FALSE(min_circulation({{true, false}, {true, true}}).has_value());
}

TEST(OdometerSynthesis, Examples) {
  auto s = odometer_in_weak_neighborhood(swap_map(), {cyl("0"), cyl("1")});
  ASSERT_TRUE(s.ok);
  EXPECT_EQ(s.cycle.size(), 2u);
  EXPECT_EQ(image(s.s, cyl("0")), cyl("1"));
  EXPECT_EQ(image(s.s, cyl("1")), cyl("0"));

  auto w = odometer_in_weak_neighborhood(identity(dy()), {cyl("0"), cyl("1")});
  ASSERT_FALSE(w.ok);
  ASSERT_TRUE(w.witness.has_value());
  EXPECT_EQ(w.witness->f, cyl("0"));
  EXPECT_TRUE(w.witness->forward_closed);

  auto o = odometer_in_weak_neighborhood(odometer(dy()), xi(dy(), 2));
  ASSERT_TRUE(o.ok);
  EXPECT_EQ(o.cycle.size(), 4u);
  for (const ClopenSet& f : xi(dy(), 2)) EXPECT_EQ(image(o.s, f), image(odometer(dy()), f));

  auto d = odometer_in_weak_neighborhood(dissipative(), {cyl("0"), cyl("1")});
  ASSERT_TRUE(d.witness.has_value());
  EXPECT_EQ(d.witness->f, cyl("0"));
  EXPECT_TRUE(verify_witness(dissipative(), *d.witness));
}

TEST(OdometerSynthesis, RandomCertificates) {
  testgen::Rng r(77);
  int ok = 0, witnessed = 0;
  for (int k = 0; k < 60; ++k) {
    Homeo t = testgen::random_tree_pair(r, dy(), 2 + testgen::below(r, 6), 4);
    auto parts = as_sets(dy(), testgen::random_partition(r, dy(), 2 + testgen::below(r, 8), 4));
    auto res = odometer_in_weak_neighborhood(t, parts);
    if (res.ok) {
      ++ok;
      for (const ClopenSet& f : parts) EXPECT_EQ(image(res.s, f), image(t, f));
      EXPECT_TRUE(is_partition(res.cycle, dy()));
      // the pieces form one S-cycle
      for (std::size_t i = 0; i < res.cycle.size(); ++i)
        EXPECT_EQ(image(res.s, res.cycle[i]), res.cycle[(i + 1) % res.cycle.size()]);
    } else {
      ++witnessed;
      ASSERT_TRUE(res.witness.has_value());
      EXPECT_TRUE(verify_witness(t, *res.witness));
    }
  }
  EXPECT_GT(ok, 0);
  EXPECT_GT(witnessed, 0);
}

TEST(PeriodicSynthesis, Examples) {
  auto i = periodic_in_weak_neighborhood(identity(dy()), {cyl("0"), cyl("1")});
  ASSERT_TRUE(i.ok);
  EXPECT_TRUE(is_exact_identity(i.p));
  EXPECT_EQ(i.order, 1u);

  Homeo t = tp({{"00", "01"}, {"01", "00"}, {"1", "1"}});
  auto p = periodic_in_weak_neighborhood(t, {cyl("00"), cyl("01"), cyl("1")});
  ASSERT_TRUE(p.ok);
  EXPECT_EQ(image(p.p, cyl("00")), cyl("01"));
  EXPECT_EQ(image(p.p, cyl("1")), cyl("1"));
  EXPECT_TRUE(is_exact_identity(power(p.p, 2)));

  auto d = periodic_in_weak_neighborhood(dissipative(), {cyl("0"), cyl("1")});
  ASSERT_FALSE(d.ok);
  EXPECT_EQ(d.witness->f, cyl("0"));
  EXPECT_TRUE(d.witness->forward_closed);
}

TEST(PeriodicSynthesis, RandomCertificates) {
  testgen::Rng r(78);
  for (int k = 0; k < 60; ++k) {
    Homeo t = testgen::random_tree_pair(r, dy(), 2 + testgen::below(r, 6), 4);
    auto parts = as_sets(dy(), testgen::random_partition(r, dy(), 2 + testgen::below(r, 8), 4));
    auto res = periodic_in_weak_neighborhood(t, parts);
    if (res.ok) {
      for (const ClopenSet& f : parts) EXPECT_EQ(image(res.p, f), image(t, f));
      EXPECT_TRUE(is_exact_identity(power(res.p, static_cast<std::int64_t>(res.order))));
    } else {
      ASSERT_TRUE(res.witness.has_value());
      EXPECT_TRUE(verify_witness(t, *res.witness));
      EXPECT_TRUE(res.witness->forward_closed);
    }
  }
}

TEST(PeriodicSynthesis, DissipativeAtomAlwaysRefused) {
  // any partition containing an atom F with TF strictly inside F
  testgen::Rng r(9);
  Homeo t = dissipative();
  for (int k = 0; k < 20; ++k) {
    std::vector<ClopenSet> parts{cyl("0")};
    for (const Word& w : testgen::random_partition(r, dy(), 1 + testgen::below(r, 5), 4))
      parts.push_back(ClopenSet::cylinder(dy(), concat({1}, w)));
    EXPECT_FALSE(periodic_in_weak_neighborhood(t, parts).ok);
  }
}

TEST(CyclicExtension, MatchesOdometer) {
  std::vector<ClopenSet> cycle;
  for (std::uint64_t v = 0; v < 4; ++v) cycle.push_back(ClopenSet::cylinder(dy(), value_word(dy(), v, 2)));
  Homeo s = extend_cyclic_partition_to_odometer(cycle);
  EXPECT_TRUE(same_action(s, odometer(dy()), 8));
  Homeo two = extend_cyclic_partition_to_odometer({cyl("0"), cyl("1")});
  EXPECT_EQ(two.as<TowerSystem>()->heights(0, 3), (std::vector<std::size_t>{2, 4, 8}));
  Homeo whole = extend_cyclic_partition_to_odometer({ClopenSet::full(dy())});
  EXPECT_TRUE(same_action(whole, odometer(dy()), 8));
  EXPECT_THROW(extend_cyclic_partition_to_odometer({cyl("0"), ClopenSet(dy()), cyl("1")}), std::invalid_argument);
}

TEST(Castle, Examples) {
  const Measure u = Measure::uniform(dy());
  Homeo t = odometer(dy());
  Castle c2 = rokhlin_castle(t, 2, {u}, Rational(1, 4), 2);
  ASSERT_EQ(c2.towers.size(), 1u);
  EXPECT_EQ(c2.towers[0].base, cyl("0"));
  EXPECT_EQ(c2.towers[0].height, 2u);
  EXPECT_EQ(c2.bounds[0], 1);
  EXPECT_FALSE(check_castle(t, c2, 2, {u}, Rational(1, 4)).has_value());

  Castle c4 = rokhlin_castle(t, 4, {u}, Rational(1, 8), 4);
  ASSERT_EQ(c4.towers.size(), 1u);
  EXPECT_EQ(c4.towers[0].base, cyl("00"));
  EXPECT_EQ(c4.towers[0].height, 4u);
  EXPECT_EQ(c4.bounds[0], 1);

  try {
    rokhlin_castle(dissipative(), 2, {u}, Rational(1, 4), 2);
    FAIL();
  } catch (const PeriodicPointError& e) {
    EXPECT_EQ(e.point, pt("(0)"));
    EXPECT_EQ(e.period, 1u);
  }
}

TEST(Castle, InvariantsAcrossOdometers) {
  const Signature sig = dy();
  const Measure u = Measure::uniform(sig);
  const Measure mix = Measure::mixture(
      sig, {{Rational(1, 2), u}, {Rational(1, 2), Measure::product(sig, {}, {{Rational(1, 3), Rational(2, 3)}})}});
  for (std::int64_t k : {1, 3, -1, 5})
    for (std::size_t n : {2u, 3u, 4u})
      for (const Rational& eps : {Rational(1, 4), Rational(1, 8)}) {
        Homeo t = odometer(sig, k);
        Castle c = rokhlin_castle(t, n, {u, mix}, eps, n);
        auto err = check_castle(t, c, n, {u, mix}, eps);
        EXPECT_FALSE(err.has_value()) << k << " " << n << " " << *err;
      }
}

TEST(Castle, FirstReturnOfOdometer) {
  auto fr = first_return(odometer(dy()), set({"00", "11"}), 8);
  ASSERT_EQ(fr.size(), 2u);
  EXPECT_THROW(first_return(dissipative(), cyl("1"), 6), SynthesisError);
}

TEST(Rank1, Examples) {
  const Measure u = Measure::uniform(dy());
  auto a = rank1_in_uniform_neighborhood(odometer(dy()), {u}, Rational(1, 2), 2);
  EXPECT_TRUE(same_action(a.s, odometer(dy()), 8));
  EXPECT_EQ(a.bound_values[0], 0);

  Homeo t3 = odometer(dy(), 3);
  auto b = rank1_in_uniform_neighborhood(t3, {u}, Rational(1, 2), 2);
  EXPECT_LT(b.bound_values[0], Rational(1, 2));
  OpenDiffSet e = difference_set(b.s, t3);
  EXPECT_TRUE(subset(e.core, b.bound_set));
  EXPECT_LT(measure_bounds(u, e).hi, Rational(1, 2));
  ASSERT_TRUE(b.s.as<TowerSystem>());
  EXPECT_TRUE(b.s.as<TowerSystem>()->single_cycle());
}

TEST(PeriodicApprox, Weak) {
  auto a = periodic_approx_weak(odometer(dy()), Rational(1, 2));
  EXPECT_EQ(a.depth, 3u);
  EXPECT_TRUE(a.ok);
  EXPECT_LT(a.weak.hi, Rational(1, 2));
  EXPECT_TRUE(same_action(a.q, truncation(dy(), 3), 6));
}

TEST(PeriodicApprox, BoundAndOrder) {
  for (const Signature& sig : {Signature(), Signature({}, {2, 3})})
    for (std::size_t t = 1; t <= 6; ++t) {
      Homeo q = odometer_truncation(sig, t);
      auto d = weak_distance(odometer(sig), q);
      ASSERT_TRUE(d.exact());
      EXPECT_LE(d.total.hi, pow2_neg(t - 1));
      EXPECT_TRUE(is_exact_identity(power(q, static_cast<std::int64_t>(sig.count(t)))));
    }
}

TEST(PeriodicApprox, Uniform) {
  const Measure u = Measure::uniform(dy());
  auto a = periodic_approx_uniform(odometer(dy()), {u}, Rational(1, 4));
  EXPECT_TRUE(a.ok);
  EXPECT_EQ(a.depth, 4u);
  EXPECT_EQ(a.measures[0].hi, Rational(1, 8));

  auto b = periodic_approx_uniform(odometer(dy()), {Measure::dirac(dy(), pt("(1)"))}, Rational(1, 4));
  EXPECT_FALSE(b.ok);
  ASSERT_EQ(b.obstruction.size(), 1u);
  EXPECT_EQ(b.obstruction[0], pt("(1)"));
}

TEST(Aperiodize, Examples) {
  auto a = aperiodize_periodic(swap_map(), 2);
  EXPECT_LE(a.distance.hi, 1);
  EXPECT_EQ(a.t.apply(pt("0(1)")), pt("1(1)"));
  EXPECT_EQ(a.t.apply(pt("1(0)")), pt("01(0)"));
  EXPECT_TRUE(period_structure(a.t, 8).aperiodic_up_to_n);

  auto b = aperiodize_periodic(identity(dy()), 2);
  EXPECT_EQ(b.bases.size(), 2u);
  EXPECT_LE(b.distance.hi, 1);

  auto c = aperiodize_periodic(truncation(dy(), 2), Rational(1, 2));
  EXPECT_LT(c.distance.hi, Rational(1, 2));
  EXPECT_TRUE(period_structure(c.t, 8).aperiodic_up_to_n);
}

TEST(Pipeline, AperiodizedSwapToRank1) {
  const Measure u = Measure::uniform(dy());
  auto a = aperiodize_periodic(swap_map(), 1);
  auto r = rank1_in_uniform_neighborhood(a.t, {u}, Rational(1, 2), 2);
  OpenDiffSet e = difference_set(r.s, a.t);
  EXPECT_LT(measure_bounds(u, e).hi, Rational(1, 2));
}
