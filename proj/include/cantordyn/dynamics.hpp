#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cantordyn/homeo.hpp"
#include "cantordyn/measure.hpp"

namespace cdyn {

// E = (core minus exceptional) plus an undecided part of unresolved.
// Exceptional points lie in core; unresolved is disjoint from core.
struct OpenDiffSet {
  ClopenSet core;
  std::vector<Point> exceptional;
  ClopenSet unresolved;

  bool exact() const { return unresolved.empty(); }
  bool empty() const { return core.empty() && unresolved.empty(); }
  bool contains(const Point& x) const;  // only meaningful off unresolved
};

struct Interval {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
};

// default refinement depth for maps with carry cylinders
inline constexpr std::size_t kDefaultDepth = 24;

// {x : Sx != Tx}
OpenDiffSet one_sided_difference(const Homeo& s, const Homeo& t, std::size_t depth = kDefaultDepth);
// E(S,T) = {Sx != Tx} union {S^-1 x != T^-1 x}
OpenDiffSet difference_set(const Homeo& s, const Homeo& t, std::size_t depth = kDefaultDepth);
Interval measure_bounds(const Measure& mu, const OpenDiffSet& e);

struct FixedPoints {
  ClopenSet clopen;
  std::vector<Point> isolated;
  ClopenSet unresolved;  // empty for prefix exchanges
};
FixedPoints fixed_points(const Homeo& t, std::size_t depth = kDefaultDepth);

struct PeriodStructure {
  std::size_t max_power = 0;
  std::vector<ClopenSet> parts;  // parts[p-1] = points of exact period p
  ClopenSet residual;
  std::vector<std::pair<Point, std::size_t>> isolated;  // isolated periodic points with exact period
  ClopenSet unresolved;
  std::optional<std::size_t> order;  // least m <= N with T^m = id
  bool aperiodic_up_to_n = false;
};
PeriodStructure period_structure(const Homeo& t, std::size_t max_power, std::size_t depth = kDefaultDepth);

struct FullGroupResult {
  bool member = false;
  std::map<int, ClopenSet> parts;
  // refusal: certain means a cylinder where every power moves all but finitely many points
  bool certain = false;
  std::optional<Word> witness;
  std::string reason;
};
FullGroupResult full_group_membership(const Homeo& s, const Homeo& t, int bound, std::size_t depth = 16);

struct CentralizerResult {
  bool ok = false;
  std::vector<std::int64_t> indices;  // i_s
  std::vector<std::uint64_t> moduli;  // p_s
  std::optional<std::size_t> fail_level;
  Word witness;            // cylinder of xi_s where R acts like no power
  ClopenSet witness_image;
};
CentralizerResult centralizer_index_sequence(const Homeo& r, const Homeo& s, std::size_t depth);

}  // namespace cdyn
