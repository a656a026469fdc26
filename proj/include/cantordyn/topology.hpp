#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cantordyn/dynamics.hpp"

namespace cdyn {

enum class Verdict { False, True, Indeterminate };
std::string to_string(Verdict v);

struct WeakDistance {
  Interval forward;   // sup d(Sx, Tx)
  Interval backward;  // sup d(S^-1 x, T^-1 x)
  Interval total;
  bool exact() const { return total.exact(); }
};
WeakDistance weak_distance(const Homeo& s, const Homeo& t, std::size_t depth = kDefaultDepth);

struct Neighborhood {
  enum class Kind { P, Uniform, BarP, WeakBall };
  Kind kind = Kind::P;
  Homeo base;
  std::vector<ClopenSet> sets;
  std::vector<Measure> measures;
  Rational epsilon;  // Uniform, BarP
  Rational radius;   // WeakBall

  static Neighborhood p(Homeo base, std::vector<ClopenSet> sets);
  static Neighborhood uniform(Homeo base, std::vector<Measure> measures, Rational eps);
  static Neighborhood bar_p(Homeo base, std::vector<ClopenSet> sets, std::vector<Measure> measures, Rational eps);
  static Neighborhood weak_ball(Homeo base, Rational radius);
};

struct Membership {
  Verdict verdict = Verdict::False;
  // Uniform: one interval per measure; BarP: one value per (set, measure), set-major;
  // WeakBall: the distance interval
  std::vector<Interval> values;
  std::optional<std::size_t> failing;  // P / BarP: first failing index into values or sets
  std::string note;
};
Membership in_neighborhood(const Homeo& s, const Neighborhood& n, std::size_t depth = kDefaultDepth);

enum class DefectKind { TauPrime, BarTau };
struct Defect {
  Rational value;
  ClopenSet argmax;
  bool heuristic = false;
};
inline constexpr std::size_t kExhaustiveAtoms = 20;
// lower bound of the sup over all clopen F, taken over unions of partition atoms
Defect defect_over_partition(DefectKind kind, const Homeo& s, const Homeo& t, const Measure& mu,
                             const std::vector<ClopenSet>& partition, bool allow_heuristic = false);

struct LimsupResult {
  bool holds = false;
  ClopenSet forward, backward;  // finite-horizon limsup of T_n F and T_n^-1 F
};
// limsup over n in [horizon, len): the intersection of T_n F over that range
LimsupResult limsup_check(const std::vector<Homeo>& seq, const ClopenSet& f, std::size_t horizon);

// least distance between images of distinct atoms under t
Rational image_gap(const Homeo& t, const std::vector<ClopenSet>& partition);

}  // namespace cdyn
