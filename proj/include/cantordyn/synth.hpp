#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantordyn/dynamics.hpp"
#include "cantordyn/topology.hpp"

namespace cdyn {

struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PeriodicPointError : SynthesisError {
  PeriodicPointError(Point x, std::size_t period)
      : SynthesisError("periodic point found (period " + std::to_string(period) + ")"), point(std::move(x)),
        period(period) {}
  Point point;
  std::size_t period;
};

// Deterministic prefix-exchange fragment from A onto B.
Homeo canonical_clopen_homeo(const ClopenSet& a, const ClopenSet& b);

// E with (E, PE, ..., P^{p-1}E) a partition of Omega
ClopenSet fundamental_domain(const Homeo& p_map, std::size_t period);

using Matrix = std::vector<std::vector<std::int64_t>>;

// minimal-total integer circulation with m_ij >= 1 on every arc, nullopt when infeasible
std::optional<Matrix> min_circulation(const std::vector<std::vector<bool>>& arcs);

struct OverlapGraph {
  std::vector<ClopenSet> atoms;
  std::vector<std::vector<ClopenSet>> cells;  // cells[i][j] = T F_i cap F_j
  std::vector<std::vector<bool>> arcs;
  Matrix mult;            // zero where there is no arc, or everywhere when infeasible
  bool balanced = false;  // a circulation exists

  std::size_t size() const { return atoms.size(); }
  bool strongly_connected() const;
  std::vector<std::size_t> reachable_from(std::size_t v) const;
  std::vector<std::size_t> reaching(std::size_t v) const;
};
OverlapGraph overlap_graph(const Homeo& t, const std::vector<ClopenSet>& partition);
std::string to_dot(const OverlapGraph& g);

// F proper with TF subset of F (forward closed) or F subset of TF
struct Witness {
  ClopenSet f;
  bool forward_closed = true;
};
bool verify_witness(const Homeo& t, const Witness& w);

struct OdometerSynthesis {
  bool ok = false;
  Homeo s;
  std::vector<ClopenSet> cycle;
  OverlapGraph graph;
  std::optional<Witness> witness;
};
OdometerSynthesis odometer_in_weak_neighborhood(const Homeo& t, const std::vector<ClopenSet>& partition);

struct PeriodicSynthesis {
  bool ok = false;
  Homeo p;
  std::size_t order = 0;  // P^order = id
  OverlapGraph graph;
  std::optional<Witness> witness;
};
PeriodicSynthesis periodic_in_weak_neighborhood(const Homeo& t, const std::vector<ClopenSet>& partition);

Homeo extend_cyclic_partition_to_odometer(const std::vector<ClopenSet>& cycle);

struct Tower {
  ClopenSet base;
  std::size_t height = 0;
  std::vector<ClopenSet> levels;
};
struct Castle {
  std::vector<Tower> towers;
  ClopenSet marked;             // B
  std::vector<Rational> bounds;  // mu_i of the union of T^-j B, j < n
  std::size_t offset = 0;       // cut offset inside the marker towers
  std::size_t threshold = 0;    // marker separation used
};
inline constexpr std::size_t kCastleMaxThreshold = 1024;
inline constexpr std::size_t kCoverDepthCap = 40;
Castle rokhlin_castle(const Homeo& t, std::size_t n, const std::vector<Measure>& measures, const Rational& eps,
                      std::size_t period_bound);
// first-return partition of a: (return time, base), ordered by return time
std::vector<std::pair<std::size_t, ClopenSet>> first_return(const Homeo& t, const ClopenSet& a, std::size_t max_time);
// independent check of every castle invariant; returns a description of the first violation
std::optional<std::string> check_castle(const Homeo& t, const Castle& c, std::size_t n,
                                        const std::vector<Measure>& measures, const Rational& eps);

struct Rank1Result {
  Homeo s;
  ClopenSet bound_set;                // contains E(S,T)
  std::vector<Rational> bound_values;  // mu_i(bound_set)
  std::size_t threshold = 0;
  std::size_t towers = 0;
};
Rank1Result rank1_in_uniform_neighborhood(const Homeo& t, const std::vector<Measure>& measures, const Rational& eps,
                                          std::size_t period_bound);

struct PeriodicApprox {
  bool ok = false;
  Homeo q;
  std::size_t depth = 0;   // t
  std::uint64_t order = 0;  // Q^order = id
  Interval weak;            // d_w(S,Q) in weak mode
  std::vector<Interval> measures;  // mu_i(E(Q,S)) in uniform mode
  std::vector<Point> obstruction;  // heavy atoms on the carry cylinders
  std::string note;
};
PeriodicApprox periodic_approx_weak(const Homeo& s, const Rational& eps);
PeriodicApprox periodic_approx_uniform(const Homeo& s, const std::vector<Measure>& measures, const Rational& eps,
                                       std::size_t max_depth = 40);
// x -> x+k on words of length t, carries dropped
Homeo odometer_truncation(const Signature& sig, std::size_t t, std::int64_t shift = 1);

struct Aperiodized {
  Homeo t;
  ClopenSet domain;                // fundamental domain
  std::vector<ClopenSet> bases;    // subtower bases
  Interval distance;               // d_w(T,P)
};
Aperiodized aperiodize_periodic(const Homeo& p_map, const Rational& eps, std::optional<std::size_t> period = {});

}  // namespace cdyn
