#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "cantordyn/space.hpp"

namespace cdyn {

class Homeo;

// Product, Dirac or finite mixture; every value is an exact rational.
class Measure {
 public:
  enum class Kind { Product, Dirac, Mixture };
  using Weights = std::vector<Rational>;

  static Measure uniform(const Signature& sig);
  static Measure product(const Signature& sig, std::vector<Weights> preperiod, std::vector<Weights> period);
  static Measure dirac(const Signature& sig, const Point& atom);
  static Measure mixture(const Signature& sig, std::vector<std::pair<Rational, Measure>> parts);

  Kind kind() const { return kind_; }
  const Signature& signature() const { return sig_; }
  const std::vector<Weights>& pre_weights() const { return pre_; }
  const std::vector<Weights>& period_weights() const { return per_; }
  const Point& atom() const { return atom_; }
  const std::vector<std::pair<Rational, Measure>>& parts() const { return parts_; }
  bool is_uniform() const;

  const Weights& weights(std::size_t level) const;
  Rational of_cylinder(const Word& w) const;
  Rational of(const ClopenSet& a) const;
  // mass of the single point x
  Rational of_point(const Point& x) const;

  bool operator==(const Measure& o) const;
  bool operator!=(const Measure& o) const { return !(*this == o); }

 private:
  Kind kind_ = Kind::Product;
  Signature sig_;
  std::vector<Weights> pre_, per_;
  Point atom_;
  std::vector<std::pair<Rational, Measure>> parts_;
};

Rational measure_of(const Measure& mu, const ClopenSet& a);
// mu(S A)
Rational pushforward_measure_of(const Measure& mu, const Homeo& s, const ClopenSet& a);

}  // namespace cdyn
