#include "cantordyn/measure.hpp"

#include <algorithm>
#include <numeric>

#include "cantordyn/homeo.hpp"

namespace cdyn {

namespace {
void check_weights(const Signature& sig, std::size_t level, const Measure::Weights& w) {
  if (w.size() != static_cast<std::size_t>(sig.radix(level)))
    throw std::invalid_argument("weight vector length differs from level size at level " + std::to_string(level));
  Rational s = 0;
  for (const Rational& q : w) {
    if (q < 0) throw std::invalid_argument("negative weight");
    s += q;
  }
  if (s != 1) throw std::invalid_argument("weights at level " + std::to_string(level) + " do not sum to 1");
}
}  // namespace

Measure Measure::uniform(const Signature& sig) {
  std::vector<Weights> pre, per;
  for (int r : sig.preperiod()) pre.emplace_back(static_cast<std::size_t>(r), Rational(1, r));
  for (int r : sig.period()) per.emplace_back(static_cast<std::size_t>(r), Rational(1, r));
  for (auto& w : pre)
    for (auto& q : w) q.canonicalize();
  for (auto& w : per)
    for (auto& q : w) q.canonicalize();
  return product(sig, pre, per);
}

Measure Measure::product(const Signature& sig, std::vector<Weights> preperiod, std::vector<Weights> period) {
  if (period.empty()) throw std::invalid_argument("product measure needs a nonempty weight period");
  // the weight sequence must be compatible with the level sizes
  const std::size_t n = preperiod.size() + sig.preperiod().size() + std::lcm(period.size(), sig.period().size());
  Measure m;
  m.kind_ = Kind::Product;
  m.sig_ = sig;
  m.pre_ = std::move(preperiod);
  m.per_ = std::move(period);
  for (std::size_t t = 0; t < n; ++t) check_weights(sig, t, m.weights(t));
  // canonical: minimal period, then minimal preperiod
  const std::size_t p = m.per_.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < p && ok; ++i) ok = m.per_[i] == m.per_[i - d];
    if (ok) {
      m.per_.resize(d);
      break;
    }
  }
  while (!m.pre_.empty() && m.pre_.back() == m.per_.back()) {
    std::rotate(m.per_.begin(), m.per_.end() - 1, m.per_.end());
    m.pre_.pop_back();
  }
  return m;
}

Measure Measure::dirac(const Signature& sig, const Point& atom) {
  if (!atom.valid(sig)) throw std::invalid_argument("Dirac atom has digits out of range");
  Measure m;
  m.kind_ = Kind::Dirac;
  m.sig_ = sig;
  m.atom_ = atom;
  return m;
}

Measure Measure::mixture(const Signature& sig, std::vector<std::pair<Rational, Measure>> parts) {
  if (parts.empty()) throw std::invalid_argument("empty mixture");
  Rational s = 0;
  for (const auto& [w, mu] : parts) {
    if (w <= 0) throw std::invalid_argument("mixture weights must be positive");
    if (mu.signature() != sig) throw SignatureError("mixture component signature mismatch");
    s += w;
  }
  if (s != 1) throw std::invalid_argument("mixture weights do not sum to 1");
  Measure m;
  m.kind_ = Kind::Mixture;
  m.sig_ = sig;
  m.parts_ = std::move(parts);
  return m;
}

bool Measure::is_uniform() const {
  if (kind_ != Kind::Product) return false;
  return *this == uniform(sig_);
}

const Measure::Weights& Measure::weights(std::size_t level) const {
  if (level < pre_.size()) return pre_[level];
  return per_[(level - pre_.size()) % per_.size()];
}

Rational Measure::of_cylinder(const Word& w) const {
  switch (kind_) {
    case Kind::Product: {
      Rational r = 1;
      for (std::size_t t = 0; t < w.size() && r != 0; ++t) r *= weights(t)[static_cast<std::size_t>(w[t])];
      return r;
    }
    case Kind::Dirac:
      return is_prefix(w, atom_.prefix(w.size())) ? Rational(1) : Rational(0);
    case Kind::Mixture: {
      Rational r = 0;
      for (const auto& [q, mu] : parts_) r += q * mu.of_cylinder(w);
      return r;
    }
  }
  return 0;
}

Rational Measure::of(const ClopenSet& a) const {
  if (a.signature() != sig_) throw SignatureError("measure/set signature mismatch");
  Rational r = 0;
  for (const Word& w : a.words()) r += of_cylinder(w);
  return r;
}

Rational Measure::of_point(const Point& x) const {
  switch (kind_) {
    case Kind::Product: {
      // positive only if the weight of x's digits is 1 on a full joint period
      const std::size_t start = std::max(x.pre().size(), pre_.size()) + sig_.preperiod().size();
      const std::size_t span = std::lcm(x.rep().size(), std::lcm(per_.size(), sig_.period().size()));
      Rational head = 1;
      for (std::size_t t = 0; t < start && head != 0; ++t) head *= weights(t)[static_cast<std::size_t>(x.digit(t))];
      Rational cycle = 1;
      for (std::size_t t = start; t < start + span && cycle != 0; ++t)
        cycle *= weights(t)[static_cast<std::size_t>(x.digit(t))];
      return cycle == 1 ? head : Rational(0);
    }
    case Kind::Dirac:
      return x == atom_ ? Rational(1) : Rational(0);
    case Kind::Mixture: {
      Rational r = 0;
      for (const auto& [q, mu] : parts_) r += q * mu.of_point(x);
      return r;
    }
  }
  return 0;
}

bool Measure::operator==(const Measure& o) const {
  if (kind_ != o.kind_ || sig_ != o.sig_) return false;
  switch (kind_) {
    case Kind::Product:
      return pre_ == o.pre_ && per_ == o.per_;
    case Kind::Dirac:
      return atom_ == o.atom_;
    case Kind::Mixture:
      return parts_ == o.parts_;
  }
  return false;
}

Rational measure_of(const Measure& mu, const ClopenSet& a) { return mu.of(a); }

Rational pushforward_measure_of(const Measure& mu, const Homeo& s, const ClopenSet& a) {
  return mu.of(image(s, a));
}

}  // namespace cdyn
