#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cantordyn/space.hpp"

namespace cdyn {

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Restriction of a map to the cylinder [dom]. Exact pieces act by prefix
// replacement dom.x -> img.x; inexact pieces only carry [dom] onto [img].
struct Piece {
  Word dom;
  Word img;
  bool exact = true;
};

class HomeoImpl;

class Homeo {
 public:
  enum class Kind { Cylinder, Odometer, Tower, Composite, Restriction };

  Homeo() = default;
  explicit Homeo(std::shared_ptr<const HomeoImpl> p) : p_(std::move(p)) {}

  Kind kind() const;
  const Signature& signature() const;
  ClopenSet domain() const;
  // pieces partitioning [c]; every dom extends c and has length >= min_depth
  void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const;
  std::vector<Piece> pieces(const Word& c, std::size_t min_depth) const;
  Point apply(const Point& x) const;
  Homeo inverse() const;

  const HomeoImpl& impl() const { return *p_; }
  const std::shared_ptr<const HomeoImpl>& ptr() const { return p_; }
  template <class T>
  const T* as() const {
    return dynamic_cast<const T*>(p_.get());
  }
  explicit operator bool() const { return static_cast<bool>(p_); }

 private:
  std::shared_ptr<const HomeoImpl> p_;
};

class HomeoImpl {
 public:
  virtual ~HomeoImpl() = default;
  virtual Homeo::Kind kind() const = 0;
  virtual const Signature& signature() const = 0;
  virtual ClopenSet domain() const = 0;
  virtual void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const = 0;
  virtual Point apply(const Point& x) const = 0;
  virtual Homeo inverse() const = 0;
};

struct Branch {
  Word u, v;
  bool operator==(const Branch& o) const { return u == o.u && v == o.v; }
};

// Prefix exchange u.x -> v.x. Total maps have domain and range Omega; partial
// ones (fragments) are bijections between two clopen sets.
class CylinderHomeo : public HomeoImpl {
 public:
  static std::shared_ptr<const CylinderHomeo> make(const Signature& sig, std::vector<Branch> branches,
                                                   bool require_total = true);

  Homeo::Kind kind() const override { return Homeo::Kind::Cylinder; }
  const Signature& signature() const override { return sig_; }
  ClopenSet domain() const override;
  ClopenSet range() const;
  void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const override;
  Point apply(const Point& x) const override;
  Homeo inverse() const override;

  const std::vector<Branch>& branches() const { return branches_; }
  bool is_total() const { return total_; }
  bool is_identity() const { return total_ && branches_.size() == 1 && branches_[0].u.empty() && branches_[0].v.empty(); }
  bool operator==(const CylinderHomeo& o) const { return sig_ == o.sig_ && branches_ == o.branches_; }

 private:
  CylinderHomeo() = default;
  Signature sig_;
  std::vector<Branch> branches_;
  std::vector<Word> us_;
  std::size_t max_u_ = 0;
  bool total_ = true;
};

// x -> x + k in the mixed-radix group, digit 0 least significant.
class Odometer : public HomeoImpl {
 public:
  Odometer(Signature sig, std::int64_t shift) : sig_(std::move(sig)), k_(shift) {}

  Homeo::Kind kind() const override { return Homeo::Kind::Odometer; }
  const Signature& signature() const override { return sig_; }
  ClopenSet domain() const override { return ClopenSet::full(sig_); }
  void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const override;
  Point apply(const Point& x) const override;
  Homeo inverse() const override;

  std::int64_t shift() const { return k_; }

 private:
  Signature sig_;
  std::int64_t k_;
};

// One cyclic tower (B_0,...,B_{m-1}). steps[i] carries B_i onto B_{i+1};
// the top returns to the base through chart^{-1} o (x -> x + shift) o chart o Phi^{-1},
// Phi = steps[m-2] o ... o steps[0], chart : B_0 -> Omega.
struct TowerComponent {
  std::vector<ClopenSet> cycle;
  std::vector<Homeo> steps;
  Homeo chart;
  std::int64_t shift = 1;
};

class TowerSystem : public HomeoImpl {
 public:
  static std::shared_ptr<const TowerSystem> make(const Signature& sig, std::vector<TowerComponent> components);

  Homeo::Kind kind() const override { return Homeo::Kind::Tower; }
  const Signature& signature() const override { return sig_; }
  ClopenSet domain() const override { return ClopenSet::full(sig_); }
  void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const override;
  Point apply(const Point& x) const override;
  Homeo inverse() const override;

  const std::vector<TowerComponent>& components() const { return comps_; }
  bool single_cycle() const { return comps_.size() == 1; }
  // level t of a component: cyclic partition with m * p_t atoms, level 0 = cycle
  std::vector<ClopenSet> level(std::size_t component, std::size_t t) const;
  std::vector<std::size_t> heights(std::size_t component, std::size_t levels) const;

 private:
  TowerSystem() = default;
  struct AtomRef {
    Word w;
    std::size_t comp, index;
    bool operator<(const AtomRef& o) const { return w < o.w; }
  };
  const Homeo& map_for(std::size_t comp, std::size_t index) const;
  std::optional<std::pair<std::size_t, std::size_t>> locate(const Word& c) const;

  Signature sig_;
  std::vector<TowerComponent> comps_;
  std::vector<Homeo> tops_;
  std::vector<AtomRef> index_;
  std::size_t max_len_ = 0;
};

// factors.front() is applied last
class Composite : public HomeoImpl {
 public:
  explicit Composite(std::vector<Homeo> factors);

  Homeo::Kind kind() const override { return Homeo::Kind::Composite; }
  const Signature& signature() const override { return factors_.front().signature(); }
  ClopenSet domain() const override { return factors_.back().domain(); }
  void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const override;
  Point apply(const Point& x) const override;
  Homeo inverse() const override;

  const std::vector<Homeo>& factors() const { return factors_; }

 private:
  void compose_from(std::size_t i, const Word& c, std::size_t min_depth, std::vector<Piece>& out) const;
  std::vector<Homeo> factors_;
};

class Restriction : public HomeoImpl {
 public:
  Restriction(Homeo base, ClopenSet domain) : base_(std::move(base)), dom_(std::move(domain)) {}

  Homeo::Kind kind() const override { return Homeo::Kind::Restriction; }
  const Signature& signature() const override { return base_.signature(); }
  ClopenSet domain() const override { return dom_; }
  void pieces(const Word& c, std::size_t min_depth, std::vector<Piece>& out) const override;
  Point apply(const Point& x) const override { return base_.apply(x); }
  Homeo inverse() const override;

  const Homeo& base() const { return base_; }

 private:
  Homeo base_;
  ClopenSet dom_;
};

// resolution cap, in digits beyond the requested cylinder
inline constexpr std::size_t kRefineCap = 96;

Homeo identity(const Signature& sig);
Homeo swap_map();  // 0x <-> 1x, dyadic
Homeo odometer(const Signature& sig, std::int64_t shift = 1);
Homeo tree_pair(const Signature& sig, std::vector<Branch> branches);
Homeo fragment(const Signature& sig, std::vector<Branch> branches);
Homeo restrict_to(const Homeo& t, const ClopenSet& domain);
// exact prefix-exchange fragment of a locally exact map on a clopen domain
Homeo restrict_exact(const Homeo& t, const ClopenSet& domain);

Homeo compose(const Homeo& s, const Homeo& t);  // s o t
Homeo inverse(const Homeo& t);
Homeo power(const Homeo& t, std::int64_t n);

ClopenSet image(const Homeo& t, const ClopenSet& a);
ClopenSet preimage(const Homeo& t, const ClopenSet& a);
std::vector<std::pair<Word, ClopenSet>> tabulate(const Homeo& t, std::size_t depth);
std::vector<Piece> table(const Homeo& t, std::size_t depth);
// exact prefix-exchange form, when every piece at natural resolution is exact
std::optional<std::shared_ptr<const CylinderHomeo>> to_cylinder(const Homeo& t);
// setwise agreement on every depth-d cylinder
bool same_action(const Homeo& s, const Homeo& t, std::size_t depth);

}  // namespace cdyn
