#include "cantordyn/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cantordyn/io.hpp"

namespace cdyn {

namespace {

struct Options {
  std::optional<std::size_t> depth, bound, period, n;
  std::string epsilon, radius, format, signature = "dyadic";
  std::optional<std::uint64_t> seed;
  std::string target, base, partition, neighborhood, kind, set;
  std::vector<std::string> measures, positional;
  bool heuristic = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string interval_to_string(const Interval& i) {
  return i.exact() ? to_string(i.lo) : "[" + to_string(i.lo) + ", " + to_string(i.hi) + "]";
}

Homeo resolve_homeo(const std::string& spec, const Options& o) {
  if (spec.empty()) throw std::invalid_argument("missing map argument");
  if (auto h = named_homeo(spec)) return *h;
  if (spec[0] == '@') return homeo_from(parse_document(read_file(spec.substr(1))));
  if (spec.rfind("homeo ", 0) == 0 || spec.rfind("cdyn ", 0) == 0) return homeo_from(parse_document(spec));
  return parse_homeo(parse_signature(o.signature), spec);
}

Measure resolve_measure(const std::string& spec, const Signature& sig) {
  if (!spec.empty() && spec[0] == '@') return measure_from(parse_document(read_file(spec.substr(1))));
  if (spec.rfind("measure ", 0) == 0 || spec.rfind("cdyn ", 0) == 0) return measure_from(parse_document(spec));
  return parse_measure(sig, spec);
}

std::vector<Measure> resolve_measures(const Options& o, const Signature& sig) {
  std::vector<Measure> ms;
  for (const std::string& s : o.measures) ms.push_back(resolve_measure(s, sig));
  return ms;
}

Rational require_rational(const std::string& text, const char* flag) {
  if (text.empty()) throw std::invalid_argument(std::string("missing ") + flag);
  return parse_rational(text);
}

std::vector<ClopenSet> resolve_partition(const Options& o, const Signature& sig) {
  if (o.partition.empty()) throw std::invalid_argument("missing --partition");
  return parse_clopen_list(sig, o.partition);
}

Document certificate(const std::string& command, const Signature& sig) {
  Document d;
  d.kind = "certificate";
  d.add("command", command);
  d.add("signature", sig.name());
  return d;
}

std::string points_to_string(const Signature& sig, const std::vector<Point>& ps) {
  std::string s = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + point_to_string(sig, ps[i]);
  return s + "]";
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const Document& d, const std::string& text_override = "") {
    const std::string f = o_.format.empty() ? "text" : o_.format;
    if (f == "json")
      out_ << document_to_json(d);
    else if (f == "text")
      out_ << (text_override.empty() ? print_document(d) : text_override);
    else
      throw std::invalid_argument("format '" + f + "' is not available for this command");
  }

  int dist() {
    Homeo s = arg(0), t = arg(1);
    WeakDistance w = weak_distance(s, t, o_.depth.value_or(kDefaultDepth));
    Document d = certificate("dist", s.signature());
    d.add("forward", interval_to_string(w.forward));
    d.add("backward", interval_to_string(w.backward));
    d.add("total", interval_to_string(w.total));
    emit(d, interval_to_string(w.total) + "\n");
    return kExitOk;
  }

  int member() {
    Homeo s = arg(0);
    Neighborhood n;
    if (!o_.neighborhood.empty()) {
      const std::string& spec = o_.neighborhood;
      n = neighborhood_from(parse_document(spec[0] == '@' ? read_file(spec.substr(1)) : spec));
    } else {
      Homeo base = resolve_homeo(o_.base, o_);
      const Signature& sig = base.signature();
      const std::string k = o_.kind.empty() ? "p" : o_.kind;
      if (k == "p")
        n = Neighborhood::p(base, resolve_partition(o_, sig));
      else if (k == "uniform")
        n = Neighborhood::uniform(base, resolve_measures(o_, sig), require_rational(o_.epsilon, "--epsilon"));
      else if (k == "bar-p")
        n = Neighborhood::bar_p(base, resolve_partition(o_, sig), resolve_measures(o_, sig),
                                require_rational(o_.epsilon, "--epsilon"));
      else if (k == "weak-ball")
        n = Neighborhood::weak_ball(base, require_rational(o_.radius, "--radius"));
      else
        throw std::invalid_argument("unknown neighborhood kind '" + k + "'");
    }
    Membership m = in_neighborhood(s, n, o_.depth.value_or(kDefaultDepth));
    Document d = certificate("member", s.signature());
    d.add("neighborhood", to_document(n).require("type"));
    d.add("verdict", to_string(m.verdict));
    for (const Interval& v : m.values) d.add("value", interval_to_string(v));
    if (m.failing) d.add("failing", std::to_string(*m.failing));
    if (!m.note.empty()) d.add("note", m.note);
    emit(d);
    return m.verdict == Verdict::True ? kExitOk : kExitRefusal;
  }

  int defect() {
    Homeo s = arg(0), t = arg(1);
    const Signature& sig = s.signature();
    if (o_.measures.size() != 1) throw std::invalid_argument("defect takes exactly one --measure");
    const std::string k = o_.kind.empty() ? "tau-prime" : o_.kind;
    DefectKind kind;
    if (k == "tau-prime")
      kind = DefectKind::TauPrime;
    else if (k == "bar-tau")
      kind = DefectKind::BarTau;
    else
      throw std::invalid_argument("unknown defect kind '" + k + "'");
    Defect df = defect_over_partition(kind, s, t, resolve_measure(o_.measures[0], sig), resolve_partition(o_, sig),
                                      o_.heuristic);
    Document d = certificate("defect", sig);
    d.add("kind", k);
    d.add("value", to_string(df.value));
    d.add("argmax", clopen_to_string(df.argmax));
    d.add("heuristic", df.heuristic ? "true" : "false");
    emit(d);
    return kExitOk;
  }

  int compose_cmd() {
    emit(to_document(compose(arg(0), arg(1))));
    return kExitOk;
  }

  int tabulate_cmd() {
    Homeo t = arg(0);
    const std::size_t depth = o_.depth.value_or(2);
    Document d;
    d.kind = "table";
    d.add("signature", t.signature().name());
    d.add("depth", std::to_string(depth));
    for (const auto& [w, img] : tabulate(t, depth))
      d.add("entry", word_to_string(t.signature(), w) + " -> " + clopen_to_string(img));
    emit(d);
    return kExitOk;
  }

  int diff() {
    Homeo s = arg(0), t = arg(1);
    OpenDiffSet e = difference_set(s, t, o_.depth.value_or(kDefaultDepth));
    Document d = certificate("diff", s.signature());
    d.add("core", clopen_to_string(e.core));
    d.add("exceptional", points_to_string(s.signature(), e.exceptional));
    d.add("unresolved", clopen_to_string(e.unresolved));
    for (const std::string& m : o_.measures)
      d.add("measure", interval_to_string(measure_bounds(resolve_measure(m, s.signature()), e)));
    emit(d);
    return kExitOk;
  }

  int periods() {
    Homeo t = arg(0);
    const Signature& sig = t.signature();
    PeriodStructure ps = period_structure(t, o_.bound.value_or(4), o_.depth.value_or(kDefaultDepth));
    Document d = certificate("periods", sig);
    d.add("bound", std::to_string(ps.max_power));
    for (std::size_t p = 1; p <= ps.parts.size(); ++p)
      if (!ps.parts[p - 1].empty()) d.add("part", std::to_string(p) + " " + clopen_to_string(ps.parts[p - 1]));
    for (const auto& [x, p] : ps.isolated) d.add("point", point_to_string(sig, x) + " " + std::to_string(p));
    d.add("residual", clopen_to_string(ps.residual));
    d.add("unresolved", clopen_to_string(ps.unresolved));
    if (ps.order) d.add("order", std::to_string(*ps.order));
    d.add("aperiodic", ps.aperiodic_up_to_n ? "true" : "false");
    emit(d);
    return kExitOk;
  }

  int fullgroup() {
    Homeo s = arg(0), t = arg(1);
    FullGroupResult r = full_group_membership(s, t, static_cast<int>(o_.bound.value_or(4)), o_.depth.value_or(16));
    Document d = certificate("fullgroup", s.signature());
    d.add("member", r.member ? "true" : "false");
    for (const auto& [i, a] : r.parts) d.add("part", std::to_string(i) + " " + clopen_to_string(a));
    if (!r.member) {
      d.add("certain", r.certain ? "true" : "false");
      if (r.witness) d.add("witness", word_to_string(s.signature(), *r.witness));
      d.add("reason", r.reason);
    }
    emit(d);
    return r.member ? kExitOk : kExitRefusal;
  }

  int centralizer() {
    Homeo r = arg(0), s = arg(1);
    CentralizerResult c = centralizer_index_sequence(r, s, o_.depth.value_or(5));
    Document d = certificate("centralizer", s.signature());
    d.add("ok", c.ok ? "true" : "false");
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      d.add("index", std::to_string(i) + " " + std::to_string(c.indices[i]) + " mod " + std::to_string(c.moduli[i]));
    if (!c.ok) {
      d.add("level", std::to_string(*c.fail_level));
      d.add("witness", word_to_string(s.signature(), c.witness));
      d.add("image", clopen_to_string(c.witness_image));
    }
    emit(d);
    return c.ok ? kExitOk : kExitRefusal;
  }

  int witness_exit(Document& d, const Witness& w) {
    d.add("witness", clopen_to_string(w.f) + (w.forward_closed ? " forward-closed" : " backward-closed"));
    emit(d);
    return kExitRefusal;
  }

  const Signature& signature() const { return sig_; }

  int synth(const std::string& kind) {
    Homeo t = resolve_homeo(o_.target, o_);
    sig_ = t.signature();
    const Signature& sig = t.signature();
    Document d = certificate("synth " + kind, sig);
    if (kind == "odometer") {
      const auto parts = resolve_partition(o_, sig);
      OdometerSynthesis r = odometer_in_weak_neighborhood(t, parts);
      if (!r.ok) return witness_exit(d, *r.witness);
      d.add("map", print_homeo(r.s));
      d.add("cycle", print_clopen_list(r.cycle));
      for (const ClopenSet& f : parts) d.add("check", clopen_to_string(f) + " -> " + clopen_to_string(image(r.s, f)));
    } else if (kind == "periodic") {
      const auto parts = resolve_partition(o_, sig);
      PeriodicSynthesis r = periodic_in_weak_neighborhood(t, parts);
      if (!r.ok) return witness_exit(d, *r.witness);
      d.add("map", print_homeo(r.p));
      d.add("order", std::to_string(r.order));
      for (const ClopenSet& f : parts) d.add("check", clopen_to_string(f) + " -> " + clopen_to_string(image(r.p, f)));
    } else if (kind == "rank1") {
      const Rational eps = require_rational(o_.epsilon, "--epsilon");
      Rank1Result r = rank1_in_uniform_neighborhood(t, resolve_measures(o_, sig), eps, o_.bound.value_or(2));
      d.add("map", print_homeo(r.s));
      d.add("bound-set", clopen_to_string(r.bound_set));
      for (const Rational& b : r.bound_values) d.add("bound", to_string(b) + " < " + to_string(eps));
      d.add("threshold", std::to_string(r.threshold));
      d.add("towers", std::to_string(r.towers));
    } else if (kind == "aperiodize") {
      Aperiodized r = aperiodize_periodic(t, require_rational(o_.epsilon, "--epsilon"), o_.period);
      d.add("map", print_homeo(r.t));
      d.add("domain", clopen_to_string(r.domain));
      d.add("bases", print_clopen_list(r.bases));
      d.add("distance", interval_to_string(r.distance));
    } else if (kind == "fundamental") {
      if (!o_.period) throw std::invalid_argument("missing --period");
      d.add("domain", clopen_to_string(fundamental_domain(t, *o_.period)));
    } else if (kind == "rokhlin") {
      return rokhlin();
    } else if (kind == "approx") {
      const Rational eps = require_rational(o_.epsilon, "--epsilon");
      PeriodicApprox r = o_.measures.empty() ? periodic_approx_weak(t, eps)
                                             : periodic_approx_uniform(t, resolve_measures(o_, sig), eps);
      d.add("ok", r.ok ? "true" : "false");
      if (r.q) {
        d.add("depth", std::to_string(r.depth));
        d.add("order", std::to_string(r.order));
        d.add("map", print_homeo(r.q));
      }
      if (o_.measures.empty())
        d.add("distance", interval_to_string(r.weak));
      else
        for (const Interval& v : r.measures) d.add("value", interval_to_string(v));
      if (!r.obstruction.empty()) d.add("obstruction", points_to_string(sig, r.obstruction));
      if (!r.note.empty()) d.add("note", r.note);
      emit(d);
      return r.ok ? kExitOk : kExitRefusal;
    } else {
      throw std::invalid_argument("unknown synthesis '" + kind + "'");
    }
    emit(d);
    return kExitOk;
  }

  int rokhlin() {
    Homeo t = resolve_homeo(o_.target, o_);
    sig_ = t.signature();
    if (!o_.n) throw std::invalid_argument("missing --n");
    const Rational eps = require_rational(o_.epsilon, "--epsilon");
    const std::size_t n = *o_.n;
    Castle c = rokhlin_castle(t, n, resolve_measures(o_, t.signature()), eps, o_.bound.value_or(n));
    emit(to_document(c, n, eps));
    return kExitOk;
  }

  int graph_dot() {
    Homeo t = resolve_homeo(o_.target, o_);
    OverlapGraph g = overlap_graph(t, resolve_partition(o_, t.signature()));
    if (o_.format.empty() || o_.format == "dot") {
      out_ << to_dot(g);
      return kExitOk;
    }
    Document d = certificate("graph-dot", t.signature());
    for (std::size_t i = 0; i < g.size(); ++i) d.add("atom", std::to_string(i) + " " + clopen_to_string(g.atoms[i]));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g.arcs[i][j])
          d.add("cell", std::to_string(i) + " -> " + std::to_string(j) + " " + std::to_string(g.mult[i][j]) + " " +
                            clopen_to_string(g.cells[i][j]));
    d.add("balanced", g.balanced ? "true" : "false");
    emit(d);
    return kExitOk;
  }

  int measure() {
    if (o_.positional.size() != 2) throw std::invalid_argument("measure takes a measure and a clopen set");
    const Signature sig = parse_signature(o_.signature);
    const Measure mu = resolve_measure(o_.positional[0], sig);
    const ClopenSet a = parse_clopen(sig, o_.positional[1]);
    Document d = certificate("measure", sig);
    d.add("measure", print_measure(mu));
    d.add("set", clopen_to_string(a));
    d.add("value", to_string(mu.of(a)));
    emit(d, to_string(mu.of(a)) + "\n");
    return kExitOk;
  }

  // randomized canonical documents for fixtures
  int sample() {
    std::mt19937_64 rng(o_.seed.value_or(0));
    auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    const Signature sig = parse_signature(o_.signature);
    auto random_partition = [&](std::size_t n) {
      std::vector<Word> parts{Word{}};
      while (parts.size() < n) {
        const std::size_t i = below(parts.size());
        if (parts[i].size() >= 5) break;
        Word w = parts[i];
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
        for (Word& c : children(sig, w)) parts.push_back(std::move(c));
      }
      std::sort(parts.begin(), parts.end());
      return parts;
    };
    const std::string k = o_.kind.empty() ? "clopen" : o_.kind;
    if (k == "clopen") {
      std::vector<Word> keep;
      for (Word& w : random_partition(2 + below(8)))
        if (below(2)) keep.push_back(std::move(w));
      emit(to_document(ClopenSet::from_words(sig, std::move(keep))));
    } else if (k == "homeo") {
      for (;;) {
        auto a = random_partition(2 + below(6)), b = random_partition(a.size());
        if (a.size() != b.size()) continue;
        std::shuffle(b.begin(), b.end(), rng);
        std::vector<Branch> br;
        bool ok = true;
        for (std::size_t i = 0; i < a.size(); ++i) {
          ok = ok && sig.tail_equal(a[i].size(), b[i].size());
          br.push_back({a[i], b[i]});
        }
        if (!ok) continue;
        emit(to_document(tree_pair(sig, br)));
        break;
      }
    } else {
      throw std::invalid_argument("sample kinds: clopen, homeo");
    }
    return kExitOk;
  }

 private:
  Homeo arg(std::size_t i) {
    if (o_.positional.size() <= i) throw std::invalid_argument("missing map argument");
    return resolve_homeo(o_.positional[i], o_);
  }

  const Options& o_;
  std::ostream& out_;
  Signature sig_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact computations with homeomorphisms of the Cantor set", "cdyn"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--depth", o.depth, "refinement depth");
  app.add_option("--epsilon", o.epsilon, "rational epsilon p/q");
  app.add_option("--bound", o.bound, "power or period bound");
  app.add_option("--format", o.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--seed", o.seed, "seed for randomized fixture generation");
  app.add_option("--signature", o.signature, "signature for inline maps, measures and sets");
  app.add_option("--target", o.target, "target map");
  app.add_option("--base", o.base, "neighborhood base map");
  app.add_option("--partition", o.partition, "clopen partition {..},{..}");
  app.add_option("--measure", o.measures, "measure (repeatable)");
  app.add_option("--neighborhood", o.neighborhood, "neighborhood document or @file");
  app.add_option("--kind", o.kind, "neighborhood, defect or sample kind");
  app.add_option("--radius", o.radius, "weak-ball radius");
  app.add_option("--period", o.period, "period of the target");
  app.add_option("--n", o.n, "minimum tower height");
  app.add_flag("--heuristic", o.heuristic, "allow greedy defect search on large partitions");

  std::string synth_kind;
  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"dist", "weak distance between two maps"},
      {"member", "neighborhood membership of a map"},
      {"defect", "defect functional over a partition"},
      {"compose", "composition S o T, T applied first"},
      {"tabulate", "action of a map on the cylinders of a depth"},
      {"diff", "difference set of two maps"},
      {"periods", "periodic structure up to a power bound"},
      {"fullgroup", "full-group membership of S in [[T]]"},
      {"centralizer", "centralizer index sequence against an odometer"},
      {"synth", "odometer|periodic|rank1|aperiodize|fundamental|rokhlin|approx"},
      {"rokhlin", "Rokhlin castle for an aperiodic map"},
      {"graph-dot", "overlap graph of a map on a partition"},
      {"measure", "measure of a clopen set"},
      {"sample", "seeded random fixture"}};
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->add_option("args", o.positional, "maps, measures or sets");
    subs[name] = s;
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  Runner r(o, out);
  try {
    if (subs["dist"]->parsed()) return r.dist();
    if (subs["member"]->parsed()) return r.member();
    if (subs["defect"]->parsed()) return r.defect();
    if (subs["compose"]->parsed()) return r.compose_cmd();
    if (subs["tabulate"]->parsed()) return r.tabulate_cmd();
    if (subs["diff"]->parsed()) return r.diff();
    if (subs["periods"]->parsed()) return r.periods();
    if (subs["fullgroup"]->parsed()) return r.fullgroup();
    if (subs["centralizer"]->parsed()) return r.centralizer();
    if (subs["rokhlin"]->parsed()) return r.rokhlin();
    if (subs["graph-dot"]->parsed()) return r.graph_dot();
    if (subs["measure"]->parsed()) return r.measure();
    if (subs["sample"]->parsed()) return r.sample();
    if (subs["synth"]->parsed()) {
      if (o.positional.empty()) throw std::invalid_argument("synth needs a kind");
      const std::string kind = o.positional.front();
      o.positional.erase(o.positional.begin());
      return r.synth(kind);
    }
  } catch (const PeriodicPointError& e) {
    err << "error: " << e.what() << " at " << point_to_string(r.signature(), e.point) << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace cdyn
