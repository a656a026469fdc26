#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cantordyn/cli.hpp"
#include "cantordyn/dynamics.hpp"
#include "cantordyn/io.hpp"
#include "cantordyn/synth.hpp"
#include "cantordyn/topology.hpp"

namespace py = pybind11;
using namespace cdyn;

namespace {

// rationals cross the boundary as "p/q" strings; the Python package wraps them in Fraction
py::tuple interval(const Interval& i) { return py::make_tuple(to_string(i.lo), to_string(i.hi)); }

std::vector<ClopenSet> sets(const Signature& sig, const std::vector<std::string>& texts) {
  std::vector<ClopenSet> v;
  for (const auto& t : texts) v.push_back(parse_clopen(sig, t));
  return v;
}

std::vector<Measure> measures(const Signature& sig, const std::vector<std::string>& texts) {
  std::vector<Measure> v;
  for (const auto& t : texts) v.push_back(parse_measure(sig, t));
  return v;
}

py::dict witness_dict(const std::optional<Witness>& w) {
  py::dict d;
  if (w) {
    d["set"] = clopen_to_string(w->f);
    d["forward_closed"] = w->forward_closed;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_cantordyn, m) {
  m.doc() = "Exact computations with homeomorphisms of Cantor space";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PeriodicPointError>(m, "PeriodicPointError", PyExc_RuntimeError);
  py::register_exception<SynthesisError>(m, "SynthesisError", PyExc_RuntimeError);

  py::class_<Signature>(m, "Signature")
      .def(py::init([](const std::string& text) { return parse_signature(text); }), py::arg("text") = "dyadic")
      .def_property_readonly("name", &Signature::name)
      .def("count", &Signature::count)
      .def("__eq__", &Signature::operator==)
      .def("__repr__", [](const Signature& s) { return "Signature('" + s.name() + "')"; });

  py::class_<ClopenSet>(m, "Clopen")
      .def(py::init([](const Signature& sig, const std::string& text) { return parse_clopen(sig, text); }),
           py::arg("signature"), py::arg("text"))
      .def_property_readonly("signature", &ClopenSet::signature)
      .def("is_empty", &ClopenSet::empty)
      .def("is_full", &ClopenSet::is_full)
      .def("contains", [](const ClopenSet& a, const std::string& x) { return a.contains(parse_point(a.signature(), x)); })
      .def("__or__", &unite)
      .def("__and__", &intersect)
      .def("__sub__", &difference)
      .def("__xor__", &sym_difference)
      .def("__invert__", &complement)
      .def("__le__", &subset)
      .def("__eq__", [](const ClopenSet& a, const ClopenSet& b) { return a == b; })
      .def("__str__", &clopen_to_string)
      .def("__repr__", [](const ClopenSet& a) { return "Clopen('" + clopen_to_string(a) + "')"; });

  py::class_<Measure>(m, "Measure")
      .def(py::init([](const Signature& sig, const std::string& text) { return parse_measure(sig, text); }),
           py::arg("signature"), py::arg("text") = "uniform")
      .def("of", [](const Measure& mu, const ClopenSet& a) { return to_string(mu.of(a)); })
      .def("__str__", &print_measure);

  py::class_<Homeo>(m, "Homeo")
      .def(py::init([](const Signature& sig, const std::string& text) { return parse_homeo(sig, text); }),
           py::arg("signature"), py::arg("text"))
      .def_static("named", [](const std::string& name) {
        auto h = named_homeo(name);
        if (!h) throw py::value_error("unknown map name: " + name);
        return *h;
      })
      .def_property_readonly("signature", &Homeo::signature)
      .def("apply", [](const Homeo& h, const std::string& x) {
        return point_to_string(h.signature(), h.apply(parse_point(h.signature(), x)));
      })
      .def("image", &image)
      .def("preimage", &preimage)
      .def("inverse", [](const Homeo& h) { return h.inverse(); })
      .def("power", &power)
      .def("__matmul__", &compose)
      .def("same_action", &same_action, py::arg("other"), py::arg("depth") = 8)
      .def("__str__", &print_homeo);

  m.def("compose", &compose);
  m.def("odometer", &odometer, py::arg("signature"), py::arg("shift") = 1);
  m.def("odometer_truncation", &odometer_truncation, py::arg("signature"), py::arg("depth"), py::arg("shift") = 1);

  m.def(
      "weak_distance",
      [](const Homeo& s, const Homeo& t, std::size_t depth) { return interval(weak_distance(s, t, depth).total); },
      py::arg("s"), py::arg("t"), py::arg("depth") = kDefaultDepth);
  m.def(
      "in_p_neighborhood",
      [](const Homeo& s, const Homeo& base, const std::vector<std::string>& parts) {
        return to_string(in_neighborhood(s, Neighborhood::p(base, sets(s.signature(), parts))).verdict);
      },
      py::arg("s"), py::arg("base"), py::arg("partition"));
  m.def(
      "difference_set",
      [](const Homeo& s, const Homeo& t, std::size_t depth) {
        const OpenDiffSet e = difference_set(s, t, depth);
        py::dict d;
        d["core"] = clopen_to_string(e.core);
        d["unresolved"] = clopen_to_string(e.unresolved);
        std::vector<std::string> pts;
        for (const Point& x : e.exceptional) pts.push_back(point_to_string(s.signature(), x));
        d["exceptional"] = pts;
        return d;
      },
      py::arg("s"), py::arg("t"), py::arg("depth") = kDefaultDepth);

  m.def("fundamental_domain", &fundamental_domain, py::arg("p"), py::arg("period"));
  m.def("min_circulation", &min_circulation, py::arg("arcs"));
  m.def(
      "synth_odometer",
      [](const Homeo& t, const std::vector<std::string>& parts) {
        auto r = odometer_in_weak_neighborhood(t, sets(t.signature(), parts));
        py::dict d;
        d["ok"] = r.ok;
        if (r.ok) d["map"] = r.s;
        d["witness"] = witness_dict(r.witness);
        return d;
      },
      py::arg("t"), py::arg("partition"));
  m.def(
      "synth_periodic",
      [](const Homeo& t, const std::vector<std::string>& parts) {
        auto r = periodic_in_weak_neighborhood(t, sets(t.signature(), parts));
        py::dict d;
        d["ok"] = r.ok;
        if (r.ok) {
          d["map"] = r.p;
          d["order"] = r.order;
        }
        d["witness"] = witness_dict(r.witness);
        return d;
      },
      py::arg("t"), py::arg("partition"));
  m.def(
      "rokhlin_castle",
      [](const Homeo& t, std::size_t n, const std::vector<std::string>& ms, const std::string& eps) {
        const Castle c = rokhlin_castle(t, n, measures(t.signature(), ms), parse_rational(eps), n);
        py::list towers;
        for (const Tower& tw : c.towers) towers.append(py::make_tuple(clopen_to_string(tw.base), tw.height));
        std::vector<std::string> bounds;
        for (const Rational& b : c.bounds) bounds.push_back(to_string(b));
        py::dict d;
        d["towers"] = towers;
        d["marked"] = clopen_to_string(c.marked);
        d["bounds"] = bounds;
        return d;
      },
      py::arg("t"), py::arg("n"), py::arg("measures"), py::arg("epsilon"));
  m.def(
      "rank1",
      [](const Homeo& t, const std::vector<std::string>& ms, const std::string& eps, std::size_t period_bound) {
        auto r = rank1_in_uniform_neighborhood(t, measures(t.signature(), ms), parse_rational(eps), period_bound);
        std::vector<std::string> vals;
        for (const Rational& v : r.bound_values) vals.push_back(to_string(v));
        py::dict d;
        d["map"] = r.s;
        d["bound_set"] = clopen_to_string(r.bound_set);
        d["bound_values"] = vals;
        return d;
      },
      py::arg("t"), py::arg("measures"), py::arg("epsilon"), py::arg("period_bound") = 2);
  m.def(
      "aperiodize",
      [](const Homeo& p, const std::string& eps) {
        auto a = aperiodize_periodic(p, parse_rational(eps));
        py::dict d;
        d["map"] = a.t;
        d["domain"] = clopen_to_string(a.domain);
        d["distance"] = interval(a.distance);
        return d;
      },
      py::arg("p"), py::arg("epsilon"));
  m.def(
      "periodic_approx_weak",
      [](const Homeo& s, const std::string& eps) {
        auto a = periodic_approx_weak(s, parse_rational(eps));
        py::dict d;
        d["ok"] = a.ok;
        d["map"] = a.q;
        d["depth"] = a.depth;
        d["distance"] = interval(a.weak);
        return d;
      },
      py::arg("s"), py::arg("epsilon"));

  m.def("parse_document", [](const std::string& text) { return parse_document(text).fields; });
  m.def("normalize_document", [](const std::string& text) { return print_document(parse_document(text)); });
  m.def("document_to_json", [](const std::string& text) { return document_to_json(parse_document(text)); });
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
