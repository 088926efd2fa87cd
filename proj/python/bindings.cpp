#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/corpus/corpus.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"
#include "mincad/oracle/oracle.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

namespace py = pybind11;
using namespace mincad;

namespace {

Rat to_rat(const std::string& text) {
  Rat q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0) raise(ErrorKind::ParseError, "bad rational '" + text + "'");
  q.canonicalize();
  return q;
}

Point to_point(const std::vector<std::string>& coords) {
  Point p;
  for (const auto& c : coords) p.push_back(to_rat(c));
  return p;
}

std::string value_text(const ExtVal& v) { return v.is_indeterminate() ? "undefined" : extval_text(v); }

py::dict lift_dict(const LiftResult& r) {
  py::dict d;
  d["status"] = to_string(r.status);
  d["reason"] = r.reason;
  if (r.witness) {
    const auto& w = *r.witness;
    py::dict wd;
    wd["point"] = to_string(w.point);
    wd["side_cell"] = to_string(w.side_cell);
    wd["side_value"] = w.divergent ? std::string("unbounded") : value_text(w.side_value);
    wd["section_value"] = value_text(w.section_value);
    wd["divergent"] = w.divergent;
    d["witness"] = wd;
  } else {
    d["witness"] = py::none();
  }
  return d;
}

std::vector<std::string> pivots(const CadTree& t) {
  std::vector<std::string> out;
  for (const auto& r : tree_reductions(t)) out.push_back(to_string(r.pivot));
  return out;
}

}  // namespace

PYBIND11_MODULE(_mincad, m) {
  m.doc() = "Minimal adapted CADs: trees, reductions, normal forms, oracle and corpus";

  static py::exception<Error> error(m, "MincadError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<ConcreteCad>(m, "Cad")
      .def_readonly("dim", &ConcreteCad::dim)
      .def_property_readonly("leaf_count", &ConcreteCad::leaf_count)
      .def("fingerprint", [](const ConcreteCad& c) { return canonical_fingerprint(c); })
      .def("structure_issues",
           [](const ConcreteCad& c) {
             std::vector<std::string> out;
             for (const auto& i : check_cad_structure(c)) out.push_back(to_string(i.base) + ": " + i.what);
             return out;
           })
      .def("to_cadspec", [](const ConcreteCad& c, const std::string& name) { return print_cad(name, c); },
           py::arg("name"))
      .def("product", &cylinder_product)
      .def("project", &project, py::arg("k"));

  py::class_<Family>(m, "Family")
      .def_readonly("names", &Family::names)
      .def("complement", &Family::complement);

  py::class_<CadDocument>(m, "Document")
      .def_property_readonly("cad_names",
                             [](const CadDocument& d) {
                               std::vector<std::string> out;
                               for (const auto& [n, c] : d.cads) out.push_back(n);
                               return out;
                             })
      .def_property_readonly("set_names",
                             [](const CadDocument& d) {
                               std::vector<std::string> out;
                               for (const auto& [n, s] : d.sets) out.push_back(n);
                               return out;
                             })
      .def("cad", &CadDocument::cad, py::arg("name"))
      .def("family", &CadDocument::family, py::arg("names") = std::vector<std::string>{});

  py::class_<CadTree>(m, "Tree")
      .def_property_readonly("leaf_count", &CadTree::leaf_count)
      .def("dump", &CadTree::dump)
      .def("dot", &CadTree::dot, py::arg("header_comment") = "")
      .def("reductions", &pivots)
      .def("labels",
           [](const CadTree& t) {
             std::vector<std::string> out;
             for (const auto& l : t.leaves()) out.push_back(to_string(t.leaf_label(l)));
             return out;
           })
      .def("__eq__", [](const CadTree& a, const CadTree& b) { return a == b; });

  m.def("parse_cadspec", &parse_cadspec, py::arg("text"));
  m.def("load_cadspec", &load_cadspec, py::arg("path"));
  m.def("build_tree", [](const ConcreteCad& c, const Family& f) { return build_tree(c, f); }, py::arg("cad"),
        py::arg("family"));
  m.def("liftable", [](const ConcreteCad& c, const std::string& pivot) { return lift_dict(liftable(c, parse_index(pivot))); },
        py::arg("cad"), py::arg("pivot"));
  m.def(
      "minimal",
      [](const ConcreteCad& c, const Family& f) {
        auto r = minimal(c, f);
        return py::make_tuple(r.cad, r.trace, r.certified());
      },
      py::arg("cad"), py::arg("family"));
  m.def(
      "confluence",
      [](const ConcreteCad& c, const Family& f) {
        auto dag = reduction_dag(c, f);
        auto rep = confluence_report(dag);
        py::dict d;
        d["verdict"] = to_string(rep.verdict);
        std::vector<std::string> fps;
        for (auto i : rep.normal_forms) fps.push_back(dag.nodes[i].fingerprint);
        d["normal_forms"] = fps;
        d["nodes"] = dag.nodes.size();
        d["edges"] = dag.edges.size();
        d["complete"] = rep.complete;
        d["transitive_reduction"] = transitive_reduction_check(dag);
        return d;
      },
      py::arg("cad"), py::arg("family"));
  m.def(
      "cross_validate",
      [](const ConcreteCad& c, const Family& f) {
        auto rep = cross_validate(reduction_dag(c, f), poset_below(c, f));
        return py::make_tuple(rep.agree(), rep.mismatches);
      },
      py::arg("cad"), py::arg("family"));
  m.def("bell", [](int k) { return py::int_(py::str(bell(k).get_str())); }, py::arg("k"));
  m.def(
      "minimum_cad_1d",
      [](const std::vector<std::string>& sets) {
        std::vector<SaSet1D> parsed;
        for (const auto& s : sets) parsed.push_back(parse_set1d(s));
        auto [c, t] = minimum_cad_1d(parsed);
        std::vector<std::string> sections, labels;
        for (const auto& v : c.level1) sections.push_back(extval_text(v));
        for (const auto& l : t.leaves()) labels.push_back(to_string(t.leaf_label(l)));
        return py::make_tuple(sections, labels);
      },
      py::arg("sets"));
  m.def(
      "fiber",
      [](const std::string& pred, const std::vector<std::string>& at) {
        return to_string(fiber(parse_predicate(pred), to_point(at)));
      },
      py::arg("predicate"), py::arg("at"));
  m.def(
      "behaviour",
      [](const Family& f, const std::vector<std::string>& at) { return to_string(behaviour(f, to_point(at))); },
      py::arg("family"), py::arg("at"));

  auto corpus = m.def_submodule("corpus", "worked-example corpus");
  corpus.def("entry_names", &corpus::entry_names);
  corpus.def(
      "check",
      [](const std::string& name) {
        std::vector<py::dict> out;
        for (const auto& o : corpus::check_entry(corpus::load(name))) {
          py::dict d;
          d["kind"] = corpus::to_string(o.fact.kind);
          d["cad"] = o.fact.cad;
          d["expected"] = o.fact.expected;
          d["observed"] = o.observed;
          d["ok"] = o.ok;
          d["provenance"] = corpus::to_string(o.fact.provenance);
          out.push_back(d);
        }
        return out;
      },
      py::arg("name"));
  corpus.def(
      "document", [](const std::string& name) { return corpus::load(name).doc; }, py::arg("name"));
  corpus.def(
      "d_t", [](const std::string& t) { return corpus::d_t_generator(to_rat(t)); }, py::arg("t"));
  corpus.def(
      "verify_analytic_trousers",
      [](size_t n) {
        auto r = corpus::verify_analytic_trousers(n);
        return py::make_tuple(r.checked, r.failures);
      },
      py::arg("count"));
}
