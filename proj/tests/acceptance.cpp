// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/corpus/corpus.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"
#include "mincad/oracle/oracle.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

using namespace mincad;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> failures;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

std::vector<std::string> pivots(const CadTree& t) {
  std::vector<std::string> out;
  for (const auto& r : tree_reductions(t)) out.push_back(to_string(r.pivot));
  std::sort(out.begin(), out.end());
  return out;
}

std::string value_text(const ExtVal& v) { return v.is_indeterminate() ? "undefined" : extval_text(v); }

// Normal forms of the reduction DAG from `start`, named by matching fingerprints.
std::set<std::string> normal_form_names(const corpus::CorpusEntry& e, const std::string& start, Outcome& out) {
  auto fam = e.family();
  auto dag = reduction_dag(e.cad(start), fam);
  out.expect(!dag.truncated && dag.complete(), start + ": DAG is complete");
  auto rep = confluence_report(dag);
  out.expect(rep.verdict == ConfluenceVerdict::MultipleNormalForms || rep.verdict == ConfluenceVerdict::UniqueNormalForm,
             start + ": verdict");
  std::set<std::string> names;
  for (auto i : rep.normal_forms) {
    std::string name = "fp:" + dag.nodes[i].fingerprint;
    for (const auto& n : e.cad_names)
      if (canonical_fingerprint(e.cad(n)) == dag.nodes[i].fingerprint) {
        name = n;
        break;
      }
    names.insert(name);
  }
  return names;
}

Outcome trousers_trees() {
  Outcome out;
  auto e = corpus::load("trousers");
  auto fam = e.family();
  auto tc = build_tree(e.cad("C"), fam);
  auto tp = build_tree(e.cad("Cprime"), fam);
  out.expect(pivots(tc) == std::vector<std::string>{"1.2"}, "C reductions {1.2}, got {" + join(pivots(tc)) + "}");
  out.expect(pivots(tp) == std::vector<std::string>{"3.2"}, "Cprime reductions {3.2}, got {" + join(pivots(tp)) + "}");
  return out;
}

Outcome trousers_witnesses() {
  Outcome out;
  auto e = corpus::load("trousers");
  auto fam = e.family();
  for (const auto& [name, pivot] : std::vector<std::pair<std::string, std::string>>{{"C", "1.2"}, {"Cprime", "3.2"}}) {
    auto r = liftable(e.cad(name), parse_index(pivot));
    out.expect(r.status == LiftStatus::Fails, name + " " + pivot + " fails");
    if (r.witness) {
      const auto& w = *r.witness;
      std::string seen = to_string(w.point) + " " + value_text(w.side_value) + " vs " + value_text(w.section_value);
      out.expect(!w.divergent && seen == "(1, 0) -1/2 vs 0", name + " witness (1, 0) -1/2 vs 0, got " + seen);
    } else {
      out.expect(false, name + " has a witness");
    }
    auto m = minimal(e.cad(name), fam);
    out.expect(m.certified() && canonical_fingerprint(m.cad) == canonical_fingerprint(e.cad(name)),
               name + " is already minimal");
    out.expect(m.cad.leaf_count() == e.cad(name).leaf_count(), name + " keeps its leaves");
  }
  return out;
}

Outcome non_confluence() {
  Outcome out;
  struct Case {
    std::string entry, start;
    std::set<std::string> want;
  };
  for (const auto& c : std::vector<Case>{{"trousers", "Cbar", {"C", "Cprime"}},
                                         {"analytic-trousers", "Cbar", {"C", "Cprime"}},
                                         {"trousers4", "Cbar4", {"C4", "Cprime4"}}}) {
    auto e = corpus::load(c.entry);
    auto got = normal_form_names(e, c.start, out);
    out.expect(got == c.want, c.entry + " " + c.start + " normal forms {" + join({c.want.begin(), c.want.end()}) +
                                  "}, got {" + join({got.begin(), got.end()}) + "}");
  }
  return out;
}

Outcome disk_confluence() {
  Outcome out;
  auto e = corpus::load("disk");
  auto fam = e.family();
  auto m = minimal(e.cad("Cprime"), fam);
  std::vector<std::string> lifted;
  for (const auto& line : m.trace)
    if (line.find("\"status\":\"lifts\"") != std::string::npos) lifted.push_back(line);
  out.expect(canonical_fingerprint(m.cad) == canonical_fingerprint(e.cad("C")), "minimal(Cprime) = C");
  out.expect(lifted.size() == 1 && lifted[0].find("\"pivot\":\"4\"") != std::string::npos, "one reduction at pivot 4");
  auto nfs = normal_form_names(e, "Cdouble", out);
  out.expect(nfs == std::set<std::string>{"C"}, "Cdouble has the unique normal form C");
  auto dag = reduction_dag(e.cad("Cdouble"), fam);
  out.expect(confluence_report(dag).verdict == ConfluenceVerdict::UniqueNormalForm, "Cdouble verdict unique");
  out.expect(transitive_reduction_check(dag), "transitive reduction holds");
  auto rep = cross_validate(dag, poset_below(e.cad("Cdouble"), fam));
  out.expect(rep.agree(), "oracle agrees" + (rep.mismatches.empty() ? "" : ": " + rep.mismatches.front()));
  return out;
}

Outcome coarsening_counts() {
  Outcome out;
  out.expect(bell(9) - 1 == 21146, "B(9) - 1 = 21146");
  out.expect(bell(15) - 1 == mpz_class("1382958544"), "B(15) - 1 = 1382958544");
  auto e = corpus::load("trousers");
  size_t streamed = enumerate_coarsenings(e.cad("C"), [](const Coarsening&) { return true; });
  out.expect(streamed == 21146, "streamed " + std::to_string(streamed) + " coarsenings of C");
  return out;
}

Outcome one_dimensional_minimum() {
  Outcome out;
  auto [cad, tree] = minimum_cad_1d({parse_set1d("[-2,0) u {1}"), parse_set1d("[0,inf)")});
  std::vector<std::string> labels;
  for (const auto& l : tree.leaves()) labels.push_back(to_string(tree.leaf_label(l)));
  out.expect(join(labels) == "(0,0), (1,0), (1,0), (0,1), (0,1), (1,1), (0,1)", "labels " + join(labels));

  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> coord(-6, 6), npieces(0, 3), nsets(1, 3), coin(0, 1), extra(0, 4);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SaSet1D> sets;
    Family fam;
    for (int s = 0, k = nsets(rng); s < k; ++s) {
      std::vector<Piece> raw;
      for (int p = 0, m = npieces(rng); p < m; ++p) {
        int a = coord(rng), b = coord(rng);
        if (a > b) std::swap(a, b);
        if (a == b) raw.push_back(Piece::point(ExtVal(a)));
        else raw.push_back(Piece{ExtVal(a), ExtVal(b), coin(rng) == 1, coin(rng) == 1});
      }
      sets.push_back(normalize_1d(raw));
      fam.names.push_back("S" + std::to_string(s + 1));
      fam.sets.push_back(to_predicate(sets.back()));
    }
    auto [minc, mint] = minimum_cad_1d(sets);
    ConcreteCad fine = minc;
    for (int i = 0, n = extra(rng); i < n; ++i) fine.level1.push_back(ExtVal(Rat(coord(rng) * 2 + 1, 2)));
    auto less = [](const ExtVal& a, const ExtVal& b) { return compare(a, b) < 0; };
    auto same = [](const ExtVal& a, const ExtVal& b) { return compare(a, b) == 0; };
    std::sort(fine.level1.begin(), fine.level1.end(), less);
    fine.level1.erase(std::unique(fine.level1.begin(), fine.level1.end(), same), fine.level1.end());
    auto m = minimal(fine, fam);
    bool ok = m.certified() && m.tree == mint && m.cad.level1.size() == minc.level1.size() &&
              std::equal(m.cad.level1.begin(), m.cad.level1.end(), minc.level1.begin(), same);
    if (!ok) ++bad;
  }
  out.expect(bad == 0, std::to_string(bad) + " of 200 random families missed the minimum");
  return out;
}

Outcome behaviours() {
  Outcome out;
  auto half = corpus::load("halfspace0");
  auto hf = half.family();
  out.expect(to_string(behaviour(hf, {Rat(0)})) == "(0,0,1)", "half-plane above 0 is (0,0,1)");
  out.expect(to_string(behaviour(hf, {Rat(1)})) == "(0,1,1)", "half-plane above 1 is (0,1,1)");
  out.expect(to_string(behaviour(hf, {Rat(-1)})) == "(0,1,1)", "half-plane above -1 is (0,1,1)");

  auto ball = corpus::load("pointless-ball");
  const auto& M = ball.doc.cad("M");
  auto bp = behaviour_partition(ball.family(), project(M, M.dim - 1));
  out.expect(bp.classes.size() == 4, "pointless ball has 4 behaviour classes, got " + std::to_string(bp.classes.size()));
  out.expect(bp.constant(), "behaviour is constant on every base cell");
  return out;
}

Outcome analytic_identity() {
  Outcome out;
  auto rep = corpus::verify_analytic_trousers(100);
  out.expect(rep.checked >= 100, "checked " + std::to_string(rep.checked) + " points");
  out.expect(rep.ok(), rep.failures.empty() ? "" : rep.failures.front());
  return out;
}

Outcome d_t_family() {
  Outcome out;
  auto e = corpus::load("trousers");
  auto fam = e.family();
  const auto& Cp = e.cad("Cprime");
  auto ref = build_tree(Cp, fam);
  std::set<std::string> fps;
  for (int t : {0, -1, -2, -3}) {
    std::string tag = "D^" + std::to_string(t);
    auto d = corpus::d_t_generator(Rat(t));
    out.expect(check_cad_structure(d).empty(), tag + " is a valid CAD");
    auto tree = build_tree(d, fam);
    out.expect(tree == ref, tag + " has the tree of Cprime");
    for (const auto& r : tree_reductions(tree))
      out.expect(liftable(d, r.pivot).status == LiftStatus::Fails, tag + " pivot " + to_string(r.pivot) + " fails");
    auto m = minimal(d, fam);
    out.expect(m.certified() && canonical_fingerprint(m.cad) == canonical_fingerprint(d), tag + " is minimal");
    fps.insert(canonical_fingerprint(d));
  }
  out.expect(fps.size() == 4, "four distinct CADs");
  out.expect(canonical_fingerprint(corpus::d_t_generator(Rat(0))) == canonical_fingerprint(Cp), "D^0 = Cprime");
  return out;
}

Outcome small_corpus_oracle() {
  Outcome out;
  size_t checked = 0;
  for (const auto& name : corpus::entry_names()) {
    auto e = corpus::load(name);
    auto fam = e.family();
    for (const auto& n : e.cad_names) {
      auto c = e.cad(n);
      if (c.leaf_count() > 9) continue;
      std::string tag = name + "/" + n;
      auto dag = reduction_dag(c, fam);
      auto rep = cross_validate(dag, poset_below(c, fam));
      out.expect(rep.order_agree && rep.edges_agree,
                 tag + " oracle agrees" + (rep.mismatches.empty() ? "" : ": " + rep.mismatches.front()));
      if (dag.complete()) {
        auto cr = confluence_report(dag);
        bool joinable = std::all_of(cr.peaks.begin(), cr.peaks.end(), [](const Peak& p) { return p.joinable; });
        bool unique = cr.verdict == ConfluenceVerdict::UniqueNormalForm;
        out.expect(joinable == unique, tag + " peaks joinable iff unique normal form");
      }
      ++checked;
    }
  }
  out.expect(checked > 0, "some corpus CAD has at most 9 leaves");
  if (out.ok) out.failures.push_back(std::to_string(checked) + " CADs");
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"trousers reduction pivots", trousers_trees},
      {"trousers lifting witnesses and minimality", trousers_witnesses},
      {"non-confluence from common refinements", non_confluence},
      {"disk confluence and oracle", disk_confluence},
      {"coarsening counts", coarsening_counts},
      {"one-dimensional minimum", one_dimensional_minimum},
      {"behaviours and behaviour classes", behaviours},
      {"analytic section identity", analytic_identity},
      {"D^t family of minimal CADs", d_t_family},
      {"oracle agreement on small corpus CADs", small_corpus_oracle},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& ex) {
      o.ok = false;
      o.failures.push_back(std::string("exception: ") + ex.what());
    }
    std::cout << "criterion " << i + 1 << ": " << (o.ok ? "PASS" : "FAIL") << " " << criteria[i].title;
    if (!o.failures.empty()) std::cout << " (" << join(o.failures) << ")";
    std::cout << "\n";
    if (!o.ok) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
