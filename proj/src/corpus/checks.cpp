#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/corpus/corpus.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

namespace mincad::corpus {

using mincad::to_string;

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::string join(const std::vector<std::string>& items, const std::string& sep = ", ") {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

Point parse_point(const std::string& text) {
  Point p;
  for (const auto& c : split_list(text)) {
    Rat q(c);
    q.canonicalize();
    p.push_back(q);
  }
  return p;
}

std::string value_text(const ExtVal& v) { return v.is_indeterminate() ? "undefined" : extval_text(v); }

std::string lift_text(const LiftResult& r, bool with_values) {
  std::string out = to_string(r.status);
  if (!r.witness) return out;
  const auto& w = *r.witness;
  out += " @" + to_string(w.point);
  if (!with_values) return out;
  out += " side " + to_string(w.side_cell) + ": " + (w.divergent ? "unbounded" : value_text(w.side_value)) + " vs " +
         value_text(w.section_value);
  return out;
}

class EntryChecker {
 public:
  EntryChecker(const CorpusEntry& e, const SamplePlan& plan) : e_(e), fam_(e.family()), plan_(plan) {}

  std::string observe(const ExpectedFact& f) {
    switch (f.kind) {
      case FactKind::Leaves: return std::to_string(tree(f.cad).leaf_count());
      case FactKind::Reductions: {
        std::vector<std::string> ps;
        auto rs = tree_reductions(tree(f.cad));
        std::sort(rs.begin(), rs.end());
        for (const auto& r : rs) ps.push_back(to_string(r.pivot));
        return ps.empty() ? "none" : join(ps);
      }
      case FactKind::Lift:
      case FactKind::LiftVerdict:
        return lift_text(liftable(cad(f.cad), parse_index(f.arg), plan_), f.kind == FactKind::Lift);
      case FactKind::NoLiftable: {
        std::vector<std::string> open;
        for (const auto& r : tree_reductions(tree(f.cad))) {
          auto c = check_pivot(cad(f.cad), tree(f.cad), r.pivot, plan_);
          if (c.lift.status != LiftStatus::Fails) open.push_back(to_string(r.pivot) + " " + to_string(c.lift.status));
        }
        return open.empty() ? "none" : join(open);
      }
      case FactKind::Minimal: {
        auto m = minimal(cad(f.cad), fam_, plan_);
        std::vector<std::string> ps;
        for (const auto& line : m.trace) {
          auto j = nlohmann::json::parse(line);
          if (j["status"] == to_string(LiftStatus::Lifts)) ps.push_back(j["pivot"].get<std::string>());
        }
        std::string out = name_of(m.cad) + " via " + (ps.empty() ? "none" : join(ps));
        if (!m.certified()) out += " (undecided pivots left)";
        return out;
      }
      case FactKind::NormalForms: {
        auto dag = reduction_dag(cad(f.cad), fam_, plan_);
        if (dag.truncated) return "truncated";
        auto rep = confluence_report(dag);
        std::vector<std::string> names;
        for (auto i : rep.normal_forms) names.push_back(name_of(dag.nodes[i].cad));
        std::sort(names.begin(), names.end());
        std::string out = std::string(to_string(rep.verdict)) + ": " + join(names);
        if (!rep.complete) out += " (incomplete)";
        return out;
      }
      case FactKind::DistinctFingerprints: {
        std::map<std::string, std::string> seen;
        for (const auto& n : split_list(f.arg)) {
          auto fp = fingerprint(n);
          auto [it, fresh] = seen.emplace(fp, n);
          if (!fresh) return "equal: " + it->second + " = " + n;
        }
        return "distinct";
      }
      case FactKind::SameFingerprint: return fingerprint(f.cad) == fingerprint(f.arg) ? "same" : "different";
      case FactKind::Labels: {
        const auto& t = tree(f.cad);
        std::vector<std::string> ls;
        for (const auto& l : t.leaves()) ls.push_back(to_string(t.leaf_label(l)));
        return join(ls, " ");
      }
      case FactKind::Adapted: {
        build_tree(cad(f.cad), e_.doc.family(split_list(f.arg)), plan_);
        return "adapted";
      }
      case FactKind::ProjectionAdapted: {
        auto colon = f.arg.find(':');
        int k = std::stoi(f.arg.substr(0, colon));
        build_tree(project(cad(f.cad), k), e_.doc.family(split_list(f.arg.substr(colon + 1))), plan_);
        return "adapted";
      }
      case FactKind::ComplementFlip: {
        const auto& t = tree(f.cad);
        auto tc = build_tree(cad(f.cad), fam_.complement(), plan_);
        for (const auto& l : t.leaves()) {
          Label flipped = t.leaf_label(l);
          for (auto& b : flipped) b = b ? 0 : 1;
          if (tc.leaf_label(l) != flipped) return "mismatch at " + to_string(l);
        }
        return "flipped";
      }
      case FactKind::Behaviour: return to_string(behaviour(fam_, parse_point(f.arg)));
      case FactKind::BehaviourClasses: {
        const auto& c = e_.doc.cad(f.cad);
        auto bp = behaviour_partition(fam_, project(c, c.dim - 1), plan_);
        return std::to_string(bp.classes.size()) + " classes, " + (bp.constant() ? "constant" : "not constant");
      }
      case FactKind::AnalyticIdentity: {
        auto rep = verify_analytic_trousers(std::stoul(f.arg));
        return std::to_string(rep.failures.size()) + " failures";
      }
    }
    return "?";
  }

 private:
  const ConcreteCad& cad(const std::string& name) {
    auto it = cads_.find(name);
    if (it == cads_.end()) it = cads_.emplace(name, e_.cad(name)).first;
    return it->second;
  }

  const CadTree& tree(const std::string& name) {
    auto it = trees_.find(name);
    if (it == trees_.end()) it = trees_.emplace(name, build_tree(cad(name), fam_, plan_)).first;
    return it->second;
  }

  std::string fingerprint(const std::string& name) { return canonical_fingerprint(cad(name), plan_); }

  // Entry CAD with the same geometry, else the raw fingerprint.
  std::string name_of(const ConcreteCad& c) {
    auto fp = canonical_fingerprint(c, plan_);
    for (const auto& n : e_.cad_names)
      if (fingerprint(n) == fp) return n;
    return "fp:" + fp;
  }

  const CorpusEntry& e_;
  Family fam_;
  SamplePlan plan_;
  std::map<std::string, ConcreteCad> cads_;
  std::map<std::string, CadTree> trees_;
};

}  // namespace

std::vector<FactOutcome> check_entry(const CorpusEntry& entry, const SamplePlan& plan) {
  EntryChecker checker(entry, plan);
  std::vector<FactOutcome> out;
  for (const auto& f : entry.facts) {
    FactOutcome o;
    o.fact = f;
    try {
      o.observed = checker.observe(f);
    } catch (const Error& err) {
      o.observed = std::string("error: ") + err.what();
    }
    o.ok = o.observed == f.expected;
    out.push_back(std::move(o));
  }
  return out;
}

ConcreteCad d_t_generator(const Rat& t) {
  if (t > 0) raise(ErrorKind::BadParameter, "D^t needs t <= 0, got " + t.get_str());
  ConcreteCad c;
  c.dim = 3;
  c.cls = RegClass::finite(0);
  c.level1 = {ExtVal(t)};
  Expr zero = Expr::constant(0);
  c.sections[{1}] = {};
  c.sections[{2}] = {};
  c.sections[{3}] = {zero};
  for (const Index& I : std::vector<Index>{{1, 1}, {2, 1}, {3, 1}, {3, 2}}) c.sections[I] = {zero};
  // The tilted sheet over x > 0, continued by the plane on t < x <= 0.
  c.sections[{3, 3}] = {Expr::piecewise({{parse_predicate("x1 > 0"), parse_expr("-1/2 * x1")}}, zero)};
  return c;
}

IdentityReport verify_analytic_trousers(size_t count) {
  auto doc = parse_cadspec(fixture_text("analytic-trousers.cadspec"));
  const Expr& g = doc.cad("C").cylinder({1, 1}).at(0);
  const Predicate& sheet = doc.set("Tw");
  Expr quartic = parse_expr("4 * x3^4 - 4 * x3^2 * x1 - x2^2");

  IdentityReport rep;
  auto check = [&](const Rat& x, const Rat& y) {
    std::string where = "(" + x.get_str() + ", " + y.get_str() + ")";
    ExtVal z;
    try {
      z = eval(g, {x, y});
    } catch (const Error& e) {
      rep.failures.push_back(where + ": " + e.what());
      ++rep.checked;
      return;
    }
    ++rep.checked;
    if (!z.is_rational()) {
      rep.failures.push_back(where + ": section value is not rational");
      return;
    }
    const Rat& zq = z.rational();
    Point p{x, y, zq};
    ExtVal q = eval(quartic, p);
    if (!q.is_rational() || q.rational() != 0) rep.failures.push_back(where + ": quartic does not vanish");
    else if (y != 0 && !(y * zq < 0)) rep.failures.push_back(where + ": yz is not negative");
    else if (y == 0 && zq != 0) rep.failures.push_back(where + ": z is not 0 on the axis");
    else if (!contains(sheet, p)) rep.failures.push_back(where + ": point is not in the set");
  };

  // (x, y) = ((m^2 - k^2) / s^2, 2mk / s^2) makes x^2 + y^2 a square, so
  // g = -sign(y) m / s is rational.
  std::vector<std::pair<Rat, Rat>> pts;
  for (int s = 1; pts.size() < count && s <= 64; ++s)
    for (int m = 1; m <= 8 && pts.size() < count; ++m)
      for (int k = -8; k <= 8 && pts.size() < count; ++k) {
        if (k == 0) continue;
        Rat x(m * m - k * k, s * s), y(2 * m * k, s * s);
        x.canonicalize();
        y.canonicalize();
        if (std::find(pts.begin(), pts.end(), std::make_pair(x, y)) == pts.end()) pts.emplace_back(x, y);
      }
  for (const auto& [x, y] : pts) check(x, y);
  // The line y = z = 0 over the negative x axis.
  for (int x = 1; x <= 3; ++x) check(Rat(-x), Rat(0));
  return rep;
}

}  // namespace mincad::corpus
