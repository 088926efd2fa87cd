#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>

#include <json.hpp>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/errors.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

namespace mincad {

namespace {

Index join(Index a, const Index& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Expr glue(const Expr& lower, const Expr& mid, const Expr& upper, int axis, const Expr& xi) {
  bool lm = same_expr(lower, mid), mu = same_expr(mid, upper);
  if (lm && mu) return lower;
  Expr x = Expr::var(axis);
  if (lm) return Expr::piecewise({{Predicate::atom(x, Rel::Le, xi), lower}}, upper);
  if (mu) return Expr::piecewise({{Predicate::atom(x, Rel::Lt, xi), lower}}, upper);
  return Expr::piecewise({{Predicate::atom(x, Rel::Lt, xi), lower}, {Predicate::atom(x, Rel::Eq, xi), mid}}, upper);
}

std::string fnv_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace

ConcreteCad merge_cells(const ConcreteCad& cad, const Index& A) {
  if (!is_section(A) || !cad.valid_index(A)) raise(ErrorKind::NotReducible, to_string(A) + " is not a section cell");
  int k = level(A);
  int j = A.back();
  Index P = parent(A);
  size_t slot = static_cast<size_t>(j / 2 - 1);
  Expr xi = k == 1 ? Expr::from_value(cad.level1[slot]) : cad.cylinder(P)[slot];

  ConcreteCad out = cad;
  if (k == 1) out.level1.erase(out.level1.begin() + static_cast<long>(slot));
  else {
    auto& cyl = out.sections[P];
    cyl.erase(cyl.begin() + static_cast<long>(slot));
  }

  std::map<Index, std::vector<Expr>> renamed;
  for (const auto& [key, exprs] : out.sections) {
    bool below = level(key) >= k && std::equal(P.begin(), P.end(), key.begin());
    if (!below) {
      renamed.emplace(key, exprs);
      continue;
    }
    int e = key[k - 1];
    if (e < j - 1) {
      renamed.emplace(key, exprs);
    } else if (e == j - 1) {
      Index rel(key.begin() + k, key.end());
      Index mid = join(A, rel), up = A;
      up.back() += 1;
      up = join(up, rel);
      auto mit = cad.sections.find(mid), uit = cad.sections.find(up);
      if (mit == cad.sections.end() || uit == cad.sections.end() || mit->second.size() != exprs.size() ||
          uit->second.size() != exprs.size())
        raise(ErrorKind::NotReducible, "cylinder shapes differ above " + to_string(mid));
      std::vector<Expr> merged;
      for (size_t s = 0; s < exprs.size(); ++s) merged.push_back(glue(exprs[s], mit->second[s], uit->second[s], k, xi));
      renamed.emplace(key, std::move(merged));
    } else if (e >= j + 2) {
      Index moved = key;
      moved[k - 1] -= 2;
      renamed.emplace(moved, exprs);
    }
  }
  out.sections = std::move(renamed);
  return out;
}

ConcreteCad apply_reduction(const ConcreteCad& cad, const CadTree& tree, const Index& A, const SamplePlan& plan) {
  if (!reduction_applies(tree, A)) raise(ErrorKind::NotReducible, "neighbouring subtrees differ at " + to_string(A));
  auto lr = liftable(cad, A, plan);
  if (lr.status != LiftStatus::Lifts)
    raise(ErrorKind::NotLiftable, "pivot " + to_string(A) + " " + to_string(lr.status) + ": " + lr.reason);
  return merge_cells(cad, A);
}

std::string canonical_fingerprint(const ConcreteCad& cad, const SamplePlan& plan) {
  std::string s = "dim=" + std::to_string(cad.dim) + ";class=" + cad.cls.str() + "\n";
  for (const auto& v : cad.level1) s += extval_text(v) + ",";
  s += "\n";
  Sampler sampler(cad, plan);
  for (int k = 1; k < cad.dim; ++k) {
    for (const auto& B : cad.cells(k)) {
      s += to_string(B) + " u=" + std::to_string(cad.u(B)) + ":";
      const auto& pool = sampler.pool(B);
      size_t n = std::min(pool.size(), static_cast<size_t>(plan.fingerprint_samples));
      for (size_t i = 0; i < n; ++i) {
        s += to_string(pool[i]) + "->";
        for (const auto& v : section_values(cad, B, pool[i])) s += v.is_indeterminate() ? "?," : v.str() + ",";
      }
      s += "\n";
    }
  }
  return fnv_hex(s);
}

std::string expression_digest(const ConcreteCad& cad) {
  std::string s;
  for (const auto& [I, exprs] : cad.sections) {
    s += to_string(I) + ":";
    for (const auto& e : exprs) s += to_string(normalize(e)) + ";";
    s += "\n";
  }
  return fnv_hex(s);
}

bool DagNode::normal_form() const {
  return std::none_of(checks.begin(), checks.end(), [](const PivotCheck& c) { return c.applies(); });
}

bool DagNode::undecided() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const PivotCheck& c) { return c.tree_ok && c.lift.status == LiftStatus::Unknown; });
}

std::vector<size_t> ReductionDag::normal_forms() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].normal_form()) out.push_back(i);
  return out;
}

bool ReductionDag::complete() const {
  if (truncated) return false;
  return std::none_of(nodes.begin(), nodes.end(), [](const DagNode& n) { return n.undecided(); });
}

std::vector<size_t> ReductionDag::successors(size_t i) const {
  std::vector<size_t> out;
  for (const auto& e : edges)
    if (e.from == i && std::find(out.begin(), out.end(), e.to) == out.end()) out.push_back(e.to);
  return out;
}

std::vector<bool> ReductionDag::reachable_from(size_t i) const {
  std::vector<bool> seen(nodes.size(), false);
  std::vector<size_t> stack{i};
  seen[i] = true;
  while (!stack.empty()) {
    size_t n = stack.back();
    stack.pop_back();
    for (size_t m : successors(n))
      if (!seen[m]) {
        seen[m] = true;
        stack.push_back(m);
      }
  }
  return seen;
}

ReductionDag reduction_dag(const ConcreteCad& start, const Family& fam, const SamplePlan& plan, const DagOptions& opt) {
  ReductionDag dag;
  std::map<std::string, size_t> by_fp;
  DagNode root;
  root.cad = start;
  root.tree = build_tree(start, fam, plan);
  root.fingerprint = canonical_fingerprint(start, plan);
  root.expr_digest = expression_digest(start);
  root.leaf_map = start.leaves();
  by_fp[root.fingerprint] = 0;
  dag.nodes.push_back(std::move(root));

  std::deque<size_t> queue{0};
  while (!queue.empty()) {
    size_t i = queue.front();
    queue.pop_front();
    std::vector<PivotCheck> checks;
    for (const auto& r : tree_reductions(dag.nodes[i].tree))
      checks.push_back(check_pivot(dag.nodes[i].cad, dag.nodes[i].tree, r.pivot, plan));
    dag.nodes[i].checks = checks;
    for (const auto& c : checks) {
      if (!c.applies()) continue;
      DagNode next;
      next.cad = merge_cells(dag.nodes[i].cad, c.pivot);
      next.tree = apply_tree_reduction(dag.nodes[i].tree, {c.pivot});
      next.fingerprint = canonical_fingerprint(next.cad, plan);
      next.expr_digest = expression_digest(next.cad);
      for (const auto& I : dag.nodes[i].leaf_map) next.leaf_map.push_back(psi(c.pivot, I));
      auto it = by_fp.find(next.fingerprint);
      if (it != by_fp.end()) {
        const DagNode& old = dag.nodes[it->second];
        if (old.expr_digest != next.expr_digest) {
          std::string note = "node " + std::to_string(it->second) + " reached again via pivot " + to_string(c.pivot) +
                             " from node " + std::to_string(i) + " with different formulas";
          if (std::find(dag.notes.begin(), dag.notes.end(), note) == dag.notes.end()) dag.notes.push_back(note);
        }
        if (old.leaf_map != next.leaf_map)
          dag.notes.push_back("node " + std::to_string(it->second) + " reached with a different leaf partition");
        if (dag.edges.size() >= opt.max_edges) {
          dag.truncated = true;
          continue;
        }
        dag.edges.push_back({i, it->second, c.pivot});
        continue;
      }
      if (dag.nodes.size() >= opt.max_nodes || dag.edges.size() >= opt.max_edges) {
        dag.truncated = true;
        continue;
      }
      size_t id = dag.nodes.size();
      by_fp[next.fingerprint] = id;
      dag.nodes.push_back(std::move(next));
      dag.edges.push_back({i, id, c.pivot});
      queue.push_back(id);
    }
  }
  return dag;
}

std::vector<std::vector<size_t>> node_partition(const ReductionDag& dag, size_t i) {
  std::map<Index, std::vector<size_t>> groups;
  const auto& lm = dag.nodes.at(i).leaf_map;
  for (size_t l = 0; l < lm.size(); ++l) groups[lm[l]].push_back(l);
  std::vector<std::vector<size_t>> out;
  for (auto& [I, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(ConfluenceVerdict v) {
  return v == ConfluenceVerdict::UniqueNormalForm ? "UniqueNormalForm" : "MultipleNormalForms";
}

ConfluenceReport confluence_report(const ReductionDag& dag) {
  if (dag.truncated) raise(ErrorKind::IncompleteDag, "reduction DAG was truncated by its node or edge cap");
  ConfluenceReport rep;
  rep.normal_forms = dag.normal_forms();
  rep.complete = dag.complete();
  std::vector<std::vector<bool>> reach;
  for (size_t i = 0; i < dag.nodes.size(); ++i) reach.push_back(dag.reachable_from(i));
  rep.locally_confluent = true;
  for (size_t i = 0; i < dag.nodes.size(); ++i) {
    auto succ = dag.successors(i);
    for (size_t a = 0; a < succ.size(); ++a) {
      for (size_t b = a + 1; b < succ.size(); ++b) {
        Peak p{i, succ[a], succ[b], false};
        for (size_t n = 0; n < dag.nodes.size(); ++n)
          if (reach[succ[a]][n] && reach[succ[b]][n]) {
            p.joinable = true;
            break;
          }
        if (!p.joinable) rep.locally_confluent = false;
        rep.peaks.push_back(p);
      }
    }
  }
  rep.unique_normal_form = rep.normal_forms.size() == 1;
  rep.verdict = rep.normal_forms.size() >= 2 ? ConfluenceVerdict::MultipleNormalForms : ConfluenceVerdict::UniqueNormalForm;
  int dim = dag.nodes.empty() ? 0 : dag.nodes[0].cad.dim;
  std::string caveat = rep.complete ? "" : " Some pivots were undecided (Unknown), so further merges may exist.";
  if (rep.verdict == ConfluenceVerdict::MultipleNormalForms) {
    rep.scope = "Two or more minimal adapted CADs lie below the start CAD, so the family admits no minimum CAD "
                "of this class." + caveat;
  } else if (dim <= 2) {
    rep.scope = "A single normal form lies below the start CAD. In dimension " + std::to_string(dim) +
                " a minimum adapted CAD always exists, so this normal form is the global minimum." + caveat;
  } else {
    rep.scope = "A single normal form lies below the start CAD. This certifies a minimum below this start only, "
                "not a global minimum of the family." + caveat;
  }
  return rep;
}

bool transitive_reduction_check(const ReductionDag& dag) {
  if (dag.truncated) raise(ErrorKind::IncompleteDag, "reduction DAG was truncated by its node or edge cap");
  std::vector<std::vector<bool>> reach;
  for (size_t i = 0; i < dag.nodes.size(); ++i) reach.push_back(dag.reachable_from(i));
  for (const auto& e : dag.edges)
    for (size_t mid : dag.successors(e.from))
      if (mid != e.to && reach[mid][e.to]) return false;
  return true;
}

std::string dag_dot(const ReductionDag& dag, const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) out += "// " + header_comment + "\n";
  out += "digraph reductions {\n  rankdir=TB;\n";
  for (size_t i = 0; i < dag.nodes.size(); ++i) {
    const auto& n = dag.nodes[i];
    std::string shape = n.normal_form() ? "doublecircle" : "circle";
    out += "  n" + std::to_string(i) + " [shape=" + shape + ", label=\"" + std::to_string(i) + "\\n" +
           std::to_string(n.tree.leaf_count()) + " cells\"];\n";
  }
  for (const auto& e : dag.edges)
    out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to) + " [label=\"Phi " + to_string(e.pivot) +
           "\"];\n";
  out += "}\n";
  return out;
}

MinimalResult minimal(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan) {
  MinimalResult res;
  res.cad = cad;
  res.tree = build_tree(cad, fam, plan);
  int step = 0;
  while (true) {
    auto rs = tree_reductions(res.tree);
    std::sort(rs.begin(), rs.end());
    bool applied = false;
    res.undecided.clear();
    for (const auto& r : rs) {
      auto lr = liftable(res.cad, r.pivot, plan);
      nlohmann::ordered_json j;
      j["step"] = step;
      j["pivot"] = to_string(r.pivot);
      j["status"] = to_string(lr.status);
      j["reason"] = lr.reason;
      if (lr.witness) {
        j["witness"] = to_string(lr.witness->point);
        j["gap"] = lr.witness->gap.is_indeterminate() ? "?" : lr.witness->gap.str();
      }
      j["leaves"] = res.tree.leaf_count();
      res.trace.push_back(j.dump());
      if (lr.status == LiftStatus::Unknown) res.undecided.push_back(r.pivot);
      if (lr.status == LiftStatus::Lifts) {
        res.cad = merge_cells(res.cad, r.pivot);
        res.tree = apply_tree_reduction(res.tree, r);
        applied = true;
        ++step;
        break;
      }
    }
    if (!applied) break;
  }
  return res;
}

}  // namespace mincad
