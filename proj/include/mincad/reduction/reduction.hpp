#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mincad/cad/concrete.hpp"
#include "mincad/cad/sampling.hpp"
#include "mincad/tree/cad_tree.hpp"

namespace mincad {

enum class LiftStatus { Lifts, Fails, Unknown };
const char* to_string(LiftStatus s);

// Point where a side section disagrees with the section over the pivot.
struct LiftWitness {
  Point point;         // sample of the pivot cylinder cell A:R
  int level = 0;       // level of the offending section cells
  Index side_cell;     // (A -/+ e):R
  int section = 0;     // 1-based section number in the cylinder
  ExtVal side_value;   // closure value of the side section (Indeterminate when undefined)
  ExtVal section_value;
  ExtVal gap;          // |side - section|, Indeterminate when only bounded below
  bool divergent = false;
};

struct LiftResult {
  LiftStatus status = LiftStatus::Unknown;
  std::optional<LiftWitness> witness;
  std::string reason;
};

// Whether the sections over A - e_k and A + e_k glue with those over the even
// cell A into functions of the required class, on every cylinder above A.
// Sample based: Lifts means no disagreement at any pool point. Raises
// PlanExhausted when a cylinder base above A has no rational witness;
// check_pivot() reports that case as Unknown instead.
LiftResult liftable(const ConcreteCad& cad, const Index& A, const SamplePlan& plan = {});

// One side of a gluing test: a base cell and the section formula over it.
struct GlueSide {
  Index cell;
  Expr formula;
};

// The per-point gluing test behind liftable(): whether the side formulas,
// approached along the 0-based axis, meet the formula over the middle cell at
// w, with the regularity of the CAD's class. Sides may be missing when the
// middle cell is a boundary of the merged region in that direction.
LiftResult glue_check(const ConcreteCad& cad, const std::optional<GlueSide>& lower, const Expr& mid,
                      const std::optional<GlueSide>& upper, const Point& w, int axis, const SamplePlan& plan = {});

struct PivotCheck {
  Index pivot;
  bool tree_ok = false;
  LiftResult lift;
  bool applies() const { return tree_ok && lift.status == LiftStatus::Lifts; }
};

PivotCheck check_pivot(const ConcreteCad& cad, const CadTree& tree, const Index& A, const SamplePlan& plan = {});

// Merges A - e_k, A, A + e_k into one cell and renumbers. No checks beyond
// matching cylinder shapes (raises NotReducible otherwise).
ConcreteCad merge_cells(const ConcreteCad& cad, const Index& A);

// Checked reduction: raises NotReducible when the tree condition fails and
// NotLiftable unless liftable() reports Lifts.
ConcreteCad apply_reduction(const ConcreteCad& cad, const CadTree& tree, const Index& A, const SamplePlan& plan = {});

// Hex digest of the geometry: u-count skeleton, level-1 values and section
// values at the first plan.fingerprint_samples samples of each base cell.
// Formulas are left out so that one CAD reached along different merge orders
// keeps one identity; expression_digest() tells such encodings apart.
std::string canonical_fingerprint(const ConcreteCad& cad, const SamplePlan& plan = {});
// Hex digest of the normalized section formulas.
std::string expression_digest(const ConcreteCad& cad);

struct DagNode {
  ConcreteCad cad;
  CadTree tree;
  std::string fingerprint;
  std::string expr_digest;
  std::vector<Index> leaf_map;  // current cell of every leaf of the start CAD
  std::vector<PivotCheck> checks;
  bool normal_form() const;     // no pivot applies
  bool undecided() const;       // some tree-admissible pivot is Unknown
};

struct DagEdge {
  size_t from = 0;
  size_t to = 0;
  Index pivot;
};

struct ReductionDag {
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;
  bool truncated = false;          // node or edge budget hit; the DAG is partial
  std::vector<std::string> notes;  // fingerprint collisions with different formulas

  std::vector<size_t> normal_forms() const;
  bool complete() const;  // not truncated and no Unknown pivot anywhere
  std::vector<size_t> successors(size_t i) const;
  std::vector<bool> reachable_from(size_t i) const;
};

struct DagOptions {
  size_t max_nodes = 100000;
  size_t max_edges = 1000000;
};

ReductionDag reduction_dag(const ConcreteCad& start, const Family& fam, const SamplePlan& plan = {},
                           const DagOptions& opt = {});

// Blocks of start leaves sharing a cell at node i, each block sorted, blocks
// ordered by their first leaf (leaf numbers refer to start.leaves()).
std::vector<std::vector<size_t>> node_partition(const ReductionDag& dag, size_t i);

struct Peak {
  size_t source = 0;
  size_t left = 0;
  size_t right = 0;
  bool joinable = false;
};

enum class ConfluenceVerdict { UniqueNormalForm, MultipleNormalForms };
const char* to_string(ConfluenceVerdict v);

struct ConfluenceReport {
  ConfluenceVerdict verdict = ConfluenceVerdict::UniqueNormalForm;
  std::vector<size_t> normal_forms;
  std::vector<Peak> peaks;
  bool locally_confluent = false;
  bool unique_normal_form = false;
  bool complete = false;  // every pivot decided (Unknown pivots never merge)
  std::string scope;      // what the verdict covers
};

// Raises IncompleteDag when the DAG was truncated.
ConfluenceReport confluence_report(const ReductionDag& dag);

// True iff no edge is implied by a longer path. Raises IncompleteDag when truncated.
bool transitive_reduction_check(const ReductionDag& dag);

// Hasse-style DOT with edges labelled by pivot.
std::string dag_dot(const ReductionDag& dag, const std::string& header_comment = "");

struct MinimalResult {
  ConcreteCad cad;
  CadTree tree;
  std::vector<std::string> trace;  // one JSON object per line
  std::vector<Index> undecided;    // Unknown pivots left at the end
  bool certified() const { return undecided.empty(); }
};

// Greedy reduction: scan pivots in index order, apply the first that lifts,
// restart. Stops at a CAD where no pivot applies.
MinimalResult minimal(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan = {});

}  // namespace mincad
