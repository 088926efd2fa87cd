#include <doctest.h>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/errors.hpp"
#include "mincad/reduction/reduction.hpp"

using namespace mincad;

namespace {

std::string fixture(const std::string& name) { return std::string(MINCAD_FIXTURE_DIR) + "/" + name; }

size_t find_node(const ReductionDag& dag, const ConcreteCad& cad) {
  auto fp = canonical_fingerprint(cad);
  for (size_t i = 0; i < dag.nodes.size(); ++i)
    if (dag.nodes[i].fingerprint == fp) return i;
  return dag.nodes.size();
}

}  // namespace

TEST_CASE("trousers: liftability verdicts and witness") {
  auto doc = load_cadspec(fixture("trousers.cadspec"));
  const auto& C = doc.cad("C");
  auto lr = liftable(C, {1, 2});
  REQUIRE(lr.status == LiftStatus::Fails);
  REQUIRE(lr.witness);
  CHECK(lr.witness->point == Point{Rat(1), Rat(0)});
  CHECK(lr.witness->side_value == ExtVal(Rat(-1, 2)));
  CHECK(lr.witness->section_value == ExtVal(0));
  CHECK(lr.witness->gap == ExtVal(Rat(1, 2)));
  CHECK_FALSE(lr.witness->divergent);

  const auto& Cbar = doc.cad("Cbar");
  CHECK(liftable(Cbar, {2}).status == LiftStatus::Lifts);
  CHECK(liftable(Cbar, {1, 2}).status == LiftStatus::Lifts);
  CHECK(liftable(Cbar, {2, 2}).status == LiftStatus::Lifts);
  CHECK(liftable(Cbar, {3, 2}).status == LiftStatus::Fails);
}

TEST_CASE("trousers: reduction graph from the common refinement") {
  auto doc = load_cadspec(fixture("trousers.cadspec"));
  auto fam = doc.family();
  auto dag = reduction_dag(doc.cad("Cbar"), fam);
  CHECK(dag.nodes.size() == 5);
  CHECK(dag.complete());
  auto nf = dag.normal_forms();
  CHECK(nf.size() == 2);
  size_t c = find_node(dag, doc.cad("C")), cp = find_node(dag, doc.cad("Cprime"));
  CHECK(c < dag.nodes.size());
  CHECK(cp < dag.nodes.size());
  CHECK(std::find(nf.begin(), nf.end(), c) != nf.end());
  CHECK(std::find(nf.begin(), nf.end(), cp) != nf.end());
  auto rep = confluence_report(dag);
  CHECK_FALSE(rep.unique_normal_form);
  CHECK(rep.verdict == ConfluenceVerdict::MultipleNormalForms);
  CHECK(transitive_reduction_check(dag));
  CHECK(node_partition(dag, c).size() == 9);
  CHECK(node_partition(dag, cp).size() == 15);
}

TEST_CASE("merged cylinders reproduce the glued formula") {
  auto doc = load_cadspec(fixture("trousers.cadspec"));
  auto merged = merge_cells(doc.cad("Cbar"), {2});
  CHECK(merged.level1.empty());
  CHECK(to_string(merged.cylinder({1, 3})[0]) == "piecewise{x1 <= 0 -> 0; else -> -1/2 * x1}");
  CHECK(check_cad_structure(merged).empty());
}

TEST_CASE("checked reduction raises on failing pivots") {
  auto doc = load_cadspec(fixture("trousers.cadspec"));
  auto fam = doc.family();
  const auto& C = doc.cad("C");
  auto t = build_tree(C, fam);
  CHECK_THROWS_AS(apply_reduction(C, t, {1, 2}), Error);
  try {
    apply_reduction(C, t, {1, 2});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotLiftable);
  }
}

TEST_CASE("disk: unique normal form from the doubled refinement") {
  auto doc = load_cadspec(fixture("disk.cadspec"));
  auto fam = doc.family();
  auto dag = reduction_dag(doc.cad("Cdouble"), fam);
  CHECK(dag.nodes.size() == 10);
  auto nf = dag.normal_forms();
  REQUIRE(nf.size() == 1);
  CHECK(nf[0] == find_node(dag, doc.cad("C")));
  CHECK(dag.complete());
  auto rep = confluence_report(dag);
  CHECK(rep.unique_normal_form);
  CHECK(rep.locally_confluent);

  auto m = minimal(doc.cad("Cprime"), fam);
  CHECK(m.cad.leaf_count() == 13);
  CHECK(m.certified());
  CHECK(m.trace.size() >= 1);
}
