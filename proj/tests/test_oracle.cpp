#include <doctest.h>

#include <set>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/errors.hpp"
#include "mincad/oracle/oracle.hpp"
#include "mincad/tree/rewrite.hpp"

using namespace mincad;

namespace {

std::string fixture(const std::string& name) { return std::string(MINCAD_FIXTURE_DIR) + "/" + name; }

ConcreteCad line_cad(int sections) {
  ConcreteCad c;
  for (int i = 0; i < sections; ++i) c.level1.push_back(ExtVal(i));
  return c;
}

// Partition of the leaves induced by one merge at pivot A.
Coarsening merge_partition(const ConcreteCad& cad, const Index& A) {
  std::map<Index, int> ids;
  Coarsening c;
  for (const auto& l : cad.leaves()) {
    auto it = ids.emplace(psi(A, l), static_cast<int>(ids.size())).first;
    c.block.push_back(it->second);
  }
  return c;
}

std::set<std::vector<int>> element_set(const Poset& p) {
  std::set<std::vector<int>> s;
  for (const auto& e : p.elements) s.insert(e.block);
  return s;
}

}  // namespace

TEST_CASE("Bell numbers") {
  CHECK(bell(1) == 1);
  CHECK(bell(3) == 5);
  CHECK(bell(9) - 1 == 21146);
  CHECK(bell(15) - 1 == mpz_class("1382958544"));
  CHECK_THROWS_AS(bell(0), Error);
}

TEST_CASE("enumeration streams every non-discrete partition") {
  for (int u = 0; u <= 4; ++u) {
    auto cad = line_cad(u);
    std::set<std::vector<int>> seen;
    size_t n = enumerate_coarsenings(cad, [&](const Coarsening& c) {
      seen.insert(c.block);
      return !c.discrete();
    });
    CHECK(n == seen.size());
    CHECK(mpz_class(static_cast<unsigned long>(n)) == bell(2 * u + 1) - 1);
  }
  auto three = line_cad(1);
  std::vector<std::vector<int>> got;
  enumerate_coarsenings(three, [&](const Coarsening& c) {
    got.push_back(c.block);
    return true;
  });
  CHECK(got == std::vector<std::vector<int>>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}});

  auto big = line_cad(6);
  CHECK_THROWS_AS(enumerate_coarsenings(big, [](const Coarsening&) { return true; }), Error);
  CHECK(enumerate_coarsenings(big, [](const Coarsening&) { return true; }, 1000) == 1000);

  auto doc = load_cadspec(fixture("trousers.cadspec"));
  size_t streamed = enumerate_coarsenings(doc.cad("C"), [](const Coarsening&) { return true; });
  CHECK(streamed == 21146);
}

TEST_CASE("coarsening filter on the worked examples") {
  auto trousers = load_cadspec(fixture("trousers.cadspec"));
  auto tf = trousers.family();
  const auto& C = trousers.cad("C");
  auto v = check_coarsening(C, merge_partition(C, {1, 2}), tf);
  CHECK_FALSE(v.accepted);
  CHECK_FALSE(v.flagged);
  CHECK(v.reason.find("does not glue") != std::string::npos);

  Coarsening all;
  all.block.assign(C.leaf_count(), 0);
  auto mixed = check_coarsening(C, all, tf);
  CHECK_FALSE(mixed.accepted);
  CHECK(mixed.reason.find("mixes labels") != std::string::npos);

  auto disk = load_cadspec(fixture("disk.cadspec"));
  auto df = disk.family();
  const auto& Cp = disk.cad("Cprime");
  auto phi4 = merge_partition(Cp, {4});
  CHECK(is_cad_coarsening(Cp, phi4, df));
  auto coarse = materialize(Cp, phi4);
  CHECK(coarse.leaf_count() == 13);
  CHECK(check_cad_structure(coarse).empty());
  CHECK(canonical_fingerprint(coarse) == canonical_fingerprint(disk.cad("C")));
  CHECK(build_tree(coarse, df) == build_tree(disk.cad("C"), df));
}

TEST_CASE("posets below the worked examples") {
  auto trousers = load_cadspec(fixture("trousers.cadspec"));
  auto tf = trousers.family();
  auto pc = poset_below(trousers.cad("C"), tf);
  CHECK(pc.elements.size() == 1);
  CHECK(pc.candidates == 21146);
  CHECK(pc.inconclusive.empty());
  auto pruned = poset_below(trousers.cad("C"), tf, {}, EnumerationMode::Pruned);
  CHECK(element_set(pruned) == element_set(pc));

  auto disk = load_cadspec(fixture("disk.cadspec"));
  auto df = disk.family();
  auto pd = poset_below(disk.cad("Cprime"), df);
  CHECK(pd.pruned);
  CHECK(pd.elements.size() == 2);
  CHECK(pd.covers().size() == 1);

  ConcreteCad trivial;
  Family empty_set;
  empty_set.names = {"E"};
  empty_set.sets = {Predicate::truth(false)};
  auto pt = poset_below(trivial, empty_set);
  CHECK(pt.elements.size() == 1);
}

TEST_CASE("pruned and exhaustive enumeration accept the same coarsenings") {
  Family fam;
  fam.names = {"S"};
  fam.sets = {parse_predicate("x1 >= 0")};
  for (int u : {1, 2, 3, 4}) {
    auto cad = line_cad(u);
    auto ex = poset_below(cad, fam, {}, EnumerationMode::Exhaustive);
    auto pr = poset_below(cad, fam, {}, EnumerationMode::Pruned);
    CHECK(element_set(ex) == element_set(pr));
  }
  Family disk;
  disk.names = {"D"};
  disk.sets = {parse_predicate("x2 >= 0 and x1 <= 2")};
  auto doc = parse_cadspec(R"(cad P dim=2 class=omega
level1: 2
cell 1: u=1; xi2=0
cell 2: u=1; xi2=0
cell 3: u=1; xi2=0
)");
  auto ex = poset_below(doc.cad("P"), disk, {}, EnumerationMode::Exhaustive);
  auto pr = poset_below(doc.cad("P"), disk, {}, EnumerationMode::Pruned);
  CHECK(element_set(ex) == element_set(pr));
  CHECK(ex.elements.size() >= 2);
}

TEST_CASE("accepted coarsenings materialize as valid adapted CADs") {
  auto trousers = load_cadspec(fixture("trousers.cadspec"));
  auto tf = trousers.family();
  auto p = poset_below(trousers.cad("Cbar"), tf);
  CHECK(p.elements.size() == 5);
  for (const auto& e : p.elements) {
    auto coarse = materialize(trousers.cad("Cbar"), e);
    CHECK(check_cad_structure(coarse).empty());
    CHECK_NOTHROW(build_tree(coarse, tf));
  }
}

TEST_CASE("oracle and reduction DAG agree") {
  auto disk = load_cadspec(fixture("disk.cadspec"));
  auto df = disk.family();
  for (const char* name : {"C", "Cprime", "Cdouble"}) {
    const auto& cad = disk.cad(name);
    auto dag = reduction_dag(cad, df);
    auto poset = poset_below(cad, df);
    auto rep = cross_validate(dag, poset);
    CHECK_MESSAGE(rep.agree(), name << ": " << (rep.mismatches.empty() ? "" : rep.mismatches.front()));
    CHECK(rep.inconclusive == 0);
  }

  auto trousers = load_cadspec(fixture("trousers.cadspec"));
  auto tf = trousers.family();
  for (const char* name : {"C", "Cprime", "Cbar"}) {
    const auto& cad = trousers.cad(name);
    auto dag = reduction_dag(cad, tf);
    auto poset = poset_below(cad, tf);
    auto rep = cross_validate(dag, poset);
    CHECK_MESSAGE(rep.agree(), name << ": " << (rep.mismatches.empty() ? "" : rep.mismatches.front()));
  }

  // Removing an edge breaks reachability.
  const auto& Cd = disk.cad("Cdouble");
  auto dag = reduction_dag(Cd, df);
  auto poset = poset_below(Cd, df);
  REQUIRE(!dag.edges.empty());
  auto cut = dag;
  cut.edges.erase(cut.edges.begin());
  auto rep = cross_validate(cut, poset);
  CHECK_FALSE(rep.agree());
  CHECK_FALSE(rep.order_agree);
  CHECK(poset_dot(poset).find("digraph") != std::string::npos);
}
