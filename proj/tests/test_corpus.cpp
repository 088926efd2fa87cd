#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/corpus/corpus.hpp"
#include "mincad/errors.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

using namespace mincad;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("embedded fixtures match the fixture files") {
  auto names = corpus::fixture_names();
  CHECK(names.size() >= 12);
  for (const auto& n : names) CHECK(corpus::fixture_text(n) == read_file(std::string(MINCAD_FIXTURE_DIR) + "/" + n));
  CHECK_THROWS_AS(corpus::fixture_text("missing.cadspec"), Error);
}

TEST_CASE("every corpus entry reproduces its expected facts") {
  auto names = corpus::entry_names();
  std::set<std::string> want{"trousers",        "disk",     "analytic-trousers", "closedball", "doubleparabolas",
                             "counterclosed-B", "counterclosed-U", "A-eta",      "Pi-gamma",   "pointless-ball",
                             "halfspace0",      "behaviour1", "trousers4"};
  CHECK(std::set<std::string>(names.begin(), names.end()) == want);
  for (const auto& name : names) {
    auto e = corpus::load(name);
    CHECK(!e.facts.empty());
    for (const auto& f : e.facts) CHECK(!f.anchor.empty());
    for (const auto& o : corpus::check_entry(e))
      CHECK_MESSAGE(o.ok, name << " " << corpus::to_string(o.fact.kind) << " " << o.fact.cad << " " << o.fact.arg
                               << ": expected '" << o.fact.expected << "', observed '" << o.observed << "'");
  }
}

TEST_CASE("unknown entries are rejected") {
  try {
    corpus::load("nope");
    FAIL("expected UnknownEntry");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownEntry);
  }
}

TEST_CASE("corpus CADs round-trip through the printer") {
  for (const auto& name : corpus::entry_names()) {
    auto e = corpus::load(name);
    for (const auto& [n, c] : e.doc.cads) {
      auto back = parse_cadspec(print_cad(n, c));
      CHECK_MESSAGE(canonical_fingerprint(back.cad(n)) == canonical_fingerprint(c), name << " " << n);
    }
  }
}

TEST_CASE("cylinder products keep leaf counts") {
  for (const auto& name : corpus::entry_names()) {
    auto e = corpus::load(name);
    for (const auto& n : e.cad_names) {
      const auto& c = e.doc.cad(n);
      CHECK(cylinder_product(c).leaf_count() == c.leaf_count());
    }
  }
}

TEST_CASE("D^t family") {
  auto trousers = load_cadspec(std::string(MINCAD_FIXTURE_DIR) + "/trousers.cadspec");
  auto fam = trousers.family();
  const auto& Cp = trousers.cad("Cprime");
  CHECK(canonical_fingerprint(corpus::d_t_generator(Rat(0))) == canonical_fingerprint(Cp));
  std::set<std::string> fps;
  for (int t : {0, -1, -2, -3}) {
    auto d = corpus::d_t_generator(Rat(t));
    CHECK(check_cad_structure(d).empty());
    auto tree = build_tree(d, fam);
    CHECK(tree == build_tree(Cp, fam));
    for (const auto& r : tree_reductions(tree)) CHECK(liftable(d, r.pivot).status == LiftStatus::Fails);
    fps.insert(canonical_fingerprint(d));
  }
  CHECK(fps.size() == 4);
  auto half = corpus::d_t_generator(Rat(-1, 2));
  CHECK(check_cad_structure(half).empty());
  try {
    corpus::d_t_generator(Rat(1, 3));
    FAIL("expected BadParameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadParameter);
  }
}

TEST_CASE("analytic trousers section solves the quartic") {
  auto rep = corpus::verify_analytic_trousers(100);
  CHECK(rep.checked >= 100);
  CHECK_MESSAGE(rep.ok(), (rep.failures.empty() ? "" : rep.failures.front()));

  auto doc = parse_cadspec(corpus::fixture_text("analytic-trousers.cadspec"));
  const Expr& g = doc.cad("C").cylinder({1, 1}).at(0);
  auto z = eval(g, {Rat(3, 4), Rat(1)});
  REQUIRE(z.is_rational());
  CHECK(z.rational() == -1);
  auto z0 = eval(g, {Rat(-2), Rat(0)});
  REQUIRE(z0.is_rational());
  CHECK(z0.rational() == 0);
}

TEST_CASE("complement families flip every label") {
  for (const auto& name : corpus::entry_names()) {
    auto e = corpus::load(name);
    auto fam = e.family();
    auto comp = fam.complement();
    CHECK(comp.complement().sets.size() == fam.sets.size());
    for (const auto& n : e.cad_names) {
      auto c = e.cad(n);
      if (c.leaf_count() > 30) continue;  // large CADs are covered by the entry facts
      auto t = build_tree(c, fam);
      auto tc = build_tree(c, comp);
      for (const auto& l : t.leaves()) {
        Label flipped = t.leaf_label(l);
        for (auto& b : flipped) b = b ? 0 : 1;
        CHECK(tc.leaf_label(l) == flipped);
      }
    }
  }
}
