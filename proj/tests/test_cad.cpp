#include <doctest.h>

#include <functional>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/errors.hpp"

using namespace mincad;

namespace {

std::string fixture(const std::string& name) { return std::string(MINCAD_FIXTURE_DIR) + "/" + name; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::BadParameter;
}

}  // namespace

TEST_CASE("expression parser round-trips canonical text") {
  for (const char* s : {"sqrt(1 - x1 * x1)", "-1/2 * x1", "x1 - (x2 - x3)", "(x1 + x2) * x3", "x1 / (x2 * x3)",
                        "-sign(x2) * sqrt((x1 + sqrt(x1^2 + x2^2)) / 2)", "piecewise{x1 > 0 -> -1/2 * x1; else -> 0}",
                        "3 + -2 * sqrt(2)", "(-x1)^2", "-x1^2", "piecewise{x1 < 0 and x2 >= 1 -> 1; x1 = 0 -> 2; else -> 3}"}) {
    Expr e = parse_expr(s);
    CHECK(to_string(e) == s);
    CHECK(to_string(parse_expr(to_string(e))) == to_string(e));
  }
}

TEST_CASE("predicate parser handles precedence and parentheses") {
  Predicate p = parse_predicate("((x1 <= 0 or x2 <= 0) and x3 = 0) or (x1 > 0 and x2 > 0 and x3 = -1/2 * x1)");
  CHECK(to_string(parse_predicate(to_string(p))) == to_string(p));
  CHECK(contains(p, {Rat(-1), Rat(5), Rat(0)}));
  CHECK(contains(p, {Rat(2), Rat(1), Rat(-1)}));
  CHECK_FALSE(contains(p, {Rat(2), Rat(1), Rat(0)}));
  Predicate q = parse_predicate("(x1 + 1) * 2 > 3");
  CHECK(contains(q, {Rat(1)}));
  CHECK(to_string(parse_predicate("not x1 > 0 and true")) == "not x1 > 0 and true");
  CHECK(kind_of([] { parse_predicate("x1 >"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_expr("y1 + 1"); }) == ErrorKind::ParseError);
}

TEST_CASE("cadspec fixtures parse, print and reparse identically") {
  for (const char* f : {"trousers.cadspec", "disk.cadspec"}) {
    auto doc = load_cadspec(fixture(f));
    std::string text = print_cadspec(doc);
    CHECK(print_cadspec(parse_cadspec(text)) == text);
  }
  auto doc = load_cadspec(fixture("trousers.cadspec"));
  CHECK(doc.cad("C").leaf_count() == 9);
  CHECK(doc.cad("Cprime").leaf_count() == 15);
  CHECK(doc.cad("Cbar").leaf_count() == 27);
}

TEST_CASE("cadspec validation rejects malformed documents") {
  CHECK(kind_of([] { parse_cadspec("cad a dim=2 class=0\nlevel1: 0\ncell 1: u=0\n"); }) == ErrorKind::InvalidCad);
  CHECK(kind_of([] { parse_cadspec("cad a dim=2 class=0\nlevel1:\ncell 1: u=1; xi2=x2\n"); }) == ErrorKind::InvalidCad);
  CHECK(kind_of([] { parse_cadspec("cad a dim=2 class=0\nlevel1:\ncell 1: u=2; xi2=0\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_cadspec("cad a dim=1 class=0\nlevel1: x1\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_cadspec("frobnicate\n"); }) == ErrorKind::ParseError);
  auto doc = parse_cadspec("cad a dim=2 class=0 # comment\nlevel1: 1, \\\n 2\ncell 1: u=0\ncell 2: u=0\ncell 3: u=0\n"
                           "cell 4: u=0\ncell 5: u=0\n");
  CHECK(doc.cad("a").level1.size() == 2);
}

TEST_CASE("sampling picks preferred rational points") {
  auto doc = load_cadspec(fixture("disk.cadspec"));
  const auto& C = doc.cad("C");
  Sampler s(C);
  CHECK(s.sample({1}) == Point{Rat(-2)});
  CHECK(s.sample({3}) == Point{Rat(0)});
  CHECK(s.sample({3, 4}) == Point{Rat(0), Rat(1)});
  // Section above a sector needs a base where sqrt(1 - x^2) is rational.
  auto p = s.sample({3, 2});
  CHECK(locate(C, p) == Index{3, 2});
  for (const auto& L : C.leaves())
    for (const auto& q : s.pool(L)) CHECK(locate(C, q) == L);
  CHECK(coordinate_candidates(ExtVal(1), ExtVal(2)).front() == Rat(3, 2));
  CHECK(coordinate_candidates(std::nullopt, ExtVal::radical(0, 1, 2)).front() == Rat(0));
}

TEST_CASE("build_tree labels the disk and the trousers") {
  auto disk = load_cadspec(fixture("disk.cadspec"));
  auto t = build_tree(disk.cad("C"), disk.family());
  CHECK(t.leaf_count() == 13);
  CHECK(t.leaf_label({3, 3}) == Label{1});
  CHECK(t.leaf_label({3, 5}) == Label{0});
  CHECK(t.leaf_label({2, 2}) == Label{1});
  auto tp = build_tree(disk.cad("Cprime"), disk.family());
  CHECK(tp.leaf_label({4, 3}) == Label{1});
  CHECK(tp.leaf_label({4, 4}) == Label{1});

  auto tr = load_cadspec(fixture("trousers.cadspec"));
  auto tc = build_tree(tr.cad("C"), tr.family());
  for (const auto& L : tc.leaves()) CHECK(tc.leaf_label(L) == Label{static_cast<uint8_t>(L[2] == 2)});
  CHECK(check_cad_structure(tr.cad("Cbar")).empty());
  CHECK(check_cad_structure(disk.cad("Cdouble")).empty());
}

TEST_CASE("adaptedness violations are detected") {
  auto doc = parse_cadspec("set S: x1 > 0\ncad a dim=1 class=0\nlevel1:\n");
  CHECK(kind_of([&] { build_tree(doc.cad("a"), doc.family()); }) == ErrorKind::AdaptednessViolation);
}

TEST_CASE("structure checks flag crossings and undecidable sections") {
  auto doc = parse_cadspec("cad a dim=2 class=0\nlevel1:\ncell 1: u=2; xi2=x1; xi4=0\n");
  auto issues = check_cad_structure(doc.cad("a"));
  CHECK_FALSE(issues.empty());
  auto bad = parse_cadspec("cad b dim=2 class=0\nlevel1: 1, 0\ncell 1: u=0\ncell 2: u=0\ncell 3: u=0\ncell 4: u=0\ncell 5: u=0\n");
  CHECK(check_cad_structure(bad.cad("b")).size() == 1);
}

TEST_CASE("projection, product and refinement") {
  auto doc = load_cadspec(fixture("trousers.cadspec"));
  const auto& C = doc.cad("Cprime");
  CHECK(project(C, 2).leaf_count() == 5);
  CHECK(project(C, 1).leaf_count() == 3);
  CHECK(kind_of([&] { project(C, 4); }) == ErrorKind::BadLevel);
  auto P = cylinder_product(C);
  CHECK(P.dim == 4);
  CHECK(P.leaf_count() == 15);

  // Refining C' along x = 0 over cell 1 reproduces the tree shape of Cbar.
  auto R = refine_with_section(C, {1, 1}, Expr::constant(0));
  R = refine_with_section(R, {2, 1}, Expr::constant(0));
  CHECK(R.leaf_count() == 27);
  CHECK(check_cad_structure(R).empty());
  CHECK(kind_of([&] { refine_with_section(C, {3, 1}, Expr::constant(1)); }) == ErrorKind::SectionOutOfRange);
  auto L1 = refine_with_section(C, {1}, Expr::constant(-3));
  CHECK(L1.level1.size() == 2);
  CHECK(L1.u({3}) == 0);
  CHECK(L1.u({5}) == 1);
}
