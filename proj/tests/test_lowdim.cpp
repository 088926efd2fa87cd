#include <doctest.h>

#include <algorithm>
#include <random>

#include "mincad/cad/cadspec.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"
#include "mincad/reduction/reduction.hpp"

using namespace mincad;

namespace {

Label bits(std::initializer_list<int> v) {
  Label l;
  for (int b : v) l.push_back(static_cast<std::uint8_t>(b));
  return l;
}

Family family_of(const std::vector<std::string>& preds) {
  Family f;
  for (size_t i = 0; i < preds.size(); ++i) {
    f.names.push_back("S" + std::to_string(i + 1));
    f.sets.push_back(parse_predicate(preds[i]));
  }
  return f;
}

const char* kPointlessBall = "x1^2 + x2^2 + x3^2 <= 1 and not (x1 = 0 and x2 = 0 and x3 = 1)";

// Planar base separating the outside, the circle, the open disk and the origin.
const char* kBallBase = R"(cad B dim=2 class=omega
level1: -1, 0, 1
cell 1: u=0
cell 2: u=1; xi2=0
cell 3: u=2; xi2=-sqrt(1 - x1^2); xi4=sqrt(1 - x1^2)
cell 4: u=3; xi2=-1; xi4=0; xi6=1
cell 5: u=2; xi2=-sqrt(1 - x1^2); xi4=sqrt(1 - x1^2)
cell 6: u=1; xi2=0
cell 7: u=0
)";

}  // namespace

TEST_CASE("1-D sets normalize to canonical pieces") {
  CHECK(to_string(parse_set1d("(0,1] u [1,2)")) == "(0,2)");
  CHECK(to_string(parse_set1d("{1} u [-2,0)")) == "[-2,0) u {1}");
  CHECK(to_string(parse_set1d("(0,1) u (1,2)")) == "(0,1) u (1,2)");
  CHECK(to_string(parse_set1d("(0,1) u {1} u (1,2)")) == "(0,2)");
  CHECK(to_string(parse_set1d("[3,1]")) == "empty");
  CHECK(to_string(parse_set1d("(-inf,0] u (-1,inf)")) == "(-inf,inf)");
  CHECK(parse_set1d("(1,1)").empty());

  auto s = parse_set1d("[-2,0) u {1}");
  auto b = boundary(s);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == ExtVal(-2));
  CHECK(b[1] == ExtVal(0));
  CHECK(b[2] == ExtVal(1));
  CHECK(to_string(s.complement()) == "(-inf,-2) u [0,1) u (1,inf)");
  CHECK(s.complement().complement() == s);
}

TEST_CASE("minimum CAD of a 1-D family") {
  auto [cad, tree] = minimum_cad_1d({parse_set1d("[-2,0) u {1}"), parse_set1d("[0,inf)")});
  REQUIRE(cad.level1.size() == 3);
  CHECK(cad.level1[0] == ExtVal(-2));
  CHECK(cad.level1[1] == ExtVal(0));
  CHECK(cad.level1[2] == ExtVal(1));
  std::vector<Label> want{bits({0, 0}), bits({1, 0}), bits({1, 0}), bits({0, 1}),
                          bits({0, 1}), bits({1, 1}), bits({0, 1})};
  REQUIRE(tree.leaf_count() == want.size());
  for (size_t i = 0; i < want.size(); ++i) CHECK(tree.leaf_label({static_cast<int>(i) + 1}) == want[i]);

  auto [whole, wtree] = minimum_cad_1d({parse_set1d("(-inf,inf)")});
  CHECK(whole.level1.empty());
  CHECK(wtree.leaf_count() == 1);

  auto [irr, itree] = minimum_cad_1d({parse_set1d("[-sqrt(2),sqrt(2)]")});
  CHECK(irr.level1.size() == 2);
  CHECK(itree.leaf_count() == 5);
}

TEST_CASE("fibers of planar and spatial sets") {
  auto disk = parse_predicate("x1^2 + x2^2 <= 1");
  CHECK(to_string(fiber(disk, {Rat(3, 5)})) == "[-4/5,4/5]");
  CHECK(fiber(disk, {Rat(2)}).empty());
  CHECK(to_string(fiber(disk, {Rat(1)})) == "{0}");
  CHECK(to_string(fiber(disk, {Rat(1, 2)})) == "[-1/2 * sqrt(3),1/2 * sqrt(3)]");

  auto ball = parse_predicate(kPointlessBall);
  CHECK(to_string(fiber(ball, {Rat(0), Rat(0)})) == "[-1,1)");

  auto half = parse_predicate("x2 >= 0 and not (x1 = 0 and x2 = 0)");
  CHECK(to_string(fiber(half, {Rat(1)})) == "[0,inf)");
  CHECK(to_string(fiber(half, {Rat(0)})) == "(0,inf)");

  // A radical in y: 0 < sqrt(1 - y^2) holds on (-1, 1).
  CHECK(to_string(fiber(parse_predicate("x1 < sqrt(1 - x2^2)"), {Rat(0)})) == "(-1,1)");
  // y = sqrt(y + 2) only at y = 2.
  CHECK(to_string(fiber(parse_predicate("x2 = sqrt(x2 + 2)"), {Rat(5)})) == "{2}");
  // Undefined atoms are false: sqrt(y) is undefined for y < 0.
  CHECK(to_string(fiber(parse_predicate("sqrt(x2) >= 0"), {Rat(0)})) == "[0,inf)");

  CHECK_THROWS_AS(fiber(parse_predicate("sqrt(sqrt(x2)) > 1"), {Rat(0)}), Error);
  try {
    fiber(parse_predicate("1 / x2 > 1"), {Rat(0)});
    FAIL("expected NonPolynomialFiber");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPolynomialFiber);
  }
}

TEST_CASE("sign table of a + b sqrt(q) matches exact evaluation") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-4, 4), dq(0, 6);
  for (int t = 0; t < 500; ++t) {
    Rat a(d(rng)), b(d(rng)), q(dq(rng));
    ExtVal v = ExtVal(a) + ExtVal(b) * *ext_sqrt(ExtVal(q));
    auto sg = [](const Rat& r) { return sgn(r); };
    int got = fiber_sign(sg(a), sg(b), sg(Rat(a * a - b * b * q)));
    CHECK_MESSAGE(got == sign(v), "a=" << a << " b=" << b << " q=" << q);
  }
}

TEST_CASE("fibers agree with pointwise membership") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-3, 3);
  const char* shapes[] = {"x1^2 + x2^2 <= 1", "x2^2 < x1", "x2 >= x1^2 - 1 and x2 != 0",
                          "x2^3 - x2 > 0 or x2 = x1", "(x2 - x1) * (x2 + 1) <= 0"};
  for (const char* s : shapes) {
    auto p = parse_predicate(s);
    for (int t = 0; t < 20; ++t) {
      Point x{Rat(c(rng), 2)};
      auto f = fiber(p, x);
      for (int k = -12; k <= 12; ++k) {
        Rat y(k, 4);
        CHECK_MESSAGE(f.contains(ExtVal(y)) == contains(p, {x[0], y}), std::string(s) << " at x=" << x[0] << " y=" << y);
      }
      // The complement fiber is the complement of the fiber.
      CHECK(fiber(Predicate::negate(p), x) == f.complement());
    }
  }
}

TEST_CASE("behaviours above points") {
  auto half = family_of({"x2 >= 0 and not (x1 = 0 and x2 = 0)"});
  CHECK(to_string(behaviour(half, {Rat(1)})) == "(0,1,1)");
  CHECK(to_string(behaviour(half, {Rat(0)})) == "(0,0,1)");

  auto ball = family_of({kPointlessBall});
  CHECK(to_string(behaviour(ball, {Rat(1, 2), Rat(0)})) == "(0,1,1,1,0)");
  CHECK(to_string(behaviour(ball, {Rat(0), Rat(0)})) == "(0,1,1,0,0)");
  CHECK(to_string(behaviour(ball, {Rat(1), Rat(0)})) == "(0,1,0)");
  CHECK(to_string(behaviour(ball, {Rat(2), Rat(0)})) == "(0)");

  auto two = family_of({"x2 >= 0", "x2 <= 1"});
  CHECK(to_string(behaviour(two, {Rat(0)})) == "((0,1),(1,1),(1,1),(1,1),(1,0))");
}

TEST_CASE("behaviour partitions of a base") {
  auto half = family_of({"x2 >= 0 and not (x1 = 0 and x2 = 0)"});
  ConcreteCad three;
  three.level1 = {ExtVal(0)};
  auto bp = behaviour_partition(half, three);
  CHECK(bp.constant());
  CHECK(bp.classes.size() == 2);

  ConcreteCad trivial;
  auto bad = behaviour_partition(half, trivial);
  CHECK_FALSE(bad.constant());
  SamplePlan wide;
  wide.audit = 24;
  auto audited = behaviour_partition(half, trivial, wide);
  CHECK_FALSE(audited.constant());

  auto doc = parse_cadspec(kBallBase);
  auto ball = family_of({kPointlessBall});
  auto pb = behaviour_partition(ball, doc.cad("B"));
  CHECK(pb.constant());
  CHECK(pb.classes.size() == 4);
}

TEST_CASE("random 1-D families reduce to their minimum CAD") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coord(-6, 6), npieces(0, 3), nsets(1, 3), coin(0, 1), extra(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SaSet1D> sets;
    Family fam;
    int k = nsets(rng);
    for (int s = 0; s < k; ++s) {
      std::vector<Piece> raw;
      int m = npieces(rng);
      for (int p = 0; p < m; ++p) {
        int a = coord(rng), b = coord(rng);
        if (a > b) std::swap(a, b);
        if (a == b) raw.push_back(Piece::point(ExtVal(a)));
        else {
          Piece pc{ExtVal(a), ExtVal(b), coin(rng) == 1, coin(rng) == 1};
          if (coin(rng) && coin(rng)) pc.lo.reset(), pc.lo_closed = false;
          raw.push_back(pc);
        }
      }
      sets.push_back(normalize_1d(raw));
      fam.names.push_back("S" + std::to_string(s + 1));
      fam.sets.push_back(to_predicate(sets.back()));
    }
    auto [minc, mint] = minimum_cad_1d(sets);

    // Refine by extra rational sections, then reduce.
    ConcreteCad fine = minc;
    int e = extra(rng);
    for (int i = 0; i < e; ++i) fine.level1.push_back(ExtVal(Rat(coord(rng) * 2 + 1, 2)));
    std::sort(fine.level1.begin(), fine.level1.end(), [](const ExtVal& a, const ExtVal& b) { return compare(a, b) < 0; });
    fine.level1.erase(std::unique(fine.level1.begin(), fine.level1.end(),
                                  [](const ExtVal& a, const ExtVal& b) { return compare(a, b) == 0; }),
                      fine.level1.end());
    auto m = minimal(fine, fam);
    REQUIRE(m.cad.level1.size() == minc.level1.size());
    for (size_t i = 0; i < minc.level1.size(); ++i) CHECK(compare(m.cad.level1[i], minc.level1[i]) == 0);
    CHECK(m.tree == mint);
    CHECK(m.certified());
  }
}
