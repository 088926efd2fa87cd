#include <doctest.h>

#include <random>

#include "mincad/algebra/expr.hpp"
#include "mincad/algebra/poly.hpp"
#include "mincad/errors.hpp"

using namespace mincad;

namespace {

Expr x(int i) { return Expr::var(i); }
Expr c(long n, long d = 1) { return Expr::constant(make_rat(n, d)); }

// -sign(y) * sqrt((x + sqrt(x^2 + y^2)) / 2)
Expr analytic_section() {
  Expr inner = Expr::sqrt(x(1) * x(1) + x(2) * x(2));
  return -(Expr::sign(x(2)) * Expr::sqrt((x(1) + inner) / c(2)));
}

}  // namespace

TEST_CASE("eval of the disk boundary") {
  Expr e = Expr::sqrt(c(1) - x(1) * x(1));
  CHECK(eval(e, {Rat(0)}) == ExtVal(1));
  ExtVal v = eval(e, {make_rat(1, 2)});
  REQUIRE(v.is_radical());
  CHECK(v.a() == 0);
  CHECK(v.b() == make_rat(1, 2));
  CHECK(v.c() == 3);
  CHECK_THROWS_AS(eval(e, {}), Error);
}

TEST_CASE("eval collapses nested radicals at Pythagorean points") {
  ExtVal v = eval(analytic_section(), {make_rat(3, 4), Rat(1)});
  REQUIRE(v.is_rational());
  CHECK(v.rational() == -1);
  // irrational inner radicand leaves the value undetermined
  CHECK(eval(analytic_section(), {Rat(1), Rat(1)}).is_indeterminate());
}

TEST_CASE("sign of quadratic surds") {
  CHECK(sign(ExtVal(0)) == 0);
  CHECK(sign(ExtVal::radical(3, -2, 2)) == 1);
  CHECK(sign(ExtVal::radical(-3, 2, 2)) == -1);
  CHECK_THROWS_AS(sign(ExtVal::indeterminate()), Error);
}

TEST_CASE("radical normalization extracts square factors") {
  ExtVal v = ExtVal::radical(1, 1, 12);
  REQUIRE(v.is_radical());
  CHECK(v.b() == 2);
  CHECK(v.c() == 3);
  CHECK(ExtVal::radical(1, 3, 49).is_rational());
  CHECK(ExtVal::radical(1, 3, 49).rational() == 22);
  ExtVal w = ExtVal::radical(0, 1, make_rat(1, 2));
  CHECK(w.b() == make_rat(1, 2));
  CHECK(w.c() == 2);
}

TEST_CASE("constant differences agree with rational comparison") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-20, 20), den(1, 9);
  for (int i = 0; i < 200; ++i) {
    Rat p = make_rat(d(rng), den(rng)), q = make_rat(d(rng), den(rng));
    int s = sign(eval(Expr::constant(p) - Expr::constant(q), {}));
    CHECK(s == (p > q) - (p < q));
  }
}

TEST_CASE("eval is compositional on random points") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-9, 9), den(1, 5);
  Expr a = Expr::sqrt(x(1) * x(1) + c(2));
  Expr b = x(2) * c(3) - Expr::sqrt(c(8));
  for (int i = 0; i < 200; ++i) {
    Point pt{make_rat(d(rng), den(rng)), make_rat(d(rng), den(rng))};
    ExtVal va = eval(a, pt), vb = eval(b, pt), vs = eval(a + b, pt);
    ExtVal sum = va + vb;
    if (va.is_indeterminate() || vb.is_indeterminate() || sum.is_indeterminate()) continue;
    CHECK(vs == sum);
  }
}

TEST_CASE("sign by squaring agrees with enclosure on random triples") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-12, 12), rad(0, 30);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    ExtVal v = ExtVal::radical(d(rng), d(rng), rad(rng));
    int s = sign(v);
    RatInterval box = v.enclose(64);
    if (box.lo > 0) CHECK(s == 1);
    else if (box.hi < 0) CHECK(s == -1);
    else CHECK(s == 0);
    CHECK(sign(v * v) == (s == 0 ? 0 : 1));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("compare handles distinct radicands") {
  ExtVal s2 = *ExtVal::sqrt_of(2), s3 = *ExtVal::sqrt_of(3);
  CHECK(compare(s2, s3) == -1);
  CHECK(compare(s3 - ExtVal(1), s2 - ExtVal(make_rat(1, 2))) == -1);  // 0.732 < 0.914
  CHECK(compare(ExtVal::radical(1, 1, 2), ExtVal::radical(1, 1, 2)) == 0);
}

TEST_CASE("ext_sqrt denests when possible") {
  // sqrt(3 + 2 sqrt 2) = 1 + sqrt 2
  auto r = ext_sqrt(ExtVal::radical(3, 2, 2));
  REQUIRE(r);
  CHECK(*r == ExtVal::radical(1, 1, 2));
  CHECK(ext_sqrt(ExtVal::radical(1, 1, 2))->is_indeterminate());
  CHECK(!ext_sqrt(ExtVal(-1)));
}

TEST_CASE("simplest rational between bounds") {
  CHECK(simplest_between(make_rat(1, 3), make_rat(1, 2)) == make_rat(2, 5));
  CHECK(simplest_between(Rat(-3), Rat(3)) == 0);
  Rat q = rational_between(*ExtVal::sqrt_of(2), ExtVal(make_rat(3, 2)));
  CHECK(compare(ExtVal(q), *ExtVal::sqrt_of(2)) == 1);
  CHECK(q < make_rat(3, 2));
}

TEST_CASE("root isolation") {
  auto roots = isolate_roots(UPoly({Rat(-2), Rat(0), Rat(1)}));
  REQUIRE(roots.size() == 2);
  REQUIRE(roots[0].exact);
  CHECK(*roots[0].exact == ExtVal::radical(0, -1, 2));
  CHECK(*roots[1].exact == ExtVal::radical(0, 1, 2));

  CHECK(isolate_roots(UPoly({Rat(1), Rat(0), Rat(1)})).empty());

  // 4z^4 - 3z^2 - 1 = (z^2 - 1)(4z^2 + 1)
  auto q = isolate_roots(UPoly({Rat(-1), Rat(0), Rat(-3), Rat(0), Rat(4)}));
  REQUIRE(q.size() == 2);
  CHECK(*q[0].exact == ExtVal(-1));
  CHECK(*q[1].exact == ExtVal(1));

  CHECK_THROWS_AS(isolate_roots(UPoly()), Error);
}

TEST_CASE("root isolation respects brackets and counts") {
  // (x-1)(x-2)(x-3)(x^2-5)
  UPoly p = UPoly({Rat(-1), Rat(1)}) * UPoly({Rat(-2), Rat(1)}) * UPoly({Rat(-3), Rat(1)}) *
            UPoly({Rat(-5), Rat(0), Rat(1)});
  auto all = isolate_roots(p);
  CHECK(all.size() == 5);
  CHECK(count_roots(p) == 5);
  Bracket b{Rat(1), Rat(2)};
  auto some = isolate_roots(p, b);
  CHECK(some.size() == 2);
  CHECK(count_roots(p, b) == 2);
  for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].hi <= all[i].lo);

  // a cubic with no exact roots still isolates and counts
  UPoly cubic({Rat(-2), Rat(-4), Rat(0), Rat(1)});  // x^3 - 4x - 2
  auto cr = isolate_roots(cubic);
  CHECK(cr.size() == 3);
  auto seq = sturm_sequence(cubic);
  CHECK(static_cast<int>(cr.size()) ==
        sign_variations_at_infinity(seq, false) - sign_variations_at_infinity(seq, true));
  for (auto& r : cr) CHECK(!r.exact);
}

TEST_CASE("piecewise guards are evaluated lazily") {
  Predicate pos = Predicate::atom(x(1), Rel::Gt, c(0));
  Expr e = Expr::piecewise({{pos, c(1) / x(1)}}, c(7));
  CHECK(eval(e, {Rat(0)}) == ExtVal(7));
  CHECK(eval(e, {Rat(2)}) == ExtVal(make_rat(1, 2)));
}

TEST_CASE("printer output") {
  CHECK(to_string(Expr::sqrt(c(1) - x(1) * x(1))) == "sqrt(1 - x1 * x1)");
  CHECK(to_string(c(-1, 2) * x(1)) == "-1/2 * x1");
}
