#include "mincad/algebra/extval.hpp"

#include <cmath>

#include "mincad/errors.hpp"

namespace mincad {

namespace {

constexpr unsigned long kTrialBound = 10000;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<bool> composite(kTrialBound + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= kTrialBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= kTrialBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

mpz_class floor_rat(const Rat& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil_rat(const Rat& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace

Rat make_rat(long num, long den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat parse_rat(const std::string& text) {
  Rat q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0) raise(ErrorKind::ParseError, "bad rational '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(); }

std::string to_string(const Point& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += p[i].get_str();
  }
  return s + ")";
}

ExtVal ExtVal::indeterminate() {
  ExtVal v;
  v.tag_ = Tag::Indeterminate;
  return v;
}

ExtVal ExtVal::radical(const Rat& a, const Rat& b, const Rat& c) {
  if (sgn(c) < 0) raise(ErrorKind::DomainError, "negative radicand " + c.get_str());
  if (sgn(b) == 0 || sgn(c) == 0) return ExtVal(a);
  // b*sqrt(n/d) = (b/d)*sqrt(n*d)
  mpz_class m = c.get_num() * c.get_den();
  Rat scale = b / Rat(c.get_den());
  mpz_class k = 1;
  for (unsigned long p : small_primes()) {
    mpz_class p2 = mpz_class(p) * p;
    if (p2 > m) break;
    while (mpz_divisible_p(m.get_mpz_t(), p2.get_mpz_t())) {
      m /= p2;
      k *= p;
    }
  }
  if (mpz_perfect_square_p(m.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
    k *= r;
    m = 1;
  }
  scale *= Rat(k);
  if (m == 1) return ExtVal(a + scale);
  ExtVal v;
  v.tag_ = Tag::Radical;
  v.a_ = a;
  v.b_ = scale;
  v.c_ = Rat(m);
  return v;
}

std::optional<ExtVal> ExtVal::sqrt_of(const Rat& q) {
  if (sgn(q) < 0) return std::nullopt;
  return radical(Rat(0), Rat(1), q);
}

const Rat& ExtVal::rational() const {
  if (!is_rational()) raise(ErrorKind::DomainError, "value " + str() + " is not rational");
  return a_;
}

bool ExtVal::identical(const ExtVal& o) const {
  if (tag_ != o.tag_) return false;
  if (tag_ == Tag::Indeterminate) return true;
  if (tag_ == Tag::Rational) return a_ == o.a_;
  return a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
}

std::string ExtVal::str() const {
  switch (tag_) {
    case Tag::Indeterminate: return "?";
    case Tag::Rational: return a_.get_str();
    case Tag::Radical: break;
  }
  std::string root = "sqrt(" + c_.get_str() + ")";
  Rat absb = abs(b_);
  std::string term = absb == 1 ? root : absb.get_str() + "*" + root;
  if (sgn(a_) == 0) return (sgn(b_) < 0 ? "-" : "") + term;
  return a_.get_str() + (sgn(b_) < 0 ? " - " : " + ") + term;
}

double ExtVal::to_double() const {
  switch (tag_) {
    case Tag::Indeterminate: return std::nan("");
    case Tag::Rational: return a_.get_d();
    case Tag::Radical: return a_.get_d() + b_.get_d() * std::sqrt(c_.get_d());
  }
  return 0;
}

RatInterval ExtVal::enclose(unsigned bits) const {
  if (is_indeterminate()) raise(ErrorKind::IndeterminateSign, "cannot enclose an indeterminate value");
  if (is_rational()) return {a_, a_};
  unsigned extra = static_cast<unsigned>(mpz_sizeinbase(b_.get_num_mpz_t(), 2)) + 2;
  RatInterval r = sqrt_enclosure(c_, bits + extra);
  Rat lo = a_ + b_ * r.lo, hi = a_ + b_ * r.hi;
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

ExtVal ExtVal::operator-() const {
  if (is_indeterminate()) return *this;
  if (is_rational()) return ExtVal(Rat(-a_));
  return radical(-a_, -b_, c_);
}

ExtVal operator+(const ExtVal& x, const ExtVal& y) {
  if (x.is_indeterminate() || y.is_indeterminate()) return ExtVal::indeterminate();
  if (x.is_rational() && y.is_rational()) return ExtVal(Rat(x.a() + y.a()));
  if (x.is_rational()) return ExtVal::radical(x.a() + y.a(), y.b(), y.c());
  if (y.is_rational()) return ExtVal::radical(x.a() + y.a(), x.b(), x.c());
  if (x.c() != y.c()) return ExtVal::indeterminate();
  return ExtVal::radical(x.a() + y.a(), x.b() + y.b(), x.c());
}

ExtVal operator-(const ExtVal& x, const ExtVal& y) { return x + (-y); }

ExtVal operator*(const ExtVal& x, const ExtVal& y) {
  if (x.is_indeterminate() || y.is_indeterminate()) return ExtVal::indeterminate();
  if (x.is_rational() && y.is_rational()) return ExtVal(Rat(x.a() * y.a()));
  if (x.is_rational()) return ExtVal::radical(x.a() * y.a(), x.a() * y.b(), y.c());
  if (y.is_rational()) return ExtVal::radical(x.a() * y.a(), x.b() * y.a(), x.c());
  if (x.c() == y.c()) {
    return ExtVal::radical(x.a() * y.a() + x.b() * y.b() * x.c(), x.a() * y.b() + x.b() * y.a(), x.c());
  }
  if (sgn(x.a()) == 0 && sgn(y.a()) == 0) return ExtVal::radical(Rat(0), x.b() * y.b(), x.c() * y.c());
  return ExtVal::indeterminate();
}

ExtVal operator/(const ExtVal& x, const ExtVal& y) {
  if (x.is_indeterminate() || y.is_indeterminate()) return ExtVal::indeterminate();
  if (y.is_rational()) {
    if (sgn(y.a()) == 0) return ExtVal::indeterminate();
    return x * ExtVal(Rat(1 / y.a()));
  }
  // multiply by the conjugate; the norm is nonzero because c is not a square
  Rat norm = y.a() * y.a() - y.b() * y.b() * y.c();
  ExtVal conj = ExtVal::radical(y.a(), -y.b(), y.c());
  return (x * conj) * ExtVal(Rat(1 / norm));
}

int sign(const ExtVal& v) {
  switch (v.tag()) {
    case ExtVal::Tag::Indeterminate: raise(ErrorKind::IndeterminateSign, "sign of an indeterminate value");
    case ExtVal::Tag::Rational: return sgn(v.a());
    case ExtVal::Tag::Radical: break;
  }
  int sa = sgn(v.a()), sb = sgn(v.b());
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Rat lhs = v.a() * v.a(), rhs = v.b() * v.b() * v.c();
  if (lhs > rhs) return sa;
  if (lhs < rhs) return sb;
  return 0;
}

int compare(const ExtVal& x, const ExtVal& y) {
  if (x.is_indeterminate() || y.is_indeterminate())
    raise(ErrorKind::IndeterminateSign, "comparison with an indeterminate value");
  ExtVal d = x - y;
  if (!d.is_indeterminate()) return sign(d);
  // both radical with distinct radicands: compare A = (a1-a2) + b1 sqrt(c1) with B = b2 sqrt(c2)
  ExtVal A = ExtVal::radical(x.a() - y.a(), x.b(), x.c());
  ExtVal B = ExtVal::radical(Rat(0), y.b(), y.c());
  int sA = sign(A), sB = sign(B);
  if (sA != sB) return sA > sB ? 1 : -1;
  if (sA == 0) return 0;
  int sq = sign(A * A - B * B);
  return sA > 0 ? sq : -sq;
}

bool operator==(const ExtVal& x, const ExtVal& y) {
  if (x.is_indeterminate() || y.is_indeterminate()) return false;
  return compare(x, y) == 0;
}

bool operator<(const ExtVal& x, const ExtVal& y) { return compare(x, y) < 0; }

bool is_perfect_square(const Rat& q) {
  if (sgn(q) < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

Rat rat_sqrt_exact(const Rat& q) {
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  Rat r(n, d);
  r.canonicalize();
  return r;
}

RatInterval sqrt_enclosure(const Rat& q, unsigned bits) {
  if (sgn(q) < 0) raise(ErrorKind::DomainError, "sqrt of negative " + q.get_str());
  if (is_perfect_square(q)) {
    Rat r = rat_sqrt_exact(q);
    return {r, r};
  }
  mpz_class nd = q.get_num() * q.get_den();
  mpz_class scaled = nd << (2 * bits);
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  mpz_class den = q.get_den() << bits;
  Rat lo(r, den), hi(r + 1, den);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

std::optional<ExtVal> ext_sqrt(const ExtVal& v) {
  if (v.is_indeterminate()) return ExtVal::indeterminate();
  if (v.is_rational()) return ExtVal::sqrt_of(v.a());
  if (sign(v) < 0) return std::nullopt;
  // look for x + y sqrt(c) with square a + b sqrt(c)
  Rat norm = v.a() * v.a() - v.b() * v.b() * v.c();
  if (is_perfect_square(norm)) {
    Rat s = rat_sqrt_exact(norm);
    for (const Rat& t : {Rat((v.a() + s) / 2), Rat((v.a() - s) / 2)}) {
      if (sgn(t) <= 0 || !is_perfect_square(t)) continue;
      Rat x = rat_sqrt_exact(t);
      Rat y = v.b() / (2 * x);
      ExtVal r = ExtVal::radical(x, y, v.c());
      if (sign(r) < 0) r = -r;
      if ((r * r).identical(v)) return r;
    }
  }
  return ExtVal::indeterminate();
}

Rat simplest_between(const Rat& lo, const Rat& hi) {
  if (!(lo < hi)) raise(ErrorKind::BadParameter, "empty interval (" + lo.get_str() + ", " + hi.get_str() + ")");
  if (sgn(lo) < 0 && sgn(hi) > 0) return Rat(0);
  if (sgn(hi) <= 0) return -simplest_between(-hi, -lo);
  Rat fl(floor_rat(lo));
  Rat next = fl + 1;
  if (next < hi) return next;
  if (lo == fl) {
    Rat t(floor_rat(Rat(1 / (hi - fl))) + 1);
    return fl + 1 / t;
  }
  Rat inner = simplest_between(Rat(1 / (hi - fl)), Rat(1 / (lo - fl)));
  return fl + 1 / inner;
}

Rat rational_between(const ExtVal& x, const ExtVal& y) {
  if (compare(x, y) >= 0) raise(ErrorKind::BadParameter, "rational_between needs x < y");
  for (unsigned bits = 8;; bits *= 2) {
    RatInterval ex = x.enclose(bits), ey = y.enclose(bits);
    if (ex.hi < ey.lo) return simplest_between(ex.hi, ey.lo);
  }
}

Rat rational_below(const ExtVal& x) {
  if (x.is_rational()) return x.a() - 1;
  return Rat(floor_rat(x.enclose(8).lo));
}

Rat rational_above(const ExtVal& x) {
  if (x.is_rational()) return x.a() + 1;
  return Rat(ceil_rat(x.enclose(8).hi));
}

}  // namespace mincad
