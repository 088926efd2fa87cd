#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace mincad {

// Arbitrary-precision rational, always in lowest terms with a positive denominator.
using Rat = mpq_class;
using Point = std::vector<Rat>;

Rat make_rat(long num, long den = 1);
Rat parse_rat(const std::string& text);  // "3", "-1/2"
std::string to_string(const Rat& q);
std::string to_string(const Point& p);  // "(1, 0)"

// Closed rational interval [lo, hi].
struct RatInterval {
  Rat lo;
  Rat hi;
  bool contains(const Rat& q) const { return lo <= q && q <= hi; }
  Rat width() const { return hi - lo; }
};

// Exact value in Q or Q(sqrt c): a + b*sqrt(c), or Indeterminate.
class ExtVal {
 public:
  enum class Tag { Rational, Radical, Indeterminate };

  ExtVal() : tag_(Tag::Rational), a_(0) {}
  ExtVal(const Rat& q) : tag_(Tag::Rational), a_(q) {}  // NOLINT implicit
  ExtVal(long v) : tag_(Tag::Rational), a_(v) {}        // NOLINT implicit

  // Normalizes: c square-free up to trial division, rational when b = 0 or c is a square.
  static ExtVal radical(const Rat& a, const Rat& b, const Rat& c);
  static ExtVal indeterminate();
  // sqrt of a nonnegative rational; nullopt when q < 0.
  static std::optional<ExtVal> sqrt_of(const Rat& q);

  Tag tag() const { return tag_; }
  bool is_rational() const { return tag_ == Tag::Rational; }
  bool is_radical() const { return tag_ == Tag::Radical; }
  bool is_indeterminate() const { return tag_ == Tag::Indeterminate; }
  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  const Rat& c() const { return c_; }
  const Rat& rational() const;  // requires is_rational()

  // Structural identity of normalized representations.
  bool identical(const ExtVal& o) const;
  std::string str() const;
  double to_double() const;
  // Rigorous enclosure; width at most 2^-bits for radicals.
  RatInterval enclose(unsigned bits) const;

  friend ExtVal operator+(const ExtVal& x, const ExtVal& y);
  friend ExtVal operator-(const ExtVal& x, const ExtVal& y);
  friend ExtVal operator*(const ExtVal& x, const ExtVal& y);
  friend ExtVal operator/(const ExtVal& x, const ExtVal& y);  // Indeterminate on division by zero
  ExtVal operator-() const;

 private:
  Tag tag_;
  Rat a_, b_, c_;
};

// Exact sign; raises IndeterminateSign for Indeterminate.
int sign(const ExtVal& v);
// Exact order of two determinate values (-1, 0, +1); handles distinct radicands.
int compare(const ExtVal& x, const ExtVal& y);
bool operator==(const ExtVal& x, const ExtVal& y);  // value equality; false if either is Indeterminate
bool operator<(const ExtVal& x, const ExtVal& y);

// sqrt of an ExtVal: rational square roots, denesting inside Q(sqrt c) when possible,
// Indeterminate otherwise; nullopt when the value is negative.
std::optional<ExtVal> ext_sqrt(const ExtVal& v);

// Integer square root helpers.
bool is_perfect_square(const Rat& q);
Rat rat_sqrt_exact(const Rat& q);  // requires is_perfect_square(q)
// Rigorous enclosure of sqrt(q), q >= 0, of width <= 2^-bits.
RatInterval sqrt_enclosure(const Rat& q, unsigned bits);

// Rational strictly between x and y (x < y); prefers the simplest fraction.
Rat rational_between(const ExtVal& x, const ExtVal& y);
// Simplest rational (smallest denominator) in the open interval (lo, hi), lo < hi.
Rat simplest_between(const Rat& lo, const Rat& hi);
Rat rational_below(const ExtVal& x);  // some rational < x, close to it
Rat rational_above(const ExtVal& x);

}  // namespace mincad
