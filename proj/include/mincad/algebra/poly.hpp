#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mincad/algebra/extval.hpp"

namespace mincad {

// Dense univariate polynomial over Q, coefficients from low to high degree.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rat> coeffs);
  static UPoly constant(const Rat& c) { return UPoly({c}); }
  static UPoly x() { return UPoly({Rat(0), Rat(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(int i) const { return i <= degree() ? c_[i] : Rat(0); }
  const Rat& leading() const { return c_.back(); }

  Rat eval(const Rat& x) const;
  ExtVal eval(const ExtVal& x) const;
  UPoly derivative() const;
  UPoly monic() const;
  std::string str(const std::string& var = "x") const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  // Euclidean division; raises ZeroPolynomial for b = 0.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);

 private:
  void trim();
  std::vector<Rat> c_;
};

UPoly gcd(UPoly a, UPoly b);
UPoly square_free_part(const UPoly& p);

// Closed bracket; a missing endpoint is infinite.
struct Bracket {
  std::optional<Rat> lo;
  std::optional<Rat> hi;
};

std::vector<UPoly> sturm_sequence(const UPoly& p);
// Sign variations of the sequence at x (nullopt lo/hi handled by the infinite overload).
int sign_variations(const std::vector<UPoly>& seq, const Rat& x);
int sign_variations_at_infinity(const std::vector<UPoly>& seq, bool positive);
// Number of distinct real roots in the bracket.
int count_roots(const UPoly& p, const Bracket& b = {});

// Isolating interval lo < root <= hi, or lo = hi = root for rational roots.
struct RootInfo {
  Rat lo;
  Rat hi;
  std::optional<ExtVal> exact;
};

// Distinct real roots in the bracket, increasing. Roots of rational, quadratic and
// biquadratic factors are returned exactly.
std::vector<RootInfo> isolate_roots(const UPoly& p, const Bracket& b = {});

}  // namespace mincad
