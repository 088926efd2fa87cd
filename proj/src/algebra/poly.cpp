#include "mincad/algebra/poly.hpp"

#include <algorithm>

#include "mincad/errors.hpp"

namespace mincad {

UPoly::UPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rat UPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

ExtVal UPoly::eval(const ExtVal& x) const {
  ExtVal r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + ExtVal(*it);
  return r;
}

UPoly UPoly::derivative() const {
  std::vector<Rat> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  std::vector<Rat> d = c_;
  Rat lc = leading();
  for (auto& c : d) c /= lc;
  return UPoly(std::move(d));
}

std::string UPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const Rat& c = c_[i];
    if (c == 0) continue;
    Rat a = abs(c);
    if (out.empty()) out += c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    bool show = a != 1 || i == 0;
    if (show) out += a.get_str();
    if (i > 0) {
      if (show) out += "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(c));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) raise(ErrorKind::ZeroPolynomial, "division by the zero polynomial");
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rat> q(a.degree() - b.degree() + 1), r = a.c_;
  for (int i = a.degree(); i >= b.degree(); --i) {
    Rat f = r[i] / b.leading();
    q[i - b.degree()] = f;
    if (f == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) r[i - b.degree() + j] -= f * b.c_[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = UPoly::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UPoly square_free_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  UPoly g = gcd(p, p.derivative());
  return UPoly::divmod(p, g).first.monic();
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    UPoly r = UPoly::divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(UPoly() - r);
  }
  if (seq.back().is_zero()) seq.pop_back();
  return seq;
}

namespace {

int count_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int sign_variations(const std::vector<UPoly>& seq, const Rat& x) {
  std::vector<int> signs;
  for (const auto& q : seq) signs.push_back(sgn(q.eval(x)));
  return count_changes(signs);
}

int sign_variations_at_infinity(const std::vector<UPoly>& seq, bool positive) {
  std::vector<int> signs;
  for (const auto& q : seq) {
    int s = sgn(q.leading());
    if (!positive && q.degree() % 2 == 1) s = -s;
    signs.push_back(s);
  }
  return count_changes(signs);
}

namespace {

Rat cauchy_bound(const UPoly& p) {
  Rat m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rat(abs(p.coeff(i) / p.leading())));
  return m + 1;
}

// count of roots of square-free q in (a, b]
int count_half_open(const std::vector<UPoly>& seq, const Rat& a, const Rat& b) {
  return sign_variations(seq, a) - sign_variations(seq, b);
}

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> primes;
  std::vector<int> mult;
  for (mpz_class d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int m = 0;
    while (n % d == 0) {
      n /= d;
      ++m;
    }
    primes.push_back(d);
    mult.push_back(m);
  }
  if (n > 1) {
    primes.push_back(n);
    mult.push_back(1);
  }
  std::vector<mpz_class> out{1};
  for (size_t i = 0; i < primes.size(); ++i) {
    size_t count = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= mult[i]; ++k) {
      pk *= primes[i];
      for (size_t j = 0; j < count; ++j) out.push_back(out[j] * pk);
    }
  }
  return out;
}

// Rational roots by the rational root test; skipped for very large coefficients.
std::vector<Rat> rational_roots(const UPoly& p) {
  std::vector<Rat> roots;
  UPoly q = p;
  if (q.coeff(0) == 0) {
    roots.push_back(Rat(0));
    while (!q.is_zero() && q.coeff(0) == 0) q = UPoly::divmod(q, UPoly::x()).first;
  }
  if (q.degree() < 1) return roots;
  mpz_class lcm = 1;
  for (const auto& c : q.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  mpz_class a0 = q.coeff(0).get_num() * (lcm / q.coeff(0).get_den());
  mpz_class an = q.leading().get_num() * (lcm / q.leading().get_den());
  const mpz_class cap("1000000000000");
  if (abs(a0) > cap || abs(an) > cap) return roots;
  for (const auto& num : divisors(a0))
    for (const auto& den : divisors(an))
      for (int s : {1, -1}) {
        Rat cand(num * s, den);
        cand.canonicalize();
        if (q.eval(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
      }
  return roots;
}

std::vector<ExtVal> quadratic_roots(const Rat& a, const Rat& b, const Rat& c) {
  Rat disc = b * b - 4 * a * c;
  if (disc < 0) return {};
  if (disc == 0) return {ExtVal(Rat(-b / (2 * a)))};
  Rat base = -b / (2 * a), scale = 1 / (2 * a);
  ExtVal r1 = ExtVal::radical(base, -scale, disc), r2 = ExtVal::radical(base, scale, disc);
  if (compare(r1, r2) > 0) std::swap(r1, r2);
  return {r1, r2};
}

// Exact roots of the square-free q when every factor is solvable in Q(sqrt c); else nullopt.
std::optional<std::vector<ExtVal>> exact_roots(const UPoly& q) {
  std::vector<ExtVal> out;
  UPoly rest = q;
  for (const Rat& r : rational_roots(q)) {
    out.emplace_back(r);
    rest = UPoly::divmod(rest, UPoly({Rat(-r), Rat(1)})).first;
  }
  if (rest.degree() <= 0) return out;
  if (rest.degree() == 1) {
    out.emplace_back(Rat(-rest.coeff(0) / rest.coeff(1)));
    return out;
  }
  if (rest.degree() == 2) {
    for (auto& v : quadratic_roots(rest.coeff(2), rest.coeff(1), rest.coeff(0))) out.push_back(v);
    return out;
  }
  if (rest.degree() == 4 && rest.coeff(1) == 0 && rest.coeff(3) == 0) {
    for (const auto& w : quadratic_roots(rest.coeff(4), rest.coeff(2), rest.coeff(0))) {
      if (sign(w) < 0) continue;
      auto z = ext_sqrt(w);
      if (!z || z->is_indeterminate()) return std::nullopt;
      if (sign(*z) == 0) {
        out.push_back(*z);
      } else {
        out.push_back(*z);
        out.push_back(-*z);
      }
    }
    return out;
  }
  return std::nullopt;
}

void bisect(const std::vector<UPoly>& seq, const Rat& a, const Rat& b, int count, std::vector<RootInfo>& out) {
  if (count == 0) return;
  if (count == 1) {
    out.push_back({a, b, std::nullopt});
    return;
  }
  Rat m = (a + b) / 2;
  int left = count_half_open(seq, a, m);
  bisect(seq, a, m, left, out);
  bisect(seq, m, b, count - left, out);
}

}  // namespace

int count_roots(const UPoly& p, const Bracket& br) {
  if (p.is_zero()) raise(ErrorKind::ZeroPolynomial, "count_roots of the zero polynomial");
  UPoly q = square_free_part(p);
  if (q.degree() <= 0) return 0;
  auto seq = sturm_sequence(q);
  int lo = br.lo ? sign_variations(seq, *br.lo) : sign_variations_at_infinity(seq, false);
  int hi = br.hi ? sign_variations(seq, *br.hi) : sign_variations_at_infinity(seq, true);
  int n = lo - hi;
  if (br.lo && q.eval(*br.lo) == 0) ++n;
  return n;
}

std::vector<RootInfo> isolate_roots(const UPoly& p, const Bracket& br) {
  if (p.is_zero()) raise(ErrorKind::ZeroPolynomial, "isolate_roots of the zero polynomial");
  UPoly q = square_free_part(p);
  if (q.degree() <= 0) return {};
  auto seq = sturm_sequence(q);
  Rat bound = cauchy_bound(q);
  Rat lo = br.lo ? *br.lo : Rat(-bound);
  Rat hi = br.hi ? *br.hi : bound;
  std::vector<RootInfo> out;
  if (lo > hi) return out;
  if (q.eval(lo) == 0) out.push_back({lo, lo, ExtVal(lo)});
  if (lo < hi) bisect(seq, lo, hi, count_half_open(seq, lo, hi), out);
  for (auto& r : out) {
    if (!r.exact && q.eval(r.hi) == 0) {
      r.lo = r.hi;
      r.exact = ExtVal(r.hi);
    }
  }
  if (auto exact = exact_roots(q)) {
    for (const auto& v : *exact) {
      for (auto& r : out) {
        if (r.exact) continue;
        if (compare(v, ExtVal(r.lo)) > 0 && compare(v, ExtVal(r.hi)) <= 0) {
          r.exact = v;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace mincad
