#include "mincad/cad/sampling.hpp"

#include <algorithm>
#include <set>

#include "mincad/errors.hpp"

namespace mincad {

std::vector<Rat> SamplePlan::offsets() const {
  std::vector<Rat> out;
  Rat h(1, 2);
  for (int m = 1; m <= m_max; ++m) {
    out.push_back(h);
    h /= 2;
  }
  return out;
}

namespace {

// Small rationals used as preferred coordinates, simplest first.
const std::vector<Rat>& nice_rationals() {
  static const std::vector<Rat> list = [] {
    std::set<Rat> s;
    for (int n = -4; n <= 4; ++n) s.insert(Rat(n));
    for (int d : {2, 4, 8})
      for (int n = -4 * d; n <= 4 * d; ++n) s.insert(Rat(n, d));
    for (int m = 2; m <= 7; ++m) {
      for (int n = 1; n < m; ++n) {
        long a = m * m - n * n, b = 2 * m * n, c = m * m + n * n;
        for (Rat v : {Rat(a, c), Rat(b, c), Rat(a, b), Rat(b, a)}) {
          v.canonicalize();
          if (abs(v) <= 4) {
            s.insert(v);
            s.insert(-v);
          }
        }
      }
    }
    std::vector<Rat> v(s.begin(), s.end());
    std::sort(v.begin(), v.end(), [](const Rat& x, const Rat& y) {
      int dc = cmp(x.get_den(), y.get_den());
      if (dc != 0) return dc < 0;
      int nc = cmp(abs(x.get_num()), abs(y.get_num()));
      if (nc != 0) return nc < 0;
      return x > y;
    });
    return v;
  }();
  return list;
}

Rat floor_rat(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rat(f);
}

Rat ceil_rat(const Rat& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rat(c);
}

bool strictly_increasing(const std::vector<ExtVal>& vals) {
  for (const auto& v : vals)
    if (v.is_indeterminate()) return false;
  for (size_t i = 1; i < vals.size(); ++i)
    if (compare(vals[i - 1], vals[i]) >= 0) return false;
  return true;
}

// Coordinates of the child cell j (1-based, odd or even) above a base whose
// section values are vals.
std::vector<Rat> child_coordinates(const std::vector<ExtVal>& vals, int j) {
  if (j % 2 == 0) {
    const ExtVal& v = vals[j / 2 - 1];
    if (v.is_rational()) return {v.rational()};
    return {};
  }
  int u = static_cast<int>(vals.size());
  std::optional<ExtVal> lo, hi;
  if (j > 1) lo = vals[(j - 1) / 2 - 1];
  if (j < 2 * u + 1) hi = vals[(j + 1) / 2 - 1];
  return coordinate_candidates(lo, hi);
}

}  // namespace

std::vector<Rat> coordinate_candidates(const std::optional<ExtVal>& lo, const std::optional<ExtVal>& hi) {
  std::vector<Rat> out;
  // Enclosures settle most comparisons without exact surd arithmetic.
  std::optional<RatInterval> lo_box, hi_box;
  if (lo && !lo->is_indeterminate()) lo_box = lo->enclose(64);
  if (hi && !hi->is_indeterminate()) hi_box = hi->enclose(64);
  auto above_lo = [&](const Rat& q) {
    if (!lo) return true;
    if (lo_box && q > lo_box->hi) return true;
    if (lo_box && q <= lo_box->lo) return false;
    return compare(*lo, ExtVal(q)) < 0;
  };
  auto below_hi = [&](const Rat& q) {
    if (!hi) return true;
    if (hi_box && q < hi_box->lo) return true;
    if (hi_box && q >= hi_box->hi) return false;
    return compare(ExtVal(q), *hi) < 0;
  };
  auto inside = [&](const Rat& q) { return above_lo(q) && below_hi(q); };
  auto push = [&](const Rat& q) {
    if (inside(q) && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  };
  if (!lo && !hi) {
    push(Rat(0));
  } else if (!lo) {
    Rat top = hi->is_rational() ? hi->rational() : floor_rat(hi->enclose(64).lo);
    push(top - 1);
    push(top - 2);
    push(top - Rat(1, 2));
  } else if (!hi) {
    Rat bot = lo->is_rational() ? lo->rational() : ceil_rat(lo->enclose(64).hi);
    push(bot + 1);
    push(bot + 2);
    push(bot + Rat(1, 2));
  } else if (lo->is_rational() && hi->is_rational()) {
    push((lo->rational() + hi->rational()) / 2);
  } else {
    push(rational_between(*lo, *hi));
  }
  for (const auto& q : nice_rationals()) push(q);
  if (lo && hi && lo->is_rational() && hi->is_rational()) {
    Rat a = lo->rational(), w = hi->rational() - lo->rational();
    for (int q = 1; q <= 3; ++q) push(a + w * Rat(q, 4));
  }
  return out;
}

Sampler::Sampler(const ConcreteCad& cad, SamplePlan plan) : cad_(cad), plan_(std::move(plan)) {}

const std::vector<Point>& Sampler::pool(const Index& I) {
  auto it = cache_.find(I);
  if (it != cache_.end()) return it->second;
  auto pts = build_pool(I);
  return cache_.emplace(I, std::move(pts)).first->second;
}

Point Sampler::sample(const Index& I) {
  const auto& p = pool(I);
  if (p.empty()) raise(ErrorKind::NoRationalWitness, "no rational sample found in cell " + to_string(I));
  return p.front();
}

std::vector<Point> Sampler::build_pool(const Index& I) {
  if (!cad_.valid_index(I) || I.empty()) raise(ErrorKind::InvalidCad, "not a cell: " + to_string(I));
  Index P = parent(I);
  std::vector<Point> bases;
  if (P.empty()) bases.push_back({});
  else bases = pool(P);

  std::vector<std::vector<Point>> per_base;
  for (const auto& b : bases) {
    auto vals = section_values(cad_, P, b);
    if (!strictly_increasing(vals)) continue;
    std::vector<Point> pts;
    for (const auto& q : child_coordinates(vals, I.back())) {
      Point p = b;
      p.push_back(q);
      pts.push_back(std::move(p));
    }
    if (!pts.empty()) per_base.push_back(std::move(pts));
  }

  std::vector<Point> out;
  std::set<Point> seen;
  size_t limit = static_cast<size_t>(plan_.pool_limit);
  for (size_t round = 0; out.size() < limit; ++round) {
    bool any = false;
    for (const auto& pts : per_base) {
      if (round < pts.size()) {
        any = true;
        if (seen.insert(pts[round]).second) out.push_back(pts[round]);
        if (out.size() >= limit) break;
      }
    }
    if (!any) break;
  }

  // Rational points on circles help sections through quadratic surds.
  if (level(I) == 2) {
    if (!grid_cells_) {
      grid_cells_.emplace();
      std::set<Point> placed;
      for (int m = 0; m <= 5; ++m)
        for (int k = 0; k <= m; ++k)
          for (int s = 1; s <= 4; ++s) {
            Rat x(m * m - k * k, s * s), y(2 * m * k, s * s);
            x.canonicalize();
            y.canonicalize();
            std::vector<Point> grid;
            for (int sx : {1, -1})
              for (int sy : {1, -1}) {
                grid.push_back({x * sx, y * sy});
                grid.push_back({y * sy, x * sx});
              }
            grid.push_back({x, Rat(0)});
            grid.push_back({-x, Rat(0)});
            for (const auto& p : grid) {
              if (!placed.insert(p).second) continue;
              if (auto loc = locate(cad_, p)) (*grid_cells_)[*loc].push_back(p);
            }
          }
    }
    auto it = grid_cells_->find(I);
    if (it != grid_cells_->end())
      for (const auto& p : it->second) {
        if (out.size() >= 2 * limit) break;
        if (seen.insert(p).second) out.push_back(p);
      }
  }
  return out;
}

std::optional<Index> locate(const ConcreteCad& cad, const Point& p) {
  if (p.empty() || static_cast<int>(p.size()) > cad.dim)
    raise(ErrorKind::ArityMismatch, "point " + to_string(p) + " has no cell in a CAD of R^" + std::to_string(cad.dim));
  Index I;
  Point base;
  for (size_t k = 0; k < p.size(); ++k) {
    auto vals = section_values(cad, I, base);
    if (!strictly_increasing(vals)) return std::nullopt;
    ExtVal x(p[k]);
    int j = 1;
    for (size_t s = 0; s < vals.size(); ++s) {
      int c = compare(vals[s], x);
      if (c < 0) j = 2 * static_cast<int>(s) + 3;
      else if (c == 0) {
        j = 2 * static_cast<int>(s) + 2;
        break;
      } else break;
    }
    I.push_back(j);
    base.push_back(p[k]);
  }
  return I;
}

Point cell_sample(const ConcreteCad& cad, const Index& I) {
  Sampler s(cad);
  return s.sample(I);
}

std::optional<Point> point_over(const ConcreteCad& cad, const Index& I, const Point& base) {
  auto vals = section_values(cad, parent(I), base);
  if (!strictly_increasing(vals)) return std::nullopt;
  auto qs = child_coordinates(vals, I.back());
  if (qs.empty()) return std::nullopt;
  Point p = base;
  p.push_back(qs.front());
  return p;
}

}  // namespace mincad
