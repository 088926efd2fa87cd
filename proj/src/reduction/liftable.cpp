#include <algorithm>

#include "mincad/errors.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

namespace mincad {

const char* to_string(LiftStatus s) {
  switch (s) {
    case LiftStatus::Lifts: return "lifts";
    case LiftStatus::Fails: return "fails";
    case LiftStatus::Unknown: return "unknown";
  }
  return "?";
}

namespace {

struct SideCheck {
  enum Kind { Match, Mismatch, Divergent, Undecided } kind = Undecided;
  ExtVal side_value = ExtVal::indeterminate();
  ExtVal gap = ExtVal::indeterminate();
  std::string reason;
};

std::optional<ExtVal> exact_eval(const Expr& e, const Point& p) {
  try {
    ExtVal v = eval(e, p);
    if (v.is_indeterminate()) return std::nullopt;
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<RatInterval> interval_eval(const Expr& e, const Point& p, unsigned bits) {
  try {
    return eval_interval(e, p, bits);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Approximate value at p: exact when possible, else the midpoint of a tight enclosure.
std::optional<Rat> approx_eval(const Expr& e, const Point& p) {
  if (auto v = exact_eval(e, p)) {
    if (v->is_rational()) return v->rational();
    auto iv = v->enclose(64);
    return (iv.lo + iv.hi) / 2;
  }
  if (auto iv = interval_eval(e, p, 64)) return (iv->lo + iv->hi) / 2;
  return std::nullopt;
}

Rat approx(const ExtVal& v) {
  if (v.is_rational()) return v.rational();
  auto iv = v.enclose(64);
  return (iv.lo + iv.hi) / 2;
}

enum class Approach { Unavailable, Diverges, SettlesAway, Converges, Inconclusive };

struct ApproachResult {
  Approach kind = Approach::Unavailable;
  Rat last;  // last approach value
  Rat dist;  // its distance to the target
};

// Values of the side formula at w + dir * h e_axis for the plan offsets that
// fall inside side_cell, classified against the target value.
ApproachResult approach(const ConcreteCad& cad, const Expr& side, const Rat& target, const Point& w, int axis, int dir,
                        const Index& side_cell, const SamplePlan& plan) {
  ApproachResult out;
  std::vector<Rat> dists, vals;
  for (const Rat& h : plan.offsets()) {
    Point q = w;
    q[static_cast<size_t>(axis)] += dir * h;
    auto loc = locate(cad, q);
    if (!loc || *loc != side_cell) continue;
    auto v = approx_eval(side, q);
    if (!v) continue;
    vals.push_back(*v);
    dists.push_back(abs(*v - target));
  }
  if (dists.size() < 3) return out;
  size_t n = dists.size();
  out.last = vals[n - 1];
  out.dist = dists[n - 1];
  bool increasing = dists[n - 3] < dists[n - 2] && dists[n - 2] < dists[n - 1];
  Rat big = Rat(1024) * (1 + abs(target));
  Rat small(1, 1024);
  bool stable = abs(vals[n - 1] - vals[n - 2]) < small && abs(vals[n - 2] - vals[n - 3]) < small;
  if (increasing && abs(vals[n - 1]) > big) out.kind = Approach::Diverges;
  else if (dists[n - 1] < small) out.kind = Approach::Converges;
  else if (stable) out.kind = Approach::SettlesAway;
  else out.kind = Approach::Inconclusive;
  return out;
}

// Compares the closure of a side section at w with the value over the pivot.
// dir is -1 for the lower neighbour and +1 for the upper one; axis is the
// 0-based coordinate of the pivot level. Approach values inside the side cell
// take precedence over the formula's own value at w, which need not be its
// limit (a sign factor, say).
SideCheck compare_side(const ConcreteCad& cad, const Expr& side, const Expr& mid, const Point& w, int axis, int dir,
                       const Index& side_cell, const SamplePlan& plan) {
  SideCheck out;
  auto mv = exact_eval(mid, w);
  auto sv = exact_eval(side, w);
  std::optional<Rat> target;
  if (mv) target = approx(*mv);
  else if (auto iv = interval_eval(mid, w, 64)) target = (iv->lo + iv->hi) / 2;
  ApproachResult ap;
  if (target) ap = approach(cad, side, *target, w, axis, dir, side_cell, plan);

  if (ap.kind == Approach::Diverges) {
    out.kind = SideCheck::Divergent;
    out.reason = "approach values diverge (last " + ap.last.get_str() + ")";
    return out;
  }
  if (ap.kind == Approach::SettlesAway) {
    out.kind = SideCheck::Mismatch;
    if (sv && mv && sign(*sv - *mv) != 0) {
      out.side_value = *sv;
      ExtVal d = *sv - *mv;
      out.gap = sign(d) < 0 ? -d : d;
    } else {
      out.side_value = ExtVal(ap.last);
      out.gap = ExtVal(ap.dist);
    }
    out.reason = "approach values settle away from the section value";
    return out;
  }

  if (mv && sv) {
    out.side_value = *sv;
    ExtVal d = *sv - *mv;
    int s = sign(d);
    if (s == 0) {
      out.kind = SideCheck::Match;
      return out;
    }
    if (ap.kind == Approach::Converges) {
      out.reason = "formula value at the point differs from its approach limit";
      return out;
    }
    out.kind = SideCheck::Mismatch;
    out.gap = s < 0 ? -d : d;
    return out;
  }

  // Rigorous separation by interval arithmetic.
  if (ap.kind != Approach::Converges) {
    for (unsigned bits = 32; bits <= plan.max_bits; bits *= 2) {
      auto si = interval_eval(side, w, bits);
      std::optional<RatInterval> mi = mv ? std::optional<RatInterval>(mv->enclose(bits)) : interval_eval(mid, w, bits);
      if (!si || !mi) break;
      if (si->hi < mi->lo || mi->hi < si->lo) {
        out.kind = SideCheck::Mismatch;
        out.reason = "interval enclosures separate at " + std::to_string(bits) + " bits";
        return out;
      }
    }
  }

  if (!mv) out.reason = "section value over the pivot is undecidable";
  else if (ap.kind == Approach::Converges) out.reason = "closure undecidable, approach values converge to the section value";
  else if (ap.kind == Approach::Unavailable) out.reason = "closure undecidable and too few approach points";
  else out.reason = "closure undecidable, approach inconclusive";
  return out;
}

// Relative paths R such that A:R is a cylinder base (level < dim).
void collect_paths(const ConcreteCad& cad, const Index& A, Index rel, std::vector<Index>& out) {
  Index cell = A;
  cell.insert(cell.end(), rel.begin(), rel.end());
  if (level(cell) >= cad.dim) return;
  out.push_back(rel);
  for (int j = 1; j <= cad.child_count(cell); ++j) collect_paths(cad, A, child(rel, j), out);
}

Index join(Index a, const Index& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Rat binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rat(r);
}

// One-sided d-th divided difference along the axis, anchored at the closure
// value; forward differences above, backward below. Both estimate f^(d).
std::optional<Rat> one_sided_difference(const ConcreteCad& cad, const Expr& side, const Rat& anchor, const Point& w,
                                        int axis, int dir, int d, const Rat& h, const Index& side_cell) {
  auto coeff = [&](int i) {
    int sgn_exp = dir > 0 ? d - i : i;
    return binom(d, i) * (sgn_exp % 2 == 0 ? 1 : -1);
  };
  Rat acc = coeff(0) * anchor;
  for (int i = 1; i <= d; ++i) {
    Point q = w;
    q[axis] += dir * i * h;
    auto loc = locate(cad, q);
    if (!loc || *loc != side_cell) return std::nullopt;
    auto v = approx_eval(side, q);
    if (!v) return std::nullopt;
    acc += coeff(i) * *v;
  }
  for (int i = 0; i < d; ++i) acc /= h;
  return acc;
}

}  // namespace

LiftResult liftable(const ConcreteCad& cad, const Index& A, const SamplePlan& plan) {
  LiftResult res;
  if (!is_section(A) || !cad.valid_index(A))
    raise(ErrorKind::NotReducible, to_string(A) + " is not a section cell of the CAD");
  int k = level(A);
  if (k == cad.dim) {
    res.status = LiftStatus::Lifts;
    res.reason = "top-level pivot has no cylinders above it";
    return res;
  }
  Index lo = A, hi = A;
  lo.back() -= 1;
  hi.back() += 1;
  if (!cad.valid_index(hi)) raise(ErrorKind::NotReducible, to_string(A) + " has no upper neighbour");

  std::vector<Index> paths;
  collect_paths(cad, A, {}, paths);
  Sampler sampler(cad, plan);
  std::vector<std::string> undecided;
  bool identical = true;

  for (const auto& rel : paths) {
    Index L = join(lo, rel), M = join(A, rel), U = join(hi, rel);
    if (!cad.valid_index(L) || !cad.valid_index(U) || cad.u(L) != cad.u(M) || cad.u(U) != cad.u(M)) {
      res.status = LiftStatus::Fails;
      res.reason = "cylinder shapes differ above " + to_string(M);
      return res;
    }
    const auto& le = cad.cylinder(L);
    const auto& me = cad.cylinder(M);
    const auto& ue = cad.cylinder(U);
    for (size_t s = 0; s < me.size(); ++s)
      if (!same_expr(le[s], me[s]) || !same_expr(me[s], ue[s])) identical = false;
    const auto& pool = sampler.pool(M);
    if (pool.empty() && !me.empty())
      raise(ErrorKind::PlanExhausted, "no rational witness in " + to_string(M) + " for pivot " + to_string(A));
    for (const auto& w : pool) {
      for (size_t s = 0; s < me.size(); ++s) {
        for (int dir : {-1, 1}) {
          const Index& side_cell = dir < 0 ? L : U;
          const Expr& side = dir < 0 ? le[s] : ue[s];
          auto chk = compare_side(cad, side, me[s], w, k - 1, dir, side_cell, plan);
          if (chk.kind == SideCheck::Match) continue;
          if (chk.kind == SideCheck::Undecided) {
            undecided.push_back(chk.reason + " at " + to_string(w));
            continue;
          }
          LiftWitness wit;
          wit.point = w;
          wit.level = level(M) + 1;
          wit.side_cell = child(side_cell, static_cast<int>(2 * (s + 1)));
          wit.section = static_cast<int>(s + 1);
          wit.side_value = chk.side_value;
          auto mv = exact_eval(me[s], w);
          wit.section_value = mv ? *mv : ExtVal::indeterminate();
          wit.gap = chk.gap;
          wit.divergent = chk.kind == SideCheck::Divergent;
          res.status = LiftStatus::Fails;
          res.witness = wit;
          res.reason = wit.divergent ? chk.reason
                                     : "section " + std::to_string(s + 1) + " over " + to_string(side_cell) +
                                           " does not meet the section over " + to_string(M) +
                                           (chk.reason.empty() ? "" : " (" + chk.reason + ")");
          return res;
        }
      }
    }
  }

  if (!undecided.empty()) {
    res.status = LiftStatus::Unknown;
    res.reason = undecided.front();
    return res;
  }

  switch (cad.cls.kind) {
    case RegClass::Kind::Infinity:
    case RegClass::Kind::Omega:
      if (identical) {
        res.status = LiftStatus::Lifts;
        res.reason = "continuous gluing with identical formulas";
      } else {
        res.status = LiftStatus::Unknown;
        res.reason = "continuous gluing but smoothness of distinct formulas is not decided";
      }
      return res;
    case RegClass::Kind::Finite:
      break;
  }
  if (cad.cls.r == 0) {
    res.status = LiftStatus::Lifts;
    res.reason = "continuous gluing at every witness";
    return res;
  }
  if (identical) {
    res.status = LiftStatus::Lifts;
    res.reason = "identical formulas on the three cells";
    return res;
  }

  // Finite r >= 1 with distinct formulas: compare one-sided divided differences.
  int dmax = std::min(cad.cls.r, plan.d_max);
  Rat h1 = Rat(1) / Rat(mpz_class(1) << std::min(8, plan.m_max));
  Rat h2 = Rat(1) / Rat(mpz_class(1) << std::min(16, plan.m_max));
  for (const auto& rel : paths) {
    Index L = join(lo, rel), M = join(A, rel), U = join(hi, rel);
    const auto& le = cad.cylinder(L);
    const auto& me = cad.cylinder(M);
    const auto& ue = cad.cylinder(U);
    const auto& pool = sampler.pool(M);
    for (const auto& w : pool) {
      for (size_t s = 0; s < me.size(); ++s) {
        auto mv = exact_eval(me[s], w);
        if (!mv) continue;
        Rat anchor = approx(*mv);
        for (int d = 1; d <= dmax; ++d) {
          auto l1 = one_sided_difference(cad, le[s], anchor, w, k - 1, -1, d, h1, L);
          auto u1 = one_sided_difference(cad, ue[s], anchor, w, k - 1, 1, d, h1, U);
          auto l2 = one_sided_difference(cad, le[s], anchor, w, k - 1, -1, d, h2, L);
          auto u2 = one_sided_difference(cad, ue[s], anchor, w, k - 1, 1, d, h2, U);
          if (!l1 || !u1 || !l2 || !u2) continue;
          Rat g1 = abs(*l1 - *u1), g2 = abs(*l2 - *u2);
          if (g2 > Rat(1, 64) && g2 * 4 > g1) {
            LiftWitness wit;
            wit.point = w;
            wit.level = level(M) + 1;
            wit.side_cell = child(U, static_cast<int>(2 * (s + 1)));
            wit.section = static_cast<int>(s + 1);
            wit.side_value = ExtVal(*u2);
            wit.section_value = ExtVal(*l2);
            wit.gap = ExtVal(g2);
            res.status = LiftStatus::Fails;
            res.witness = wit;
            res.reason = "one-sided divided differences of order " + std::to_string(d) + " disagree";
            return res;
          }
        }
      }
    }
  }
  res.status = LiftStatus::Unknown;
  res.reason = "continuous gluing; divided differences agree within sampling but C^" + std::to_string(cad.cls.r) +
               " is not proved";
  return res;
}

LiftResult glue_check(const ConcreteCad& cad, const std::optional<GlueSide>& lower, const Expr& mid,
                      const std::optional<GlueSide>& upper, const Point& w, int axis, const SamplePlan& plan) {
  LiftResult res;
  bool identical = true;
  for (int dir : {-1, 1}) {
    const auto& side = dir < 0 ? lower : upper;
    if (!side) continue;
    if (!same_expr(side->formula, mid)) identical = false;
    auto chk = compare_side(cad, side->formula, mid, w, axis, dir, side->cell, plan);
    if (chk.kind == SideCheck::Match) continue;
    if (chk.kind == SideCheck::Undecided) {
      res.status = LiftStatus::Unknown;
      res.reason = chk.reason + " at " + to_string(w);
      return res;
    }
    LiftWitness wit;
    wit.point = w;
    wit.level = level(side->cell) + 1;
    wit.side_cell = side->cell;
    wit.side_value = chk.side_value;
    auto mv = exact_eval(mid, w);
    wit.section_value = mv ? *mv : ExtVal::indeterminate();
    wit.gap = chk.gap;
    wit.divergent = chk.kind == SideCheck::Divergent;
    res.status = LiftStatus::Fails;
    res.witness = wit;
    res.reason = wit.divergent ? chk.reason : "formula over " + to_string(side->cell) + " does not meet the middle value";
    return res;
  }
  res.status = LiftStatus::Lifts;
  if (identical || (cad.cls.kind == RegClass::Kind::Finite && cad.cls.r == 0)) {
    res.reason = identical ? "identical formulas" : "continuous gluing";
    return res;
  }
  if (cad.cls.kind != RegClass::Kind::Finite) {
    res.status = LiftStatus::Unknown;
    res.reason = "continuous gluing but smoothness of distinct formulas is not decided";
    return res;
  }
  if (!lower || !upper) {
    res.reason = "continuous one-sided gluing";
    return res;
  }
  auto mv = exact_eval(mid, w);
  if (!mv) {
    res.status = LiftStatus::Unknown;
    res.reason = "middle value undecidable";
    return res;
  }
  Rat anchor = approx(*mv);
  Rat h1 = Rat(1) / Rat(mpz_class(1) << std::min(8, plan.m_max));
  Rat h2 = Rat(1) / Rat(mpz_class(1) << std::min(16, plan.m_max));
  for (int d = 1; d <= std::min(cad.cls.r, plan.d_max); ++d) {
    auto l1 = one_sided_difference(cad, lower->formula, anchor, w, axis, -1, d, h1, lower->cell);
    auto u1 = one_sided_difference(cad, upper->formula, anchor, w, axis, 1, d, h1, upper->cell);
    auto l2 = one_sided_difference(cad, lower->formula, anchor, w, axis, -1, d, h2, lower->cell);
    auto u2 = one_sided_difference(cad, upper->formula, anchor, w, axis, 1, d, h2, upper->cell);
    if (!l1 || !u1 || !l2 || !u2) continue;
    Rat g1 = abs(*l1 - *u1), g2 = abs(*l2 - *u2);
    if (g2 > Rat(1, 64) && g2 * 4 > g1) {
      res.status = LiftStatus::Fails;
      res.reason = "one-sided divided differences of order " + std::to_string(d) + " disagree";
      return res;
    }
  }
  res.status = LiftStatus::Unknown;
  res.reason = "divided differences agree within sampling but C^" + std::to_string(cad.cls.r) + " is not proved";
  return res;
}

PivotCheck check_pivot(const ConcreteCad& cad, const CadTree& tree, const Index& A, const SamplePlan& plan) {
  PivotCheck pc;
  pc.pivot = A;
  pc.tree_ok = reduction_applies(tree, A);
  if (pc.tree_ok) {
    try {
      pc.lift = liftable(cad, A, plan);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PlanExhausted) throw;
      pc.lift.status = LiftStatus::Unknown;
      pc.lift.reason = e.what();
    }
  } else {
    pc.lift.status = LiftStatus::Fails;
    pc.lift.reason = "neighbouring subtrees differ";
  }
  return pc;
}

}  // namespace mincad
