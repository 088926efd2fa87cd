#include <algorithm>
#include <functional>

#include "mincad/algebra/poly.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"

namespace mincad {

std::pair<ConcreteCad, CadTree> minimum_cad_1d(const std::vector<SaSet1D>& fam) {
  std::vector<ExtVal> secs;
  for (const auto& s : fam)
    for (const auto& v : boundary(s)) secs.push_back(v);
  std::sort(secs.begin(), secs.end(), [](const ExtVal& a, const ExtVal& b) { return compare(a, b) < 0; });
  secs.erase(std::unique(secs.begin(), secs.end(), [](const ExtVal& a, const ExtVal& b) { return compare(a, b) == 0; }),
             secs.end());

  ConcreteCad cad;
  cad.dim = 1;
  cad.level1 = secs;
  CadTree tree(1, static_cast<int>(fam.size()));
  int cells = 2 * static_cast<int>(secs.size()) + 1;
  for (int j = 1; j <= cells; ++j) {
    ExtVal y;
    if (j % 2 == 0) {
      y = secs[static_cast<size_t>(j / 2 - 1)];
    } else {
      std::optional<ExtVal> lo, hi;
      if (j > 1) lo = secs[static_cast<size_t>((j - 1) / 2 - 1)];
      if (j < cells) hi = secs[static_cast<size_t>((j + 1) / 2 - 1)];
      y = ExtVal(coordinate_candidates(lo, hi).front());
    }
    CadTree::Node leaf;
    for (const auto& s : fam) leaf.label.push_back(s.contains(y) ? 1 : 0);
    tree.root().children.push_back(std::move(leaf));
  }
  return {cad, tree};
}

int fiber_sign(int sa, int sb, int sd) {
  if (sb == 0) return sa;
  if (sa == 0) return sd == 0 ? 0 : sb;
  if (sa == sb) return sa;
  return sa * sd;
}

namespace {

// a + b*sqrt(q) with univariate polynomial parts; q absent means b = 0.
struct Lin {
  UPoly a, b;
  std::optional<UPoly> q;
};

struct Undefined {};

[[noreturn]] void non_poly(const std::string& what) { raise(ErrorKind::NonPolynomialFiber, what); }

std::optional<UPoly> merge_radicand(const Lin& x, const Lin& y) {
  if (x.q && y.q && !(*x.q == *y.q)) non_poly("atoms with two different radicands");
  return x.q ? x.q : y.q;
}

bool constant(const UPoly& p) { return p.degree() <= 0; }

Rat floor_of(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rat(f);
}

Rat ceil_of(const Rat& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rat(c);
}

Lin to_lin(const Expr& e, const Point& x, int n) {
  using K = Expr::Kind;
  Lin out;
  switch (e.kind()) {
    case K::Const:
      out.a = UPoly::constant(e.value());
      return out;
    case K::Var:
      if (e.axis() < n) out.a = UPoly::constant(x[static_cast<size_t>(e.axis() - 1)]);
      else if (e.axis() == n) out.a = UPoly::x();
      else raise(ErrorKind::ArityMismatch, "x" + std::to_string(e.axis()) + " beyond the fiber variable");
      return out;
    case K::Add:
    case K::Sub: {
      Lin l = to_lin(e.args()[0], x, n), r = to_lin(e.args()[1], x, n);
      out.q = merge_radicand(l, r);
      out.a = e.kind() == K::Add ? l.a + r.a : l.a - r.a;
      out.b = e.kind() == K::Add ? l.b + r.b : l.b - r.b;
      return out;
    }
    case K::Neg: {
      Lin l = to_lin(e.args()[0], x, n);
      l.a = UPoly() - l.a;
      l.b = UPoly() - l.b;
      return l;
    }
    case K::Mul: {
      Lin l = to_lin(e.args()[0], x, n), r = to_lin(e.args()[1], x, n);
      out.q = merge_radicand(l, r);
      UPoly q = out.q ? *out.q : UPoly();
      out.a = l.a * r.a + l.b * r.b * q;
      out.b = l.a * r.b + l.b * r.a;
      return out;
    }
    case K::Pow: {
      Lin base = to_lin(e.args()[0], x, n);
      if (e.exponent() < 0) non_poly("negative exponent");
      out.a = UPoly::constant(1);
      for (int i = 0; i < e.exponent(); ++i) {
        UPoly q = base.q ? *base.q : UPoly();
        UPoly a = out.a * base.a + out.b * base.b * q;
        UPoly b = out.a * base.b + out.b * base.a;
        out.a = a;
        out.b = b;
      }
      out.q = base.q;
      return out;
    }
    case K::Div: {
      Lin l = to_lin(e.args()[0], x, n), r = to_lin(e.args()[1], x, n);
      if (!constant(r.a) || !constant(r.b) || (r.q && !constant(*r.q))) non_poly("division by a polynomial in the fiber variable");
      ExtVal c = ExtVal(r.a.coeff(0));
      if (r.q && !r.b.is_zero()) c = ExtVal::radical(r.a.coeff(0), r.b.coeff(0), r.q->coeff(0));
      if (c.is_indeterminate() || sign(c) == 0) throw Undefined{};
      if (c.is_rational()) {
        Rat inv = 1 / c.rational();
        l.a = l.a * UPoly::constant(inv);
        l.b = l.b * UPoly::constant(inv);
        return l;
      }
      // 1/(u + v sqrt(w)) = (u - v sqrt(w)) / (u^2 - v^2 w), constant w.
      Lin conj;
      conj.a = UPoly::constant(c.a());
      conj.b = UPoly::constant(-c.b());
      conj.q = UPoly::constant(c.c());
      Rat norm = c.a() * c.a() - c.b() * c.b() * c.c();
      out.q = merge_radicand(l, conj);
      UPoly q = *out.q;
      out.a = (l.a * conj.a + l.b * conj.b * q) * UPoly::constant(1 / norm);
      out.b = (l.a * conj.b + l.b * conj.a) * UPoly::constant(1 / norm);
      return out;
    }
    case K::Sqrt: {
      Lin inner = to_lin(e.args()[0], x, n);
      if (inner.q && !inner.b.is_zero()) non_poly("nested radical");
      if (constant(inner.a)) {
        Rat c = inner.a.coeff(0);
        if (c < 0) throw Undefined{};
        if (is_perfect_square(c)) {
          out.a = UPoly::constant(rat_sqrt_exact(c));
          return out;
        }
      }
      out.b = UPoly::constant(1);
      out.q = inner.a;
      return out;
    }
    case K::Sign: {
      Lin inner = to_lin(e.args()[0], x, n);
      if (!constant(inner.a) || !constant(inner.b) || (inner.q && !constant(*inner.q)))
        non_poly("sign of an expression in the fiber variable");
      ExtVal v = inner.q ? ExtVal::radical(inner.a.coeff(0), inner.b.coeff(0), inner.q->coeff(0)) : ExtVal(inner.a.coeff(0));
      out.a = UPoly::constant(sign(v));
      return out;
    }
    case K::Piecewise: {
      for (const auto& [guard, branch] : e.branches()) {
        if (guard.arity() >= n) non_poly("piecewise guard depends on the fiber variable");
        if (contains(guard, x)) return to_lin(branch, x, n);
      }
      return to_lin(e.args()[0], x, n);
    }
    case K::PosInf:
    case K::NegInf:
      non_poly("infinite constant in a predicate");
  }
  non_poly("unsupported expression");
}

struct AtomForm {
  bool undefined = false;
  Lin lin;
  Rel rel = Rel::Eq;
  UPoly disc;  // a^2 - b^2 q
};

void collect_atoms(const Predicate& p, std::vector<const Predicate*>& out) {
  if (p.kind() == Predicate::Kind::Atom) {
    out.push_back(&p);
    return;
  }
  for (const auto& q : p.parts()) collect_atoms(q, out);
}

// Sign of g at a root of the square-free f isolated by r (refined in place).
int sign_at_root(const UPoly& g, const UPoly& f, RootInfo& r) {
  if (r.exact) return sign(g.eval(*r.exact));
  UPoly common = gcd(f, g);
  if (common.degree() > 0 && count_roots(common, {r.lo, r.hi}) > 0) return 0;
  while (count_roots(g, {r.lo, r.hi}) > 0) {
    Rat mid = (r.lo + r.hi) / 2;
    if (f.eval(mid) == 0) {
      r.exact = ExtVal(mid);
      r.lo = r.hi = mid;
      return sign(g.eval(mid));
    }
    if (count_roots(f, {r.lo, mid}) > 0) r.hi = mid;
    else r.lo = mid;
  }
  return sgn(g.eval((r.lo + r.hi) / 2));
}

// Upper bound of a root and lower bound of the next one, refined until they separate.
Rat point_between(RootInfo& a, RootInfo& b, const UPoly& f) {
  if (a.exact && b.exact) return rational_between(*a.exact, *b.exact);
  auto refine = [&](RootInfo& r) {
    Rat mid = (r.lo + r.hi) / 2;
    if (f.eval(mid) == 0) {
      r.exact = ExtVal(mid);
      r.lo = r.hi = mid;
    } else if (count_roots(f, {r.lo, mid}) > 0) {
      r.hi = mid;
    } else {
      r.lo = mid;
    }
  };
  for (unsigned bits = 16;; bits *= 2) {
    Rat up = a.exact ? a.exact->enclose(bits).hi : a.hi;
    Rat down = b.exact ? b.exact->enclose(bits).lo : b.lo;
    if (up < down) return simplest_between(up, down);
    if (!a.exact) refine(a);
    if (!b.exact) refine(b);
    if (bits > 4096) raise(ErrorKind::IncomparableEndpoints, "cannot separate fiber roots");
  }
}

bool eval_pred(const Predicate& p, const std::vector<const Predicate*>& atoms, const std::vector<bool>& truth) {
  switch (p.kind()) {
    case Predicate::Kind::True: return true;
    case Predicate::Kind::False: return false;
    case Predicate::Kind::Atom: {
      auto it = std::find(atoms.begin(), atoms.end(), &p);
      return truth[static_cast<size_t>(it - atoms.begin())];
    }
    case Predicate::Kind::And:
      return std::all_of(p.parts().begin(), p.parts().end(), [&](const Predicate& q) { return eval_pred(q, atoms, truth); });
    case Predicate::Kind::Or:
      return std::any_of(p.parts().begin(), p.parts().end(), [&](const Predicate& q) { return eval_pred(q, atoms, truth); });
    case Predicate::Kind::Not: return !eval_pred(p.parts()[0], atoms, truth);
  }
  return false;
}

}  // namespace

SaSet1D fiber(const Predicate& pred, const Point& x) {
  int n = static_cast<int>(x.size()) + 1;
  if (pred.arity() > n) raise(ErrorKind::ArityMismatch, "predicate uses x" + std::to_string(pred.arity()) + " but the fiber is over R^" + std::to_string(n - 1));
  std::vector<const Predicate*> atoms;
  collect_atoms(pred, atoms);
  std::vector<AtomForm> forms;
  std::vector<UPoly> critical;
  for (const auto* a : atoms) {
    AtomForm f;
    f.rel = a->rel();
    try {
      f.lin = to_lin(Expr::sub(a->lhs(), a->rhs()), x, n);
    } catch (const Undefined&) {
      f.undefined = true;
    }
    if (!f.undefined) {
      critical.push_back(f.lin.a);
      if (f.lin.q) {
        f.disc = f.lin.a * f.lin.a - f.lin.b * f.lin.b * *f.lin.q;
        critical.push_back(f.lin.b);
        critical.push_back(*f.lin.q);
        critical.push_back(f.disc);
      }
    }
    forms.push_back(f);
  }

  UPoly prod = UPoly::constant(1);
  for (const auto& c : critical)
    if (c.degree() > 0) prod = prod * square_free_part(c);
  UPoly f = prod.degree() > 0 ? square_free_part(prod) : prod;
  std::vector<RootInfo> roots = f.degree() > 0 ? isolate_roots(f) : std::vector<RootInfo>{};

  // Truth of each atom from a sign oracle for polynomials at the point.
  auto atom_truths = [&](const std::function<int(const UPoly&)>& sg) {
    std::vector<bool> t;
    for (const auto& fm : forms) {
      if (fm.undefined) {
        t.push_back(false);
        continue;
      }
      int s;
      if (!fm.lin.q || fm.lin.b.is_zero()) {
        s = sg(fm.lin.a);
      } else {
        if (sg(*fm.lin.q) < 0) {
          t.push_back(false);
          continue;
        }
        s = fiber_sign(sg(fm.lin.a), sg(fm.lin.b), sg(fm.disc));
      }
      t.push_back(rel_holds(fm.rel, s));
    }
    return t;
  };
  auto at_rational = [&](const Rat& y) { return eval_pred(pred, atoms, atom_truths([&](const UPoly& g) { return sgn(g.eval(y)); })); };
  auto at_root = [&](RootInfo& r) {
    return eval_pred(pred, atoms, atom_truths([&](const UPoly& g) { return sign_at_root(g, f, r); }));
  };

  // Cells: sector, root, sector, ..., root, sector.
  size_t m = roots.size();
  std::vector<bool> truth;
  if (m == 0) {
    truth.push_back(at_rational(Rat(0)));
  } else {
    Rat below = (roots[0].exact ? floor_of(roots[0].exact->enclose(16).lo) : roots[0].lo) - 1;
    truth.push_back(at_rational(below));
    for (size_t i = 0; i < m; ++i) {
      truth.push_back(at_root(roots[i]));
      if (i + 1 < m) truth.push_back(at_rational(point_between(roots[i], roots[i + 1], f)));
    }
    Rat above = (roots[m - 1].exact ? ceil_of(roots[m - 1].exact->enclose(16).hi) : roots[m - 1].hi) + 1;
    truth.push_back(at_rational(above));
  }

  // Keep only roots where membership changes; they must be exact.
  std::vector<Piece> raw;
  std::optional<ExtVal> open_lo;
  bool open_closed = false, inside = truth[0];
  auto exact_root = [&](size_t i) {
    if (!roots[i].exact)
      raise(ErrorKind::IncomparableEndpoints, "fiber boundary near " + roots[i].lo.get_str() + " is not in Q or Q(sqrt c)");
    return *roots[i].exact;
  };
  for (size_t i = 0; i < m; ++i) {
    bool at = truth[2 * i + 1], after = truth[2 * i + 2];
    bool was_inside = inside;
    if (inside) {
      if (!at) {
        // A puncture reopens at once when the next sector is inside.
        raw.push_back(Piece{open_lo, exact_root(i), open_closed, false});
        inside = after;
        open_lo = exact_root(i);
        open_closed = false;
      } else if (!after) {
        raw.push_back(Piece{open_lo, exact_root(i), open_closed, true});
        inside = false;
      }
    }
    if (!was_inside) {
      if (at && after) {
        open_lo = exact_root(i);
        open_closed = true;
        inside = true;
      } else if (at) {
        raw.push_back(Piece::point(exact_root(i)));
      } else if (after) {
        open_lo = exact_root(i);
        open_closed = false;
        inside = true;
      }
    }
  }
  if (inside) raw.push_back(Piece{open_lo, std::nullopt, open_closed, false});
  return normalize_1d(raw);
}

std::string to_string(const Behaviour& b) {
  std::string out = "(";
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) out += ",";
    if (b[i].size() == 1) out += std::to_string(b[i][0]);
    else out += to_string(b[i]);
  }
  return out + ")";
}

Behaviour behaviour(const Family& fam, const Point& x) {
  std::vector<SaSet1D> fibers;
  for (const auto& s : fam.sets) fibers.push_back(fiber(s, x));
  auto [cad, tree] = minimum_cad_1d(fibers);
  Behaviour b;
  for (const auto& leaf : tree.root().children) b.push_back(leaf.label);
  return b;
}

BehaviourPartition behaviour_partition(const Family& fam, const ConcreteCad& base, const SamplePlan& plan) {
  BehaviourPartition out;
  Sampler sampler(base, plan);
  for (const auto& C : base.leaves()) {
    const auto& pool = sampler.pool(C);
    if (pool.empty()) raise(ErrorKind::NoRationalWitness, "no rational sample in base cell " + to_string(C));
    size_t n = std::min(pool.size(), static_cast<size_t>(std::max(plan.audit, 1)));
    std::vector<std::pair<Point, Behaviour>> seen;
    for (size_t i = 0; i < n; ++i) seen.emplace_back(pool[i], behaviour(fam, pool[i]));
    out.classes[seen[0].second].push_back(C);
    for (size_t i = 1; i < n; ++i)
      if (seen[i].second != seen[0].second) {
        out.issues.push_back({C, seen});
        break;
      }
  }
  return out;
}

}  // namespace mincad
