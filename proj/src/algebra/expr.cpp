#include "mincad/algebra/expr.hpp"

#include <algorithm>

#include "mincad/errors.hpp"

namespace mincad {

namespace {

using K = Expr::Kind;

std::shared_ptr<Expr::Node> fresh(K kind) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  return n;
}

int args_arity(const std::vector<Expr>& args) {
  int a = 0;
  for (const auto& e : args) a = std::max(a, e.arity());
  return a;
}

}  // namespace

// ---- construction ---------------------------------------------------------

Expr::Expr() : node_(fresh(K::Const)) {}

Expr Expr::constant(const Rat& q) {
  auto n = fresh(K::Const);
  n->value = q;
  return Expr(n);
}

Expr Expr::var(int axis) {
  if (axis < 1) raise(ErrorKind::BadParameter, "variable axis must be >= 1");
  auto n = fresh(K::Var);
  n->axis = axis;
  n->arity = axis;
  return Expr(n);
}

#define MINCAD_BINARY(NAME, KIND)                 \
  Expr Expr::NAME(Expr a, Expr b) {               \
    auto n = fresh(KIND);                         \
    n->args = {std::move(a), std::move(b)};       \
    n->arity = args_arity(n->args);               \
    return Expr(n);                               \
  }
MINCAD_BINARY(add, K::Add)
MINCAD_BINARY(sub, K::Sub)
MINCAD_BINARY(mul, K::Mul)
MINCAD_BINARY(div, K::Div)
#undef MINCAD_BINARY

Expr Expr::neg(Expr a) {
  switch (a.kind()) {
    case K::Const: return constant(Rat(-a.value()));
    case K::PosInf: return neg_inf();
    case K::NegInf: return pos_inf();
    default: break;
  }
  auto n = fresh(K::Neg);
  n->arity = a.arity();
  n->args = {std::move(a)};
  return Expr(n);
}

Expr Expr::pow(Expr a, int exponent) {
  if (exponent < 0) raise(ErrorKind::BadParameter, "negative exponent");
  auto n = fresh(K::Pow);
  n->exponent = exponent;
  n->arity = a.arity();
  n->args = {std::move(a)};
  return Expr(n);
}

Expr Expr::sqrt(Expr a) {
  auto n = fresh(K::Sqrt);
  n->arity = a.arity();
  n->args = {std::move(a)};
  return Expr(n);
}

Expr Expr::sign(Expr a) {
  auto n = fresh(K::Sign);
  n->arity = a.arity();
  n->args = {std::move(a)};
  return Expr(n);
}

Expr Expr::piecewise(std::vector<std::pair<Predicate, Expr>> branches, Expr otherwise) {
  auto n = fresh(K::Piecewise);
  int a = otherwise.arity();
  for (const auto& [p, e] : branches) a = std::max({a, p.arity(), e.arity()});
  n->arity = a;
  n->branches = std::move(branches);
  n->args = {std::move(otherwise)};
  return Expr(n);
}

Expr Expr::pos_inf() { return Expr(fresh(K::PosInf)); }
Expr Expr::neg_inf() { return Expr(fresh(K::NegInf)); }

Expr Expr::from_value(const ExtVal& v) {
  if (v.is_indeterminate()) raise(ErrorKind::DomainError, "cannot encode an indeterminate value");
  if (v.is_rational()) return constant(v.a());
  Expr root = sqrt(constant(v.c()));
  Expr term = v.b() == 1 ? root : (v.b() == -1 ? neg(root) : mul(constant(v.b()), root));
  if (v.a() == 0) return term;
  return add(constant(v.a()), term);
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rat& Expr::value() const { return node_->value; }
int Expr::axis() const { return node_->axis; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
const std::vector<std::pair<Predicate, Expr>>& Expr::branches() const { return node_->branches; }
int Expr::arity() const { return node_->arity; }

bool Expr::uses_axis(int axis) const {
  if (kind() == K::Var) return node_->axis == axis;
  if (arity() < axis) return false;
  for (const auto& a : args())
    if (a.uses_axis(axis)) return true;
  for (const auto& [p, e] : branches()) {
    if (e.uses_axis(axis)) return true;
    // guards: conservative via arity
    if (p.arity() >= axis) return true;
  }
  return false;
}

const char* to_string(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

bool rel_holds(Rel r, int s) {
  switch (r) {
    case Rel::Lt: return s < 0;
    case Rel::Le: return s <= 0;
    case Rel::Eq: return s == 0;
    case Rel::Ne: return s != 0;
    case Rel::Ge: return s >= 0;
    case Rel::Gt: return s > 0;
  }
  return false;
}

Predicate::Predicate() : node_(std::make_shared<Node>()) {}

Predicate Predicate::truth(bool v) {
  auto n = std::make_shared<Node>();
  n->kind = v ? Kind::True : Kind::False;
  return Predicate(n);
}

Predicate Predicate::atom(Expr lhs, Rel rel, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->arity = std::max(lhs.arity(), rhs.arity());
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->rel = rel;
  return Predicate(n);
}

Predicate Predicate::conj(std::vector<Predicate> parts) {
  if (parts.empty()) return truth(true);
  if (parts.size() == 1) return parts[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  for (const auto& p : parts) n->arity = std::max(n->arity, p.arity());
  n->parts = std::move(parts);
  return Predicate(n);
}

Predicate Predicate::disj(std::vector<Predicate> parts) {
  if (parts.empty()) return truth(false);
  if (parts.size() == 1) return parts[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  for (const auto& p : parts) n->arity = std::max(n->arity, p.arity());
  n->parts = std::move(parts);
  return Predicate(n);
}

Predicate Predicate::negate(Predicate p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->arity = p.arity();
  n->parts = {std::move(p)};
  return Predicate(n);
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
const Expr& Predicate::lhs() const { return node_->lhs; }
const Expr& Predicate::rhs() const { return node_->rhs; }
Rel Predicate::rel() const { return node_->rel; }
const std::vector<Predicate>& Predicate::parts() const { return node_->parts; }
int Predicate::arity() const { return node_->arity; }

namespace {

Rel flip(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Ge: return Rel::Lt;
    case Rel::Gt: return Rel::Le;
  }
  return r;
}

Predicate nnf_impl(const Predicate& p, bool negated) {
  using PK = Predicate::Kind;
  switch (p.kind()) {
    case PK::True: return Predicate::truth(!negated);
    case PK::False: return Predicate::truth(negated);
    case PK::Atom: return negated ? Predicate::atom(p.lhs(), flip(p.rel()), p.rhs()) : p;
    case PK::Not: return nnf_impl(p.parts()[0], !negated);
    case PK::And:
    case PK::Or: {
      std::vector<Predicate> parts;
      for (const auto& q : p.parts()) parts.push_back(nnf_impl(q, negated));
      bool is_and = (p.kind() == PK::And) != negated;
      return is_and ? Predicate::conj(std::move(parts)) : Predicate::disj(std::move(parts));
    }
  }
  return p;
}

}  // namespace

Predicate Predicate::nnf() const { return nnf_impl(*this, false); }

// ---- evaluation -----------------------------------------------------------

ExtVal eval(const Expr& e, const Point& x) {
  switch (e.kind()) {
    case K::Const: return ExtVal(e.value());
    case K::Var:
      if (static_cast<size_t>(e.axis()) > x.size())
        raise(ErrorKind::ArityMismatch, "x" + std::to_string(e.axis()) + " at point " + to_string(x));
      return ExtVal(x[e.axis() - 1]);
    case K::Add: return eval(e.args()[0], x) + eval(e.args()[1], x);
    case K::Sub: return eval(e.args()[0], x) - eval(e.args()[1], x);
    case K::Mul: return eval(e.args()[0], x) * eval(e.args()[1], x);
    case K::Div: return eval(e.args()[0], x) / eval(e.args()[1], x);
    case K::Neg: return -eval(e.args()[0], x);
    case K::Pow: {
      ExtVal base = eval(e.args()[0], x), r(1);
      for (int i = 0; i < e.exponent(); ++i) r = r * base;
      return r;
    }
    case K::Sqrt: {
      ExtVal v = eval(e.args()[0], x);
      auto r = ext_sqrt(v);
      if (!r) raise(ErrorKind::DomainError, "sqrt of negative value " + v.str() + " in " + to_string(e) + " at " + to_string(x));
      return *r;
    }
    case K::Sign: {
      ExtVal v = eval(e.args()[0], x);
      if (v.is_indeterminate()) return v;
      return ExtVal(static_cast<long>(sign(v)));
    }
    case K::Piecewise:
      for (const auto& [guard, branch] : e.branches())
        if (contains(guard, x)) return eval(branch, x);
      return eval(e.args()[0], x);
    case K::PosInf:
    case K::NegInf: raise(ErrorKind::DomainError, "infinite operand " + to_string(e) + " at " + to_string(x));
  }
  return ExtVal::indeterminate();
}

std::optional<int> atom_sign(const Predicate& atom, const Point& x) {
  ExtVal l = eval(atom.lhs(), x), r = eval(atom.rhs(), x);
  if (l.is_indeterminate() || r.is_indeterminate()) return std::nullopt;
  return compare(l, r);
}

bool contains(const Predicate& p, const Point& x) {
  using PK = Predicate::Kind;
  switch (p.kind()) {
    case PK::True: return true;
    case PK::False: return false;
    case PK::Atom: {
      auto s = atom_sign(p, x);
      if (!s) raise(ErrorKind::UndecidableAtom, to_string(p) + " at " + to_string(x));
      return rel_holds(p.rel(), *s);
    }
    case PK::Not: return !contains(p.parts()[0], x);
    case PK::And:
      for (const auto& q : p.parts())
        if (!contains(q, x)) return false;
      return true;
    case PK::Or:
      for (const auto& q : p.parts())
        if (contains(q, x)) return true;
      return false;
  }
  return false;
}

// ---- interval evaluation --------------------------------------------------

namespace {

Rat round_down(const Rat& q, unsigned bits) {
  if (mpz_sizeinbase(q.get_den_mpz_t(), 2) <= bits) return q;
  mpz_class scaled = q.get_num() << bits, r;
  mpz_fdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rat out(r, mpz_class(1) << bits);
  out.canonicalize();
  return out;
}

Rat round_up(const Rat& q, unsigned bits) {
  if (mpz_sizeinbase(q.get_den_mpz_t(), 2) <= bits) return q;
  mpz_class scaled = q.get_num() << bits, r;
  mpz_cdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rat out(r, mpz_class(1) << bits);
  out.canonicalize();
  return out;
}

RatInterval outward(const Rat& lo, const Rat& hi, unsigned bits) { return {round_down(lo, bits), round_up(hi, bits)}; }

RatInterval imul(const RatInterval& a, const RatInterval& b, unsigned bits) {
  Rat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return outward(*std::min_element(p, p + 4), *std::max_element(p, p + 4), bits);
}

std::optional<RatInterval> ieval(const Expr& e, const Point& x, unsigned bits) {
  auto child = [&](size_t i) { return ieval(e.args()[i], x, bits); };
  switch (e.kind()) {
    case K::Const: return RatInterval{e.value(), e.value()};
    case K::Var:
      if (static_cast<size_t>(e.axis()) > x.size()) return std::nullopt;
      return RatInterval{x[e.axis() - 1], x[e.axis() - 1]};
    case K::Add:
    case K::Sub: {
      auto a = child(0), b = child(1);
      if (!a || !b) return std::nullopt;
      if (e.kind() == K::Add) return outward(a->lo + b->lo, a->hi + b->hi, bits);
      return outward(a->lo - b->hi, a->hi - b->lo, bits);
    }
    case K::Mul: {
      auto a = child(0), b = child(1);
      if (!a || !b) return std::nullopt;
      return imul(*a, *b, bits);
    }
    case K::Div: {
      auto a = child(0), b = child(1);
      if (!a || !b || (b->lo <= 0 && b->hi >= 0)) return std::nullopt;
      RatInterval inv = outward(Rat(1 / b->hi), Rat(1 / b->lo), bits);
      return imul(*a, inv, bits);
    }
    case K::Neg: {
      auto a = child(0);
      if (!a) return std::nullopt;
      return RatInterval{-a->hi, -a->lo};
    }
    case K::Pow: {
      auto a = child(0);
      if (!a) return std::nullopt;
      RatInterval r{1, 1};
      for (int i = 0; i < e.exponent(); ++i) r = imul(r, *a, bits);
      return r;
    }
    case K::Sqrt: {
      auto a = child(0);
      if (!a || a->hi < 0) return std::nullopt;
      Rat lo = a->lo < 0 ? Rat(0) : sqrt_enclosure(a->lo, bits).lo;
      return RatInterval{lo, sqrt_enclosure(a->hi, bits).hi};
    }
    case K::Sign: {
      auto a = child(0);
      if (!a) return std::nullopt;
      if (a->lo > 0) return RatInterval{1, 1};
      if (a->hi < 0) return RatInterval{-1, -1};
      if (a->lo == 0 && a->hi == 0) return RatInterval{0, 0};
      return std::nullopt;
    }
    case K::Piecewise:
      try {
        for (const auto& [guard, branch] : e.branches())
          if (contains(guard, x)) return ieval(branch, x, bits);
      } catch (const Error&) {
        return std::nullopt;
      }
      return child(0);
    case K::PosInf:
    case K::NegInf: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<RatInterval> eval_interval(const Expr& e, const Point& x, unsigned bits) { return ieval(e, x, bits); }

// ---- printing -------------------------------------------------------------

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Neg:
    case K::PosInf:
    case K::NegInf: return 3;
    case K::Const: return e.value() < 0 ? 3 : 5;
    case K::Pow: return 4;
    default: return 5;
  }
}

void print(const Expr& e, int min_prec, std::string& out);

void print_pred(const Predicate& p, int min_prec, std::string& out) {
  using PK = Predicate::Kind;
  int prec = 4;
  if (p.kind() == PK::Or) prec = 1;
  if (p.kind() == PK::And) prec = 2;
  if (p.kind() == PK::Not) prec = 3;
  bool paren = prec < min_prec;
  if (paren) out += "(";
  switch (p.kind()) {
    case PK::True: out += "true"; break;
    case PK::False: out += "false"; break;
    case PK::Atom:
      print(p.lhs(), 1, out);
      out += " ";
      out += to_string(p.rel());
      out += " ";
      print(p.rhs(), 1, out);
      break;
    case PK::Not:
      out += "not ";
      print_pred(p.parts()[0], 3, out);
      break;
    case PK::And:
    case PK::Or:
      for (size_t i = 0; i < p.parts().size(); ++i) {
        if (i) out += p.kind() == PK::And ? " and " : " or ";
        print_pred(p.parts()[i], prec + 1, out);
      }
      break;
  }
  if (paren) out += ")";
}

void print(const Expr& e, int min_prec, std::string& out) {
  int prec = precedence(e);
  bool paren = prec < min_prec;
  if (paren) out += "(";
  auto binary = [&](const char* op, int lp, int rp) {
    print(e.args()[0], lp, out);
    out += op;
    print(e.args()[1], rp, out);
  };
  switch (e.kind()) {
    case K::Const: out += e.value().get_str(); break;
    case K::Var: out += "x" + std::to_string(e.axis()); break;
    case K::Add: binary(" + ", 1, 2); break;
    case K::Sub: binary(" - ", 1, 2); break;
    case K::Mul: binary(" * ", 2, 3); break;
    case K::Div: binary(" / ", 2, 3); break;
    case K::Neg:
      out += "-";
      print(e.args()[0], 3, out);
      break;
    case K::Pow:
      print(e.args()[0], 5, out);
      out += "^" + std::to_string(e.exponent());
      break;
    case K::Sqrt:
    case K::Sign:
      out += e.kind() == K::Sqrt ? "sqrt(" : "sign(";
      print(e.args()[0], 1, out);
      out += ")";
      break;
    case K::Piecewise:
      out += "piecewise{";
      for (const auto& [guard, branch] : e.branches()) {
        print_pred(guard, 1, out);
        out += " -> ";
        print(branch, 1, out);
        out += "; ";
      }
      out += "else -> ";
      print(e.args()[0], 1, out);
      out += "}";
      break;
    case K::PosInf: out += "+inf"; break;
    case K::NegInf: out += "-inf"; break;
  }
  if (paren) out += ")";
}

bool has_infinity(const Expr& e) {
  if (e.kind() == K::PosInf || e.kind() == K::NegInf) return true;
  for (const auto& a : e.args())
    if (has_infinity(a)) return true;
  for (const auto& [p, b] : e.branches())
    if (has_infinity(b)) return true;
  return false;
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

std::string to_string(const Predicate& p) {
  std::string out;
  print_pred(p, 0, out);
  return out;
}

// ---- normalization --------------------------------------------------------

Expr normalize(const Expr& e) {
  if (e.arity() == 0 && !has_infinity(e) && e.kind() != K::Const) {
    try {
      ExtVal v = eval(e, {});
      if (!v.is_indeterminate()) return Expr::from_value(v);
    } catch (const Error&) {
      // undefined constants stay symbolic
    }
  }
  std::vector<Expr> args;
  for (const auto& a : e.args()) args.push_back(normalize(a));
  auto is_zero = [](const Expr& x) { return x.is_const() && x.value() == 0; };
  auto is_one = [](const Expr& x) { return x.is_const() && x.value() == 1; };
  switch (e.kind()) {
    case K::Add:
      if (is_zero(args[0])) return args[1];
      if (is_zero(args[1])) return args[0];
      return Expr::add(args[0], args[1]);
    case K::Sub:
      if (is_zero(args[1])) return args[0];
      if (is_zero(args[0])) return Expr::neg(args[1]);
      return Expr::sub(args[0], args[1]);
    case K::Mul:
      if (is_one(args[0])) return args[1];
      if (is_one(args[1])) return args[0];
      return Expr::mul(args[0], args[1]);
    case K::Div:
      if (is_one(args[1])) return args[0];
      return Expr::div(args[0], args[1]);
    case K::Neg: return Expr::neg(args[0]);
    case K::Pow:
      if (e.exponent() == 1) return args[0];
      return Expr::pow(args[0], e.exponent());
    case K::Sqrt: return Expr::sqrt(args[0]);
    case K::Sign: return Expr::sign(args[0]);
    case K::Piecewise: {
      std::vector<std::pair<Predicate, Expr>> kept;
      Expr otherwise = args[0];
      for (const auto& [guard, branch] : e.branches()) {
        if (guard.arity() == 0) {
          bool holds = false;
          try {
            holds = contains(guard, {});
          } catch (const Error&) {
            kept.emplace_back(guard, normalize(branch));
            continue;
          }
          if (holds) {
            otherwise = normalize(branch);
            break;
          }
          continue;
        }
        kept.emplace_back(guard, normalize(branch));
      }
      std::string target = to_string(otherwise);
      bool uniform = std::all_of(kept.begin(), kept.end(), [&](const auto& b) { return to_string(b.second) == target; });
      if (uniform) return otherwise;
      return Expr::piecewise(std::move(kept), otherwise);
    }
    default: return e;
  }
}

bool same_expr(const Expr& a, const Expr& b) { return to_string(normalize(a)) == to_string(normalize(b)); }

}  // namespace mincad
