#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mincad/algebra/extval.hpp"

namespace mincad {

class Predicate;

// Immutable expression handle. Node kinds follow the text grammar; Neg and Pow
// are conveniences for readable fixtures.
class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Sign, Piecewise, PosInf, NegInf };
  struct Node;

  Expr();  // Const 0
  static Expr constant(const Rat& q);
  static Expr constant(long v) { return constant(Rat(v)); }
  static Expr var(int axis);  // axis >= 1
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr neg(Expr a);
  static Expr pow(Expr a, int exponent);
  static Expr sqrt(Expr a);
  static Expr sign(Expr a);
  static Expr piecewise(std::vector<std::pair<Predicate, Expr>> branches, Expr otherwise);
  static Expr pos_inf();
  static Expr neg_inf();
  static Expr from_value(const ExtVal& v);  // a + b*sqrt(c); requires determinate

  Kind kind() const;
  const Rat& value() const;  // Const
  int axis() const;          // Var
  int exponent() const;      // Pow
  const std::vector<Expr>& args() const;
  const std::vector<std::pair<Predicate, Expr>>& branches() const;  // Piecewise (default is args()[0])

  // Largest variable axis referenced, including inside piecewise guards.
  int arity() const;
  bool uses_axis(int axis) const;
  bool is_const() const { return kind() == Kind::Const; }

  friend Expr operator+(Expr a, Expr b) { return add(std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return sub(std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return mul(std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return div(std::move(a), std::move(b)); }
  Expr operator-() const { return neg(*this); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class Rel { Lt, Le, Eq, Ne, Ge, Gt };
const char* to_string(Rel r);
bool rel_holds(Rel r, int sign_of_difference);

// Boolean combination of sign conditions lhs REL rhs.
class Predicate {
 public:
  enum class Kind { True, False, Atom, And, Or, Not };
  struct Node;

  Predicate();  // True
  static Predicate truth(bool v);
  static Predicate atom(Expr lhs, Rel rel, Expr rhs);
  static Predicate conj(std::vector<Predicate> parts);
  static Predicate disj(std::vector<Predicate> parts);
  static Predicate negate(Predicate p);

  Kind kind() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  Rel rel() const;
  const std::vector<Predicate>& parts() const;

  int arity() const;
  // Negation pushed to atoms.
  Predicate nnf() const;

  friend Predicate operator&&(Predicate a, Predicate b) { return conj({std::move(a), std::move(b)}); }
  friend Predicate operator||(Predicate a, Predicate b) { return disj({std::move(a), std::move(b)}); }
  friend Predicate operator!(Predicate a) { return negate(std::move(a)); }

 private:
  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Kind kind = Kind::Const;
  Rat value;
  int axis = 0;
  int exponent = 0;
  int arity = 0;
  std::vector<Expr> args;
  std::vector<std::pair<Predicate, Expr>> branches;
};

struct Predicate::Node {
  Kind kind = Kind::True;
  Expr lhs, rhs;
  Rel rel = Rel::Eq;
  int arity = 0;
  std::vector<Predicate> parts;
};

// Exact evaluation. Raises ArityMismatch, DomainError (sqrt of a negative value,
// infinite operand) and UndecidableAtom (undecidable piecewise guard).
ExtVal eval(const Expr& e, const Point& x);
// Membership test; raises UndecidableAtom when an atom's sign is Indeterminate.
bool contains(const Predicate& p, const Point& x);
// Sign of lhs - rhs for an atom; nullopt when Indeterminate.
std::optional<int> atom_sign(const Predicate& atom, const Point& x);

// Rigorous interval evaluation with outward rounding to 2^-bits; nullopt when
// some step cannot be enclosed (division by an interval containing 0, ...).
std::optional<RatInterval> eval_interval(const Expr& e, const Point& x, unsigned bits);

// Canonical text (the grammar of the CADSPEC format).
std::string to_string(const Expr& e);
std::string to_string(const Predicate& p);

// Constant folding and collapse of piecewise nodes whose branches coincide.
Expr normalize(const Expr& e);
bool same_expr(const Expr& a, const Expr& b);

}  // namespace mincad
