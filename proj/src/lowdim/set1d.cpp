#include <algorithm>
#include <sstream>

#include "mincad/cad/cadspec.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"

namespace mincad {

namespace {

void require_determinate(const std::optional<ExtVal>& v) {
  if (v && v->is_indeterminate()) raise(ErrorKind::IncomparableEndpoints, "endpoint is not exactly comparable");
}

// -1 for -inf; compares lower endpoints.
int cmp_lo(const std::optional<ExtVal>& a, const std::optional<ExtVal>& b) {
  if (!a && !b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  return compare(*a, *b);
}

// +inf for a missing upper endpoint.
int cmp_hi(const std::optional<ExtVal>& a, const std::optional<ExtVal>& b) {
  if (!a && !b) return 0;
  if (!a) return 1;
  if (!b) return -1;
  return compare(*a, *b);
}

bool piece_empty(const Piece& p) {
  if (!p.lo || !p.hi) return false;
  int c = compare(*p.lo, *p.hi);
  return c > 0 || (c == 0 && !(p.lo_closed && p.hi_closed));
}

bool piece_contains(const Piece& p, const ExtVal& y) {
  if (p.lo) {
    int c = compare(*p.lo, y);
    if (c > 0 || (c == 0 && !p.lo_closed)) return false;
  }
  if (p.hi) {
    int c = compare(y, *p.hi);
    if (c > 0 || (c == 0 && !p.hi_closed)) return false;
  }
  return true;
}

}  // namespace

bool Piece::is_point() const { return lo && hi && lo_closed && hi_closed && compare(*lo, *hi) == 0; }

bool SaSet1D::contains(const ExtVal& y) const {
  return std::any_of(pieces.begin(), pieces.end(), [&](const Piece& p) { return piece_contains(p, y); });
}

bool SaSet1D::operator==(const SaSet1D& o) const {
  if (pieces.size() != o.pieces.size()) return false;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const Piece &a = pieces[i], &b = o.pieces[i];
    if (cmp_lo(a.lo, b.lo) != 0 || cmp_hi(a.hi, b.hi) != 0 || a.lo_closed != b.lo_closed || a.hi_closed != b.hi_closed)
      return false;
  }
  return true;
}

SaSet1D normalize_1d(std::vector<Piece> raw) {
  for (auto& p : raw) {
    require_determinate(p.lo);
    require_determinate(p.hi);
    if (!p.lo) p.lo_closed = false;
    if (!p.hi) p.hi_closed = false;
  }
  raw.erase(std::remove_if(raw.begin(), raw.end(), piece_empty), raw.end());
  std::sort(raw.begin(), raw.end(), [](const Piece& a, const Piece& b) {
    int c = cmp_lo(a.lo, b.lo);
    if (c != 0) return c < 0;
    return a.lo_closed && !b.lo_closed;
  });
  SaSet1D out;
  for (const auto& p : raw) {
    if (out.pieces.empty()) {
      out.pieces.push_back(p);
      continue;
    }
    Piece& cur = out.pieces.back();
    // Does p start inside cur or touch it with a closed side?
    bool joins;
    if (!cur.hi) joins = true;
    else if (!p.lo) joins = true;
    else {
      int c = compare(*p.lo, *cur.hi);
      joins = c < 0 || (c == 0 && (cur.hi_closed || p.lo_closed));
    }
    if (!joins) {
      out.pieces.push_back(p);
      continue;
    }
    int c = cmp_hi(p.hi, cur.hi);
    if (c > 0) {
      cur.hi = p.hi;
      cur.hi_closed = p.hi_closed;
    } else if (c == 0) {
      cur.hi_closed = cur.hi_closed || p.hi_closed;
    }
  }
  return out;
}

std::vector<ExtVal> boundary(const SaSet1D& s) {
  std::vector<ExtVal> out;
  auto add = [&](const ExtVal& v) {
    if (out.empty() || compare(out.back(), v) != 0) out.push_back(v);
  };
  for (const auto& p : s.pieces) {
    if (p.lo) add(*p.lo);
    if (p.hi) add(*p.hi);
  }
  return out;
}

SaSet1D SaSet1D::complement() const {
  std::vector<Piece> raw;
  std::optional<ExtVal> lo;
  bool lo_closed = false;
  bool from_minus_inf = true;
  for (const auto& p : pieces) {
    if (p.lo) {
      Piece gap{from_minus_inf ? std::nullopt : lo, p.lo, lo_closed, !p.lo_closed};
      raw.push_back(gap);
    }
    from_minus_inf = false;
    if (!p.hi) return normalize_1d(raw);
    lo = p.hi;
    lo_closed = !p.hi_closed;
  }
  raw.push_back(Piece{from_minus_inf ? std::nullopt : lo, std::nullopt, lo_closed, false});
  return normalize_1d(raw);
}

Predicate to_predicate(const SaSet1D& s) {
  Expr x = Expr::var(1);
  std::vector<Predicate> parts;
  for (const auto& p : s.pieces) {
    if (p.is_point()) {
      parts.push_back(Predicate::atom(x, Rel::Eq, Expr::from_value(*p.lo)));
      continue;
    }
    std::vector<Predicate> sides;
    if (p.lo) sides.push_back(Predicate::atom(x, p.lo_closed ? Rel::Ge : Rel::Gt, Expr::from_value(*p.lo)));
    if (p.hi) sides.push_back(Predicate::atom(x, p.hi_closed ? Rel::Le : Rel::Lt, Expr::from_value(*p.hi)));
    if (sides.empty()) parts.push_back(Predicate::truth(true));
    else if (sides.size() == 1) parts.push_back(sides[0]);
    else parts.push_back(Predicate::conj(sides));
  }
  if (parts.empty()) return Predicate::truth(false);
  if (parts.size() == 1) return parts[0];
  return Predicate::disj(parts);
}

std::string to_string(const SaSet1D& s) {
  if (s.pieces.empty()) return "empty";
  std::string out;
  for (size_t i = 0; i < s.pieces.size(); ++i) {
    const Piece& p = s.pieces[i];
    if (i) out += " u ";
    if (p.is_point()) {
      out += "{" + extval_text(*p.lo) + "}";
      continue;
    }
    out += p.lo_closed ? "[" : "(";
    out += p.lo ? extval_text(*p.lo) : "-inf";
    out += ",";
    out += p.hi ? extval_text(*p.hi) : "inf";
    out += p.hi_closed ? "]" : ")";
  }
  return out;
}

SaSet1D parse_set1d(const std::string& text) {
  std::string t = text;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
  };
  t = trim(t);
  if (t == "empty" || t.empty()) return {};
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = t.find(" u ", start);
    parts.push_back(trim(t.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 3;
  }
  std::vector<Piece> raw;
  for (const auto& part : parts) {
    if (part.size() < 2) raise(ErrorKind::ParseError, "bad piece '" + part + "'");
    char open = part.front(), close = part.back();
    std::string body = part.substr(1, part.size() - 2);
    if (open == '{' && close == '}') {
      std::stringstream ss(body);
      std::string v;
      while (std::getline(ss, v, ',')) raw.push_back(Piece::point(parse_extval(trim(v))));
      continue;
    }
    if ((open != '[' && open != '(') || (close != ']' && close != ')'))
      raise(ErrorKind::ParseError, "bad piece '" + part + "'");
    auto comma = body.find(',');
    if (comma == std::string::npos) raise(ErrorKind::ParseError, "interval needs two endpoints: '" + part + "'");
    std::string a = trim(body.substr(0, comma)), b = trim(body.substr(comma + 1));
    Piece p;
    if (a != "-inf") p.lo = parse_extval(a);
    if (b != "inf" && b != "+inf") p.hi = parse_extval(b);
    p.lo_closed = open == '[' && p.lo;
    p.hi_closed = close == ']' && p.hi;
    raw.push_back(p);
  }
  return normalize_1d(raw);
}

}  // namespace mincad
