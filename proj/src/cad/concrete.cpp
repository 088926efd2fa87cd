#include "mincad/cad/concrete.hpp"

#include "mincad/errors.hpp"

namespace mincad {

RegClass RegClass::parse(const std::string& text) {
  if (text == "omega" || text == "w") return omega();
  if (text == "inf" || text == "infinity") return infinity();
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    raise(ErrorKind::ParseError, "bad regularity class '" + text + "'");
  return finite(std::stoi(text));
}

std::string RegClass::str() const {
  switch (kind) {
    case Kind::Omega: return "omega";
    case Kind::Infinity: return "inf";
    case Kind::Finite: break;
  }
  return std::to_string(r);
}

int ConcreteCad::u(const Index& base) const {
  if (base.empty()) return static_cast<int>(level1.size());
  return static_cast<int>(cylinder(base).size());
}

const std::vector<Expr>& ConcreteCad::cylinder(const Index& base) const {
  auto it = sections.find(base);
  if (it == sections.end()) raise(ErrorKind::InvalidCad, "no cylinder above cell " + to_string(base));
  return it->second;
}

bool ConcreteCad::valid_index(const Index& I) const {
  if (level(I) > dim) return false;
  Index cur;
  for (int j : I) {
    if (level(cur) > 0 && !sections.count(cur)) return false;
    if (j < 1 || j > child_count(cur)) return false;
    cur.push_back(j);
  }
  return true;
}

std::vector<Index> ConcreteCad::cells(int lvl) const {
  if (lvl < 0 || lvl > dim) raise(ErrorKind::BadLevel, "level " + std::to_string(lvl) + " outside 0.." + std::to_string(dim));
  std::vector<Index> cur{Index{}};
  for (int k = 0; k < lvl; ++k) {
    std::vector<Index> next;
    for (const auto& I : cur)
      for (int j = 1; j <= child_count(I); ++j) next.push_back(child(I, j));
    cur = std::move(next);
  }
  return cur;
}

std::vector<ExtVal> section_values(const ConcreteCad& cad, const Index& base, const Point& b) {
  if (base.empty()) return cad.level1;
  std::vector<ExtVal> out;
  for (const auto& e : cad.cylinder(base)) {
    try {
      out.push_back(eval(e, b));
    } catch (const Error&) {
      out.push_back(ExtVal::indeterminate());
    }
  }
  return out;
}

Family Family::complement() const {
  Family out;
  for (size_t i = 0; i < sets.size(); ++i) {
    out.names.push_back("not " + names[i]);
    out.sets.push_back(Predicate::negate(sets[i]));
  }
  return out;
}

bool CadDocument::has_cad(const std::string& name) const {
  for (const auto& [n, c] : cads)
    if (n == name) return true;
  return false;
}

const ConcreteCad& CadDocument::cad(const std::string& name) const {
  for (const auto& [n, c] : cads)
    if (n == name) return c;
  raise(ErrorKind::UnknownEntry, "no cad named '" + name + "'");
}

const Predicate& CadDocument::set(const std::string& name) const {
  for (const auto& [n, s] : sets)
    if (n == name) return s;
  raise(ErrorKind::UnknownEntry, "no set named '" + name + "'");
}

Family CadDocument::family(const std::vector<std::string>& names) const {
  Family f;
  if (names.empty()) {
    for (const auto& [n, s] : sets) {
      f.names.push_back(n);
      f.sets.push_back(s);
    }
  } else {
    for (const auto& n : names) {
      f.names.push_back(n);
      f.sets.push_back(set(n));
    }
  }
  if (f.sets.empty()) raise(ErrorKind::BadParameter, "empty family");
  return f;
}

}  // namespace mincad
