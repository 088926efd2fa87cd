#include "mincad/cad/cadspec.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mincad/errors.hpp"

namespace mincad {

namespace {

// ---- tokens ---------------------------------------------------------------

enum class Tok { Num, Ident, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  auto digits = [&](size_t j) {
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = digits(i);
      // DIGITS/DIGITS without spaces is a single rational literal
      if (j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) j = digits(j + 1);
      out.push_back({Tok::Num, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    static const char* two[] = {"->", "<=", ">=", "!=", "=="};
    bool matched = false;
    for (const char* t : two) {
      if (s.compare(i, 2, t) == 0) {
        out.push_back({Tok::Op, t, i});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("+-*/^(){};,<>=").find(c) != std::string::npos) {
      out.push_back({Tok::Op, std::string(1, c), i});
      ++i;
      continue;
    }
    raise(ErrorKind::ParseError, "unexpected character '" + std::string(1, c) + "' at " + std::to_string(i));
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// ---- recursive descent ----------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& text) : src_(text), toks_(tokenize(text)) {}

  Expr full_expr() {
    Expr e = expr();
    expect_end();
    return e;
  }

  Predicate full_pred() {
    Predicate p = pred();
    expect_end();
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_op(const char* t) const { return peek().kind == Tok::Op && peek().text == t; }
  bool is_ident(const char* t) const { return peek().kind == Tok::Ident && peek().text == t; }

  [[noreturn]] void fail(const std::string& what) const {
    raise(ErrorKind::ParseError, what + " at position " + std::to_string(peek().pos) + " in '" + src_ + "'");
  }

  void expect_op(const char* t) {
    if (!is_op(t)) fail(std::string("expected '") + t + "'");
    ++pos_;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
  }

  Expr expr() {
    Expr e = term();
    while (is_op("+") || is_op("-")) {
      bool plus = is_op("+");
      ++pos_;
      Expr r = term();
      e = plus ? Expr::add(e, r) : Expr::sub(e, r);
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (is_op("*") || is_op("/")) {
      bool times = is_op("*");
      ++pos_;
      Expr r = unary();
      e = times ? Expr::mul(e, r) : Expr::div(e, r);
    }
    return e;
  }

  Expr unary() {
    if (is_op("-")) {
      ++pos_;
      return Expr::neg(unary());
    }
    if (is_op("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (is_op("^")) {
      ++pos_;
      if (peek().kind != Tok::Num || peek().text.find('/') != std::string::npos) fail("expected integer exponent");
      int k = std::stoi(peek().text);
      ++pos_;
      return Expr::pow(base, k);
    }
    return base;
  }

  Expr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Num) {
      ++pos_;
      return Expr::constant(parse_rat(t.text));
    }
    if (t.kind == Tok::Ident) {
      const std::string& id = t.text;
      if (id.size() > 1 && id[0] == 'x' && id.find_first_not_of("0123456789", 1) == std::string::npos) {
        ++pos_;
        return Expr::var(std::stoi(id.substr(1)));
      }
      if (id == "inf") {
        ++pos_;
        return Expr::pos_inf();
      }
      if (id == "sqrt" || id == "sign") {
        ++pos_;
        expect_op("(");
        Expr a = expr();
        expect_op(")");
        return id == "sqrt" ? Expr::sqrt(a) : Expr::sign(a);
      }
      if (id == "piecewise") {
        ++pos_;
        return piecewise();
      }
      fail("unknown identifier '" + id + "'");
    }
    if (is_op("(")) {
      ++pos_;
      Expr e = expr();
      expect_op(")");
      return e;
    }
    fail("expected an expression");
  }

  Expr piecewise() {
    expect_op("{");
    std::vector<std::pair<Predicate, Expr>> branches;
    while (true) {
      if (is_ident("else")) {
        ++pos_;
        expect_op("->");
        Expr otherwise = expr();
        if (is_op(";")) ++pos_;
        expect_op("}");
        return Expr::piecewise(std::move(branches), otherwise);
      }
      Predicate g = pred();
      expect_op("->");
      Expr b = expr();
      branches.emplace_back(g, b);
      expect_op(";");
    }
  }

  Predicate pred() {
    std::vector<Predicate> parts{conj()};
    while (is_ident("or")) {
      ++pos_;
      parts.push_back(conj());
    }
    return parts.size() == 1 ? parts[0] : Predicate::disj(std::move(parts));
  }

  Predicate conj() {
    std::vector<Predicate> parts{negation()};
    while (is_ident("and")) {
      ++pos_;
      parts.push_back(negation());
    }
    return parts.size() == 1 ? parts[0] : Predicate::conj(std::move(parts));
  }

  Predicate negation() {
    if (is_ident("not")) {
      ++pos_;
      return Predicate::negate(negation());
    }
    return patom();
  }

  std::optional<Rel> rel_here() const {
    if (peek().kind != Tok::Op) return std::nullopt;
    const std::string& t = peek().text;
    if (t == "<") return Rel::Lt;
    if (t == "<=") return Rel::Le;
    if (t == "=" || t == "==") return Rel::Eq;
    if (t == "!=") return Rel::Ne;
    if (t == ">=") return Rel::Ge;
    if (t == ">") return Rel::Gt;
    return std::nullopt;
  }

  Predicate patom() {
    if (is_ident("true")) {
      ++pos_;
      return Predicate::truth(true);
    }
    if (is_ident("false")) {
      ++pos_;
      return Predicate::truth(false);
    }
    if (is_op("(")) {
      size_t save = pos_;
      try {
        ++pos_;
        Predicate p = pred();
        expect_op(")");
        if (!rel_here() && !is_op("+") && !is_op("-") && !is_op("*") && !is_op("/") && !is_op("^")) return p;
      } catch (const Error&) {
      }
      pos_ = save;
    }
    Expr lhs = expr();
    auto r = rel_here();
    if (!r) fail("expected a relation");
    ++pos_;
    Expr rhs = expr();
    return Predicate::atom(lhs, *r, rhs);
  }

  std::string src_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Split on a separator outside parentheses and braces.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

int sqrt_depth(const Expr& e) {
  int inner = 0;
  for (const auto& a : e.args()) inner = std::max(inner, sqrt_depth(a));
  for (const auto& [p, b] : e.branches()) inner = std::max(inner, sqrt_depth(b));
  return inner + (e.kind() == Expr::Kind::Sqrt ? 1 : 0);
}

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).full_expr(); }

Predicate parse_predicate(const std::string& text) { return Parser(text).full_pred(); }

ExtVal parse_extval(const std::string& text) {
  Expr e = parse_expr(text);
  if (e.arity() != 0) raise(ErrorKind::ParseError, "value '" + text + "' must not reference variables");
  ExtVal v = eval(e, {});
  if (v.is_indeterminate()) raise(ErrorKind::ParseError, "value '" + text + "' is not in Q or Q(sqrt c)");
  return v;
}

std::string extval_text(const ExtVal& v) { return to_string(Expr::from_value(v)); }

void validate_shape(const ConcreteCad& cad) {
  if (cad.dim < 1) raise(ErrorKind::InvalidCad, "dimension must be >= 1");
  for (int k = 1; k < cad.dim; ++k) {
    for (const auto& I : cad.cells(k)) {
      auto it = cad.sections.find(I);
      if (it == cad.sections.end()) raise(ErrorKind::InvalidCad, "missing cell block " + to_string(I));
      for (const auto& e : it->second) {
        if (e.arity() > k)
          raise(ErrorKind::InvalidCad, "section above " + to_string(I) + " references x" + std::to_string(e.arity()));
        if (sqrt_depth(e) > 2) raise(ErrorKind::InvalidCad, "sqrt nesting deeper than 2 above " + to_string(I));
      }
    }
  }
  for (const auto& [I, exprs] : cad.sections)
    if (level(I) < 1 || level(I) >= cad.dim || !cad.valid_index(I))
      raise(ErrorKind::InvalidCad, "cell block " + to_string(I) + " is not a cell of level < " + std::to_string(cad.dim));
}

CadDocument parse_cadspec(const std::string& text) {
  // join continuation lines and drop comments
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in(text);
    std::string raw, acc;
    int lineno = 0, start = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      std::string t = trim(raw);
      if (acc.empty()) start = lineno;
      if (!t.empty() && t.back() == '\\') {
        acc += t.substr(0, t.size() - 1) + " ";
        continue;
      }
      acc += t;
      if (!trim(acc).empty()) lines.emplace_back(start, trim(acc));
      acc.clear();
    }
    if (!trim(acc).empty()) lines.emplace_back(start, trim(acc));
  }

  CadDocument doc;
  ConcreteCad* cur = nullptr;
  bool level1_seen = false;
  auto finish = [&]() {
    if (cur) validate_shape(*cur);
  };
  for (const auto& [lineno, line] : lines) {
    auto where = [&, ln = lineno](const std::string& what) {
      raise(ErrorKind::ParseError, "line " + std::to_string(ln) + ": " + what);
    };
    try {
      std::istringstream words(line);
      std::string head;
      words >> head;
      if (head == "cad") {
        finish();
        std::string name, w;
        int dim = -1;
        RegClass cls;
        while (words >> w) {
          if (w.rfind("dim=", 0) == 0) dim = std::stoi(w.substr(4));
          else if (w.rfind("class=", 0) == 0) cls = RegClass::parse(w.substr(6));
          else if (name.empty()) name = w;
          else where("unexpected '" + w + "' in cad header");
        }
        if (dim < 1) where("cad header needs dim=<n> with n >= 1");
        if (name.empty()) name = "main";
        if (doc.has_cad(name)) where("duplicate cad '" + name + "'");
        ConcreteCad c;
        c.dim = dim;
        c.cls = cls;
        doc.cads.emplace_back(name, std::move(c));
        cur = &doc.cads.back().second;
        level1_seen = false;
      } else if (line.rfind("level1:", 0) == 0) {
        if (!cur) where("level1 outside a cad block");
        if (level1_seen) where("duplicate level1 line");
        level1_seen = true;
        std::string rest = trim(line.substr(7));
        if (!rest.empty())
          for (const auto& v : split_top(rest, ',')) cur->level1.push_back(parse_extval(v));
      } else if (head == "cell") {
        if (!cur) where("cell outside a cad block");
        auto colon = line.find(':');
        if (colon == std::string::npos) where("cell line needs ':'");
        Index I = parse_index(trim(line.substr(4, colon - 4)));
        if (I.empty()) where("cell index must be nonempty");
        if (cur->sections.count(I)) where("duplicate cell " + to_string(I));
        auto fields = split_top(line.substr(colon + 1), ';');
        if (fields.empty() || fields[0].rfind("u=", 0) != 0) where("cell line must start with u=<m>");
        std::string ustr = trim(fields[0].substr(2));
        if (ustr.empty() || ustr.find_first_not_of("0123456789") != std::string::npos) where("bad u count");
        int u = std::stoi(ustr);
        std::vector<Expr> exprs;
        for (size_t f = 1; f < fields.size(); ++f) {
          if (fields[f].empty()) continue;
          auto eq = fields[f].find('=');
          if (eq == std::string::npos) where("expected xi<2j>=<expr>");
          std::string key = trim(fields[f].substr(0, eq));
          std::string expect = "xi" + std::to_string(2 * (exprs.size() + 1));
          if (key != expect) where("expected key " + expect + ", found " + key);
          exprs.push_back(parse_expr(fields[f].substr(eq + 1)));
        }
        if (static_cast<int>(exprs.size()) != u)
          where("u=" + std::to_string(u) + " but " + std::to_string(exprs.size()) + " sections given");
        cur->sections[I] = std::move(exprs);
      } else if (head == "set") {
        auto colon = line.find(':');
        if (colon == std::string::npos) where("set line needs ':'");
        std::string name = trim(line.substr(3, colon - 3));
        if (name.empty()) where("set needs a name");
        for (const auto& [n, s] : doc.sets)
          if (n == name) where("duplicate set '" + name + "'");
        doc.sets.emplace_back(name, parse_predicate(line.substr(colon + 1)));
      } else {
        where("unknown directive '" + head + "'");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError && std::string(e.what()).rfind("line ", 0) == 0) throw;
      raise(e.kind(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  finish();
  return doc;
}

CadDocument load_cadspec(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cadspec(ss.str());
}

std::string print_cad(const std::string& name, const ConcreteCad& cad) {
  std::string out = "cad " + name + " dim=" + std::to_string(cad.dim) + " class=" + cad.cls.str() + "\n";
  out += "level1:";
  for (size_t i = 0; i < cad.level1.size(); ++i) out += (i ? ", " : " ") + extval_text(cad.level1[i]);
  out += "\n";
  for (int k = 1; k < cad.dim; ++k) {
    for (const auto& I : cad.cells(k)) {
      const auto& exprs = cad.cylinder(I);
      out += "cell " + to_string(I) + ": u=" + std::to_string(exprs.size());
      for (size_t j = 0; j < exprs.size(); ++j) out += "; xi" + std::to_string(2 * (j + 1)) + "=" + to_string(exprs[j]);
      out += "\n";
    }
  }
  return out;
}

std::string print_cadspec(const CadDocument& doc) {
  std::string out;
  for (const auto& [n, s] : doc.sets) out += "set " + n + ": " + to_string(s) + "\n";
  for (const auto& [n, c] : doc.cads) {
    if (!out.empty()) out += "\n";
    out += print_cad(n, c);
  }
  return out;
}

}  // namespace mincad
