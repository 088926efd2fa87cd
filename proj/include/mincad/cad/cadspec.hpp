#pragma once

#include <string>

#include "mincad/cad/concrete.hpp"

namespace mincad {

// Text grammar shared by the CADSPEC format, the CLI and the Python module.
Expr parse_expr(const std::string& text);
Predicate parse_predicate(const std::string& text);
// A closed expression evaluated exactly ("-1", "1/2", "1 + 2 * sqrt(3)").
ExtVal parse_extval(const std::string& text);
std::string extval_text(const ExtVal& v);

// Line-oriented document:
//   cad <name> dim=<n> class=<r>
//   level1: <value>, ...
//   cell <i1.i2...>: u=<m>; xi2=<expr>; ...; xi2m=<expr>
//   set <name>: <predicate>
// '#' starts a comment, a trailing '\' joins the next line.
CadDocument parse_cadspec(const std::string& text);
CadDocument load_cadspec(const std::string& path);
std::string print_cad(const std::string& name, const ConcreteCad& cad);
std::string print_cadspec(const CadDocument& doc);

// Structural validation applied by the parser: complete u-counts, section
// arities, sqrt nesting depth. Raises InvalidCad.
void validate_shape(const ConcreteCad& cad);

}  // namespace mincad
