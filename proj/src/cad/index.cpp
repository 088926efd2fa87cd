#include "mincad/cad/index.hpp"

#include <cctype>

#include "mincad/errors.hpp"

namespace mincad {

std::string to_string(const Index& I) {
  if (I.empty()) return "()";
  std::string out;
  for (size_t i = 0; i < I.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(I[i]);
  }
  return out;
}

Index parse_index(const std::string& text) {
  if (text == "()" || text.empty()) return {};
  Index I;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t dot = text.find_first_of(".,", pos);
    std::string part = text.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front()))) part.erase(part.begin());
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back()))) part.pop_back();
    if (part == "(" || part == ")") part.clear();
    if (!part.empty() && part.front() == '(') part.erase(part.begin());
    if (!part.empty() && part.back() == ')') part.pop_back();
    if (part.empty()) raise(ErrorKind::ParseError, "bad index '" + text + "'");
    for (char c : part)
      if (!std::isdigit(static_cast<unsigned char>(c))) raise(ErrorKind::ParseError, "bad index '" + text + "'");
    int v = std::stoi(part);
    if (v < 1) raise(ErrorKind::ParseError, "index entries must be positive in '" + text + "'");
    I.push_back(v);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return I;
}

}  // namespace mincad
