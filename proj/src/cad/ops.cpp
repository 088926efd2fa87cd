#include "mincad/cad/ops.hpp"

#include <algorithm>

#include "mincad/errors.hpp"

namespace mincad {

std::vector<StructureIssue> check_cad_structure(const ConcreteCad& cad, const SamplePlan& plan) {
  std::vector<StructureIssue> issues;
  for (size_t i = 0; i < cad.level1.size(); ++i) {
    if (cad.level1[i].is_indeterminate()) {
      issues.push_back({{}, std::nullopt, "level-1 value " + std::to_string(i + 1) + " is indeterminate"});
    } else if (i > 0 && !cad.level1[i - 1].is_indeterminate() && compare(cad.level1[i - 1], cad.level1[i]) >= 0) {
      issues.push_back({{}, std::nullopt, "level-1 values " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                              " are not strictly increasing"});
    }
  }
  if (!issues.empty()) return issues;

  Sampler sampler(cad, plan);
  for (int k = 1; k < cad.dim; ++k) {
    for (const auto& B : cad.cells(k)) {
      auto it = cad.sections.find(B);
      if (it == cad.sections.end()) {
        issues.push_back({B, std::nullopt, "missing cylinder"});
        continue;
      }
      for (size_t j = 0; j < it->second.size(); ++j)
        if (it->second[j].arity() > k)
          issues.push_back({B, std::nullopt,
                            "section " + std::to_string(2 * (j + 1)) + " references x" +
                                std::to_string(it->second[j].arity())});
      const auto& pool = sampler.pool(B);
      if (pool.empty()) {
        issues.push_back({B, std::nullopt, "no rational sample in base cell"});
        continue;
      }
      size_t n = std::min(pool.size(), static_cast<size_t>(std::max(plan.audit, 1)));
      for (size_t s = 0; s < n; ++s) {
        auto vals = section_values(cad, B, pool[s]);
        const auto& exprs = cad.cylinder(B);
        // Values outside Q(sqrt q) are accepted when an interval encloses them.
        std::vector<std::optional<RatInterval>> boxes(vals.size());
        for (size_t j = 0; j < vals.size(); ++j) {
          if (!vals[j].is_indeterminate()) boxes[j] = vals[j].enclose(plan.max_bits);
          else boxes[j] = eval_interval(exprs[j], pool[s], plan.max_bits);
          if (!boxes[j]) {
            issues.push_back({B, pool[s], "section " + std::to_string(2 * (j + 1)) + " is undecidable"});
            continue;
          }
          if (j == 0 || !boxes[j - 1]) continue;
          bool ordered = !vals[j - 1].is_indeterminate() && !vals[j].is_indeterminate()
                             ? compare(vals[j - 1], vals[j]) < 0
                             : boxes[j - 1]->hi < boxes[j]->lo;
          if (!ordered)
            issues.push_back({B, pool[s],
                              "sections " + std::to_string(2 * j) + " and " + std::to_string(2 * (j + 1)) +
                                  " are not strictly ordered"});
        }
      }
    }
  }
  return issues;
}

namespace {

Label label_at(const Family& fam, const Point& p) {
  Label l;
  for (const auto& s : fam.sets) l.push_back(contains(s, p) ? 1 : 0);
  return l;
}

void grow(const ConcreteCad& cad, const Family& fam, Sampler& sampler, int audit, const Index& I, CadTree::Node& node) {
  if (level(I) == cad.dim) {
    const auto& pool = sampler.pool(I);
    if (pool.empty()) raise(ErrorKind::NoRationalWitness, "no rational sample in leaf " + to_string(I));
    node.label = label_at(fam, pool[0]);
    size_t n = std::min(pool.size(), static_cast<size_t>(std::max(audit, 1)));
    for (size_t s = 1; s < n; ++s)
      if (label_at(fam, pool[s]) != node.label)
        raise(ErrorKind::AdaptednessViolation, "leaf " + to_string(I) + " has label " + to_string(node.label) +
                                                   " at " + to_string(pool[0]) + " but " +
                                                   to_string(label_at(fam, pool[s])) + " at " + to_string(pool[s]));
    return;
  }
  int c = cad.child_count(I);
  node.children.resize(c);
  for (int j = 1; j <= c; ++j) grow(cad, fam, sampler, audit, child(I, j), node.children[j - 1]);
}

}  // namespace

CadTree build_tree(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan) {
  for (const auto& s : fam.sets)
    if (s.arity() > cad.dim)
      raise(ErrorKind::ArityMismatch, "set references x" + std::to_string(s.arity()) + " in R^" + std::to_string(cad.dim));
  CadTree t(cad.dim, static_cast<int>(fam.size()));
  Sampler sampler(cad, plan);
  grow(cad, fam, sampler, plan.audit, {}, t.root());
  return t;
}

ConcreteCad project(const ConcreteCad& cad, int k) {
  if (k < 1 || k > cad.dim)
    raise(ErrorKind::BadLevel, "cannot project to level " + std::to_string(k) + " of a CAD of R^" + std::to_string(cad.dim));
  ConcreteCad out;
  out.dim = k;
  out.cls = cad.cls;
  out.level1 = cad.level1;
  for (const auto& [I, exprs] : cad.sections)
    if (level(I) < k) out.sections.emplace(I, exprs);
  return out;
}

ConcreteCad cylinder_product(const ConcreteCad& cad) {
  ConcreteCad out = cad;
  out.dim = cad.dim + 1;
  for (const auto& L : cad.leaves()) out.sections[L] = {};
  return out;
}

ConcreteCad refine_with_section(const ConcreteCad& cad, const Index& I, const Expr& f, const SamplePlan& plan) {
  if (!is_sector(I) || !cad.valid_index(I) || level(I) >= cad.dim)
    raise(ErrorKind::BadLevel, to_string(I) + " is not a sector below the top level");
  int k = level(I);
  int j = I.back();
  if (f.arity() > k - 1)
    raise(ErrorKind::ArityMismatch, "section over " + to_string(parent(I)) + " may use x1..x" + std::to_string(k - 1));
  Index P = parent(I);
  size_t slot = static_cast<size_t>((j - 1) / 2);  // new 0-based position among the sections

  auto check_inside = [&](const std::vector<ExtVal>& vals, const Point& b) {
    ExtVal v;
    try {
      v = eval(f, b);
    } catch (const Error& e) {
      raise(ErrorKind::SectionOutOfRange, std::string("section is undefined at ") + to_string(b) + ": " + e.what());
    }
    if (v.is_indeterminate()) raise(ErrorKind::SectionOutOfRange, "section is undecidable at " + to_string(b));
    bool ok = true;
    if (slot > 0) ok = ok && !vals[slot - 1].is_indeterminate() && compare(vals[slot - 1], v) < 0;
    if (slot < vals.size()) ok = ok && !vals[slot].is_indeterminate() && compare(v, vals[slot]) < 0;
    if (!ok) raise(ErrorKind::SectionOutOfRange, "section value " + v.str() + " leaves sector " + to_string(I) + " at " + to_string(b));
    return v;
  };

  ConcreteCad out = cad;
  if (k == 1) {
    ExtVal v = check_inside(cad.level1, {});
    out.level1.insert(out.level1.begin() + static_cast<long>(slot), v);
  } else {
    Sampler sampler(cad, plan);
    const auto& pool = sampler.pool(P);
    size_t n = std::min(pool.size(), static_cast<size_t>(std::max(plan.audit, 1)));
    for (size_t s = 0; s < n; ++s) check_inside(section_values(cad, P, pool[s]), pool[s]);
    auto& cyl = out.sections[P];
    cyl.insert(cyl.begin() + static_cast<long>(slot), f);
  }

  // Renumber the cells above P: entries past the sector shift by two and the
  // sector's subtree is copied onto the new section and upper sector.
  std::map<Index, std::vector<Expr>> renamed;
  for (const auto& [key, exprs] : out.sections) {
    bool below = level(key) >= k && std::equal(P.begin(), P.end(), key.begin());
    if (!below) {
      renamed.emplace(key, exprs);
      continue;
    }
    int e = key[k - 1];
    if (e > j) {
      Index moved = key;
      moved[k - 1] += 2;
      renamed.emplace(moved, exprs);
    } else if (e == j) {
      for (int d = 0; d <= 2; ++d) {
        Index copy = key;
        copy[k - 1] += d;
        renamed.emplace(copy, exprs);
      }
    } else {
      renamed.emplace(key, exprs);
    }
  }
  out.sections = std::move(renamed);
  return out;
}

}  // namespace mincad
