#include "mincad/oracle/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mincad/cad/ops.hpp"
#include "mincad/errors.hpp"

namespace mincad {

mpz_class bell(int K) {
  if (K < 1) raise(ErrorKind::BadParameter, "bell needs K >= 1");
  // Bell triangle: each row starts with the last entry of the previous row.
  std::vector<mpz_class> row{1};
  for (int n = 1; n < K; ++n) {
    std::vector<mpz_class> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

size_t Coarsening::block_count() const {
  int m = -1;
  for (int b : block) m = std::max(m, b);
  return static_cast<size_t>(m + 1);
}

std::vector<std::vector<size_t>> Coarsening::blocks() const {
  std::vector<std::vector<size_t>> out(block_count());
  for (size_t i = 0; i < block.size(); ++i) out[static_cast<size_t>(block[i])].push_back(i);
  return out;
}

std::vector<std::vector<size_t>> Coarsening::canonical() const {
  auto b = blocks();
  std::sort(b.begin(), b.end());
  return b;
}

bool refines(const Coarsening& fine, const Coarsening& coarse) {
  std::map<int, int> image;
  for (size_t i = 0; i < fine.block.size(); ++i) {
    auto [it, fresh] = image.emplace(fine.block[i], coarse.block[i]);
    if (!fresh && it->second != coarse.block[i]) return false;
  }
  return true;
}

size_t enumerate_coarsenings(const ConcreteCad& cad, const std::function<bool(const Coarsening&)>& sink,
                             std::optional<size_t> cap) {
  size_t K = cad.leaf_count();
  if (!cap && K > 12)
    raise(ErrorKind::TooLarge, std::to_string(K) + " leaves exceed the exhaustive limit of 12 (Bell number " +
                                   bell(static_cast<int>(K)).get_str() + ")");
  size_t count = 0;
  if (K <= 1) return 0;
  // Restricted growth strings in lexicographic order; max[i] = max(a[0..i]).
  std::vector<int> a(K, 0), mx(K, 0);
  while (true) {
    if (static_cast<size_t>(mx[K - 1]) + 1 != K) {
      if (cap && count >= *cap) return count;
      ++count;
      if (!sink(Coarsening{a})) return count;
    }
    size_t i = K - 1;
    while (i > 0 && a[i] > mx[i - 1]) --i;
    if (i == 0) return count;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (size_t j = i + 1; j < K; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
}

namespace {

// Level-by-level view of a leaf partition with CAD shape.
struct Shape {
  int dim = 0;
  // block[k][cell]: block id of a level-k cell; level 0 holds the root.
  std::vector<std::map<Index, int>> block;
  // members[k][id]: cells of the block, in enumeration order.
  std::vector<std::vector<std::vector<Index>>> members;
  // seq[k][base id]: ids of the level-k blocks above a level-(k-1) block, bottom to top.
  std::vector<std::map<int, std::vector<int>>> seq;
  // first[k][cell id pair]: first fine child index of block id in column b.
  std::vector<std::map<std::pair<Index, int>, int>> first;
  // coarse[k][id]: index of the block in the coarse CAD.
  std::vector<std::vector<Index>> coarse;
};

Coarsening restricted_growth(const std::vector<int>& raw) {
  std::map<int, int> ren;
  Coarsening c;
  for (int b : raw) {
    auto it = ren.find(b);
    if (it == ren.end()) it = ren.emplace(b, static_cast<int>(ren.size())).first;
    c.block.push_back(it->second);
  }
  return c;
}

// Builds the shape or returns the reason it is not a CAD coarsening.
std::optional<std::string> analyze(const ConcreteCad& cad, const Coarsening& c, Shape& sh) {
  int n = cad.dim;
  sh.dim = n;
  sh.block.assign(static_cast<size_t>(n + 1), {});
  sh.members.assign(static_cast<size_t>(n + 1), {});
  sh.seq.assign(static_cast<size_t>(n + 1), {});
  sh.first.assign(static_cast<size_t>(n + 1), {});
  sh.coarse.assign(static_cast<size_t>(n + 1), {});
  auto leaves = cad.leaves();
  if (c.block.size() != leaves.size()) return "partition size does not match the leaf count";
  for (size_t i = 0; i < leaves.size(); ++i) sh.block[n][leaves[i]] = c.block[i];

  // Cylindricity: projections of blocks are equal or disjoint.
  for (int k = n - 1; k >= 0; --k) {
    std::map<int, std::set<Index>> proj;
    for (const auto& [cell, id] : sh.block[static_cast<size_t>(k + 1)]) proj[id].insert(parent(cell));
    std::map<std::set<Index>, int> ids;
    for (const auto& [id, cells] : proj) {
      auto it = ids.find(cells);
      if (it == ids.end()) it = ids.emplace(cells, static_cast<int>(ids.size())).first;
      for (const auto& cell : cells) {
        auto [pos, fresh] = sh.block[static_cast<size_t>(k)].emplace(cell, it->second);
        if (!fresh && pos->second != it->second)
          return "blocks above level " + std::to_string(k) + " overlap in projection at " + to_string(cell);
      }
    }
  }
  for (int k = 0; k <= n; ++k) {
    auto& mem = sh.members[static_cast<size_t>(k)];
    const auto& blk = sh.block[static_cast<size_t>(k)];
    int count = 0;
    for (const auto& [cell, id] : blk) count = std::max(count, id + 1);
    mem.assign(static_cast<size_t>(count), {});
    std::vector<Index> order = k == 0 ? std::vector<Index>{Index{}} : cad.cells(k);
    for (const auto& cell : order) mem[static_cast<size_t>(blk.at(cell))].push_back(cell);
  }

  // Shape of every cylinder above a base block.
  sh.coarse[0] = {Index{}};
  for (int k = 1; k <= n; ++k) {
    const auto& base_mem = sh.members[static_cast<size_t>(k - 1)];
    const auto& blk = sh.block[static_cast<size_t>(k)];
    sh.coarse[static_cast<size_t>(k)].assign(sh.members[static_cast<size_t>(k)].size(), {});
    for (size_t beta = 0; beta < base_mem.size(); ++beta) {
      std::optional<std::vector<int>> common;
      for (const auto& b : base_mem[beta]) {
        std::vector<int> ids;
        int u = cad.u(b);
        for (int j = 1; j <= 2 * u + 1; ++j) {
          int id = blk.at(child(b, j));
          if (!ids.empty() && ids.back() == id) continue;
          if (std::find(ids.begin(), ids.end(), id) != ids.end())
            return "block " + std::to_string(id) + " is not connected in the column over " + to_string(b);
          ids.push_back(id);
          sh.first[static_cast<size_t>(k)][{b, id}] = j;
        }
        // Runs must be a single section or sector..sector.
        for (size_t p = 0; p < ids.size(); ++p) {
          int s = sh.first[static_cast<size_t>(k)][{b, ids[p]}];
          int e = p + 1 < ids.size() ? sh.first[static_cast<size_t>(k)][{b, ids[p + 1]}] - 1 : 2 * u + 1;
          bool section = s == e && s % 2 == 0;
          bool sector = s % 2 == 1 && e % 2 == 1;
          if (!section && !sector)
            return "run " + std::to_string(s) + ".." + std::to_string(e) + " over " + to_string(b) +
                   " is neither a section nor a sector";
        }
        if (!common) common = ids;
        else if (*common != ids)
          return "columns over base block " + to_string(base_mem[beta].front()) + " order their cells differently";
      }
      sh.seq[static_cast<size_t>(k)][static_cast<int>(beta)] = *common;
      const Index& parent_coarse = sh.coarse[static_cast<size_t>(k - 1)][beta];
      for (size_t p = 0; p < common->size(); ++p)
        sh.coarse[static_cast<size_t>(k)][static_cast<size_t>((*common)[p])] = child(parent_coarse, static_cast<int>(p + 1));
    }
  }
  return std::nullopt;
}

Predicate cell_predicate(const ConcreteCad& cad, const Index& I) {
  std::vector<Predicate> parts;
  for (int l = 1; l <= level(I); ++l) {
    Index base(I.begin(), I.begin() + (l - 1));
    int j = I[static_cast<size_t>(l - 1)];
    int u = cad.u(base);
    auto sec = [&](int m) {
      return l == 1 ? Expr::from_value(cad.level1[static_cast<size_t>(m - 1)]) : cad.cylinder(base)[static_cast<size_t>(m - 1)];
    };
    Expr x = Expr::var(l);
    if (j % 2 == 0) {
      parts.push_back(Predicate::atom(x, Rel::Eq, sec(j / 2)));
      continue;
    }
    if (j > 1) parts.push_back(Predicate::atom(x, Rel::Gt, sec((j - 1) / 2)));
    if (j < 2 * u + 1) parts.push_back(Predicate::atom(x, Rel::Lt, sec((j + 1) / 2)));
  }
  if (parts.empty()) return Predicate::truth(true);
  if (parts.size() == 1) return parts[0];
  return Predicate::conj(parts);
}

const Expr& fine_section(const ConcreteCad& cad, const Index& b, int j) {
  return cad.cylinder(b)[static_cast<size_t>(j / 2 - 1)];
}

ConcreteCad build_coarse(const ConcreteCad& cad, const Shape& sh) {
  ConcreteCad out;
  out.dim = cad.dim;
  out.cls = cad.cls;
  const auto& top1 = sh.seq[1].at(0);
  for (size_t p = 0; p < top1.size(); ++p) {
    if (p % 2 == 0) continue;
    int j = sh.first[1].at({Index{}, top1[p]});
    out.level1.push_back(cad.level1[static_cast<size_t>(j / 2 - 1)]);
  }
  for (int k = 2; k <= cad.dim; ++k) {
    const auto& base_mem = sh.members[static_cast<size_t>(k - 1)];
    for (size_t beta = 0; beta < base_mem.size(); ++beta) {
      const auto& ids = sh.seq[static_cast<size_t>(k)].at(static_cast<int>(beta));
      std::vector<Expr> exprs;
      for (size_t p = 1; p < ids.size(); p += 2) {
        std::vector<std::pair<Predicate, Expr>> branches;
        bool same = true;
        for (const auto& b : base_mem[beta]) {
          const Expr& f = fine_section(cad, b, sh.first[static_cast<size_t>(k)].at({b, ids[p]}));
          if (!branches.empty() && !same_expr(f, branches.front().second)) same = false;
          branches.emplace_back(cell_predicate(cad, b), f);
        }
        if (same) {
          exprs.push_back(branches.front().second);
          continue;
        }
        Expr otherwise = branches.back().second;
        branches.pop_back();
        exprs.push_back(Expr::piecewise(branches, otherwise));
      }
      out.sections[sh.coarse[static_cast<size_t>(k - 1)][beta]] = std::move(exprs);
    }
  }
  return out;
}

// Reusable state for checking many partitions of one CAD.
class Checker {
 public:
  Checker(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan)
      : cad_(cad), plan_(plan), sampler_(cad, plan), tree_(build_tree(cad, fam, plan)), leaves_(cad.leaves()) {}

  bool labels_ok(const Coarsening& c, std::string* why = nullptr) const {
    std::map<int, const Label*> seen;
    for (size_t i = 0; i < leaves_.size(); ++i) {
      const Label& l = tree_.leaf_label(leaves_[i]);
      auto [it, fresh] = seen.emplace(c.block[i], &l);
      if (!fresh && *it->second != l) {
        if (why) *why = "block " + std::to_string(c.block[i]) + " mixes labels " + to_string(*it->second) + " and " + to_string(l);
        return false;
      }
    }
    return true;
  }

  CoarseningVerdict check(const Coarsening& c) {
    CoarseningVerdict v;
    if (c.block.size() != leaves_.size()) {
      v.reason = "partition size does not match the leaf count";
      return v;
    }
    if (!labels_ok(c, &v.reason)) return v;
    Shape sh;
    if (auto why = analyze(cad_, c, sh)) {
      v.reason = *why;
      return v;
    }
    for (int k = 2; k <= cad_.dim; ++k) {
      const auto& base_mem = sh.members[static_cast<size_t>(k - 1)];
      for (size_t beta = 0; beta < base_mem.size(); ++beta) {
        if (base_mem[beta].size() < 2) continue;
        std::set<Index> in_beta(base_mem[beta].begin(), base_mem[beta].end());
        const auto& ids = sh.seq[static_cast<size_t>(k)].at(static_cast<int>(beta));
        for (size_t p = 1; p < ids.size(); p += 2) {
          auto formula = [&](const Index& b) {
            return fine_section(cad_, b, sh.first[static_cast<size_t>(k)].at({b, ids[p]}));
          };
          for (const auto& mid : base_mem[beta]) {
            auto res = glue_at(mid, in_beta, formula);
            if (res.status == LiftStatus::Lifts) continue;
            v.flagged = res.status == LiftStatus::Unknown;
            v.reason = "section " + std::to_string((p + 1) / 2) + " over the block of " + to_string(base_mem[beta].front()) +
                       (v.flagged ? " is undecided: " : " does not glue: ") + res.reason;
            return v;
          }
        }
      }
    }
    v.accepted = true;
    return v;
  }

  const ConcreteCad& cad() const { return cad_; }
  const CadTree& tree() const { return tree_; }

 private:
  // Gluing of the merged section at the samples of one fine base cell.
  template <class F>
  LiftResult glue_at(const Index& mid, const std::set<Index>& in_beta, const F& formula) {
    LiftResult ok;
    ok.status = LiftStatus::Lifts;
    std::vector<int> axes;
    for (size_t a = 0; a < mid.size(); ++a)
      if (mid[a] % 2 == 0) axes.push_back(static_cast<int>(a));
    if (axes.empty()) return ok;
    const auto& pool = sampler_.pool(mid);
    if (pool.empty()) {
      LiftResult r;
      r.reason = "no rational witness in " + to_string(mid);
      return r;
    }
    size_t n = std::min(pool.size(), static_cast<size_t>(std::max(plan_.audit, 1)));
    for (size_t i = 0; i < n; ++i) {
      const Point& w = pool[i];
      for (int a : axes) {
        std::optional<GlueSide> sides[2];
        for (int d = 0; d < 2; ++d) {
          int dir = d == 0 ? -1 : 1;
          auto cell = side_cell(mid, w, a, dir, in_beta);
          if (cell) sides[d] = GlueSide{*cell, formula(*cell)};
        }
        if (!sides[0] && !sides[1]) continue;
        auto r = glue_check(cad_, sides[0], formula(mid), sides[1], w, a, plan_);
        if (r.status != LiftStatus::Lifts) return r;
      }
    }
    return ok;
  }

  // Cell of the block met when leaving w along the axis: the cell located by
  // the last approach points, else the index neighbour with the same tail.
  std::optional<Index> side_cell(const Index& mid, const Point& w, int axis, int dir, const std::set<Index>& in_beta) {
    auto offs = plan_.offsets();
    std::optional<Index> tail;
    bool consistent = offs.size() >= 3;
    for (size_t t = offs.size() >= 3 ? offs.size() - 3 : 0; t < offs.size(); ++t) {
      Point q = w;
      q[static_cast<size_t>(axis)] += dir * offs[t];
      auto loc = locate(cad_, q);
      if (!loc || (tail && *tail != *loc)) {
        consistent = false;
        break;
      }
      tail = loc;
    }
    if (consistent && tail && *tail != mid && in_beta.count(*tail)) return tail;
    Index nb = mid;
    nb[static_cast<size_t>(axis)] += dir;
    if (cad_.valid_index(nb) && in_beta.count(nb)) return nb;
    return std::nullopt;
  }

  const ConcreteCad& cad_;
  SamplePlan plan_;
  Sampler sampler_;
  CadTree tree_;
  std::vector<Index> leaves_;
};

// Column choices above one base block: per column, the kept section indices.
void column_choices(const ConcreteCad& cad, const std::vector<Index>& beta, size_t limit,
                    std::vector<std::vector<std::vector<int>>>& out) {
  int tmax = 1 << 30;
  for (const auto& b : beta) tmax = std::min(tmax, cad.u(b));
  for (int T = 0; T <= tmax; ++T) {
    std::vector<std::vector<std::vector<int>>> acc{{}};
    for (const auto& b : beta) {
      int u = cad.u(b);
      std::vector<std::vector<int>> subsets;
      std::vector<int> pick;
      std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(pick.size()) == T) {
          subsets.push_back(pick);
          return;
        }
        for (int m = from; m <= u - (T - static_cast<int>(pick.size())) + 1; ++m) {
          pick.push_back(2 * m);
          rec(m + 1);
          pick.pop_back();
        }
      };
      rec(1);
      std::vector<std::vector<std::vector<int>>> next;
      for (const auto& a : acc)
        for (const auto& s : subsets) {
          auto e = a;
          e.push_back(s);
          next.push_back(std::move(e));
          if (next.size() > limit) raise(ErrorKind::TooLarge, "structured enumeration exceeds its limit");
        }
      acc = std::move(next);
    }
    for (auto& a : acc) out.push_back(std::move(a));
    if (out.size() > limit) raise(ErrorKind::TooLarge, "structured enumeration exceeds its limit");
  }
}

// Block id of every child of the columns over beta, given kept sections.
void assign_children(const std::vector<Index>& beta, const std::vector<std::vector<int>>& kept, const ConcreteCad& cad,
                     int first_id, std::map<Index, int>& out, int& next_id) {
  size_t T = kept.empty() ? 0 : kept.front().size();
  for (size_t c = 0; c < beta.size(); ++c) {
    const auto& K = kept[c];
    for (int j = 1; j <= 2 * cad.u(beta[c]) + 1; ++j) {
      auto below = static_cast<int>(std::lower_bound(K.begin(), K.end(), j) - K.begin());
      bool is_kept = std::binary_search(K.begin(), K.end(), j);
      out[child(beta[c], j)] = first_id + 2 * below + (is_kept ? 1 : 0);
    }
  }
  next_id = first_id + static_cast<int>(2 * T + 1);
}

}  // namespace

CoarseningVerdict check_coarsening(const ConcreteCad& cad, const Coarsening& c, const Family& fam,
                                   const SamplePlan& plan) {
  Checker chk(cad, fam, plan);
  return chk.check(c);
}

bool is_cad_coarsening(const ConcreteCad& cad, const Coarsening& c, const Family& fam, const SamplePlan& plan) {
  return check_coarsening(cad, c, fam, plan).accepted;
}

ConcreteCad materialize(const ConcreteCad& cad, const Coarsening& c) {
  Shape sh;
  if (auto why = analyze(cad, c, sh)) raise(ErrorKind::NotReducible, *why);
  return build_coarse(cad, sh);
}

std::vector<Coarsening> structured_candidates(const ConcreteCad& cad, const Family& fam, size_t limit) {
  Checker chk(cad, fam, SamplePlan{});
  auto leaves = cad.leaves();
  std::vector<Coarsening> out;
  std::set<std::vector<int>> seen;
  // State: partition of the level-k cells as ordered blocks.
  std::function<void(int, const std::vector<std::vector<Index>>&)> rec =
      [&](int k, const std::vector<std::vector<Index>>& base) {
        if (k > cad.dim) return;
        std::vector<std::vector<std::vector<std::vector<int>>>> per_block;
        for (const auto& beta : base) {
          std::vector<std::vector<std::vector<int>>> choices;
          column_choices(cad, beta, limit, choices);
          if (k == cad.dim) {
            // Keep only choices whose blocks are label-homogeneous.
            std::vector<std::vector<std::vector<int>>> kept;
            for (auto& ch : choices) {
              std::map<Index, int> ids;
              int next = 0;
              assign_children(beta, ch, cad, 0, ids, next);
              std::map<int, Label> lab;
              bool ok = true;
              for (const auto& [cell, id] : ids) {
                auto [it, fresh] = lab.emplace(id, chk.tree().leaf_label(cell));
                if (!fresh && it->second != chk.tree().leaf_label(cell)) {
                  ok = false;
                  break;
                }
              }
              if (ok) kept.push_back(std::move(ch));
            }
            choices = std::move(kept);
          }
          per_block.push_back(std::move(choices));
        }
        std::vector<size_t> pick(per_block.size(), 0);
        for (const auto& pb : per_block)
          if (pb.empty()) return;
        while (true) {
          std::map<Index, int> ids;
          int next = 0;
          for (size_t b = 0; b < base.size(); ++b) assign_children(base[b], per_block[b][pick[b]], cad, next, ids, next);
          if (k == cad.dim) {
            std::vector<int> raw;
            for (const auto& l : leaves) raw.push_back(ids.at(l));
            auto c = restricted_growth(raw);
            if (!c.discrete() && seen.insert(c.block).second) {
              out.push_back(c);
              if (out.size() > limit) raise(ErrorKind::TooLarge, "structured enumeration exceeds its limit");
            }
          } else {
            std::vector<std::vector<Index>> blocks(static_cast<size_t>(next));
            for (const auto& cell : cad.cells(k)) blocks[static_cast<size_t>(ids.at(cell))].push_back(cell);
            rec(k + 1, blocks);
          }
          size_t b = 0;
          while (b < pick.size() && ++pick[b] == per_block[b].size()) pick[b++] = 0;
          if (b == pick.size()) break;
        }
      };
  rec(1, {{Index{}}});
  return out;
}

std::vector<std::pair<size_t, size_t>> Poset::covers() const {
  std::vector<std::pair<size_t, size_t>> out;
  size_t n = elements.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j || !leq[i][j]) continue;
      bool direct = true;
      for (size_t m = 0; m < n && direct; ++m)
        if (m != i && m != j && leq[i][m] && leq[m][j]) direct = false;
      if (direct) out.emplace_back(i, j);
    }
  return out;
}

size_t Poset::find(const Coarsening& c) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == c) return i;
  return elements.size();
}

Poset poset_below(const ConcreteCad& cad, const Family& fam, const SamplePlan& plan, EnumerationMode mode) {
  Poset P;
  size_t K = cad.leaf_count();
  Coarsening self;
  for (size_t i = 0; i < K; ++i) self.block.push_back(static_cast<int>(i));
  P.elements.push_back(self);
  Checker chk(cad, fam, plan);
  auto consider = [&](const Coarsening& c) {
    ++P.candidates;
    auto v = chk.check(c);
    if (v.accepted) P.elements.push_back(c);
    else if (v.flagged) P.inconclusive.push_back(c);
    return true;
  };
  bool exhaustive = mode == EnumerationMode::Exhaustive || (mode == EnumerationMode::Auto && K <= 9);
  if (exhaustive) {
    enumerate_coarsenings(cad, [&](const Coarsening& c) {
      // Cheap label test before the full check.
      if (!chk.labels_ok(c)) {
        ++P.candidates;
        return true;
      }
      return consider(c);
    });
  } else {
    P.pruned = true;
    for (const auto& c : structured_candidates(cad, fam)) consider(c);
  }
  size_t n = P.elements.size();
  P.leq.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) P.leq[i][j] = refines(P.elements[i], P.elements[j]);
  return P;
}

Coarsening node_coarsening(const ReductionDag& dag, size_t node) {
  const auto& lm = dag.nodes.at(node).leaf_map;
  std::map<Index, int> ids;
  Coarsening c;
  for (const auto& I : lm) {
    auto it = ids.find(I);
    if (it == ids.end()) it = ids.emplace(I, static_cast<int>(ids.size())).first;
    c.block.push_back(it->second);
  }
  return c;
}

CrossReport cross_validate(const ReductionDag& dag, const Poset& poset) {
  CrossReport rep;
  size_t N = dag.nodes.size(), E = poset.elements.size();
  std::vector<size_t> to_poset(N, E);
  std::vector<bool> hit(E, false);
  for (size_t i = 0; i < N; ++i) {
    auto c = node_coarsening(dag, i);
    size_t p = poset.find(c);
    if (p == E) {
      if (std::find(poset.inconclusive.begin(), poset.inconclusive.end(), c) != poset.inconclusive.end()) {
        ++rep.inconclusive;
        continue;
      }
      rep.nodes_agree = false;
      rep.mismatches.push_back("(i) DAG node " + std::to_string(i) + " is not a coarsening accepted by the oracle");
      continue;
    }
    if (hit[p]) {
      rep.nodes_agree = false;
      rep.mismatches.push_back("(i) poset element " + std::to_string(p) + " matches several DAG nodes");
    }
    hit[p] = true;
    to_poset[i] = p;
  }
  for (size_t p = 0; p < E; ++p)
    if (!hit[p]) {
      rep.nodes_agree = false;
      rep.mismatches.push_back("(i) poset element " + std::to_string(p) + " with " +
                               std::to_string(poset.elements[p].block_count()) + " cells is not a DAG node");
    }

  std::set<std::pair<size_t, size_t>> dag_edges, cover_edges;
  for (const auto& e : dag.edges)
    if (to_poset[e.from] < E && to_poset[e.to] < E) dag_edges.emplace(to_poset[e.from], to_poset[e.to]);
  for (const auto& [a, b] : poset.covers())
    if (hit[a] && hit[b]) cover_edges.insert({a, b});
  for (const auto& e : dag_edges)
    if (!cover_edges.count(e)) {
      rep.edges_agree = false;
      rep.mismatches.push_back("(ii) DAG edge " + std::to_string(e.first) + " -> " + std::to_string(e.second) +
                               " is not a covering pair");
    }
  for (const auto& e : cover_edges)
    if (!dag_edges.count(e)) {
      rep.edges_agree = false;
      rep.mismatches.push_back("(ii) covering pair " + std::to_string(e.first) + " -> " + std::to_string(e.second) +
                               " is not a DAG edge");
    }

  for (size_t i = 0; i < N; ++i) {
    if (to_poset[i] == E) continue;
    auto reach = dag.reachable_from(i);
    for (size_t j = 0; j < N; ++j) {
      if (to_poset[j] == E) continue;
      bool ord = poset.leq[to_poset[i]][to_poset[j]];
      if (reach[j] != ord) {
        rep.order_agree = false;
        rep.mismatches.push_back("(iii) node " + std::to_string(i) + (reach[j] ? " reaches " : " does not reach ") +
                                 "node " + std::to_string(j) + " but the oracle order says " + (ord ? "below" : "not below"));
      }
    }
  }
  return rep;
}

std::string poset_dot(const Poset& poset, const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) out += "// " + header_comment + "\n";
  out += "digraph coarsenings {\n  rankdir=TB;\n";
  auto covers = poset.covers();
  for (size_t i = 0; i < poset.elements.size(); ++i) {
    bool minimal = std::none_of(covers.begin(), covers.end(), [&](const auto& e) { return e.first == i; });
    out += "  p" + std::to_string(i) + " [shape=" + (minimal ? "doublecircle" : "circle") + ", label=\"" +
           std::to_string(i) + "\\n" + std::to_string(poset.elements[i].block_count()) + " cells\"];\n";
  }
  for (const auto& [a, b] : covers) out += "  p" + std::to_string(a) + " -> p" + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace mincad
