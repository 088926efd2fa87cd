#include <algorithm>
#include <map>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/corpus/corpus.hpp"
#include "mincad/errors.hpp"

namespace mincad::corpus {

using mincad::to_string;

namespace detail {
// Defined in the generated fixtures source: (file name, text) pairs.
const std::vector<std::pair<std::string, std::string>>& embedded_fixtures();
}  // namespace detail

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Example: return "example";
    case Provenance::Derived: return "derived";
    case Provenance::Trivial: return "trivial";
  }
  return "?";
}

const char* to_string(FactKind k) {
  switch (k) {
    case FactKind::Leaves: return "leaves";
    case FactKind::Reductions: return "reductions";
    case FactKind::Lift: return "lift";
    case FactKind::LiftVerdict: return "lift-verdict";
    case FactKind::NoLiftable: return "no-liftable";
    case FactKind::Minimal: return "minimal";
    case FactKind::NormalForms: return "normal-forms";
    case FactKind::DistinctFingerprints: return "distinct-fingerprints";
    case FactKind::SameFingerprint: return "same-fingerprint";
    case FactKind::Labels: return "labels";
    case FactKind::Adapted: return "adapted";
    case FactKind::ProjectionAdapted: return "projection-adapted";
    case FactKind::ComplementFlip: return "complement-flip";
    case FactKind::Behaviour: return "behaviour";
    case FactKind::BehaviourClasses: return "behaviour-classes";
    case FactKind::AnalyticIdentity: return "analytic-identity";
  }
  return "?";
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::embedded_fixtures()) out.push_back(name);
  std::sort(out.begin(), out.end());
  return out;
}

const std::string& fixture_text(const std::string& file) {
  for (const auto& [name, text] : detail::embedded_fixtures())
    if (name == file) return text;
  raise(ErrorKind::UnknownEntry, "no embedded fixture '" + file + "'");
}

Family CorpusEntry::family() const { return doc.family(family_sets); }

ConcreteCad CorpusEntry::cad(const std::string& name) const {
  ConcreteCad c = doc.cad(name);
  if (check_class) c.cls = *check_class;
  return c;
}

namespace {

using P = Provenance;
using K = FactKind;

struct Recipe {
  std::string name;
  std::string fixture;
  std::string summary;
  std::vector<std::string> family_sets;
  std::vector<std::string> cad_names;
  std::optional<RegClass> check_class;
  std::vector<ExpectedFact> facts;
  std::vector<std::string> notes;
};

ExpectedFact fact(K kind, std::string cad, std::string arg, std::string expected, P prov, std::string anchor) {
  return {kind, std::move(cad), std::move(arg), std::move(expected), prov, std::move(anchor)};
}

std::vector<Recipe> recipes() {
  std::vector<Recipe> r;

  r.push_back({"trousers", "trousers.cadspec",
               "Trousers: two minimal CADs with no common coarsening, and the family D^t of further minima.",
               {"T"},
               {"C", "Cprime", "Cbar", "D0", "D-1", "D-2", "D-3"},
               std::nullopt,
               {
                   fact(K::Leaves, "C", "", "9", P::Example, "trousers: minimal CAD C"),
                   fact(K::Leaves, "Cprime", "", "15", P::Example, "trousers: minimal CAD C'"),
                   fact(K::Leaves, "Cbar", "", "27", P::Derived, "trousers: common refinement, 3 x 3 x 3 cells"),
                   fact(K::Reductions, "C", "", "1.2", P::Example, "trousers: reduction set of Tree(C)"),
                   fact(K::Reductions, "Cprime", "", "3.2", P::Example, "trousers: reduction set of Tree(C')"),
                   fact(K::Reductions, "Cbar", "", "1.2, 2, 2.2, 3.2", P::Derived,
                        "trousers: equal columns everywhere, so every even pivot is tree-admissible"),
                   fact(K::Lift, "C", "1.2", "fails @(1, 0) side 1.3.2: -1/2 vs 0", P::Example,
                        "trousers: sheet z = -x/2 meets the plane only at x = 0"),
                   fact(K::Lift, "Cprime", "3.2", "fails @(1, 0) side 3.3.2: -1/2 vs 0", P::Derived,
                        "trousers: same sheet over x > 0"),
                   fact(K::Minimal, "C", "", "C via none", P::Example, "trousers: C is minimal"),
                   fact(K::Minimal, "Cprime", "", "Cprime via none", P::Example, "trousers: C' is minimal"),
                   fact(K::NormalForms, "Cbar", "", "MultipleNormalForms: C, Cprime", P::Example,
                        "trousers: no minimum CAD"),
                   fact(K::DistinctFingerprints, "", "C, Cprime", "distinct", P::Example, "trousers: C differs from C'"),
                   fact(K::ComplementFlip, "C", "", "flipped", P::Trivial, "complement family"),
                   fact(K::SameFingerprint, "D0", "Cprime", "same", P::Example, "D^t: D^0 coincides with C'"),
                   fact(K::Leaves, "D-1", "", "15", P::Derived, "D^t: same cell skeleton as C'"),
                   fact(K::Reductions, "D-1", "", "3.2", P::Derived, "D^t: same tree as C'"),
                   fact(K::NoLiftable, "D0", "", "none", P::Example, "D^t: every D^t is minimal"),
                   fact(K::NoLiftable, "D-1", "", "none", P::Example, "D^t: every D^t is minimal"),
                   fact(K::NoLiftable, "D-2", "", "none", P::Example, "D^t: every D^t is minimal"),
                   fact(K::NoLiftable, "D-3", "", "none", P::Example, "D^t: every D^t is minimal"),
                   fact(K::DistinctFingerprints, "", "D0, D-1, D-2, D-3", "distinct", P::Example,
                        "D^t: distinct level-1 sections"),
               },
               {"D0 .. D-3 come from d_t_generator, not from the fixture."}});

  r.push_back({"disk", "disk.cadspec", "Closed unit disk: C' and C'' reduce to the minimum C.",
               {"D"},
               {"C", "Cprime", "Cdouble"},
               std::nullopt,
               {
                   fact(K::Leaves, "C", "", "13", P::Example, "disk: minimum CAD"),
                   fact(K::Leaves, "Cprime", "", "23", P::Example, "disk: CAD with the extra line x = 0"),
                   fact(K::Leaves, "Cdouble", "", "29", P::Derived, "disk: C' sliced by f over two columns"),
                   fact(K::Reductions, "C", "", "none", P::Example, "disk: C is minimal"),
                   fact(K::Reductions, "Cprime", "", "4", P::Example, "disk: merge across x = 0"),
                   fact(K::Reductions, "Cdouble", "", "3.6, 4, 4.6, 5.6", P::Derived,
                        "disk: slices by f plus the level-1 merge"),
                   fact(K::Lift, "Cprime", "4", "lifts", P::Example, "disk: the circle glues across x = 0"),
                   fact(K::Minimal, "Cprime", "", "C via 4", P::Example, "disk: Minimal(C') = C"),
                   fact(K::NormalForms, "Cdouble", "", "UniqueNormalForm: C", P::Example, "disk: Hasse diagram below C''"),
                   fact(K::ComplementFlip, "C", "", "flipped", P::Trivial, "complement family"),
               },
               {}});

  r.push_back({"analytic-trousers", "analytic-trousers.cadspec",
               "Analytic trousers: the quartic sheet 4z^4 - 4z^2 x - y^2 = 0, yz < 0, plus the line y = z = 0.",
               {"Tw"},
               {"C", "Cprime", "Cbar"},
               RegClass::finite(0),
               {
                   fact(K::Leaves, "C", "", "9", P::Derived, "analytic trousers: same skeleton as trousers C"),
                   fact(K::Leaves, "Cprime", "", "15", P::Derived, "analytic trousers: same skeleton as trousers C'"),
                   fact(K::Leaves, "Cbar", "", "27", P::Derived, "analytic trousers: common refinement"),
                   fact(K::Reductions, "C", "", "1.2", P::Derived, "analytic trousers: tree of C"),
                   fact(K::Reductions, "Cprime", "", "3.2", P::Derived, "analytic trousers: tree of C'"),
                   fact(K::LiftVerdict, "C", "1.2", "fails @(1, 0)", P::Derived,
                        "analytic trousers: g tends to sqrt(x) as y -> 0-"),
                   fact(K::LiftVerdict, "Cprime", "3.2", "fails @(1, 0)", P::Derived,
                        "analytic trousers: g tends to sqrt(x) as y -> 0-"),
                   fact(K::NormalForms, "Cbar", "", "MultipleNormalForms: C, Cprime", P::Example,
                        "analytic trousers: no minimum CAD"),
                   fact(K::DistinctFingerprints, "", "C, Cprime", "distinct", P::Example,
                        "analytic trousers: C differs from C'"),
                   fact(K::AnalyticIdentity, "", "100", "0 failures", P::Derived,
                        "analytic trousers: g solves the quartic at Pythagorean points"),
               },
               {"Gluing is checked at class 0; analytic gluing is not decided."}});

  r.push_back({"trousers4", "trousers.cadspec",
               "Trousers times R: cylinder products keep both normal forms.",
               {"T"},
               {"C4", "Cprime4", "Cbar4"},
               std::nullopt,
               {
                   fact(K::Leaves, "C4", "", "9", P::Trivial, "product: one child per leaf"),
                   fact(K::Leaves, "Cprime4", "", "15", P::Trivial, "product: one child per leaf"),
                   fact(K::Leaves, "Cbar4", "", "27", P::Trivial, "product: one child per leaf"),
                   fact(K::Reductions, "C4", "", "1.2", P::Derived, "product: reductions of the base tree"),
                   fact(K::NormalForms, "Cbar4", "", "MultipleNormalForms: C4, Cprime4", P::Example,
                        "product trousers: no minimum CAD"),
               },
               {"C4, Cprime4 and Cbar4 are cylinder products of the trousers CADs."}});

  r.push_back({"closedball", "closedball.cadspec", "Closed unit ball: a finer start reduces to the minimum.",
               {"Ball"},
               {"M", "Mfine"},
               std::nullopt,
               {
                   fact(K::Leaves, "M", "", "25", P::Derived, "closed ball: disk base cut by the sphere"),
                   fact(K::Leaves, "Mfine", "", "53", P::Derived, "closed ball: x = 0 and the equator added"),
                   fact(K::NoLiftable, "M", "", "none", P::Example, "closed ball: M is minimal"),
                   fact(K::NormalForms, "Mfine", "", "UniqueNormalForm: M", P::Example,
                        "closed ball: the finer start converges to M"),
                   fact(K::BehaviourClasses, "M", "", "3 classes, constant", P::Derived,
                        "closed ball: outside, circle, open disk"),
                   fact(K::ComplementFlip, "M", "", "flipped", P::Trivial, "complement family"),
               },
               {}});

  r.push_back({"doubleparabolas", "doubleparabolas.cadspec",
               "Two parabolic cylinders: components and projections are adapted.",
               {"P"},
               {"M", "Mfine"},
               std::nullopt,
               {
                   fact(K::Leaves, "M", "", "15", P::Derived, "double parabolas: three columns of 5 cells"),
                   fact(K::NoLiftable, "M", "", "none", P::Example, "double parabolas: M is minimal"),
                   fact(K::NormalForms, "Mfine", "", "UniqueNormalForm: M", P::Example,
                        "double parabolas: the finer start converges to M"),
                   fact(K::Adapted, "M", "P1, P2", "adapted", P::Example,
                        "double parabolas: adapted to the connected components"),
                   fact(K::ProjectionAdapted, "M", "2: P1proj", "adapted", P::Example,
                        "double parabolas: projection adapted to the projected component"),
                   fact(K::ComplementFlip, "M", "", "flipped", P::Trivial, "complement family"),
               },
               {"Components P1, P2 and the projection P1proj are supplied by hand."}});

  for (const char* n : {"counterclosed-B", "counterclosed-U", "A-eta", "Pi-gamma"}) {
    std::string name = n;
    std::string set = name == "counterclosed-B" ? "B" : name == "counterclosed-U" ? "U" : name == "A-eta" ? "A" : "Pi";
    Recipe e{name, name + ".cadspec", "", {set}, {"C", "Cprime"}, std::nullopt, {}, {}};
    e.facts = {
        fact(K::NoLiftable, "C", "", "none", P::Example, name + ": C is minimal"),
        fact(K::NoLiftable, "Cprime", "", "none", P::Example, name + ": C' is minimal"),
        fact(K::DistinctFingerprints, "", "C, Cprime", "distinct", P::Example, name + ": no minimum CAD"),
        fact(K::ComplementFlip, "C", "", "flipped", P::Trivial, "complement family"),
    };
    if (name == "counterclosed-B") {
      e.summary = "Box with a fin: the fin's top edge z = x + 1 cannot be glued across y = 0.";
      e.facts.push_back(fact(K::Leaves, "C", "", "73", P::Derived, "box with fin: C"));
      e.facts.push_back(fact(K::Leaves, "Cprime", "", "107", P::Derived, "box with fin: C'"));
      e.facts.push_back(fact(K::Lift, "C", "3.4", "fails @(1/2, 0) side 3.3.4: 1 vs 3/2", P::Derived,
                             "box with fin: top of the fin above the box top"));
    } else if (name == "counterclosed-U") {
      e.summary = "Closed region under z = -x/y: the boundary section diverges at y = 0.";
      e.facts.push_back(fact(K::Leaves, "C", "", "9", P::Derived, "h-region: C"));
    } else if (name == "A-eta") {
      e.summary = "The surface x^2 + 4yz = 0: eta = -x^2/(4y) diverges at y = 0.";
      e.facts.push_back(fact(K::Leaves, "C", "", "9", P::Derived, "eta surface: C"));
      e.facts.push_back(fact(K::Leaves, "Cprime", "", "21", P::Derived, "eta surface: C'"));
    } else {
      e.summary = "Plane z = 0 off y = 0 and the line z = -x on y = 0: a jump along y = 0.";
      e.facts.push_back(fact(K::Leaves, "C", "", "9", P::Derived, "jump set: C"));
      e.facts.push_back(fact(K::Leaves, "Cprime", "", "21", P::Derived, "jump set: C'"));
      e.facts.push_back(fact(K::Lift, "C", "1.2", "fails @(1, 0) side 1.1.2: 0 vs -1", P::Derived,
                             "jump set: plane meets the line only at x = 0"));
    }
    r.push_back(e);
  }

  r.push_back({"pointless-ball", "pointless-ball.cadspec", "Closed unit ball without its north pole.",
               {"PB"},
               {"M"},
               std::nullopt,
               {
                   fact(K::Leaves, "M", "", "61", P::Derived, "pointless ball: cylinders over the 25-cell base"),
                   fact(K::Reductions, "M", "", "none", P::Derived, "pointless ball: M is minimal"),
                   fact(K::BehaviourClasses, "M", "", "4 classes, constant", P::Example,
                        "pointless ball: behaviour table"),
                   fact(K::Behaviour, "", "1/2, 0", "(0,1,1,1,0)", P::Example, "pointless ball: open disk"),
                   fact(K::Behaviour, "", "0, 0", "(0,1,1,0,0)", P::Example, "pointless ball: origin"),
                   fact(K::Behaviour, "", "1, 0", "(0,1,0)", P::Example, "pointless ball: circle"),
                   fact(K::Behaviour, "", "2, 0", "(0)", P::Example, "pointless ball: outside"),
                   fact(K::ComplementFlip, "M", "", "flipped", P::Trivial, "complement family"),
               },
               {"M2 is the planar base of M on its own."}});

  r.push_back({"halfspace0", "halfspace0.cadspec", "Closed upper half-plane without the origin.",
               {"S"},
               {"M", "Mfine"},
               std::nullopt,
               {
                   fact(K::Leaves, "M", "", "9", P::Derived, "half-plane: three columns of 3 cells"),
                   fact(K::Leaves, "Mfine", "", "23", P::Derived, "half-plane: x = -1, x = 1 and an extra section over -1 < x < 0"),
                   fact(K::NoLiftable, "M", "", "none", P::Example, "half-plane: M is minimal"),
                   fact(K::NormalForms, "Mfine", "", "UniqueNormalForm: M", P::Derived,
                        "half-plane: the finer start converges to M"),
                   fact(K::Behaviour, "", "1", "(0,1,1)", P::Example, "half-plane: generic fiber"),
                   fact(K::Behaviour, "", "-1", "(0,1,1)", P::Example, "half-plane: generic fiber"),
                   fact(K::Behaviour, "", "0", "(0,0,1)", P::Example, "half-plane: fiber over 0"),
                   fact(K::BehaviourClasses, "M", "", "2 classes, constant", P::Example,
                        "half-plane: two behaviours"),
                   fact(K::ComplementFlip, "M", "", "flipped", P::Trivial, "complement family"),
               },
               {}});

  r.push_back({"behaviour1", "behaviour1.cadspec", "Two subsets of the line and their minimum CAD.",
               {"S1", "S2"},
               {"M", "Mfine"},
               std::nullopt,
               {
                   fact(K::Labels, "M", "", "(0,0) (1,0) (1,0) (0,1) (0,1) (1,1) (0,1)", P::Example,
                        "line family: labels of the minimum"),
                   fact(K::NoLiftable, "M", "", "none", P::Example, "line family: M is the minimum"),
                   fact(K::Minimal, "Mfine", "", "M via 2, 6, 8", P::Derived,
                        "line family: drop -3, then 1/2, then 3"),
                   fact(K::NormalForms, "Mfine", "", "UniqueNormalForm: M", P::Example,
                        "line family: minimum exists in dimension 1"),
                   fact(K::ComplementFlip, "M", "", "flipped", P::Trivial, "complement family"),
               },
               {}});
  return r;
}

void check_structure(const std::string& entry, const std::string& name, const ConcreteCad& cad) {
  auto issues = check_cad_structure(cad);
  if (!issues.empty())
    raise(ErrorKind::InvalidCad, entry + ": CAD " + name + " at " + to_string(issues.front().base) + ": " +
                                     issues.front().what);
}

}  // namespace

std::vector<std::string> entry_names() {
  std::vector<std::string> out;
  for (const auto& r : recipes()) out.push_back(r.name);
  return out;
}

CorpusEntry load(const std::string& name) {
  for (auto& r : recipes()) {
    if (r.name != name) continue;
    CorpusEntry e;
    e.name = r.name;
    e.fixture = r.fixture;
    e.summary = r.summary;
    e.doc = parse_cadspec(fixture_text(r.fixture));
    e.family_sets = r.family_sets;
    e.cad_names = r.cad_names;
    e.check_class = r.check_class;
    e.facts = r.facts;
    e.notes = r.notes;
    for (const auto& [n, c] : e.doc.cads) check_structure(name, n, c);
    if (name == "trousers") {
      for (int t : {0, -1, -2, -3}) {
        auto d = d_t_generator(Rat(t));
        check_structure(name, "D" + std::to_string(t), d);
        e.doc.cads.emplace_back("D" + std::to_string(t), d);
      }
    } else if (name == "trousers4") {
      CadDocument base = e.doc;
      e.doc.cads.clear();
      for (const auto& [n, c] : base.cads) e.doc.cads.emplace_back(n + "4", cylinder_product(c));
    }
    return e;
  }
  raise(ErrorKind::UnknownEntry, "no corpus entry '" + name + "'");
}

}  // namespace mincad::corpus
