#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mincad/cad/concrete.hpp"
#include "mincad/cad/sampling.hpp"

namespace mincad::corpus {

// Where an expected value comes from: read off a worked example, computed
// independently of the code under test, or immediate from a definition.
enum class Provenance { Example, Derived, Trivial };
const char* to_string(Provenance p);

enum class FactKind {
  Leaves,                // expected: leaf count of cad
  Reductions,            // expected: tree reduction pivots of cad, "1.2, 3.2" or "none"
  Lift,                  // arg pivot; expected: verdict with full witness
  LiftVerdict,           // arg pivot; expected: verdict and witness point only
  NoLiftable,            // every tree-admissible pivot of cad fails; expected "none"
  Minimal,               // expected: "<cad name> via <pivots>" reached by minimal(cad)
  NormalForms,           // expected: "<verdict>: <cad names>" for the DAG below cad
  DistinctFingerprints,  // arg: comma-separated cad names; expected "distinct"
  SameFingerprint,       // arg: other cad; expected "same"
  Labels,                // expected: leaf labels of cad as bit strings
  Adapted,               // arg: comma-separated set names; expected "adapted"
  ProjectionAdapted,     // arg: "k: set names"; projection of cad onto R^k is adapted
  ComplementFlip,        // labels under the complement family are the bitwise flip
  Behaviour,             // arg: point; expected: behaviour text
  BehaviourClasses,      // cad is the base; expected: "<n> classes, constant"
  AnalyticIdentity,      // arg: sample count; expected: "0 failures"
};
const char* to_string(FactKind k);

struct ExpectedFact {
  FactKind kind;
  std::string cad;
  std::string arg;
  std::string expected;
  Provenance provenance = Provenance::Derived;
  std::string anchor;  // the worked example or construction the value belongs to
};

struct CorpusEntry {
  std::string name;
  std::string fixture;  // fixture file the CADs were parsed from
  std::string summary;
  CadDocument doc;      // parsed fixture plus CADs generated from it
  std::vector<std::string> family_sets;
  std::vector<std::string> cad_names;     // CADs adapted to the family
  std::optional<RegClass> check_class;    // regularity used for gluing checks
  std::vector<ExpectedFact> facts;
  std::vector<std::string> notes;

  Family family() const;
  // CAD by name with check_class applied.
  ConcreteCad cad(const std::string& name) const;
};

std::vector<std::string> entry_names();
std::vector<std::string> fixture_names();
// Text of an embedded fixture; raises UnknownEntry.
const std::string& fixture_text(const std::string& file);

// Parsed and structure-checked entry. Raises UnknownEntry for unknown names
// and InvalidCad when a CAD fails check_cad_structure.
CorpusEntry load(const std::string& name);

struct FactOutcome {
  ExpectedFact fact;
  std::string observed;
  bool ok = false;
};

std::vector<FactOutcome> check_entry(const CorpusEntry& entry, const SamplePlan& plan = {});

// CAD of the trousers set whose level-1 section sits at t instead of 0: no
// level-2 section left of t, and the tilted sheet glued to the plane by a
// piecewise section that vanishes on (t, 0]. Raises BadParameter for t > 0.
ConcreteCad d_t_generator(const Rat& t);

struct IdentityReport {
  size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Checks 4z^4 - 4z^2 x - y^2 = 0 and yz < 0 exactly for the analytic trousers
// section z = g(x, y) at count Pythagorean points, and z = 0 on the negative
// x axis.
IdentityReport verify_analytic_trousers(size_t count);

}  // namespace mincad::corpus
