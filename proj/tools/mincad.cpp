// Command-line front end: reads CADSPEC files (or corpus entries) and writes
// line-delimited JSON reports, DOT graphs and CADSPEC results.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mincad/cad/cadspec.hpp"
#include "mincad/cad/ops.hpp"
#include "mincad/corpus/corpus.hpp"
#include "mincad/errors.hpp"
#include "mincad/lowdim/lowdim.hpp"
#include "mincad/oracle/oracle.hpp"
#include "mincad/reduction/reduction.hpp"
#include "mincad/tree/rewrite.hpp"

using namespace mincad;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitInput = 2;

struct Options {
  std::string input;
  std::string cad;
  std::string family;
  std::string out;
  std::string pivot;
  std::string at;
  std::string mode;
  std::vector<std::string> sets1d;
  std::string entry;
  int bell_k = 0;
  unsigned long seed = 0;
  int audit = 0;
  bool expect_unique = false;
  bool dot = false;
};

// Loaded input: a CADSPEC document with its default family and class override.
struct Input {
  CadDocument doc;
  std::vector<std::string> default_sets;
  std::optional<RegClass> check_class;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(item.substr(a, item.find_last_not_of(" \t") - a + 1));
  }
  return out;
}

Point parse_point(const std::string& text) {
  Point p;
  for (const auto& c : split_names(text)) {
    Rat q;
    if (q.set_str(c, 10) != 0) raise(ErrorKind::ParseError, "bad coordinate '" + c + "'");
    if (q.get_den() == 0) raise(ErrorKind::ParseError, "bad coordinate '" + c + "'");
    q.canonicalize();
    p.push_back(q);
  }
  if (p.empty()) raise(ErrorKind::ParseError, "--at needs at least one coordinate");
  return p;
}

class Run {
 public:
  Run(std::string command, Options opt) : command_(std::move(command)), opt_(std::move(opt)) {
    if (opt_.audit > 0) plan_.audit = opt_.audit;
  }

  int exec();

 private:
  int tree();
  int reduce();
  int minimal_cmd();
  int dag();
  int confluence();
  int transred();
  int min1d();
  int fiber_cmd();
  int behaviour_cmd();
  int bpartition();
  int oracle();
  int bell_cmd();
  int corpus_cmd();
  int product();

  void load_input() {
    if (opt_.input.rfind("corpus:", 0) == 0) {
      auto e = corpus::load(opt_.input.substr(7));
      in_.doc = e.doc;
      in_.default_sets = e.family_sets;
      in_.check_class = e.check_class;
    } else {
      if (!std::filesystem::exists(opt_.input)) raise(ErrorKind::ParseError, "no such file: " + opt_.input);
      in_.doc = load_cadspec(opt_.input);
    }
  }

  ConcreteCad cad() {
    std::string name = opt_.cad;
    if (name.empty()) {
      if (in_.doc.cads.size() != 1) raise(ErrorKind::BadParameter, "--cad is required when the input has several CADs");
      name = in_.doc.cads.front().first;
    }
    ConcreteCad c = in_.doc.cad(name);
    if (in_.check_class) c.cls = *in_.check_class;
    cad_name_ = name;
    return c;
  }

  Family family() {
    auto names = opt_.family.empty() ? in_.default_sets : split_names(opt_.family);
    return in_.doc.family(names);
  }

  // Name of a document CAD with the same geometry, or the fingerprint.
  std::string name_of(const ConcreteCad& c) {
    auto fp = canonical_fingerprint(c, plan_);
    for (const auto& [n, other] : in_.doc.cads) {
      ConcreteCad o = other;
      if (in_.check_class) o.cls = *in_.check_class;
      if (o.dim == c.dim && canonical_fingerprint(o, plan_) == fp) return n;
    }
    return "fp:" + fp;
  }

  void emit(const Json& j) { lines_.push_back(j.dump()); }
  void emit_raw(const std::string& line) { lines_.push_back(line); }

  void artifact(const std::string& file, const std::string& text) { artifacts_.emplace_back(file, text); }

  std::string header() const {
    std::string h = "# mincad-report v1 command=" + command_;
    if (!opt_.input.empty()) h += " input=" + opt_.input;
    if (!cad_name_.empty()) h += " cad=" + cad_name_;
    if (!opt_.family.empty()) h += " family=" + opt_.family;
    h += " seed=" + std::to_string(opt_.seed);
    return h;
  }

  void flush() {
    std::string report = header() + "\n";
    for (const auto& l : lines_) report += l + "\n";
    if (!opt_.out.empty()) {
      std::filesystem::create_directories(opt_.out);
      std::ofstream(std::filesystem::path(opt_.out) / "report.jsonl") << report;
      for (const auto& [file, text] : artifacts_) std::ofstream(std::filesystem::path(opt_.out) / file) << text;
    }
    if (opt_.dot && !dot_.empty()) std::cout << dot_;
    else std::cout << report;
  }

  Json witness_json(const LiftResult& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["reason"] = r.reason;
    if (r.witness) {
      const auto& w = *r.witness;
      auto text = [](const ExtVal& v) { return v.is_indeterminate() ? std::string("undefined") : extval_text(v); };
      j["witness"] = {{"point", to_string(w.point)},
                      {"level", w.level},
                      {"side_cell", to_string(w.side_cell)},
                      {"section", w.section},
                      {"side_value", w.divergent ? std::string("unbounded") : text(w.side_value)},
                      {"section_value", text(w.section_value)},
                      {"gap", text(w.gap)}};
    }
    return j;
  }

  std::string command_;
  Options opt_;
  SamplePlan plan_;
  Input in_;
  std::string cad_name_;
  std::vector<std::string> lines_;
  std::vector<std::pair<std::string, std::string>> artifacts_;
  std::string dot_;
};

int Run::exec() {
  int code = kExitOk;
  if (command_ == "bell") code = bell_cmd();
  else if (command_ == "min1d") code = min1d();
  else if (command_ == "corpus") code = corpus_cmd();
  else {
    load_input();
    if (command_ == "tree") code = tree();
    else if (command_ == "reduce") code = reduce();
    else if (command_ == "minimal") code = minimal_cmd();
    else if (command_ == "dag") code = dag();
    else if (command_ == "confluence") code = confluence();
    else if (command_ == "transred") code = transred();
    else if (command_ == "fiber") code = fiber_cmd();
    else if (command_ == "behaviour") code = behaviour_cmd();
    else if (command_ == "bpartition") code = bpartition();
    else if (command_ == "oracle") code = oracle();
    else if (command_ == "product") code = product();
  }
  flush();
  return code;
}

int Run::tree() {
  auto c = cad();
  auto t = build_tree(c, family());
  std::vector<std::string> pivots;
  for (const auto& r : tree_reductions(t)) pivots.push_back(to_string(r.pivot));
  emit({{"cad", cad_name_}, {"dim", c.dim}, {"leaves", t.leaf_count()}, {"reductions", pivots}});
  std::istringstream dump(t.dump());
  for (std::string line; std::getline(dump, line);) emit({{"node", line}});
  dot_ = t.dot(header());
  artifact("tree.dot", dot_);
  return kExitOk;
}

int Run::reduce() {
  if (opt_.pivot.empty()) raise(ErrorKind::BadParameter, "reduce needs --pivot");
  auto c = cad();
  auto t = build_tree(c, family());
  Index A = parse_index(opt_.pivot);
  auto check = check_pivot(c, t, A, plan_);
  Json rec{{"pivot", opt_.pivot}, {"tree_ok", check.tree_ok}};
  rec.update(witness_json(check.lift));
  rec["applied"] = check.applies();
  emit(rec);
  if (check.applies()) {
    auto r = merge_cells(c, A);
    std::string text = print_cad(cad_name_ + "_reduced", r);
    emit({{"leaves", r.leaf_count()}, {"fingerprint", canonical_fingerprint(r, plan_)}, {"cadspec", text}});
    artifact("reduced.cadspec", text);
  }
  return kExitOk;
}

int Run::minimal_cmd() {
  auto c = cad();
  auto m = minimal(c, family(), plan_);
  std::string trace;
  for (const auto& line : m.trace) {
    emit_raw(line);
    trace += line + "\n";
  }
  std::vector<std::string> undecided;
  for (const auto& u : m.undecided) undecided.push_back(to_string(u));
  std::string text = print_cad(cad_name_ + "_minimal", m.cad);
  emit({{"result", name_of(m.cad)},
        {"leaves", m.cad.leaf_count()},
        {"certified", m.certified()},
        {"undecided", undecided},
        {"fingerprint", canonical_fingerprint(m.cad, plan_)},
        {"cadspec", text}});
  artifact("minimal.cadspec", text);
  artifact("trace.jsonl", trace);
  return kExitOk;
}

int Run::dag() {
  auto d = reduction_dag(cad(), family(), plan_);
  emit({{"nodes", d.nodes.size()}, {"edges", d.edges.size()}, {"truncated", d.truncated}, {"complete", d.complete()}});
  for (size_t i = 0; i < d.nodes.size(); ++i)
    emit({{"node", i},
          {"name", name_of(d.nodes[i].cad)},
          {"leaves", d.nodes[i].cad.leaf_count()},
          {"fingerprint", d.nodes[i].fingerprint},
          {"normal_form", d.nodes[i].normal_form()},
          {"undecided", d.nodes[i].undecided()}});
  for (const auto& e : d.edges) emit({{"from", e.from}, {"to", e.to}, {"pivot", to_string(e.pivot)}});
  for (const auto& n : d.notes) emit({{"note", n}});
  dot_ = dag_dot(d, header());
  artifact("dag.dot", dot_);
  return kExitOk;
}

int Run::confluence() {
  auto d = reduction_dag(cad(), family(), plan_);
  auto rep = confluence_report(d);
  std::vector<std::string> names;
  for (auto i : rep.normal_forms) names.push_back(name_of(d.nodes[i].cad));
  size_t joinable = 0;
  for (const auto& p : rep.peaks) joinable += p.joinable ? 1 : 0;
  emit({{"verdict", to_string(rep.verdict)},
        {"normal_forms", names},
        {"peaks", rep.peaks.size()},
        {"joinable_peaks", joinable},
        {"locally_confluent", rep.locally_confluent},
        {"complete", rep.complete},
        {"scope", rep.scope}});
  for (auto i : rep.normal_forms)
    emit({{"normal_form", i},
          {"name", name_of(d.nodes[i].cad)},
          {"leaves", d.nodes[i].cad.leaf_count()},
          {"fingerprint", d.nodes[i].fingerprint}});
  for (const auto& p : rep.peaks)
    if (!p.joinable) emit({{"peak", p.source}, {"left", p.left}, {"right", p.right}, {"joinable", false}});
  if (opt_.expect_unique && rep.verdict == ConfluenceVerdict::MultipleNormalForms) return kExitVerdict;
  return kExitOk;
}

int Run::transred() {
  auto d = reduction_dag(cad(), family(), plan_);
  bool ok = transitive_reduction_check(d);
  emit({{"nodes", d.nodes.size()}, {"edges", d.edges.size()}, {"transitive_reduction", ok}});
  return kExitOk;
}

int Run::min1d() {
  if (opt_.sets1d.empty()) raise(ErrorKind::BadParameter, "min1d needs at least one set, e.g. \"[-2,0) u {1}\"");
  std::vector<SaSet1D> sets;
  for (const auto& s : opt_.sets1d) sets.push_back(parse_set1d(s));
  auto [c, t] = minimum_cad_1d(sets);
  std::vector<std::string> sections, labels;
  for (const auto& v : c.level1) sections.push_back(extval_text(v));
  for (const auto& l : t.leaves()) labels.push_back(to_string(t.leaf_label(l)));
  std::vector<std::string> normalized;
  for (const auto& s : sets) normalized.push_back(to_string(s));
  std::string text;
  for (size_t i = 0; i < sets.size(); ++i)
    text += "set S" + std::to_string(i + 1) + ": " + to_string(to_predicate(sets[i])) + "\n";
  text += print_cad("M", c);
  emit({{"sets", normalized}, {"sections", sections}, {"labels", labels}, {"cadspec", text}});
  artifact("min1d.cadspec", text);
  return kExitOk;
}

int Run::fiber_cmd() {
  auto fam = family();
  if (fam.sets.empty()) raise(ErrorKind::BadParameter, "no set selected");
  Point x = parse_point(opt_.at);
  for (size_t i = 0; i < fam.sets.size(); ++i)
    emit({{"set", fam.names[i]}, {"at", to_string(x)}, {"fiber", to_string(fiber(fam.sets[i], x))}});
  return kExitOk;
}

int Run::behaviour_cmd() {
  Point x = parse_point(opt_.at);
  emit({{"at", to_string(x)}, {"behaviour", to_string(behaviour(family(), x))}});
  return kExitOk;
}

int Run::bpartition() {
  auto base = cad();
  auto bp = behaviour_partition(family(), base, plan_);
  emit({{"base", cad_name_}, {"classes", bp.classes.size()}, {"constant", bp.constant()}});
  for (const auto& [b, cells] : bp.classes) {
    std::vector<std::string> cs;
    for (const auto& c : cells) cs.push_back(to_string(c));
    emit({{"behaviour", to_string(b)}, {"cells", cs}});
  }
  for (const auto& issue : bp.issues) {
    Json seen = Json::array();
    for (const auto& [p, b] : issue.seen) seen.push_back({{"at", to_string(p)}, {"behaviour", to_string(b)}});
    emit({{"issue", to_string(issue.cell)}, {"seen", seen}});
  }
  return kExitOk;
}

int Run::oracle() {
  auto c = cad();
  auto fam = family();
  auto poset = poset_below(c, fam, plan_);
  if (opt_.mode == "poset") {
    emit({{"elements", poset.elements.size()},
          {"candidates", poset.candidates},
          {"pruned", poset.pruned},
          {"inconclusive", poset.inconclusive.size()}});
    for (size_t i = 0; i < poset.elements.size(); ++i) {
      Json blocks = Json::array();
      for (const auto& b : poset.elements[i].canonical()) blocks.push_back(b);
      emit({{"element", i}, {"name", name_of(materialize(c, poset.elements[i]))}, {"blocks", blocks}});
    }
    for (const auto& [a, b] : poset.covers()) emit({{"cover", {a, b}}});
    dot_ = poset_dot(poset, header());
    artifact("poset.dot", dot_);
    return kExitOk;
  }
  auto d = reduction_dag(c, fam, plan_);
  auto rep = cross_validate(d, poset);
  emit({{"nodes_agree", rep.nodes_agree},
        {"edges_agree", rep.edges_agree},
        {"order_agree", rep.order_agree},
        {"inconclusive", rep.inconclusive},
        {"agree", rep.agree()}});
  for (const auto& m : rep.mismatches) emit({{"mismatch", m}});
  return rep.agree() ? kExitOk : kExitVerdict;
}

int Run::bell_cmd() {
  emit({{"K", opt_.bell_k}, {"bell", bell(opt_.bell_k).get_str()}});
  return kExitOk;
}

int Run::corpus_cmd() {
  if (opt_.mode == "list") {
    for (const auto& n : corpus::entry_names()) {
      auto e = corpus::load(n);
      emit({{"entry", n}, {"fixture", e.fixture}, {"cads", e.cad_names}, {"facts", e.facts.size()}, {"summary", e.summary}});
    }
    return kExitOk;
  }
  std::vector<std::string> names = opt_.entry == "all" ? corpus::entry_names() : std::vector<std::string>{opt_.entry};
  size_t failed = 0, total = 0;
  for (const auto& n : names) {
    auto e = corpus::load(n);
    for (const auto& o : corpus::check_entry(e, plan_)) {
      ++total;
      failed += o.ok ? 0 : 1;
      emit({{"entry", n},
            {"kind", corpus::to_string(o.fact.kind)},
            {"cad", o.fact.cad},
            {"arg", o.fact.arg},
            {"expected", o.fact.expected},
            {"observed", o.observed},
            {"ok", o.ok},
            {"provenance", corpus::to_string(o.fact.provenance)},
            {"anchor", o.fact.anchor}});
    }
  }
  emit({{"facts", total}, {"failed", failed}});
  return failed == 0 ? kExitOk : kExitVerdict;
}

int Run::product() {
  auto c = cad();
  auto p = cylinder_product(c);
  std::string text = print_cad(cad_name_ + "_product", p);
  emit({{"dim", p.dim}, {"leaves", p.leaf_count()}, {"cadspec", text}});
  artifact("product.cadspec", text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal CAD toolkit: trees, reductions, normal forms and the coarsening oracle"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub, bool with_input) {
    if (with_input)
      sub->add_option("input", opt.input, "CADSPEC file, or corpus:<entry>")->required();
    sub->add_option("--cad", opt.cad, "CAD name in the input");
    sub->add_option("--family", opt.family, "comma-separated set names (default: all sets)");
    sub->add_option("--out", opt.out, "directory for report.jsonl and artifacts");
    sub->add_option("--seed", opt.seed, "recorded in the report header");
    sub->add_flag("--expect-unique", opt.expect_unique, "exit 1 on MultipleNormalForms");
    sub->add_option("--audit", opt.audit, "samples checked per cell")->check(CLI::PositiveNumber);
    sub->add_flag("--dot", opt.dot, "print DOT instead of the report");
  };

  common(app.add_subcommand("tree", "labelled tree of a CAD and its tree reductions"), true);
  auto* reduce = app.add_subcommand("reduce", "check and apply one reduction");
  common(reduce, true);
  reduce->add_option("--pivot", opt.pivot, "even cell index, e.g. 1.2")->required();
  common(app.add_subcommand("minimal", "greedy reduction to a normal form"), true);
  common(app.add_subcommand("dag", "all reduction paths below a CAD"), true);
  common(app.add_subcommand("confluence", "normal forms and peak joinability"), true);
  common(app.add_subcommand("transred", "whether DAG edges form a transitive reduction"), true);
  auto* min1d = app.add_subcommand("min1d", "minimum CAD of subsets of the line");
  common(min1d, false);
  min1d->add_option("sets", opt.sets1d, "sets such as \"[-2,0) u {1}\"")->required();
  auto* fib = app.add_subcommand("fiber", "fiber of each selected set above a point");
  common(fib, true);
  fib->add_option("--at", opt.at, "base point, comma-separated rationals")->required();
  auto* beh = app.add_subcommand("behaviour", "behaviour of the family above a point");
  common(beh, true);
  beh->add_option("--at", opt.at, "base point, comma-separated rationals")->required();
  common(app.add_subcommand("bpartition", "behaviour classes over the cells of a base CAD"), true);
  auto* orc = app.add_subcommand("oracle", "coarsening oracle");
  orc->add_option("mode", opt.mode, "poset or validate")->required()->check(CLI::IsMember({"poset", "validate"}));
  common(orc, true);
  auto* bell = app.add_subcommand("bell", "Bell number");
  common(bell, false);
  bell->add_option("K", opt.bell_k, "number of elements")->required();
  auto* corp = app.add_subcommand("corpus", "worked-example corpus");
  corp->add_option("mode", opt.mode, "list or run")->required()->check(CLI::IsMember({"list", "run"}));
  corp->add_option("entry", opt.entry, "entry name or all")->default_val("all");
  common(corp, false);
  common(app.add_subcommand("product", "cylinder product with R"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    return Run(command, opt).exec();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
