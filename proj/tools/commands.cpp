#include "commands.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "bk/hodge.hpp"
#include "bk/tangent.hpp"

namespace bk::cli {

namespace {

struct Subject {
  BKModule module;
  std::optional<InducedLattice> lattice;
};

void check_schema(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema")) throw SchemaError("document: missing field 'schema'");
  if (doc["schema"] != kSchema) throw SchemaError(std::string("document: schema must be \"") + kSchema + "\"");
}

Subject read_subject(const json& doc, const Tower& t) {
  if (doc.contains("lattice") == doc.contains("module"))
    throw SchemaError("document: give exactly one of 'lattice' or 'module'");
  if (doc.contains("lattice")) {
    InducedLattice l = read_lattice(doc["lattice"], t);
    BKModule m = l.module();
    return {std::move(m), std::move(l)};
  }
  return {read_module(doc["module"], t), std::nullopt};
}

std::optional<bool> read_expect(const json& doc) {
  if (!doc.contains("expect")) return std::nullopt;
  if (!doc["expect"].is_boolean()) throw SchemaError("expect: must be a boolean");
  return doc["expect"].get<bool>();
}

int expect_code(const std::optional<bool>& expect, bool verdict) {
  return expect && *expect != verdict ? kPropertyFails : kOk;
}

const char* yes(bool b) { return b ? "true" : "false"; }

json options_json(const Options& o) {
  return {{"precision", o.precision}, {"pole_bound", o.pole_bound}, {"strong", o.strong}};
}

json sd_json(const SDReport& r) {
  json witness = json::array();
  for (const auto& w : r.witness)
    witness.push_back({{"block", w.block},
                       {"source", write_matrix(w.source)},
                       {"exponents", w.exponents},
                       {"images", write_matrix(w.images)}});
  return {{"sd", r.sd},
          {"reason", r.reason},
          {"kernel_mass", r.kernel_mass},
          {"det_valuation", r.det_valuation},
          {"witness", witness}};
}

std::vector<SDBlockWitness> read_witness(const json& j, const Field& f) {
  std::vector<SDBlockWitness> out;
  for (const auto& w : j) {
    SDBlockWitness b;
    b.block = w.at("block").get<int>();
    b.source = read_matrix(w.at("source"), f);
    b.exponents = w.at("exponents").get<std::vector<long long>>();
    b.images = read_matrix(w.at("images"), f);
    out.push_back(std::move(b));
  }
  return out;
}

json cyclofree_json(const CyclofreeReport& r) {
  return {{"absolutely_irreducible", r.absolutely_irreducible},
          {"cyclofree", r.cyclofree},
          {"strongly_cyclofree", r.strongly_cyclofree},
          {"notes", r.notes}};
}

json tangent_json(const TangentReport& r) {
  json basis = json::array();
  for (const auto& x : r.polar_basis) {
    json blocks = json::array();
    for (const auto& m : x) blocks.push_back(write_matrix(m));
    basis.push_back(blocks);
  }
  return {{"pole_bound", r.pole_bound},
          {"non_integral_dim", r.non_integral_dim},
          {"fiber_point_reduced", r.fiber_point_reduced},
          {"polar_basis", basis}};
}

json family_json(const FamilyReport& r) {
  json issues = json::array();
  for (const auto& i : r.issues)
    issues.push_back(
        {{"block", i.block}, {"what", i.what}, {"row", i.row}, {"col", i.col}, {"exponent", i.exponent}});
  json frob = json::array();
  for (const auto& a : r.frobenius) frob.push_back(write_tmatrix(a));
  return {{"ok", r.ok}, {"issues", issues}, {"frobenius", frob}};
}

Outcome check_height_cmd(const json& doc, const Options& opt) {
  check_keys(doc, "document", {"schema", "tower"}, {"module", "lattice", "height", "expect"});
  const Tower t = read_tower(doc["tower"]);
  const Subject s = read_subject(doc, t);
  const int h = doc.contains("height") ? read_int(doc["height"], "height") : t.p;
  const bool holds = check_height(s.module, h, opt.precision);
  const auto expect = read_expect(doc);
  return {{{"height", h}, {"holds", holds}},
          std::string("height <= ") + (h == t.p ? "p" : std::to_string(h)) + ": " + yes(holds),
          expect_code(expect, holds)};
}

Outcome check_sd_cmd(const json& doc, const Options& opt) {
  check_keys(doc, "document", {"schema", "tower"}, {"module", "lattice", "expect"});
  const Tower t = read_tower(doc["tower"]);
  const Subject s = read_subject(doc, t);
  const SDReport r = s.lattice ? check_sd_induced(*s.lattice, opt.precision) : check_sd_direct(s.module, opt.precision);
  return {sd_json(r), std::string("strongly divisible: ") + yes(r.sd), expect_code(read_expect(doc), r.sd)};
}

Outcome check_crys_cmd(const json& doc, const Options& opt) {
  check_keys(doc, "document", {"schema", "tower"}, {"module", "lattice", "flag", "factors", "expect"});
  const Tower t = read_tower(doc["tower"]);
  const Subject s = read_subject(doc, t);
  CrysDecision d;
  if (s.lattice) {
    if (doc.contains("flag") || doc.contains("factors")) throw SchemaError("check-crys: flag/factors apply to modules only");
    d = decide_crys(*s.lattice, opt.precision);
  } else {
    if (!doc.contains("flag") || !doc.contains("factors"))
      throw SchemaError("check-crys on a module needs 'flag' and 'factors'");
    d = decide_crys(s.module, read_flag(doc["flag"], s.module), read_factors(doc["factors"]), opt.strong,
                    opt.precision);
  }
  const bool crys = d.verdict == CrysVerdict::Crystalline || d.verdict == CrysVerdict::CertifiedCrystalline;
  json result{{"verdict", to_string(d.verdict)},
              {"necessity_only", d.necessity_only},
              {"crystalline", crys},
              {"sd", sd_json(d.sd)}};
  if (d.cyclofree) result["cyclofree"] = cyclofree_json(*d.cyclofree);
  return {result, std::string("verdict: ") + to_string(d.verdict), expect_code(read_expect(doc), crys)};
}

Outcome hodge_cmd(const json& doc, const Options& opt) {
  check_keys(doc, "document", {"schema", "tower"}, {"module", "lattice"});
  const Tower t = read_tower(doc["tower"]);
  const Subject s = read_subject(doc, t);
  const HodgeType type = graded_dims(s.module, opt.precision);
  return {{{"type", type.weights}, {"flattened", type.flattened()}}, "hodge type: " + type.to_string(), kOk};
}

Outcome tangent_cmd(const json& doc, const Options& opt) {
  check_keys(doc, "document", {"schema", "tower"}, {"module", "lattice", "expect"});
  const Tower t = read_tower(doc["tower"]);
  const Subject s = read_subject(doc, t);
  const TangentReport r = solve_tangent(s.module, opt.pole_bound, opt.precision);
  return {tangent_json(r),
          "non-integral dimension " + std::to_string(r.non_integral_dim) + "; fiber point " +
              (r.fiber_point_reduced ? "reduced" : "non-reduced"),
          expect_code(read_expect(doc), r.fiber_point_reduced)};
}

Outcome enumerate_2d_cmd(const json& doc, const Options&) {
  check_keys(doc, "document", {"schema", "tower", "weights"}, {"twist"});
  const Tower t = read_tower(doc["tower"]);
  const RankOneData n = read_rank_one(doc, t);
  json lattices = json::array();
  const auto found = enumerate_2d(n);
  for (const auto& s : found)
    lattices.push_back({{"shape", write_shape(s.shape)}, {"d", s.d}, {"lattice", write_lattice(s.lattice)}});
  return {{{"count", found.size()}, {"irreducible", induced_irreducible(n)}, {"lattices", lattices}},
          "crystalline lattices: " + std::to_string(found.size()), kOk};
}

Outcome enumerate_reducible_cmd(const json& doc, const Options&) {
  check_keys(doc, "document", {"schema", "tower", "beta"});
  const Tower t = read_tower(doc["tower"]);
  const ReducibleCatalog cat = enumerate_reducible_rank2(t, read_series(doc["beta"], *t.field));
  json entries = json::array();
  std::vector<std::size_t> counts;
  for (const auto& e : cat.entries) {
    json reps = json::array();
    for (const auto& b : e.representatives) reps.push_back(write_series(b));
    entries.push_back({{"r", e.r}, {"s", e.s}, {"count", e.count}, {"representatives", reps}});
    counts.push_back(e.count);
  }
  std::string line = "counts (0,0) (0,1) (1,0) (1,1):";
  for (auto c : counts) line += " " + std::to_string(c);
  return {{{"pole_depth", cat.pole_depth}, {"counts", counts}, {"entries", entries}}, line, kOk};
}

Outcome verify_family_cmd(const json& doc, const Options&) {
  check_keys(doc, "document", {"schema", "tower", "family"});
  const Tower t = read_tower(doc["tower"]);
  const FamilyReport r = verify_family(read_family(doc["family"], t));
  std::string line = std::string("family verified: ") + yes(r.ok);
  if (!r.ok) line += " (" + r.issues.front().what + ")";
  return {family_json(r), line, r.ok ? kOk : kPropertyFails};
}

Outcome components_cmd(const json& doc, const Options&) {
  check_keys(doc, "document", {"schema", "tower", "weights"}, {"twist"});
  const Tower t = read_tower(doc["tower"]);
  const RankOneData n = read_rank_one(doc, t);
  const auto found = enumerate_2d(n);
  std::vector<InducedLattice> nodes;
  std::vector<Family> edges;
  for (const auto& s : found) {
    nodes.push_back(s.lattice);
    if (s.d > 0)
      for (auto& link : connect_to_pushforward(n, s.shape)) edges.push_back(std::move(link.family));
  }
  const ComponentGraph g = component_graph(nodes, edges);
  json jnodes = json::array();
  for (const auto& m : g.nodes) {
    const auto shape = classify_shape(m);
    jnodes.push_back({{"shape", shape ? write_shape(*shape) : json()}, {"d", shape ? d_invariant(*shape) : -1}});
  }
  json classes = json::array();
  bool all_reach = true;
  for (const auto& c : g.classes) {
    classes.push_back({{"members", c.members}, {"has_pushforward", c.has_pushforward}, {"chains", c.chains}});
    all_reach = all_reach && c.has_pushforward;
  }
  return {{{"nodes", jnodes}, {"edges", g.edges}, {"classes", classes}, {"adjacency", adjacency_text(g)}},
          "components: " + std::to_string(g.classes.size()) + "; every component contains a pushforward: " +
              yes(all_reach),
          all_reach ? kOk : kPropertyFails};
}

Outcome cyclofree_cmd(const json& doc, const Options& opt) {
  check_keys(doc, "document", {"schema", "tower", "factors"}, {"expect"});
  const Tower t = read_tower(doc["tower"]);
  const CyclofreeReport r = check_cyclotomic_free(t.p, t.deg_k, read_factors(doc["factors"]));
  const bool verdict = opt.strong ? r.strongly_cyclofree : r.cyclofree;
  return {cyclofree_json(r), std::string(opt.strong ? "strongly " : "") + "cyclotomic-free: " + yes(verdict),
          expect_code(read_expect(doc), verdict)};
}

Outcome reproduce_cmd(const json& doc, const Options&) {
  if (!doc.is_null()) check_keys(doc, "document", {"schema"});
  return {reproduce_manifest(), "manifest written", kOk};
}

Outcome verify_cmd(const json& doc, const Options&);

using Handler = Outcome (*)(const json&, const Options&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"check-height", check_height_cmd},   {"check-sd", check_sd_cmd},
      {"check-crys", check_crys_cmd},       {"hodge-type", hodge_cmd},
      {"tangent", tangent_cmd},             {"enumerate-2d", enumerate_2d_cmd},
      {"enumerate-reducible", enumerate_reducible_cmd}, {"verify-family", verify_family_cmd},
      {"components", components_cmd},       {"cyclofree", cyclofree_cmd},
      {"reproduce-paper", reproduce_cmd},   {"verify", verify_cmd},
  };
  return table;
}

// Replays the command recorded in a report and re-checks any serialized
// witness on its own, without trusting the recorded verdict.
Outcome verify_cmd(const json& doc, const Options&) {
  check_keys(doc, "report", {"schema", "command", "options", "input", "result"}, {"exit_code"});
  check_schema(doc);
  const std::string cmd = doc["command"].get<std::string>();
  if (cmd == "verify" || !handlers().contains(cmd)) throw SchemaError("report: cannot replay command '" + cmd + "'");
  check_keys(doc["options"], "report.options", {"precision", "pole_bound", "strong"});
  const Options opt{doc["options"]["precision"].get<long long>(), doc["options"]["pole_bound"].get<int>(),
                    doc["options"]["strong"].get<bool>()};
  const Outcome again = handlers().at(cmd)(doc["input"], opt);
  const bool replay = again.report == doc["result"];

  std::size_t checked = 0, failed = 0;
  if (cmd == "check-sd" || cmd == "tangent") {
    const Tower t = read_tower(doc["input"]["tower"]);
    const Subject s = read_subject(doc["input"], t);
    if (cmd == "check-sd" && doc["result"].value("sd", false)) {
      ++checked;
      if (!verify_sd_witness(s.module, read_witness(doc["result"]["witness"], *t.field), opt.precision)) ++failed;
    }
    if (cmd == "tangent")
      for (const auto& x : doc["result"]["polar_basis"]) {
        std::vector<UMatrix> blocks;
        for (const auto& b : x) blocks.push_back(read_matrix(b, *t.field));
        ++checked;
        if (!verify_tangent_solution(s.module, blocks, opt.precision)) ++failed;
      }
  }
  const bool ok = replay && failed == 0;
  return {{{"command", cmd}, {"replay_matches", replay}, {"witnesses_checked", checked}, {"witness_failures", failed}},
          std::string("replay of ") + cmd + ": " + (ok ? "verified" : "MISMATCH"), ok ? kOk : kPropertyFails};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : handlers()) out.push_back(k);
    return out;
  }();
  return names;
}

Outcome run_command(const std::string& command, const json& doc, const Options& opt) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw SchemaError("unknown command '" + command + "'");
  if (command != "reproduce-paper" && command != "verify") check_schema(doc);
  Outcome out = it->second(doc, opt);
  if (command == "verify" || command == "reproduce-paper") {
    out.report = {{"schema", kSchema}, {"command", command}, {"result", out.report}};
    return out;
  }
  out.report = {{"schema", kSchema},
                {"command", command},
                {"options", options_json(opt)},
                {"input", doc},
                {"result", out.report},
                {"exit_code", out.exit_code}};
  return out;
}

}  // namespace bk::cli
