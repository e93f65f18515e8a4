#include "cantordyn/commands.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "json.hpp"

#include "cantordyn/avoidance.hpp"
#include "cantordyn/error.hpp"
#include "cantordyn/minimal.hpp"
#include "cantordyn/recurrence.hpp"
#include "cantordyn/refinement.hpp"
#include "cantordyn/spec_io.hpp"

namespace cantordyn {
namespace {

using nlohmann::json;

struct Outcome {
  json body = json::object();
  bool verified = true;
  std::string failure;

  void fail(const std::string& what) {
    if (verified) failure = what;
    verified = false;
  }
};

json words_json(const std::vector<Word>& words) {
  json out = json::array();
  for (const Word& w : words) out.push_back(w.str());
  return out;
}

SystemSpec load_spec(const CommandOptions& options) {
  SystemSpec spec = parse_spec(options.spec_text);
  if (options.depth) spec.depth = *options.depth;
  return spec;
}

DynSystem load_system(const CommandOptions& options) {
  DynSystem sys = build_system(load_spec(options));
  ValidationReport report = validate_system(sys, ValidateOptions{0, 32, options.seed});
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    throw CantorError(ErrorCode::kInvalidArgument, "system fails validation: " + v.condition + " at " +
                                                       v.witness.display() + " (" + v.detail + ")");
  }
  return sys;
}

std::string cert_soundness_failure(const PiecewiseIterate& cert, const CodedMap& child_map, std::uint64_t seed,
                                   const std::vector<Word>& extra) {
  const std::size_t depth = cert.base.depth();
  const std::size_t k = static_cast<std::size_t>(cert.base.alphabet());
  std::optional<Word> bad;
  if (depth >= cert.l && power(k, depth) <= (std::size_t{1} << 16)) {
    for (std::size_t len = cert.l; len <= depth && !bad; ++len) {
      bad = cert_mismatch(cert, child_map, all_words(cert.base.alphabet(), len));
    }
  } else {
    bad = cert_mismatch_sampled(cert, child_map, 512, seed, extra);
  }
  return bad ? "PiecewiseIterate at " + bad->display() : std::string();
}

json cert_json(const PiecewiseIterate& cert) {
  json out{{"l", cert.l}, {"b", cert.b}, {"base", cert.base.name()}};
  if (power(static_cast<std::size_t>(cert.base.alphabet()), cert.l) <= 256) out["j"] = j_table(cert);
  return out;
}

json rec_json(const RecCert& cert) {
  json out = json::array();
  for (const RecEntry& e : cert.entries) out.push_back({{"c", e.c}, {"n", e.n}, {"l", e.l}});
  return out;
}

json ap_json(const APCert& cert, bool trace) {
  json out = json::array();
  for (const APRow& row : cert.rows) {
    json r{{"c", row.c}, {"b", row.b}, {"range", row.witnesses.size()}};
    if (trace) r["witnesses"] = row.witnesses;
    out.push_back(r);
  }
  return out;
}

Outcome run_validate(const CommandOptions& options) {
  DynSystem sys = build_system(load_spec(options));
  ValidationReport report = validate_system(sys, ValidateOptions{0, 32, options.seed});
  Outcome out;
  json violations = json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"condition", v.condition}, {"witness", v.witness.str()}, {"detail", v.detail}});
  }
  out.body = {{"audit_depth", report.audit_depth},
              {"sampled_paths", report.sampled_paths},
              {"violations", violations},
              {"space", sys.space.name()},
              {"map", sys.map.name()}};
  if (!report.ok()) out.fail("validation: " + report.violations.front().condition);
  return out;
}

Outcome run_orbit(const CommandOptions& options) {
  DynSystem sys = load_system(options);
  Word start;
  if (options.point) {
    start = Word(*options.point);
  } else {
    std::optional<Word> first = sys.space.first_member(sys.depth());
    if (!first) throw CantorError(ErrorCode::kEmptyClass, "no depth-N member");
    start = *first;
  }
  PointApprox x = make_point(sys, start);
  const std::size_t steps = options.stages.value_or(sys.depth());
  std::vector<Word> words = orbit(x, steps);
  Outcome out;
  out.body = {{"point", start.str()}, {"steps", steps}, {"orbit", words_json(words)}};
  for (std::size_t n = 0; n < words.size(); ++n) {
    if (!sys.space.contains(words[n])) {
      out.fail("orbit word " + std::to_string(n) + " leaves the space");
      break;
    }
  }
  return out;
}

Outcome run_recurrent(const CommandOptions& options) {
  DynSystem sys = load_system(options);
  RecurrentPointResult r = construct_recurrent_point(sys, options.cmax.value_or(4));
  Outcome out;
  json stages = json::array();
  const CoverStage* previous = nullptr;
  for (const CoverStage& stage : r.stages) {
    std::vector<std::string> problems = audit_cover_stage(sys, stage, previous);
    json entry{{"i", stage.i}, {"s", stage.s}, {"u_size", stage.u.size()}, {"v_size", stage.v.size()},
               {"audit", problems}};
    if (options.trace) {
      entry["u"] = words_json(stage.u);
      entry["v"] = words_json(stage.v);
    }
    stages.push_back(entry);
    if (!problems.empty()) out.fail("CoverStage " + std::to_string(stage.i) + ": " + problems.front());
    previous = &stage;
  }
  out.body = {{"point", r.point.prefix.str()}, {"rec_cert", rec_json(r.cert)}, {"stages", stages}};
  for (const RecEntry& e : r.cert.entries) {
    if (!verify_recurrence(r.point, RecCert{{e}})) {
      out.fail("RecCert entry c=" + std::to_string(e.c));
      break;
    }
  }
  return out;
}

Outcome run_minimal(const CommandOptions& options) {
  DynSystem sys = load_system(options);
  MinimalResult r = minimal_subsystem(sys, options.stages.value_or(4));
  Outcome out;
  json steps = json::array();
  std::vector<Word> removed;
  for (const RemovalStep& step : r.chain.steps) {
    if (step.removed) removed.push_back(step.sigma);
    if (options.trace) {
      steps.push_back({{"sigma", step.sigma.str()}, {"removed", step.removed}, {"vacuous", step.vacuous}});
    }
  }
  json bounds = json::array();
  const std::size_t max_len = options.cmax.value_or(3);
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (const Word& tau : all_words(sys.alphabet(), len)) {
      if (!r.system.space.probe(sys.depth(), tau).witness) continue;
      ApBound bound = ap_bound_from_minimal(r.system, tau);
      json entry{{"tau", tau.str()}};
      if (bound.bound) entry["bound"] = *bound.bound;
      if (bound.counterexample) {
        entry["counterexample"] = bound.counterexample->str();
        out.fail("ApBound for " + tau.display());
      }
      bounds.push_back(entry);
    }
  }
  std::optional<Word> first = r.system.space.first_member(sys.depth());
  out.body = {{"avoided", words_json(removed)},
              {"first_member", first ? json(first->str()) : json(nullptr)},
              {"ap_bounds", bounds}};
  if (options.trace) out.body["steps"] = steps;
  return out;
}

Outcome run_decode_halting(const CommandOptions& options) {
  HaltingSim sim = parse_halting(options.halting_text);
  const std::size_t column_depth = options.depth.value_or(15);
  if (sim.stage_horizon == 0) sim.stage_horizon = column_depth;
  Outcome out;
  if (sim.bits.empty()) {
    out.body = {{"columns", 0}, {"column_depth", column_depth}, {"bits", json::array()}};
    return out;
  }
  ProductSystem product = halting_product(sim, column_depth);
  MinimalResult r = minimal_subsystem(product.system, options.stages.value_or(16));
  json bits = json::array();
  for (std::size_t i = 0; i < sim.bits.size(); ++i) {
    const bool decoded = decode_bit(r.system, i, product.columns);
    const bool expected = sim.bits[i].t.has_value();
    bits.push_back({{"n", sim.bits[i].n},
                    {"t", sim.bits[i].t ? json(*sim.bits[i].t) : json(nullptr)},
                    {"decoded", decoded ? 1 : 0}});
    if (decoded != expected) out.fail("decoded bit " + std::to_string(sim.bits[i].n));
  }
  out.body = {{"columns", product.columns}, {"column_depth", column_depth}, {"bits", bits}};
  return out;
}

Outcome run_dodge(const CommandOptions& options) {
  SystemSpec spec = load_spec(options);
  ClosedClass p = build_tree(spec);
  DodgeOptions dodge;
  if (options.cmax) dodge.max_period = *options.cmax;
  if (options.stages) dodge.sigma_stages = *options.stages;
  DodgeOutcome r = build_dodging_class(p, dodge);
  Outcome out;
  if (r.which == DodgeCase::kOrbit) {
    out.body = {{"case", "orbit"},
                {"generator", r.orbit_generator->str()},
                {"orbit_index", r.orbit_index},
                {"detection_stage", r.detection_stage}};
    for (const Word& w : shift_orbit(*r.orbit_generator, p.depth())) {
      if (p.contains(w)) {
        out.fail("orbit word " + w.display() + " lies in P");
        break;
      }
    }
    return out;
  }
  json sigmas = json::array();
  for (std::size_t j = 0; j < r.sequence.sigmas.size(); ++j) {
    sigmas.push_back({{"sigma", r.sequence.sigmas[j].str()}, {"n", r.sequence.reps[j]}, {"c", r.sequence.c[j]}});
  }
  std::optional<Word> first = r.hat->first_member(p.depth());
  out.body = {{"case", "hat"},
              {"sigmas", sigmas},
              {"probe", r.probe ? json(r.probe->str()) : json(nullptr)},
              {"hat_first_member", first ? json(first->str()) : json(nullptr)}};
  std::vector<std::string> problems = check_sigma_sequence(r.sequence);
  if (!problems.empty()) out.fail("SigmaSequence: " + problems.front());
  if (!first) out.fail("hat class is empty");
  const std::size_t b_max = std::max<std::size_t>(1, r.sequence.sigmas.empty() ? dodge.sigma_stages : r.sequence.sigmas.size());
  // A probe point starts with 1^{K+1}, which never recurs.
  const std::size_t cylinder = r.probe ? r.sequence.sigmas.size() + 1 : 1;
  if (!verify_not_ap(*r.hat, b_max, cylinder)) out.fail("non-AP witness for b <= " + std::to_string(b_max));
  return out;
}

Outcome run_meet_avoid(const CommandOptions& options) {
  DynSystem sys = load_system(options);
  std::vector<OpenRequest> requests = parse_requests(options.requests_text);
  if (requests.empty()) throw CantorError(ErrorCode::kInvalidArgument, "meet-avoid needs one request");
  MeetOrAvoid r = meet_or_avoid(sys, requests.front());
  Outcome out;
  std::optional<Word> first = r.refinement.child.space.first_member(sys.depth());
  out.body = {{"request", requests.front().name},
              {"case", r.met ? "meet" : "avoid"},
              {"s", r.s},
              {"cert", cert_json(r.refinement.cert)},
              {"child_first_member", first ? json(first->str()) : json(nullptr)}};
  std::vector<Word> extra;
  if (first) extra.push_back(*first);
  std::string bad = cert_soundness_failure(r.refinement.cert, r.refinement.child.map, options.seed, extra);
  if (!bad.empty()) out.fail(bad);
  if (!first) out.fail("child class is empty");
  if (first && !return_bound_check(r.refinement, make_point(sys, *first))) out.fail("return bound");
  return out;
}

std::optional<std::size_t> least_witness(const Phi1Predicate& phi, const Word& x) {
  for (std::size_t m = 0; m <= x.size(); ++m) {
    for (std::size_t s = 0; s <= x.size(); ++s) {
      if (phi.decide(m, x.prefix(s), phi.param)) return m;
    }
  }
  return std::nullopt;
}

Outcome run_force_least(const CommandOptions& options) {
  DynSystem sys = load_system(options);
  Phi1Predicate phi = parse_predicate(options.predicate_text);
  ForcingResult r = least_element_forcing(sys, phi);
  Outcome out;
  std::vector<Word> members = r.refinement.child.space.members(sys.depth(), 256);
  out.body = {{"predicate", phi.name},
              {"outcome", r.least ? "least(" + std::to_string(*r.least) + ")" : std::string("empty")},
              {"cert", cert_json(r.refinement.cert)},
              {"log", r.log},
              {"child_first_member", members.empty() ? json(nullptr) : json(members.front().str())}};
  std::string bad = cert_soundness_failure(r.refinement.cert, r.refinement.child.map, options.seed, members);
  if (!bad.empty()) out.fail(bad);
  if (members.empty()) out.fail("child class is empty");
  for (const Word& x : members) {
    if (least_witness(phi, x) != r.least) {
      out.fail("least witness of " + x.display());
      break;
    }
  }
  return out;
}

Outcome run_ap_point(const CommandOptions& options) {
  DynSystem sys = load_system(options);
  std::vector<OpenRequest> requests;
  if (!options.requests_text.empty()) requests = parse_requests(options.requests_text);
  ApPointResult r = construct_ap_point(sys, requests, options.cmax.value_or(4));
  Outcome out;
  json log = json::array();
  for (const ApStep& step : r.log) {
    log.push_back({{"kind", step.kind}, {"label", step.label}, {"outcome", step.outcome}, {"bound", step.bound}});
  }
  out.body = {{"point", r.point.prefix.str()},
              {"ap_cert", ap_json(r.cert, options.trace)},
              {"chain_cert", {{"l", r.chain.cert.l}, {"b", r.chain.cert.b}}},
              {"log", log}};
  for (const APRow& row : r.cert.rows) {
    if (!verify_ap(r.point, APCert{{row}})) {
      out.fail("APCert row c=" + std::to_string(row.c));
      break;
    }
  }
  std::string bad = cert_soundness_failure(r.chain.cert, r.chain.child.map, options.seed, {r.point.prefix});
  if (!bad.empty()) out.fail(bad);
  return out;
}

Outcome run_reduce_tree(const CommandOptions& options) {
  SystemSpec spec = load_spec(options);
  ClosedClass tree = build_tree(spec);
  const std::size_t n = options.stages.value_or(std::min<std::size_t>(spec.depth, 6));
  TernaryGadget gadget = build_ternary_gadget(tree, std::max(spec.depth, n + 2));
  GadgetComparison cmp = compare_gadget(tree, n);
  Outcome out;
  out.body = {{"gadget_space", gadget.system.space.name()},
              {"gadget_map", gadget.system.map.name()},
              {"n", n},
              {"recurrent_count", cmp.recurrent.size()},
              {"path_count", cmp.paths.size()},
              {"equal", cmp.equal}};
  if (options.trace) {
    out.body["recurrent"] = words_json(cmp.recurrent);
    out.body["paths"] = words_json(cmp.paths);
  }
  if (!cmp.equal) out.fail("gadget recurrent set differs from the path set");
  return out;
}

using Runner = std::function<Outcome(const CommandOptions&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"validate", run_validate},       {"orbit", run_orbit},
      {"recurrent", run_recurrent},     {"minimal", run_minimal},
      {"decode-halting", run_decode_halting}, {"dodge", run_dodge},
      {"meet-avoid", run_meet_avoid},   {"force-least", run_force_least},
      {"ap-point", run_ap_point},       {"reduce-tree", run_reduce_tree},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate",    "orbit",      "recurrent",   "minimal",
                                              "decode-halting", "dodge",   "meet-avoid",  "force-least",
                                              "ap-point",    "reduce-tree"};
  return names;
}

CommandResult run_command(const CommandOptions& options) {
  auto it = runners().find(options.command);
  if (it == runners().end()) {
    throw CantorError(ErrorCode::kInvalidArgument, "unknown command '" + options.command + "'");
  }
  json flags{{"seed", options.seed}, {"trace", options.trace}};
  if (options.depth) flags["depth"] = *options.depth;
  if (options.stages) flags["stages"] = *options.stages;
  if (options.cmax) flags["cmax"] = *options.cmax;
  if (options.point) flags["point"] = *options.point;
  const std::string inputs = options.command + "\n" + options.spec_text + "\n" + options.requests_text + "\n" +
                             options.halting_text + "\n" + options.predicate_text + "\n" + flags.dump();

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  json error = nullptr;
  try {
    outcome = it->second(options);
  } catch (const CantorError& e) {
    error = {{"code", error_code_name(e.code())}, {"message", e.what()}};
    outcome.fail(e.what());
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

  json report{{"command", options.command},
              {"inputs_digest", digest(inputs)},
              {"flags", flags},
              {"outcome", outcome.body},
              {"verified", outcome.verified},
              {"failure", outcome.verified ? json(nullptr) : json(outcome.failure)},
              {"error", error},
              {"timing_ms", elapsed}};
  return CommandResult{report.dump(2) + "\n", outcome.verified, outcome.failure};
}

}  // namespace cantordyn
