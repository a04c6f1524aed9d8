// Command line front end: validation, bounded-STW nonemptiness and model
// checking, decomposition strategies, class checks, formula evaluation, and
// PDL-to-CPDS synthesis.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stwmc/classes.hpp"
#include "stwmc/decompose.hpp"
#include "stwmc/enumerate.hpp"
#include "stwmc/error.hpp"
#include "stwmc/formula_io.hpp"
#include "stwmc/io.hpp"
#include "stwmc/mso.hpp"
#include "stwmc/nta.hpp"
#include "stwmc/pdl_ta.hpp"
#include "stwmc/stt_automata.hpp"
#include "stwmc/stw_game.hpp"
#include "stwmc/synthesis.hpp"

using namespace stwmc;
using nlohmann::json;

namespace {

struct Output {
  bool as_json = false;
  std::string dot_path;
  json j;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void finish(const std::string& command, const std::string& verdict,
              const std::string& witness_path = "", uint64_t states = 0) {
    if (!as_json) return;
    j["command"] = command;
    j["verdict"] = verdict;
    if (!witness_path.empty()) j["witness_path"] = witness_path;
    j["states_explored"] = states;
    j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    std::cout << j.dump() << "\n";
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json state_budget_report(const Cpds& s, int k, bool enabled);

int cmd_validate(const std::string& cbm_path, Output& out) {
  CbmFile f = load_cbm_file(cbm_path);
  ValidationResult r = validate_cbm(f.graph, f.arch);
  if (!out.dot_path.empty()) write_file(out.dot_path, graph_to_dot(f.graph));
  if (r.ok()) {
    std::cout << "VALID\n";
    out.finish("validate", "valid");
    return 0;
  }
  std::cout << "INVALID\nREASON: " << axiom_name(*r.violation) << "\n";
  if (!r.detail.empty()) std::cout << r.detail << "\n";
  out.j["reason"] = axiom_name(*r.violation);
  out.finish("validate", "invalid");
  return 1;
}

std::shared_ptr<Nta> cbm_and_sys(const Cpds& s, int k, const SttAlphabet& alph) {
  auto a_cbm = build_A_cbm(alph, s.arch, k);
  auto a_sys = build_A_sys(alph, s, k);
  return std::shared_ptr<Nta>(nta_intersect(a_cbm, a_sys));
}

// witness STT -> CBM with re-validation through the library checkers
Cbm check_witness(const SttPtr& tau, const Cpds& s, int k) {
  if (!check_valid_stt(tau, k)) throw Error("internal", "witness term is not a valid STT");
  ColoredGraph cg = eval_stt(tau);
  ValidationResult vr = validate_cbm(cg.graph, s.arch);
  if (!vr.ok()) throw Error("internal", "witness term does not denote a behavior");
  if (!find_run(s, *vr.cbm)) throw Error("internal", "witness behavior has no run");
  return *vr.cbm;
}

int cmd_nonempty(const std::string& cpds_path, int k, const std::string& stt_out,
                 const std::string& cbm_out, Output& out) {
  Cpds s = load_cpds(cpds_path);
  SttAlphabet alph = SttAlphabet::for_cbm(s.arch, s.alphabet, k);
  auto prod = cbm_and_sys(s, k, alph);
  NonemptyResult r = nta_nonempty(*prod);
  out.j["state_budget"] = state_budget_report(s, k, out.as_json);
  if (!r.witness) {
    std::cout << "EMPTY\nREASON: no-behavior\n";
    out.finish("nonempty", "empty", "", r.states_discovered);
    return 1;
  }
  Cbm m = check_witness(*r.witness, s, k);
  std::cout << "NONEMPTY\n" << stt_to_text(*r.witness) << "\n";
  std::cout << cbm_to_text(m, "-") << "\n";
  if (!stt_out.empty()) write_file(stt_out, stt_to_text(*r.witness) + "\n");
  if (!cbm_out.empty()) write_file(cbm_out, cbm_to_text(m, "-"));
  if (!out.dot_path.empty()) write_file(out.dot_path, cbm_to_dot(m));
  out.finish("nonempty", "nonempty", stt_out, r.states_discovered);
  return 0;
}

json state_budget_report(const Cpds& s, int k, bool enabled);

int cmd_modelcheck(const std::string& cpds_path, const std::string& formula_path, int k,
                   const std::string& logic, int max_events, Output& out) {
  Cpds s = load_cpds(cpds_path);
  const std::string text = slurp(formula_path);
  if (logic == "pdl") {
    PdlSentencePtr phi = parse_pdl_sentence(text);
    SttAlphabet alph = SttAlphabet::for_cbm(s.arch, s.alphabet, k);
    auto prod = cbm_and_sys(s, k, alph);
    auto neg = build_A_phi(PdlSentence::lnot(phi), alph, k);
    auto all = nta_intersect(std::move(prod), std::move(neg));
    NonemptyResult r = nta_nonempty(*all);
    if (!r.witness) {
      std::cout << "HOLDS\n";
      out.finish("modelcheck", "holds", "", r.states_discovered);
      return 0;
    }
    Cbm m = check_witness(*r.witness, s, k);
    if (eval_pdl_sentence_cbm(m, phi))
      throw Error("internal", "counterexample fails to refute the formula");
    std::cout << "REFUTED\nREASON: counterexample\n" << cbm_to_text(m, "-") << "\n";
    if (!out.dot_path.empty()) write_file(out.dot_path, cbm_to_dot(m));
    out.finish("modelcheck", "refuted", "", r.states_discovered);
    return 1;
  }
  if (logic != "mso") throw Error("usage", "--logic must be mso or pdl");
  // bounded enumeration: a semi-decision at the given event budget
  MsoPtr phi = parse_mso(text);
  bool refuted = false;
  Cbm cex;
  enumerate_cbms(s.arch, s.alphabet, max_events, [&](const Cbm& m) {
    if (refuted) return;
    if (!find_run(s, m)) return;
    if (!eval_mso(m, phi)) {
      refuted = true;
      cex = m;
    }
  });
  if (refuted) {
    std::cout << "REFUTED\nREASON: counterexample\n" << cbm_to_text(cex, "-") << "\n";
    if (!out.dot_path.empty()) write_file(out.dot_path, cbm_to_dot(cex));
    out.finish("modelcheck", "refuted");
    return 1;
  }
  std::cout << "HOLDS (all behaviors with at most " << max_events << " events)\n";
  out.finish("modelcheck", "holds");
  return 0;
}

int cmd_decompose(const std::string& cbm_path, const std::string& strategy,
                  const std::string& stt_out, Output& out) {
  CbmFile f = load_cbm_file(cbm_path);
  ValidationResult vr = validate_cbm(f.graph, f.arch);
  if (!vr.ok()) {
    std::cout << "INVALID\nREASON: " << axiom_name(*vr.violation) << "\n";
    out.finish("decompose", "invalid");
    return 1;
  }
  const Cbm& m = *vr.cbm;
  SttPtr tau;
  int budget = 0;
  auto split = strategy.find(':');
  std::string name = strategy.substr(0, split);
  int k = split == std::string::npos ? 0 : std::stoi(strategy.substr(split + 1));
  if (name == "nested") {
    tau = decompose_nested_word(m);
    budget = nested_word_colors();
  } else if (name == "context") {
    tau = decompose_context_bounded(m, k);
    budget = context_bounded_colors(k);
  } else if (name == "scope") {
    tau = decompose_scope_bounded(m, k);
    budget = scope_bounded_colors(k);
  } else if (name == "existential") {
    tau = decompose_exist_bounded(m, k);
    budget = exist_bounded_colors(m.arch, k);
  } else if (name == "search") {
    auto w = stw_oracle(cbm_to_graph(m), k);
    if (!w) {
      std::cout << "NO-TERM\nREASON: not-winnable\n";
      out.finish("decompose", "no-term");
      return 1;
    }
    tau = w->stt;
    budget = k;
  } else {
    throw Error("usage", "unknown strategy " + strategy);
  }
  if (!check_valid_stt(tau, budget) || !stt_evaluates_to_cbm(tau, m))
    throw Error("internal", "emitted term fails re-validation");
  std::cout << stt_to_text(tau) << "\n";
  if (!stt_out.empty()) write_file(stt_out, stt_to_text(tau) + "\n");
  if (!out.dot_path.empty()) write_file(out.dot_path, stt_to_dot(tau));
  out.j["colors"] = budget;
  out.finish("decompose", "ok", stt_out);
  return 0;
}

int cmd_synthesize(const std::string& formula_path, const std::string& arch_path,
                   const std::string& alphabet_csv, const std::string& out_path, Output& out) {
  Architecture arch = load_arch(arch_path);
  std::vector<std::string> sigma;
  std::stringstream ss(alphabet_csv);
  std::string item;
  while (std::getline(ss, item, ',')) sigma.push_back(item);
  PdlSentencePtr phi = parse_pdl_sentence(slurp(formula_path));
  Cpds s = synthesize(arch, sigma, phi);
  std::string text = cpds_to_text(s, arch_path);
  // the emitted file must round-trip through the parser
  {
    std::stringstream in(text);
    Cpds back = parse_cpds(in, ".");
    back.check();
  }
  if (!out_path.empty()) write_file(out_path, text);
  std::cout << "SYNTHESIZED locs=" << s.locs.size() << " trans=" << s.trans.size() << "\n";
  out.j["locs"] = s.locs.size();
  out.j["trans"] = s.trans.size();
  out.finish("synthesize", "ok", out_path);
  return 0;
}

int cmd_class_check(const std::string& cbm_path, const std::string& cls, Output& out) {
  CbmFile f = load_cbm_file(cbm_path);
  ValidationResult vr = validate_cbm(f.graph, f.arch);
  if (!vr.ok()) {
    std::cout << "INVALID\nREASON: " << axiom_name(*vr.violation) << "\n";
    out.finish("class-check", "invalid");
    return 1;
  }
  const Cbm& m = *vr.cbm;
  auto split = cls.find(':');
  if (split == std::string::npos) throw Error("usage", "--class needs name:K");
  std::string name = cls.substr(0, split);
  int k = std::stoi(cls.substr(split + 1));
  bool member = false;
  std::string witness;
  if (name == "context") {
    member = in_context_k(m, k);
    if (member) {
      std::ostringstream w;
      for (auto [lo, hi] : context_split(m)) w << " [" << lo << "," << hi << "]";
      witness = "SPLIT:" + w.str();
    }
  } else if (name == "phase") {
    member = in_phase_k(m, k);
    if (member) {
      std::ostringstream w;
      for (auto [lo, hi] : phase_split(m)) w << " [" << lo << "," << hi << "]";
      witness = "SPLIT:" + w.str();
    }
  } else if (name == "scope") {
    member = in_scope_k(m, k);
  } else if (name == "existential") {
    auto lin = bounded_linearization(m, k);
    member = lin.has_value();
    if (member) {
      std::ostringstream w;
      for (const auto& e : *lin) w << " " << m.arch.procs[e.proc] << "." << e.pos;
      witness = "LINEARIZATION:" + w.str();
    }
  } else {
    throw Error("usage", "unknown class " + name);
  }
  if (member) {
    std::cout << "IN-CLASS\n";
    if (!witness.empty()) std::cout << witness << "\n";
    out.finish("class-check", "in-class");
    return 0;
  }
  std::cout << "NOT-IN-CLASS\nREASON: not-in-class\n";
  out.finish("class-check", "not-in-class");
  return 1;
}

int cmd_eval(const std::string& cbm_path, const std::string& formula_path,
             const std::string& logic, Output& out) {
  CbmFile f = load_cbm_file(cbm_path);
  ValidationResult vr = validate_cbm(f.graph, f.arch);
  if (!vr.ok()) {
    std::cout << "INVALID\nREASON: " << axiom_name(*vr.violation) << "\n";
    out.finish("eval", "invalid");
    return 1;
  }
  std::string text = slurp(formula_path);
  bool holds;
  if (logic == "mso")
    holds = eval_mso(*vr.cbm, parse_mso(text));
  else if (logic == "pdl")
    holds = eval_pdl_sentence_cbm(*vr.cbm, parse_pdl_sentence(text));
  else
    throw Error("usage", "--logic must be mso or pdl");
  std::cout << (holds ? "HOLDS\n" : "REFUTED\nREASON: formula-false\n");
  out.finish("eval", holds ? "holds" : "refuted");
  return holds ? 0 : 1;
}

json state_budget_report(const Cpds& s, int k, bool enabled) {
  json j;
  if (!enabled) return j;
  SttAlphabet alph = SttAlphabet::for_cbm(s.arch, s.alphabet, k);
  auto a_valid = build_A_valid(alph, k);
  auto a_acy = build_A_acyclic(alph, k);
  auto a_edges = build_A_edges(alph, s.arch, k);
  j["k"] = k;
  j["a_valid"] = nta_count_reachable(*a_valid);
  j["a_valid_bound"] = (uint64_t)1 << k;
  j["a_acyclic"] = nta_count_reachable(*a_acy);
  j["a_acyclic_bound"] = (uint64_t)1 << (k + k * k);
  j["a_edges"] = nta_count_reachable(*a_edges);
  double eb = std::pow(2.0, 4 * k) * std::pow((double)s.arch.num_procs(), k);
  j["a_edges_bound"] = eb;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"underapproximate verification of concurrent processes with data structures"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.as_json, "emit a JSON verdict object");
  app.add_option("--dot", out.dot_path, "write a DOT rendering of the main artifact");
  int jobs = 1;
  app.add_option("--jobs", jobs, "worklist parallelism (reserved)");
  unsigned seed = 0;
  app.add_option("--seed", seed, "seed for randomized corpus generation");

  std::string cbm_path, cpds_path, formula_path, arch_path;
  std::string strategy = "nested", cls, logic = "pdl", stt_out, cbm_out, out_path;
  std::string alphabet_csv = "a,b";
  int k = 4, max_events = 6;

  auto* validate = app.add_subcommand("validate", "check the CBM axioms on a .cbm file");
  validate->add_option("cbm", cbm_path)->required();

  auto* nonempty =
      app.add_subcommand("nonempty", "bounded-STW nonemptiness with witness extraction");
  nonempty->add_option("cpds", cpds_path)->required();
  nonempty->add_option("--k", k, "color budget");
  nonempty->add_option("--stt-out", stt_out);
  nonempty->add_option("--cbm-out", cbm_out);

  auto* modelcheck = app.add_subcommand("modelcheck", "bounded-STW model checking");
  modelcheck->add_option("cpds", cpds_path)->required();
  modelcheck->add_option("formula", formula_path)->required();
  modelcheck->add_option("--k", k, "color budget");
  modelcheck->add_option("--logic", logic, "mso | pdl");
  modelcheck->add_option("--max-events", max_events, "event budget for the mso route");

  auto* decompose = app.add_subcommand("decompose", "produce an STT for a CBM");
  decompose->add_option("cbm", cbm_path)->required();
  decompose->add_option("--strategy", strategy,
                        "nested | context:K | scope:K | existential:K | search:K");
  decompose->add_option("--stt-out", stt_out);

  auto* synth = app.add_subcommand("synthesize", "compile a PDL sentence into a CPDS");
  synth->add_option("formula", formula_path)->required();
  synth->add_option("--arch", arch_path)->required();
  synth->add_option("--alphabet", alphabet_csv, "comma-separated letters");
  synth->add_option("-o,--out", out_path);

  auto* classchk = app.add_subcommand("class-check", "underapproximation class membership");
  classchk->add_option("cbm", cbm_path)->required();
  classchk->add_option("--class", cls, "context:K | phase:K | scope:K | existential:K")
      ->required();

  auto* evalc = app.add_subcommand("eval", "evaluate a formula on a CBM");
  evalc->add_option("cbm", cbm_path)->required();
  evalc->add_option("formula", formula_path)->required();
  evalc->add_option("--logic", logic, "mso | pdl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(cbm_path, out);
    if (nonempty->parsed()) return cmd_nonempty(cpds_path, k, stt_out, cbm_out, out);
    if (modelcheck->parsed())
      return cmd_modelcheck(cpds_path, formula_path, k, logic, max_events, out);
    if (decompose->parsed()) return cmd_decompose(cbm_path, strategy, stt_out, out);
    if (synth->parsed())
      return cmd_synthesize(formula_path, arch_path, alphabet_csv, out_path, out);
    if (classchk->parsed()) return cmd_class_check(cbm_path, cls, out);
    if (evalc->parsed()) return cmd_eval(cbm_path, formula_path, logic, out);
  } catch (const Error& e) {
    if (e.tag == "parse" || e.tag == "usage" || e.tag == "io" ||
        e.tag == "unknown-symbol") {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    std::cout << "FAILED\nREASON: " << e.tag << "\n";
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
