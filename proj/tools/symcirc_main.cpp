// symcirc command-line front end.  Talks to the core exclusively through the
// C API in symcirc/symcirc.h.
//
// Exit codes: 0 success (or semantic positive), 1 semantic negative
// (violations, not symmetric, disagreement), 2 usage or input errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "symcirc/symcirc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

[[noreturn]] void die(const std::string &msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(kExitError);
}

void check(symcirc_status st) {
  if (st != SYMCIRC_OK)
    die(symcirc_last_error());
}

struct StringOut {
  char *s = nullptr;
  ~StringOut() { symcirc_free_string(s); }
  std::string str() const { return s ? s : ""; }
};

using CircuitPtr = std::unique_ptr<symcirc_circuit, void (*)(symcirc_circuit *)>;
using StructurePtr =
    std::unique_ptr<symcirc_structure, void (*)(symcirc_structure *)>;

CircuitPtr load_circuit(const std::string &path) {
  symcirc_circuit *c = nullptr;
  check(symcirc_circuit_parse(slurp(path).c_str(), &c));
  StringOut warnings;
  symcirc_circuit_warnings(c, &warnings.s);
  if (!warnings.str().empty())
    std::cerr << warnings.str();
  return CircuitPtr(c, symcirc_circuit_free);
}

StructurePtr load_structure(const std::string &path) {
  symcirc_structure *s = nullptr;
  check(symcirc_structure_parse(slurp(path).c_str(), &s));
  StringOut warnings;
  symcirc_structure_warnings(s, &warnings.s);
  if (!warnings.str().empty())
    std::cerr << warnings.str();
  return StructurePtr(s, symcirc_structure_free);
}

int cmd_validate(const std::string &circuit_file) {
  auto c = load_circuit(circuit_file);
  StringOut violations;
  check(symcirc_circuit_validate(c.get(), &violations.s));
  if (violations.str().empty()) {
    std::cout << "ok\n";
    return kExitOk;
  }
  std::cout << violations.str();
  return kExitNegative;
}

int cmd_rigidify(const std::string &circuit_file, const std::string &out_file) {
  auto c = load_circuit(circuit_file);
  symcirc_circuit *rigid = nullptr;
  check(symcirc_circuit_rigidify(c.get(), &rigid));
  CircuitPtr holder(rigid, symcirc_circuit_free);
  StringOut text;
  check(symcirc_circuit_serialize(rigid, &text.s));
  write_file(out_file, text.str());
  return kExitOk;
}

int cmd_check_sym(const std::string &circuit_file) {
  auto c = load_circuit(circuit_file);
  symcirc_analysis *a = nullptr;
  int u = 0, v = 0;
  symcirc_status st = symcirc_analyze(c.get(), &a, &u, &v);
  if (st == SYMCIRC_OK) {
    symcirc_analysis_free(a);
    std::cout << "symmetric\n";
    return kExitOk;
  }
  if (st == SYMCIRC_ERR_NOT_SYMMETRIC) {
    std::cout << "not symmetric: counterexample transposition (" << u << " "
              << v << ")\n";
    return kExitNegative;
  }
  die(symcirc_last_error());
}

int cmd_supports(const std::string &circuit_file, double epsilon) {
  auto c = load_circuit(circuit_file);
  symcirc_analysis *a = nullptr;
  int u = 0, v = 0;
  symcirc_status st = symcirc_analyze(c.get(), &a, &u, &v);
  if (st == SYMCIRC_ERR_NOT_SYMMETRIC) {
    std::cout << "not symmetric: counterexample transposition (" << u << " "
              << v << ")\n";
    return kExitNegative;
  }
  check(st);
  StringOut lines, report;
  check(symcirc_analysis_supports_text(a, &lines.s));
  check(symcirc_support_report(a, epsilon, &report.s));
  symcirc_analysis_free(a);
  std::cout << lines.str() << report.str();
  return kExitOk;
}

int cmd_eval_naive(const std::string &circuit_file,
                   const std::string &structure_file,
                   const std::string &assignment_file) {
  auto c = load_circuit(circuit_file);
  auto s = load_structure(structure_file);
  symcirc_query *q = nullptr;
  check(symcirc_eval_naive(c.get(), s.get(), slurp(assignment_file).c_str(),
                           &q));
  StringOut text;
  symcirc_query_format(q, &text.s);
  symcirc_query_free(q);
  std::cout << text.str();
  return kExitOk;
}

int cmd_eval(const std::string &circuit_file, const std::string &structure_file,
             bool dump_ev) {
  auto c = load_circuit(circuit_file);
  auto s = load_structure(structure_file);
  symcirc_query *q = nullptr;
  StringOut dump;
  int u = 0, v = 0;
  symcirc_status st = symcirc_eval_succinct(
      c.get(), s.get(), &q, dump_ev ? &dump.s : nullptr, &u, &v);
  if (st == SYMCIRC_ERR_NOT_SYMMETRIC) {
    std::cout << "not symmetric: counterexample transposition (" << u << " "
              << v << ")\n";
    return kExitNegative;
  }
  check(st);
  if (dump_ev)
    std::cerr << dump.str();
  StringOut text;
  symcirc_query_format(q, &text.s);
  symcirc_query_free(q);
  std::cout << text.str();
  return kExitOk;
}

int cmd_compile(const std::string &formula_file, const std::string &expr,
                int n, const std::string &basis, bool no_share,
                const std::string &out_file) {
  std::string text;
  if (!expr.empty())
    text = expr;
  else if (!formula_file.empty())
    text = slurp(formula_file);
  else
    die("compile needs -f FILE or -e EXPR");
  symcirc_formula *f = nullptr;
  check(symcirc_formula_parse(text.c_str(), &f));
  symcirc_circuit *c = nullptr;
  symcirc_status st = symcirc_compile(f, n, basis.c_str(), no_share ? 0 : 1, &c);
  symcirc_formula_free(f);
  check(st);
  CircuitPtr holder(c, symcirc_circuit_free);
  StringOut out;
  check(symcirc_circuit_serialize(c, &out.s));
  write_file(out_file, out.str());
  return kExitOk;
}

int cmd_compare(const std::string &circuit_file,
                const std::string &structure_file) {
  auto c = load_circuit(circuit_file);
  auto s = load_structure(structure_file);
  int agree = 0;
  check(symcirc_compare(c.get(), s.get(), &agree));
  std::cout << (agree ? "agree\n" : "disagree\n");
  return agree ? kExitOk : kExitNegative;
}

int cmd_lemma_check(const std::string &lemma, int n, double epsilon,
                    long samples, unsigned long long seed) {
  long violations = -1;
  StringOut report;
  check(symcirc_lemma_check(lemma.c_str(), n, epsilon, samples, seed,
                            &violations, &report.s));
  std::cout << report.str() << "seed=" << seed << "\n";
  return violations == 0 ? kExitOk : kExitNegative;
}

int cmd_bound_report(const std::string &circuit_file, double epsilon) {
  auto c = load_circuit(circuit_file);
  symcirc_analysis *a = nullptr;
  int u = 0, v = 0;
  symcirc_status st = symcirc_analyze(c.get(), &a, &u, &v);
  if (st == SYMCIRC_ERR_NOT_SYMMETRIC) {
    std::cout << "not symmetric: counterexample transposition (" << u << " "
              << v << ")\n";
    return kExitNegative;
  }
  check(st);
  StringOut report;
  check(symcirc_support_report(a, epsilon, &report.s));
  symcirc_analysis_free(a);
  std::cout << report.str();
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"symcirc: symmetric circuit toolkit"};
  app.require_subcommand(1);

  std::string circuit_file, structure_file, assignment_file, out_file;
  std::string formula_file, expr, basis = "standard", lemma;
  double epsilon = 0.9;
  int n = 0;
  long samples = 10000;
  unsigned long long seed = 0;
  bool dump_flag = false, no_share = false;

  auto *validate = app.add_subcommand("validate", "check circuit invariants");
  validate->add_option("-c,--circuit", circuit_file)->required();

  auto *rigidify = app.add_subcommand("rigidify", "emit an equivalent rigid circuit");
  rigidify->add_option("-c,--circuit", circuit_file)->required();
  rigidify->add_option("-o,--output", out_file)->required();

  auto *checksym = app.add_subcommand("check-sym", "decide symmetry");
  checksym->add_option("-c,--circuit", circuit_file)->required();

  auto *supports = app.add_subcommand(
      "supports", "per-gate orbits, supporting partitions and supports");
  supports->add_option("-c,--circuit", circuit_file)->required();
  supports->add_option("--epsilon", epsilon);

  auto *evalnaive =
      app.add_subcommand("eval-naive", "evaluate under an explicit bijection");
  evalnaive->add_option("-c,--circuit", circuit_file)->required();
  evalnaive->add_option("-s,--structure", structure_file)->required();
  evalnaive->add_option("-b,--bijection", assignment_file)->required();

  auto *eval = app.add_subcommand("eval", "succinct support-based evaluation");
  eval->add_option("-c,--circuit", circuit_file)->required();
  eval->add_option("-s,--structure", structure_file)->required();
  eval->add_flag("--dump-ev", dump_flag, "dump per-gate EV rows to stderr");

  auto *compile = app.add_subcommand("compile", "compile a formula to a circuit");
  compile->add_option("-f,--formula", formula_file, "formula file");
  compile->add_option("-e,--expr", expr, "formula text");
  compile->add_option("-n", n, "universe size")->required();
  compile->add_option("--basis", basis)->check(CLI::IsMember({"standard", "majority"}));
  compile->add_flag("--no-share", no_share, "fresh gates per subformula instance");
  compile->add_option("-o,--output", out_file)->required();

  auto *compare =
      app.add_subcommand("compare", "succinct vs. all-bijection naive (n <= 7)");
  compare->add_option("-c,--circuit", circuit_file)->required();
  compare->add_option("-s,--structure", structure_file)->required();

  auto *lemmacheck =
      app.add_subcommand("lemma-check", "sampled partition-bound checks");
  lemmacheck->add_option("--lemma", lemma)
      ->required()
      ->check(CLI::IsMember({"small-large", "largepart"}));
  lemmacheck->add_option("--n", n)->required();
  lemmacheck->add_option("--epsilon", epsilon)->required();
  lemmacheck->add_option("--samples", samples);
  lemmacheck->add_option("--seed", seed)->required();

  auto *boundreport =
      app.add_subcommand("bound-report", "support-bound diagnostics");
  boundreport->add_option("-c,--circuit", circuit_file)->required();
  boundreport->add_option("--epsilon", epsilon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (validate->parsed())
      return cmd_validate(circuit_file);
    if (rigidify->parsed())
      return cmd_rigidify(circuit_file, out_file);
    if (checksym->parsed())
      return cmd_check_sym(circuit_file);
    if (supports->parsed())
      return cmd_supports(circuit_file, epsilon);
    if (evalnaive->parsed())
      return cmd_eval_naive(circuit_file, structure_file, assignment_file);
    if (eval->parsed())
      return cmd_eval(circuit_file, structure_file, dump_flag);
    if (compile->parsed())
      return cmd_compile(formula_file, expr, n, basis, no_share, out_file);
    if (compare->parsed())
      return cmd_compare(circuit_file, structure_file);
    if (lemmacheck->parsed())
      return cmd_lemma_check(lemma, n, epsilon, samples, seed);
    if (boundreport->parsed())
      return cmd_bound_report(circuit_file, epsilon);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
