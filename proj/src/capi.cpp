#include "symcirc/symcirc.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "circuit.hpp"
#include "eval.hpp"
#include "foc.hpp"
#include "perm.hpp"
#include "relstruct.hpp"
#include "symmetry.hpp"

using namespace symcirc;

struct symcirc_structure {
  Structure s;
  std::vector<std::string> warnings;
};

struct symcirc_circuit {
  Circuit c;
  std::vector<std::string> warnings;
};

struct symcirc_analysis {
  Circuit c; // the analyzed circuit (analysis indexes into it)
  SymmetryAnalysis a;
};

struct symcirc_formula {
  FormulaPtr f;
};

struct symcirc_query {
  QueryResult q;
};

namespace {

thread_local std::string g_last_error;

symcirc_status status_of(const Error &e) {
  g_last_error = e.what();
  switch (e.code()) {
  case ErrorCode::Parse:
    return SYMCIRC_ERR_PARSE;
  case ErrorCode::Invalid:
    return SYMCIRC_ERR_INVALID;
  case ErrorCode::NotRigid:
    return SYMCIRC_ERR_NOT_RIGID;
  case ErrorCode::NotSymmetric:
    return SYMCIRC_ERR_NOT_SYMMETRIC;
  case ErrorCode::Mismatch:
    return SYMCIRC_ERR_MISMATCH;
  case ErrorCode::TooLarge:
    return SYMCIRC_ERR_TOO_LARGE;
  case ErrorCode::Argument:
    return SYMCIRC_ERR_ARG;
  case ErrorCode::Internal:
    return SYMCIRC_ERR_INTERNAL;
  }
  return SYMCIRC_ERR_INTERNAL;
}

template <typename Fn> symcirc_status guarded(Fn &&fn) {
  try {
    fn();
    return SYMCIRC_OK;
  } catch (const Error &e) {
    return status_of(e);
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return SYMCIRC_ERR_INTERNAL;
  }
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string join_lines(const std::vector<std::string> &lines) {
  std::ostringstream out;
  for (const auto &l : lines)
    out << l << "\n";
  return out.str();
}

symcirc_status require(bool ok, const char *msg) {
  if (ok)
    return SYMCIRC_OK;
  g_last_error = msg;
  return SYMCIRC_ERR_ARG;
}

} // namespace

extern "C" {

const char *symcirc_last_error(void) { return g_last_error.c_str(); }

void symcirc_free_string(char *s) { std::free(s); }

symcirc_status symcirc_structure_parse(const char *text,
                                       symcirc_structure **out) {
  if (auto st = require(text && out, "null argument"))
    return st;
  return guarded([&] {
    auto parsed = parse_structure(text);
    *out = new symcirc_structure{std::move(parsed.s),
                                 std::move(parsed.warnings)};
  });
}

symcirc_status symcirc_structure_serialize(const symcirc_structure *s,
                                           char **out) {
  if (auto st = require(s && out, "null argument"))
    return st;
  return guarded([&] { *out = dup_string(serialize_structure(s->s)); });
}

int symcirc_structure_size(const symcirc_structure *s) {
  return s ? s->s.size() : -1;
}

symcirc_status symcirc_structure_warnings(const symcirc_structure *s,
                                          char **out) {
  if (auto st = require(s && out, "null argument"))
    return st;
  *out = dup_string(join_lines(s->warnings));
  return SYMCIRC_OK;
}

void symcirc_structure_free(symcirc_structure *s) { delete s; }

symcirc_status symcirc_circuit_parse(const char *text, symcirc_circuit **out) {
  if (auto st = require(text && out, "null argument"))
    return st;
  return guarded([&] {
    auto parsed = parse_circuit(text);
    *out = new symcirc_circuit{std::move(parsed.c), std::move(parsed.warnings)};
  });
}

symcirc_status symcirc_circuit_serialize(const symcirc_circuit *c,
                                         char **out) {
  if (auto st = require(c && out, "null argument"))
    return st;
  return guarded([&] { *out = dup_string(serialize_circuit(c->c)); });
}

symcirc_status symcirc_circuit_warnings(const symcirc_circuit *c, char **out) {
  if (auto st = require(c && out, "null argument"))
    return st;
  *out = dup_string(join_lines(c->warnings));
  return SYMCIRC_OK;
}

int symcirc_circuit_universe_size(const symcirc_circuit *c) {
  return c ? c->c.n : -1;
}

int symcirc_circuit_arity(const symcirc_circuit *c) { return c ? c->c.q : -1; }

size_t symcirc_circuit_gate_count(const symcirc_circuit *c) {
  return c ? static_cast<size_t>(c->c.gate_count()) : 0;
}

void symcirc_circuit_free(symcirc_circuit *c) { delete c; }

symcirc_status symcirc_circuit_validate(const symcirc_circuit *c, char **out) {
  if (auto st = require(c && out, "null argument"))
    return st;
  return guarded([&] { *out = dup_string(join_lines(validate(c->c))); });
}

int symcirc_circuit_is_rigid(const symcirc_circuit *c, char **witness) {
  if (!c) {
    g_last_error = "null argument";
    return -1;
  }
  try {
    auto w = rigidity_witness(c->c);
    if (!w)
      return 1;
    if (witness)
      *witness = dup_string(c->c.gate_names[w->first] + " " +
                            c->c.gate_names[w->second]);
    return 0;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return -1;
  }
}

symcirc_status symcirc_circuit_rigidify(const symcirc_circuit *c,
                                        symcirc_circuit **out) {
  if (auto st = require(c && out, "null argument"))
    return st;
  return guarded([&] { *out = new symcirc_circuit{rigidify(c->c), {}}; });
}

symcirc_status symcirc_analyze(const symcirc_circuit *c,
                               symcirc_analysis **out, int *cex_u,
                               int *cex_v) {
  if (auto st = require(c && out, "null argument"))
    return st;
  return guarded([&] {
    auto result = analyze_symmetry(c->c);
    if (auto *cex = std::get_if<std::pair<int, int>>(&result)) {
      if (cex_u)
        *cex_u = cex->first;
      if (cex_v)
        *cex_v = cex->second;
      throw NotSymmetricError(cex->first, cex->second);
    }
    *out = new symcirc_analysis{c->c, std::get<SymmetryAnalysis>(result)};
  });
}

symcirc_status symcirc_analysis_supports_text(const symcirc_analysis *a,
                                              char **out) {
  if (auto st = require(a && out, "null argument"))
    return st;
  return guarded([&] { *out = dup_string(supports_text(a->c, a->a)); });
}

symcirc_status symcirc_support_report(const symcirc_analysis *a,
                                      double epsilon, char **out) {
  if (auto st = require(a && out, "null argument"))
    return st;
  return guarded(
      [&] { *out = dup_string(support_report(a->c, a->a, epsilon).format_kv()); });
}

void symcirc_analysis_free(symcirc_analysis *a) { delete a; }

symcirc_status symcirc_eval_naive(const symcirc_circuit *c,
                                  const symcirc_structure *s,
                                  const char *assignment_text,
                                  symcirc_query **out) {
  if (auto st = require(c && s && assignment_text && out, "null argument"))
    return st;
  return guarded([&] {
    Assignment gamma = Assignment::parse(assignment_text, s->s);
    *out = new symcirc_query{naive_evaluate(c->c, s->s, gamma).query};
  });
}

symcirc_status symcirc_eval_succinct(const symcirc_circuit *c,
                                     const symcirc_structure *s,
                                     symcirc_query **out, char **ev_dump,
                                     int *cex_u, int *cex_v) {
  if (auto st = require(c && s && out, "null argument"))
    return st;
  return guarded([&] {
    try {
      SuccinctRun run = succinct_evaluate_full(c->c, s->s);
      if (ev_dump)
        *ev_dump = dup_string(dump_ev(run.rigid, s->s, run.ev));
      *out = new symcirc_query{std::move(run.query)};
    } catch (const NotSymmetricError &e) {
      if (cex_u)
        *cex_u = e.u();
      if (cex_v)
        *cex_v = e.v();
      throw;
    }
  });
}

symcirc_status symcirc_compare(const symcirc_circuit *c,
                               const symcirc_structure *s, int *agree) {
  if (auto st = require(c && s && agree, "null argument"))
    return st;
  return guarded([&] {
    if (c->c.n > 7)
      throw Error(ErrorCode::TooLarge,
                  "compare enumerates all bijections; requires n <= 7");
    QueryResult succinct = succinct_evaluate(c->c, s->s);
    *agree = 1;
    for (const auto &perm : all_permutations(c->c.n)) {
      Assignment gamma;
      gamma.to_point = perm.img;
      QueryResult naive = naive_evaluate(c->c, s->s, gamma).query;
      if (naive.tuples != succinct.tuples) {
        *agree = 0;
        return;
      }
    }
  });
}

int symcirc_query_arity(const symcirc_query *q) { return q ? q->q.q : -1; }

int symcirc_query_truth(const symcirc_query *q) {
  return q ? (q->q.truth() ? 1 : 0) : -1;
}

symcirc_status symcirc_query_format(const symcirc_query *q, char **out) {
  if (auto st = require(q && out, "null argument"))
    return st;
  *out = dup_string(q->q.format());
  return SYMCIRC_OK;
}

void symcirc_query_free(symcirc_query *q) { delete q; }

symcirc_status symcirc_formula_parse(const char *text, symcirc_formula **out) {
  if (auto st = require(text && out, "null argument"))
    return st;
  return guarded([&] { *out = new symcirc_formula{parse_formula(text)}; });
}

symcirc_status symcirc_formula_print(const symcirc_formula *f, char **out) {
  if (auto st = require(f && out, "null argument"))
    return st;
  return guarded([&] { *out = dup_string(formula_to_string(*f->f)); });
}

symcirc_status symcirc_compile(const symcirc_formula *f, int n,
                               const char *basis, int share_subcircuits,
                               symcirc_circuit **out) {
  if (auto st = require(f && basis && out, "null argument"))
    return st;
  return guarded([&] {
    CompileOptions opts;
    opts.n = n;
    opts.share_subcircuits = share_subcircuits != 0;
    std::string b = basis;
    if (b == "standard")
      opts.basis = Basis::Standard;
    else if (b == "majority")
      opts.basis = Basis::Majority;
    else
      throw Error(ErrorCode::Argument, "unknown basis " + b);
    *out = new symcirc_circuit{compile(*f->f, opts), {}};
  });
}

void symcirc_formula_free(symcirc_formula *f) { delete f; }

symcirc_status symcirc_lemma_check(const char *lemma, int n, double epsilon,
                                   long samples, unsigned long long seed,
                                   long *violations, char **report) {
  if (auto st = require(lemma && violations, "null argument"))
    return st;
  return guarded([&] {
    std::string which = lemma;
    LemmaKind kind;
    if (which == "small-large")
      kind = LemmaKind::SmallLarge;
    else if (which == "largepart")
      kind = LemmaKind::LargePart;
    else
      throw Error(ErrorCode::Argument, "unknown lemma " + which);
    LemmaCheckResult r = lemma_check(kind, n, epsilon, samples, seed);
    *violations = r.violations;
    if (report)
      *report = dup_string(r.report_kv());
  });
}

} // extern "C"
