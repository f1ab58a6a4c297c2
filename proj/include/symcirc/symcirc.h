/* symcirc - symmetric circuit toolkit
 *
 * C interface to the symcirc shared library.  All objects are opaque
 * handles; every fallible call returns a status code and leaves a
 * human-readable message in symcirc_last_error() on failure.  Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with symcirc_free_string().
 */
#ifndef SYMCIRC_H
#define SYMCIRC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum symcirc_status {
  SYMCIRC_OK = 0,
  SYMCIRC_ERR_PARSE = 1,         /* syntax error in an input text */
  SYMCIRC_ERR_INVALID = 2,       /* circuit failed validation */
  SYMCIRC_ERR_NOT_RIGID = 3,     /* operation requires a rigid circuit */
  SYMCIRC_ERR_NOT_SYMMETRIC = 4, /* no induced automorphism for some swap */
  SYMCIRC_ERR_MISMATCH = 5,      /* circuit/structure sizes or vocabularies */
  SYMCIRC_ERR_TOO_LARGE = 6,     /* brute-force cap exceeded */
  SYMCIRC_ERR_ARG = 7,           /* bad argument */
  SYMCIRC_ERR_INTERNAL = 8
} symcirc_status;

typedef struct symcirc_structure symcirc_structure;
typedef struct symcirc_circuit symcirc_circuit;
typedef struct symcirc_analysis symcirc_analysis;
typedef struct symcirc_formula symcirc_formula;
typedef struct symcirc_query symcirc_query;

/* Message for the most recent failing call on this thread. */
const char *symcirc_last_error(void);
void symcirc_free_string(char *s);

/* ---- relational structures ---- */
symcirc_status symcirc_structure_parse(const char *text,
                                       symcirc_structure **out);
symcirc_status symcirc_structure_serialize(const symcirc_structure *s,
                                           char **out);
int symcirc_structure_size(const symcirc_structure *s);
/* Parse warnings (duplicate tuples), one per line; empty string if none. */
symcirc_status symcirc_structure_warnings(const symcirc_structure *s,
                                          char **out);
void symcirc_structure_free(symcirc_structure *s);

/* ---- circuits ---- */
symcirc_status symcirc_circuit_parse(const char *text, symcirc_circuit **out);
symcirc_status symcirc_circuit_serialize(const symcirc_circuit *c, char **out);
symcirc_status symcirc_circuit_warnings(const symcirc_circuit *c, char **out);
int symcirc_circuit_universe_size(const symcirc_circuit *c);
int symcirc_circuit_arity(const symcirc_circuit *c);
size_t symcirc_circuit_gate_count(const symcirc_circuit *c);
void symcirc_circuit_free(symcirc_circuit *c);

/* Violations one per line into *out (empty string when the circuit is ok). */
symcirc_status symcirc_circuit_validate(const symcirc_circuit *c, char **out);
/* 1 = rigid, 0 = not rigid (witness pair written to *witness if non-NULL),
 * -1 = error. */
int symcirc_circuit_is_rigid(const symcirc_circuit *c, char **witness);
symcirc_status symcirc_circuit_rigidify(const symcirc_circuit *c,
                                        symcirc_circuit **out);

/* ---- symmetry ---- */
/* On SYMCIRC_ERR_NOT_SYMMETRIC the counterexample transposition is written
 * to *cex_u, *cex_v (when non-NULL). */
symcirc_status symcirc_analyze(const symcirc_circuit *c,
                               symcirc_analysis **out, int *cex_u, int *cex_v);
/* One line per gate: gate <id> orbit=<size> sp=<partition> support=<1,2> */
symcirc_status symcirc_analysis_supports_text(const symcirc_analysis *a,
                                              char **out);
/* Support-bound diagnostics as key=value lines. */
symcirc_status symcirc_support_report(const symcirc_analysis *a,
                                      double epsilon, char **out);
void symcirc_analysis_free(symcirc_analysis *a);

/* ---- evaluation ---- */
/* assignment_text: lines `element=point` covering the universe bijectively */
symcirc_status symcirc_eval_naive(const symcirc_circuit *c,
                                  const symcirc_structure *s,
                                  const char *assignment_text,
                                  symcirc_query **out);
/* Succinct support-based evaluation (rigidify + analyze + EV construction).
 * ev_dump, when non-NULL, receives the per-gate EV rows. */
symcirc_status symcirc_eval_succinct(const symcirc_circuit *c,
                                     const symcirc_structure *s,
                                     symcirc_query **out, char **ev_dump,
                                     int *cex_u, int *cex_v);
/* Succinct vs. all-bijection naive evaluation (requires n <= 7);
 * *agree = 1/0. */
symcirc_status symcirc_compare(const symcirc_circuit *c,
                               const symcirc_structure *s, int *agree);

int symcirc_query_arity(const symcirc_query *q);
/* For arity 0: 1 = true, 0 = false.  For arity > 0: 1 iff nonempty. */
int symcirc_query_truth(const symcirc_query *q);
/* `result true|false` for arity 0; one tuple of element names per line
 * otherwise, sorted. */
symcirc_status symcirc_query_format(const symcirc_query *q, char **out);
void symcirc_query_free(symcirc_query *q);

/* ---- formulas ---- */
symcirc_status symcirc_formula_parse(const char *text, symcirc_formula **out);
symcirc_status symcirc_formula_print(const symcirc_formula *f, char **out);
/* basis: "standard" or "majority" */
symcirc_status symcirc_compile(const symcirc_formula *f, int n,
                               const char *basis, int share_subcircuits,
                               symcirc_circuit **out);
void symcirc_formula_free(symcirc_formula *f);

/* ---- partition bound checks ---- */
/* lemma: "small-large" or "largepart".  Writes the number of sampled
 * partitions that met the partition-level hypotheses but violated the
 * inequality, plus a key=value report. */
symcirc_status symcirc_lemma_check(const char *lemma, int n, double epsilon,
                                   long samples, unsigned long long seed,
                                   long *violations, char **report);

#ifdef __cplusplus
}
#endif

#endif /* SYMCIRC_H */
