#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "relstruct.hpp"

namespace symcirc {

// First-order formulas over a relational vocabulary, with equality and an
// optional majority quantifier (`maj x phi`: phi holds for at least half of
// the n values of x).
struct Formula {
  enum class Kind { Atom, Eq, Not, And, Or, Exists, Forall, Maj };
  Kind kind;
  std::string rel;               // Atom
  std::vector<std::string> args; // Atom arguments; Eq uses args[0], args[1]
  std::string var;               // quantifiers
  std::shared_ptr<const Formula> a, b;
};

using FormulaPtr = std::shared_ptr<const Formula>;

// s-expression syntax: (exists x F), (forall x F), (maj x F), (and F G),
// (or F G), (not F), (= x y), (NAME v1 ... vr).
FormulaPtr parse_formula(const std::string &text);
std::string formula_to_string(const Formula &f);

// Free variables in first-occurrence order; they become the output
// coordinates of the compiled circuit, in this order.
std::vector<std::string> free_variables(const Formula &f);
// All variable names occurring (bound or free).
std::vector<std::string> all_variables(const Formula &f);
bool uses_maj(const Formula &f);

struct CompileOptions {
  int n = 1;
  Basis basis = Basis::Standard;
  bool share_subcircuits = true;
};

// One gate per (subformula, assignment of its free variables into [n]);
// existential/universal quantifiers become OR/AND over the n instances of
// the body, majority quantifiers become MAJ.  The result validates and is
// symmetric after rigidify.
Circuit compile(const Formula &f, const CompileOptions &opts);

// Reproducible pseudo-random well-scoped formula; Maj is excluded under the
// standard basis.
FormulaPtr random_formula(int depth, const Vocabulary &vocab, int num_vars,
                          std::uint64_t seed, Basis basis);

// Direct recursive model checking; the independent semantic ground truth for
// the compile/evaluate pipeline.  Free variables range over the structure's
// universe in the same order compile uses.
QueryResult model_check(const Formula &f, const Structure &s);

} // namespace symcirc
