#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "perm.hpp"
#include "relstruct.hpp"

namespace symcirc {

enum class Basis { Standard, Majority };
enum class GateKind { Const0, Const1, Rel, And, Or, Not, Maj };

const char *gate_kind_name(GateKind k);
bool is_input_kind(GateKind k);

struct GateLabel {
  GateKind kind = GateKind::Const0;
  std::string rel;        // Rel gates: relation symbol
  std::vector<int> tuple; // Rel gates: Lambda(g), entries in [n]

  bool operator==(const GateLabel &o) const {
    return kind == o.kind && rel == o.rel && tuple == o.tuple;
  }
};

// A circuit over the universe [n]: labelled DAG with relational/constant
// inputs, basis gates, and an injective output mapping on [n]^q.
//
// Gates are referred to by dense index; gate_names holds the external opaque
// tokens.  children lists are sorted and duplicate-free (wires form a set).
struct Circuit {
  int n = 0;
  int q = 0;
  Basis basis = Basis::Standard;
  std::vector<std::string> gate_names;
  std::vector<GateLabel> labels;
  std::vector<std::vector<int>> children;
  // outputs[slot] = (tuple in [n]^q, gate index); slots in row-major tuple
  // order.  For q = 0 there is exactly one slot with the empty tuple.
  std::vector<std::pair<std::vector<int>, int>> outputs;

  // caches, rebuilt by finalize()
  std::unordered_map<std::string, int> name_index;
  std::vector<int> out_slot_of_gate; // -1 when not an output gate

  int gate_count() const { return static_cast<int>(gate_names.size()); }
  int index_of(const std::string &name) const;
  int add_gate(const std::string &name, GateLabel label,
               std::vector<int> kids = {});
  void finalize(); // rebuilds caches; call after structural edits

  bool is_output(int g) const { return out_slot_of_gate[g] >= 0; }
  const std::vector<int> *output_tuple(int g) const; // nullptr if not output
};

bool operator==(const Circuit &a, const Circuit &b);

struct ParsedCircuit {
  Circuit c;
  std::vector<std::string> warnings;
};

ParsedCircuit parse_circuit(const std::string &text);
std::string serialize_circuit(const Circuit &c);

// Empty list means the circuit satisfies all structural invariants.
std::vector<std::string> validate(const Circuit &c);
void require_valid(const Circuit &c); // throws Error(Invalid) with details

// Children precede parents; throws Error(Invalid) on a wire cycle.
std::vector<int> topological_order(const Circuit &c);
// Longest path from an input gate; input gates have height 0.
std::vector<int> gate_heights(const Circuit &c);

// Rigidity: no two distinct gates with the same label, same Lambda value,
// same output marking, and the same children.
std::optional<std::pair<int, int>> rigidity_witness(const Circuit &c);
bool is_rigid(const Circuit &c);

// Equivalent rigid circuit on the same gate set (per-gate values preserved on
// every input structure and bijection; symmetry preserved).
Circuit rigidify(const Circuit &c);

// Bijection from a structure's universe to the circuit universe [n];
// to_point[element index] = point.
struct Assignment {
  std::vector<int> to_point;

  static Assignment parse(const std::string &text, const Structure &s);
  std::string serialize(const Structure &s) const;
  std::vector<int> element_of_point() const; // inverse, 0-based by point-1
};

// Result of evaluating a q-ary query: set of q-tuples of element names.
// For q = 0 the query holds iff the empty tuple is present.
struct QueryResult {
  int q = 0;
  std::set<std::vector<std::string>> tuples;

  bool truth() const { return !tuples.empty(); }
  std::string format() const;
};

struct NaiveEval {
  std::vector<unsigned char> values; // per gate
  QueryResult query;
};

// Recursive bijection-based evaluation of the circuit on gamma(A).
NaiveEval naive_evaluate(const Circuit &c, const Structure &s,
                         const Assignment &gamma);

// True iff the computed query is identical across all n! assignments.
// Requires n <= 8.
bool is_invariant_bruteforce(const Circuit &c, const Structure &s);

// Throws Error(Mismatch) unless |s| = n and s's vocabulary covers every
// relational gate label at the right arity.
void check_compatible(const Circuit &c, const Structure &s);

} // namespace symcirc
