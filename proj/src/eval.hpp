#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "symmetry.hpp"

namespace symcirc {

// Injective partial valuation: domain is a sorted subset of the circuit
// universe [n]; image[i] is the structure-element index assigned to
// domain[i].
struct PartialValuation {
  std::vector<int> domain;
  std::vector<int> image;
};

// Two valuations are consistent when they agree on the shared domain and no
// point exclusive to one domain maps onto an image used by the other on its
// exclusive domain (equivalently, the union is an injective function).
bool consistent(const PartialValuation &a, const PartialValuation &b);

// Per-gate EV sets: the injective valuations of the gate's evaluation domain
// that force the gate to 1.
//
// The evaluation domain is the canonical support extended, where necessary,
// with the gate's Lambda elements (relational gates) and output-marking
// elements (output gates).  At large n those sets coincide with the
// canonical support; at small n a tie among maximal SP-blocks can leave a
// marking element outside the canonical support, and the extension keeps
// query extraction a direct image while preserving the support property.
struct EVRelation {
  struct GateEV {
    std::vector<int> domain;            // sorted points of [n]
    std::vector<std::vector<int>> rows; // sorted; aligned with domain
  };
  std::vector<GateEV> gates;

  bool contains(int gate, const std::vector<int> &row) const;
  std::uint64_t total_rows() const;
};

struct EvalStats {
  std::uint64_t integrality_checks = 0;
  std::uint64_t ev_rows = 0;
};

// Bottom-up construction of EV over a rigid symmetric circuit.  Asserts the
// child-fraction sum is integral at every internal gate and every valuation
// (throws Error(Internal) on violation).
EVRelation build_ev(const Circuit &c, const Structure &s,
                    const SymmetryAnalysis &a, EvalStats *stats = nullptr);

// Number of injective beta over `domain_h` consistent with a fixed valuation
// of `domain_g` (falling-factorial formula).
std::int64_t consistent_extension_count(int n, const std::vector<int> &domain_g,
                                        const std::vector<int> &domain_h);

QueryResult extract_query(const Circuit &c, const Structure &s,
                          const SymmetryAnalysis &a, const EVRelation &ev);

// Full pipeline: validate, rigidify, analyze, build EV, extract.
// Throws NotSymmetricError (with the counterexample transposition) when the
// rigidified circuit is not symmetric.
QueryResult succinct_evaluate(const Circuit &c, const Structure &s);

struct SuccinctRun {
  Circuit rigid;
  SymmetryAnalysis analysis;
  EVRelation ev;
  QueryResult query;
  EvalStats stats;
};

SuccinctRun succinct_evaluate_full(const Circuit &c, const Structure &s);

// Debug dump of per-gate EV rows.
std::string dump_ev(const Circuit &c, const Structure &s, const EVRelation &ev);

} // namespace symcirc
