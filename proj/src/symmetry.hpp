#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "circuit.hpp"
#include "perm.hpp"

namespace symcirc {

// Gate bijection pi witnessing that sigma induces an automorphism: wires,
// labels, output markings and Lambda are all preserved.
struct InducedAutomorphism {
  Perm sigma;
  std::vector<int> pi; // gate index -> gate index
};

// Returns the unique automorphism induced by sigma, or nullopt when none
// exists.  Requires a rigid circuit (throws Error(NotRigid) otherwise).
std::optional<InducedAutomorphism> induced_automorphism(const Circuit &c,
                                                        const Perm &sigma);

struct SymmetryAnalysis {
  int n = 0;
  // keyed by (u, v) with u < v
  std::map<std::pair<int, int>, InducedAutomorphism> transposition_autos;
  struct GateInfo {
    int orbit_id = 0;            // minimum gate index in the orbit
    long long orbit_size = 0;
    Partition sp;                // coarsest supporting partition SP(g)
    std::vector<int> support;    // canonical support spt(g), sorted
  };
  std::vector<GateInfo> gates;

  const InducedAutomorphism &transposition(int u, int v) const;
};

// Decides symmetry by attempting all n(n-1)/2 transpositions.  On success
// returns the analysis (orbits, SP(g), canonical supports); on failure
// returns the counterexample transposition.
std::variant<SymmetryAnalysis, std::pair<int, int>>
analyze_symmetry(const Circuit &c);

// Convenience wrapper that throws NotSymmetricError on the failure branch.
SymmetryAnalysis analyze_symmetry_or_throw(const Circuit &c);

// |Orb(g)| from the analysis equals n!/|Stab(g)| with the stabiliser counted
// by brute force over Sym(n).  Requires n <= 5.
bool orbit_stabiliser_check(const Circuit &c, const SymmetryAnalysis &a);

// (a) every permutation fixing spt(g) pointwise fixes g, and (b) SP(g)
// equals the coarsest supporting partition of Stab(g) found by Bell-number
// enumeration.  Requires n <= 5.
bool brute_force_support_check(const Circuit &c, const SymmetryAnalysis &a);

// Diagnostic report against the support-size bound.
struct SupportReport {
  int n = 0;
  long long max_orbit_size = 0; // s
  int sp_of_circuit = 0;        // max over gates of ||SP(g)||
  double epsilon = 0;
  double theorem_bound = 0;     // (33/eps) * log2(s)/log2(n)
  bool hyp_epsilon = false;     // 2/3 <= eps <= 1
  bool hyp_n = false;           // n > 2^(56/eps^2)
  bool hyp_orbit = false;       // s <= 2^(n^(1-eps))
  bool hypotheses_met = false;
  bool bound_holds = false;     // sp_of_circuit <= theorem_bound

  std::string format_kv() const;
};

SupportReport support_report(const Circuit &c, const SymmetryAnalysis &a,
                             double epsilon);

// One line per gate: `gate <id> orbit=<size> sp=<partition> support=<...>`.
std::string supports_text(const Circuit &c, const SymmetryAnalysis &a);

} // namespace symcirc
