// Test-only oracles, kept independent of the implementation paths they
// check: reference EV sets by full bijection enumeration, automorphism
// existence by backtracking search, and seeded random inputs.
#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "eval.hpp"
#include "foc.hpp"
#include "perm.hpp"
#include "relstruct.hpp"

namespace symcirc::testing {

inline Structure make_structure(const std::string &text) {
  return parse_structure(text).s;
}

inline Circuit make_circuit(const std::string &text) {
  return parse_circuit(text).c;
}

// Random structure over the vocabulary with elements e1..en; every tuple is
// present independently with probability 1/2.
inline Structure random_structure(const Vocabulary &vocab, int n,
                                  std::uint64_t seed) {
  Structure s;
  s.vocab = vocab;
  for (int i = 1; i <= n; ++i)
    s.universe.push_back("e" + std::to_string(i));
  std::mt19937_64 rng(seed);
  for (const auto &[name, arity] : vocab.symbols) {
    std::vector<int> tuple(arity, 0);
    while (true) {
      if (rng() % 2 == 0)
        s.relations[name].insert(tuple);
      int i = arity - 1;
      for (; i >= 0; --i) {
        if (tuple[i] + 1 < n) {
          ++tuple[i];
          std::fill(tuple.begin() + i + 1, tuple.end(), 0);
          break;
        }
      }
      if (i < 0)
        break;
    }
  }
  return s;
}

inline Vocabulary graph_vocab() {
  Vocabulary v;
  v.symbols = {{"E", 2}, {"P", 1}};
  return v;
}

inline Assignment assignment_from_perm(const Perm &p) {
  Assignment a;
  a.to_point = p.img;
  return a;
}

// Reference EV(g) over the given domain: collect gamma^{-1}|domain for every
// bijection gamma that makes g evaluate to 1.  Full n! enumeration,
// independent of build_ev.
inline std::set<std::vector<int>>
ev_reference(const Circuit &c, const Structure &s, int gate,
             const std::vector<int> &domain) {
  std::set<std::vector<int>> rows;
  for (const auto &perm : all_permutations(c.n)) {
    NaiveEval ne = naive_evaluate(c, s, assignment_from_perm(perm));
    if (!ne.values[gate])
      continue;
    auto element_of = assignment_from_perm(perm).element_of_point();
    std::vector<int> row;
    row.reserve(domain.size());
    for (int u : domain)
      row.push_back(element_of[u - 1]);
    rows.insert(std::move(row));
  }
  return rows;
}

// Does sigma induce *some* automorphism?  Backtracking over gates in
// topological order, trying every candidate image that matches labels,
// Lambda, output markings, and wire consistency with already-assigned gates.
// Makes no use of rigidity; intended for small circuits.
inline bool automorphism_exists_backtracking(const Circuit &c,
                                             const Perm &sigma) {
  auto order = topological_order(c);
  int gates = c.gate_count();
  std::vector<int> image(gates, -1), preimage(gates, -1);

  auto marking = [&](int g) -> const std::vector<int> * {
    return c.output_tuple(g);
  };
  auto candidate_ok = [&](int g, int h) {
    if (!(c.labels[g].kind == c.labels[h].kind &&
          c.labels[g].rel == c.labels[h].rel))
      return false;
    if (c.labels[g].kind == GateKind::Rel) {
      std::vector<int> mapped;
      for (int u : c.labels[g].tuple)
        mapped.push_back(sigma.apply(u));
      if (mapped != c.labels[h].tuple)
        return false;
    }
    const std::vector<int> *mg = marking(g), *mh = marking(h);
    if ((mg == nullptr) != (mh == nullptr))
      return false;
    if (mg) {
      std::vector<int> mapped;
      for (int u : *mg)
        mapped.push_back(sigma.apply(u));
      if (mapped != *mh)
        return false;
    }
    if (c.children[g].size() != c.children[h].size())
      return false;
    // children are earlier in topological order, hence already assigned
    std::vector<int> mapped;
    for (int k : c.children[g]) {
      if (image[k] < 0)
        return false;
      mapped.push_back(image[k]);
    }
    std::sort(mapped.begin(), mapped.end());
    return mapped == c.children[h];
  };

  auto rec = [&](auto &&self, size_t pos) -> bool {
    if (pos == order.size())
      return true;
    int g = order[pos];
    for (int h = 0; h < gates; ++h) {
      if (preimage[h] >= 0 || !candidate_ok(g, h))
        continue;
      image[g] = h;
      preimage[h] = g;
      if (self(self, pos + 1))
        return true;
      image[g] = -1;
      preimage[h] = -1;
    }
    return false;
  };
  return rec(rec, 0);
}

// Hand-built circuit: OR over all relational gates E(i,j), i != j, q = 0.
inline Circuit all_edges_or_circuit(int n) {
  Circuit c;
  c.n = n;
  c.q = 0;
  c.basis = Basis::Standard;
  std::vector<int> inputs;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j)
        continue;
      inputs.push_back(c.add_gate(
          "e" + std::to_string(i) + "_" + std::to_string(j),
          GateLabel{GateKind::Rel, "E", {i, j}}));
    }
  int root = c.add_gate("root", GateLabel{GateKind::Or, "", {}}, inputs);
  c.outputs.emplace_back(std::vector<int>{}, root);
  c.finalize();
  return c;
}

} // namespace symcirc::testing
