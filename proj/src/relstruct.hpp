#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace symcirc {

// A relational vocabulary: a finite list of relation symbols with arities.
struct Vocabulary {
  std::vector<std::pair<std::string, int>> symbols; // declaration order

  bool has(const std::string &name) const;
  int arity(const std::string &name) const; // throws Error(Argument) if unknown
};

bool operator==(const Vocabulary &a, const Vocabulary &b);

// A finite relational structure.  Elements are arbitrary non-whitespace
// tokens; their declaration order is the stable iteration order.  Tuples are
// stored as element indices into `universe`.
struct Structure {
  Vocabulary vocab;
  std::vector<std::string> universe;
  std::map<std::string, std::set<std::vector<int>>> relations;

  int size() const { return static_cast<int>(universe.size()); }
  int element_index(const std::string &name) const; // -1 if absent

  bool holds_idx(const std::string &symbol, const std::vector<int> &tuple) const;
  bool holds(const std::string &symbol,
             const std::vector<std::string> &tuple) const;
};

bool operator==(const Structure &a, const Structure &b);

struct ParsedStructure {
  Structure s;
  std::vector<std::string> warnings;
};

ParsedStructure parse_structure(const std::string &text);
std::string serialize_structure(const Structure &s);

// New structure with universe relabelled by the total bijection gamma.
Structure relabel(const Structure &s,
                  const std::map<std::string, std::string> &gamma);

} // namespace symcirc
