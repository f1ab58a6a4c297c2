#include "relstruct.hpp"

#include <algorithm>
#include <sstream>

namespace symcirc {

bool Vocabulary::has(const std::string &name) const {
  for (const auto &[n, a] : symbols)
    if (n == name)
      return true;
  return false;
}

int Vocabulary::arity(const std::string &name) const {
  for (const auto &[n, a] : symbols)
    if (n == name)
      return a;
  throw Error(ErrorCode::Argument, "unknown relation symbol: " + name);
}

bool operator==(const Vocabulary &a, const Vocabulary &b) {
  return a.symbols == b.symbols;
}

int Structure::element_index(const std::string &name) const {
  for (size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == name)
      return static_cast<int>(i);
  return -1;
}

bool Structure::holds_idx(const std::string &symbol,
                          const std::vector<int> &tuple) const {
  if (!vocab.has(symbol))
    throw Error(ErrorCode::Argument, "unknown relation symbol: " + symbol);
  if (static_cast<int>(tuple.size()) != vocab.arity(symbol))
    throw Error(ErrorCode::Argument, "arity mismatch for " + symbol);
  auto it = relations.find(symbol);
  if (it == relations.end())
    return false;
  return it->second.count(tuple) > 0;
}

bool Structure::holds(const std::string &symbol,
                      const std::vector<std::string> &tuple) const {
  std::vector<int> idx;
  idx.reserve(tuple.size());
  for (const auto &e : tuple) {
    int i = element_index(e);
    if (i < 0)
      throw Error(ErrorCode::Argument, "unknown element: " + e);
    idx.push_back(i);
  }
  return holds_idx(symbol, idx);
}

bool operator==(const Structure &a, const Structure &b) {
  return a.vocab == b.vocab && a.universe == b.universe &&
         a.relations == b.relations;
}

namespace {

std::vector<std::string> tokenize(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok)
    out.push_back(tok);
  return out;
}

std::string strip_comment(const std::string &line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

} // namespace

ParsedStructure parse_structure(const std::string &text) {
  ParsedStructure result;
  Structure &s = result.s;
  bool saw_vocab = false, saw_universe = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = tokenize(strip_comment(raw));
    if (toks.empty())
      continue;
    const std::string &kw = toks[0];
    if (kw == "vocab") {
      if (saw_vocab)
        throw ParseError("duplicate vocab line", lineno);
      if (toks.size() < 2)
        throw ParseError("vocab line declares no symbols", lineno);
      for (size_t i = 1; i < toks.size(); ++i) {
        auto slash = toks[i].rfind('/');
        if (slash == std::string::npos || slash == 0 ||
            slash + 1 == toks[i].size())
          throw ParseError("expected NAME/ARITY, got '" + toks[i] + "'",
                           lineno);
        std::string name = toks[i].substr(0, slash);
        int arity = 0;
        try {
          size_t used = 0;
          arity = std::stoi(toks[i].substr(slash + 1), &used);
          if (used != toks[i].size() - slash - 1)
            throw std::invalid_argument("");
        } catch (const std::exception &) {
          throw ParseError("bad arity in '" + toks[i] + "'", lineno);
        }
        if (arity < 1)
          throw ParseError("arity must be >= 1 in '" + toks[i] + "'", lineno);
        if (s.vocab.has(name))
          throw ParseError("duplicate relation symbol " + name, lineno);
        s.vocab.symbols.emplace_back(name, arity);
      }
      saw_vocab = true;
    } else if (kw == "universe") {
      if (!saw_vocab)
        throw ParseError("universe line before vocab line", lineno);
      if (saw_universe)
        throw ParseError("duplicate universe line", lineno);
      if (toks.size() < 2)
        throw ParseError("universe must be nonempty", lineno);
      for (size_t i = 1; i < toks.size(); ++i) {
        if (s.element_index(toks[i]) >= 0)
          throw ParseError("duplicate universe element " + toks[i], lineno);
        s.universe.push_back(toks[i]);
      }
      saw_universe = true;
    } else if (kw == "rel") {
      if (!saw_universe)
        throw ParseError("rel line before universe line", lineno);
      if (toks.size() < 2)
        throw ParseError("rel line without symbol", lineno);
      const std::string &name = toks[1];
      if (!s.vocab.has(name))
        throw ParseError("undeclared symbol " + name, lineno);
      int arity = s.vocab.arity(name);
      if (static_cast<int>(toks.size()) - 2 != arity)
        throw ParseError("arity mismatch: " + name + " expects " +
                             std::to_string(arity) + " elements, got " +
                             std::to_string(toks.size() - 2),
                         lineno);
      std::vector<int> tuple;
      for (size_t i = 2; i < toks.size(); ++i) {
        int e = s.element_index(toks[i]);
        if (e < 0)
          throw ParseError("unknown universe element " + toks[i], lineno);
        tuple.push_back(e);
      }
      auto [it, inserted] = s.relations[name].insert(tuple);
      (void)it;
      if (!inserted)
        result.warnings.push_back("line " + std::to_string(lineno) +
                                  ": duplicate tuple for " + name +
                                  " (collapsed)");
    } else {
      throw ParseError("unknown directive '" + kw + "'", lineno);
    }
  }
  if (!saw_vocab)
    throw ParseError("missing vocab line");
  if (!saw_universe)
    throw ParseError("missing universe line");
  return result;
}

std::string serialize_structure(const Structure &s) {
  std::ostringstream out;
  out << "vocab";
  for (const auto &[name, arity] : s.vocab.symbols)
    out << " " << name << "/" << arity;
  out << "\n";
  out << "universe";
  for (const auto &e : s.universe)
    out << " " << e;
  out << "\n";
  for (const auto &[name, arity] : s.vocab.symbols) {
    (void)arity;
    auto it = s.relations.find(name);
    if (it == s.relations.end())
      continue;
    for (const auto &tuple : it->second) {
      out << "rel " << name;
      for (int e : tuple)
        out << " " << s.universe[e];
      out << "\n";
    }
  }
  return out.str();
}

Structure relabel(const Structure &s,
                  const std::map<std::string, std::string> &gamma) {
  Structure out;
  out.vocab = s.vocab;
  std::set<std::string> seen;
  for (const auto &e : s.universe) {
    auto it = gamma.find(e);
    if (it == gamma.end())
      throw Error(ErrorCode::Argument, "relabel: no image for element " + e);
    if (!seen.insert(it->second).second)
      throw Error(ErrorCode::Argument,
                  "relabel: not injective at " + it->second);
    out.universe.push_back(it->second);
  }
  // Tuples are stored as indices and the mapping preserves positions, so the
  // relation sets carry over unchanged.
  out.relations = s.relations;
  return out;
}

} // namespace symcirc
