#include "circuit.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

namespace symcirc {

const char *gate_kind_name(GateKind k) {
  switch (k) {
  case GateKind::Const0:
    return "const0";
  case GateKind::Const1:
    return "const1";
  case GateKind::Rel:
    return "rel";
  case GateKind::And:
    return "AND";
  case GateKind::Or:
    return "OR";
  case GateKind::Not:
    return "NOT";
  case GateKind::Maj:
    return "MAJ";
  }
  return "?";
}

bool is_input_kind(GateKind k) {
  return k == GateKind::Const0 || k == GateKind::Const1 || k == GateKind::Rel;
}

int Circuit::index_of(const std::string &name) const {
  auto it = name_index.find(name);
  return it == name_index.end() ? -1 : it->second;
}

int Circuit::add_gate(const std::string &name, GateLabel label,
                      std::vector<int> kids) {
  if (name_index.count(name))
    throw Error(ErrorCode::Argument, "duplicate gate id " + name);
  int idx = gate_count();
  gate_names.push_back(name);
  labels.push_back(std::move(label));
  std::sort(kids.begin(), kids.end());
  kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  children.push_back(std::move(kids));
  name_index[name] = idx;
  out_slot_of_gate.push_back(-1);
  return idx;
}

void Circuit::finalize() {
  name_index.clear();
  for (int i = 0; i < gate_count(); ++i)
    name_index[gate_names[i]] = i;
  out_slot_of_gate.assign(gate_count(), -1);
  for (size_t slot = 0; slot < outputs.size(); ++slot)
    out_slot_of_gate[outputs[slot].second] = static_cast<int>(slot);
}

const std::vector<int> *Circuit::output_tuple(int g) const {
  int slot = out_slot_of_gate[g];
  return slot < 0 ? nullptr : &outputs[slot].first;
}

bool operator==(const Circuit &a, const Circuit &b) {
  return a.n == b.n && a.q == b.q && a.basis == b.basis &&
         a.gate_names == b.gate_names && a.labels == b.labels &&
         a.children == b.children && a.outputs == b.outputs;
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

int parse_int(const std::string &tok, const char *what, int lineno) {
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size())
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception &) {
    throw ParseError(std::string("bad ") + what + " '" + tok + "'", lineno);
  }
}

} // namespace

ParsedCircuit parse_circuit(const std::string &text) {
  ParsedCircuit result;
  Circuit &c = result.c;

  struct GateLine {
    std::string name;
    GateLabel label;
    std::vector<std::string> child_names;
    int lineno;
  };
  std::vector<GateLine> gate_lines;
  struct OutputLine {
    std::vector<int> tuple;
    std::string gate;
    int lineno;
  };
  std::vector<OutputLine> output_lines;

  bool saw_header = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = tokenize(strip_comment(raw));
    if (toks.empty())
      continue;
    if (toks[0] == "circuit") {
      if (saw_header)
        throw ParseError("duplicate circuit header", lineno);
      for (size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos)
          throw ParseError("expected key=value, got '" + toks[i] + "'", lineno);
        std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
        if (key == "n")
          c.n = parse_int(val, "n", lineno);
        else if (key == "q")
          c.q = parse_int(val, "q", lineno);
        else if (key == "basis") {
          if (val == "standard")
            c.basis = Basis::Standard;
          else if (val == "majority")
            c.basis = Basis::Majority;
          else
            throw ParseError("unknown basis '" + val + "'", lineno);
        } else
          throw ParseError("unknown header key '" + key + "'", lineno);
      }
      if (c.n < 1)
        throw ParseError("universe size n must be >= 1", lineno);
      if (c.q < 0)
        throw ParseError("output arity q must be >= 0", lineno);
      saw_header = true;
    } else if (toks[0] == "gate") {
      if (!saw_header)
        throw ParseError("gate line before circuit header", lineno);
      if (toks.size() < 3)
        throw ParseError("truncated gate line", lineno);
      GateLine gl;
      gl.name = toks[1];
      gl.lineno = lineno;
      const std::string &kind = toks[2];
      if (kind == "const") {
        if (toks.size() != 4)
          throw ParseError("const gate takes exactly one bit", lineno);
        int bit = parse_int(toks[3], "constant bit", lineno);
        if (bit != 0 && bit != 1)
          throw ParseError("constant bit must be 0 or 1", lineno);
        gl.label.kind = bit ? GateKind::Const1 : GateKind::Const0;
      } else if (kind == "rel") {
        if (toks.size() < 5)
          throw ParseError("rel gate needs a symbol and a nonempty tuple",
                           lineno);
        gl.label.kind = GateKind::Rel;
        gl.label.rel = toks[3];
        for (size_t i = 4; i < toks.size(); ++i) {
          int u = parse_int(toks[i], "universe point", lineno);
          if (u < 1 || u > c.n)
            throw ParseError("point " + toks[i] + " outside [n]", lineno);
          gl.label.tuple.push_back(u);
        }
      } else if (kind == "op") {
        if (toks.size() < 4)
          throw ParseError("op gate needs an operation", lineno);
        const std::string &op = toks[3];
        if (op == "AND")
          gl.label.kind = GateKind::And;
        else if (op == "OR")
          gl.label.kind = GateKind::Or;
        else if (op == "NOT")
          gl.label.kind = GateKind::Not;
        else if (op == "MAJ")
          gl.label.kind = GateKind::Maj;
        else
          throw ParseError("unknown operation '" + op + "'", lineno);
        if (toks.size() < 5 || toks[4] != "<-")
          throw ParseError("op gate expects '<-' before its children", lineno);
        for (size_t i = 5; i < toks.size(); ++i)
          gl.child_names.push_back(toks[i]);
      } else {
        throw ParseError("unknown gate kind '" + kind + "'", lineno);
      }
      gate_lines.push_back(std::move(gl));
    } else if (toks[0] == "output") {
      if (!saw_header)
        throw ParseError("output line before circuit header", lineno);
      if (toks.size() != 3)
        throw ParseError("output line is 'output (tuple) <gateid>'", lineno);
      const std::string &tup = toks[1];
      if (tup.size() < 2 || tup.front() != '(' || tup.back() != ')')
        throw ParseError("output tuple must be parenthesized", lineno);
      OutputLine ol;
      ol.lineno = lineno;
      ol.gate = toks[2];
      std::string inner = tup.substr(1, tup.size() - 2);
      if (!inner.empty()) {
        std::istringstream parts(inner);
        std::string item;
        while (std::getline(parts, item, ',')) {
          int u = parse_int(item, "output point", lineno);
          if (u < 1 || u > c.n)
            throw ParseError("point " + item + " outside [n]", lineno);
          ol.tuple.push_back(u);
        }
      }
      if (static_cast<int>(ol.tuple.size()) != c.q)
        throw ParseError("output tuple arity != q", lineno);
      output_lines.push_back(std::move(ol));
    } else {
      throw ParseError("unknown directive '" + toks[0] + "'", lineno);
    }
  }
  if (!saw_header)
    throw ParseError("missing circuit header line");

  for (const auto &gl : gate_lines) {
    if (c.name_index.count(gl.name))
      throw ParseError("duplicate gate id " + gl.name, gl.lineno);
    c.add_gate(gl.name, gl.label);
  }
  for (size_t i = 0; i < gate_lines.size(); ++i) {
    const auto &gl = gate_lines[i];
    std::vector<int> kids;
    for (const auto &cn : gl.child_names) {
      int idx = c.index_of(cn);
      if (idx < 0)
        throw ParseError("unknown child gate " + cn, gl.lineno);
      kids.push_back(idx);
    }
    size_t before = kids.size();
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    if (kids.size() != before)
      result.warnings.push_back("line " + std::to_string(gl.lineno) +
                                ": duplicate wires into " + gl.name +
                                " (collapsed)");
    c.children[i] = std::move(kids);
  }
  std::set<std::vector<int>> seen_tuples;
  for (const auto &ol : output_lines) {
    int idx = c.index_of(ol.gate);
    if (idx < 0)
      throw ParseError("unknown output gate " + ol.gate, ol.lineno);
    if (!seen_tuples.insert(ol.tuple).second)
      throw ParseError("duplicate output tuple", ol.lineno);
    c.outputs.emplace_back(ol.tuple, idx);
  }
  // slots in row-major tuple order for deterministic serialization
  std::sort(c.outputs.begin(), c.outputs.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  c.finalize();
  return result;
}

std::string serialize_circuit(const Circuit &c) {
  std::ostringstream out;
  out << "circuit n=" << c.n << " q=" << c.q << " basis="
      << (c.basis == Basis::Majority ? "majority" : "standard") << "\n";
  for (int g = 0; g < c.gate_count(); ++g) {
    const GateLabel &l = c.labels[g];
    out << "gate " << c.gate_names[g] << " ";
    switch (l.kind) {
    case GateKind::Const0:
      out << "const 0";
      break;
    case GateKind::Const1:
      out << "const 1";
      break;
    case GateKind::Rel:
      out << "rel " << l.rel;
      for (int u : l.tuple)
        out << " " << u;
      break;
    default:
      out << "op " << gate_kind_name(l.kind) << " <-";
      for (int k : c.children[g])
        out << " " << c.gate_names[k];
      break;
    }
    out << "\n";
  }
  for (const auto &[tuple, gate] : c.outputs) {
    out << "output (";
    for (size_t i = 0; i < tuple.size(); ++i)
      out << (i ? "," : "") << tuple[i];
    out << ") " << c.gate_names[gate] << "\n";
  }
  return out.str();
}

std::vector<int> topological_order(const Circuit &c) {
  int g = c.gate_count();
  std::vector<std::vector<int>> parents(g);
  std::vector<int> indeg(g, 0);
  for (int i = 0; i < g; ++i) {
    indeg[i] = static_cast<int>(c.children[i].size());
    for (int k : c.children[i])
      parents[k].push_back(i);
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < g; ++i)
    if (indeg[i] == 0)
      ready.push(i);
  std::vector<int> order;
  order.reserve(g);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int p : parents[v])
      if (--indeg[p] == 0)
        ready.push(p);
  }
  if (static_cast<int>(order.size()) != g)
    throw Error(ErrorCode::Invalid, "cycle detected: wires do not form a DAG");
  return order;
}

std::vector<int> gate_heights(const Circuit &c) {
  auto order = topological_order(c);
  std::vector<int> h(c.gate_count(), 0);
  for (int g : order)
    for (int k : c.children[g])
      h[g] = std::max(h[g], h[k] + 1);
  return h;
}

std::vector<std::string> validate(const Circuit &c) {
  std::vector<std::string> v;
  if (c.n < 1)
    v.push_back("universe size n must be >= 1");
  if (c.q < 0)
    v.push_back("output arity q must be >= 0");

  bool dag = true;
  try {
    topological_order(c);
  } catch (const Error &) {
    dag = false;
    v.push_back("not a DAG");
  }

  int const0 = 0, const1 = 0;
  std::map<std::pair<std::string, std::vector<int>>, int> lambda_seen;
  std::map<std::string, int> rel_arity;
  for (int g = 0; g < c.gate_count(); ++g) {
    const GateLabel &l = c.labels[g];
    const std::string &name = c.gate_names[g];
    bool has_children = !c.children[g].empty();
    if (is_input_kind(l.kind) && has_children)
      v.push_back("input gate " + name + " has incoming wires");
    if (!is_input_kind(l.kind) && !has_children)
      v.push_back("gate " + name +
                  " has no incoming wires but carries an operation label");
    switch (l.kind) {
    case GateKind::Const0:
      ++const0;
      break;
    case GateKind::Const1:
      ++const1;
      break;
    case GateKind::Rel: {
      if (l.tuple.empty())
        v.push_back("relational gate " + name + " has an empty tuple");
      for (int u : l.tuple)
        if (u < 1 || u > c.n)
          v.push_back("relational gate " + name + " references a point outside [n]");
      auto [it, inserted] = lambda_seen.insert({{l.rel, l.tuple}, g});
      if (!inserted)
        v.push_back("lambda not injective: gates " + c.gate_names[it->second] +
                    " and " + name + " share label " + l.rel);
      auto [ait, ainserted] =
          rel_arity.insert({l.rel, static_cast<int>(l.tuple.size())});
      if (!ainserted && ait->second != static_cast<int>(l.tuple.size()))
        v.push_back("inconsistent arity for relation " + l.rel);
      break;
    }
    case GateKind::Not:
      if (c.children[g].size() != 1)
        v.push_back("NOT gate " + name + " must have exactly one child");
      break;
    case GateKind::Maj:
      if (c.basis != Basis::Majority)
        v.push_back("MAJ gate " + name + " under the standard basis");
      break;
    default:
      break;
    }
  }
  if (const0 > 1)
    v.push_back("duplicate constant: more than one const-0 gate");
  if (const1 > 1)
    v.push_back("duplicate constant: more than one const-1 gate");

  // omega: injective and total on [n]^q
  double table = std::pow(static_cast<double>(c.n), c.q);
  if (table > 1e6) {
    v.push_back("output table [n]^q too large to materialize");
  } else {
    long long expected = static_cast<long long>(table + 0.5);
    std::set<std::vector<int>> tuples;
    std::set<int> gates;
    for (const auto &[tuple, gate] : c.outputs) {
      if (static_cast<int>(tuple.size()) != c.q)
        v.push_back("output tuple arity != q");
      for (int u : tuple)
        if (u < 1 || u > c.n)
          v.push_back("output tuple references a point outside [n]");
      if (!tuples.insert(tuple).second)
        v.push_back("omega not a function: duplicate output tuple");
      if (!gates.insert(gate).second)
        v.push_back("omega not injective: gate " + c.gate_names[gate] +
                    " marked with two output tuples");
    }
    if (static_cast<long long>(tuples.size()) != expected)
      v.push_back("omega not total: " + std::to_string(tuples.size()) +
                  " output tuples, expected " + std::to_string(expected));
  }
  (void)dag;
  return v;
}

void require_valid(const Circuit &c) {
  auto v = validate(c);
  if (v.empty())
    return;
  std::string msg = "invalid circuit:";
  for (const auto &s : v)
    msg += "\n  " + s;
  throw Error(ErrorCode::Invalid, msg);
}

namespace {

// Gates agreeing in all components violate rigidity; the output marking is
// encoded as a slot (-1 when the gate is not an output gate).
struct ClassKey {
  GateKind kind;
  std::string rel;
  std::vector<int> tuple;
  int out_slot;
  std::vector<int> kids;

  bool operator<(const ClassKey &o) const {
    if (kind != o.kind)
      return kind < o.kind;
    if (rel != o.rel)
      return rel < o.rel;
    if (tuple != o.tuple)
      return tuple < o.tuple;
    if (out_slot != o.out_slot)
      return out_slot < o.out_slot;
    return kids < o.kids;
  }
};

ClassKey class_key(const Circuit &c, int g) {
  return ClassKey{c.labels[g].kind, c.labels[g].rel, c.labels[g].tuple,
                  c.out_slot_of_gate[g], c.children[g]};
}

std::map<ClassKey, std::vector<int>> equivalence_classes(const Circuit &c) {
  std::map<ClassKey, std::vector<int>> classes;
  for (int g = 0; g < c.gate_count(); ++g)
    classes[class_key(c, g)].push_back(g);
  return classes;
}

} // namespace

std::optional<std::pair<int, int>> rigidity_witness(const Circuit &c) {
  for (const auto &[key, members] : equivalence_classes(c)) {
    (void)key;
    if (members.size() >= 2)
      return std::make_pair(members[0], members[1]);
  }
  return std::nullopt;
}

bool is_rigid(const Circuit &c) { return !rigidity_witness(c).has_value(); }

Circuit rigidify(const Circuit &c) {
  require_valid(c);
  Circuit w = c;
  for (int round = 0; round <= c.gate_count() + 1; ++round) {
    auto classes = equivalence_classes(w);
    std::vector<std::vector<int>> pending;
    for (auto &[key, members] : classes) {
      (void)key;
      if (members.size() >= 2) {
        std::sort(members.begin(), members.end());
        pending.push_back(members);
      }
    }
    if (pending.empty()) {
      w.finalize();
      return w;
    }
    auto heights = gate_heights(w);
    int hmin = INT_MAX;
    for (const auto &cls : pending)
      hmin = std::min(hmin, heights[cls.front()]);
    std::sort(pending.begin(), pending.end());
    for (const auto &cls : pending) {
      if (heights[cls.front()] != hmin)
        continue;
      int m = static_cast<int>(cls.size());
      std::vector<char> in_class(w.gate_count(), 0);
      for (int g : cls)
        in_class[g] = 1;
      // rewire every outside parent f to the last c_f gates of the chain,
      // keeping its wire count from this class unchanged
      for (int f = 0; f < w.gate_count(); ++f) {
        if (in_class[f])
          continue;
        int cf = 0;
        for (int k : w.children[f])
          if (in_class[k])
            ++cf;
        if (cf == 0)
          continue;
        std::vector<int> kids;
        for (int k : w.children[f])
          if (!in_class[k])
            kids.push_back(k);
        for (int i = m - cf; i < m; ++i)
          kids.push_back(cls[i]);
        std::sort(kids.begin(), kids.end());
        w.children[f] = std::move(kids);
      }
      // the first gate keeps its label and children; the rest become a chain
      // of single-child AND gates
      for (int j = 1; j < m; ++j) {
        w.labels[cls[j]] = GateLabel{GateKind::And, "", {}};
        w.children[cls[j]] = {cls[j - 1]};
      }
    }
  }
  throw Error(ErrorCode::Internal, "rigidify did not converge");
}

Assignment Assignment::parse(const std::string &text, const Structure &s) {
  Assignment a;
  a.to_point.assign(s.universe.size(), 0);
  std::vector<bool> elem_seen(s.universe.size(), false);
  std::vector<bool> point_seen(s.universe.size(), false);
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto stripped = strip_comment(raw);
    auto toks = tokenize(stripped);
    if (toks.empty())
      continue;
    if (toks.size() != 1)
      throw ParseError("expected element=index", lineno);
    auto eq = toks[0].find('=');
    if (eq == std::string::npos)
      throw ParseError("expected element=index", lineno);
    std::string elem = toks[0].substr(0, eq);
    int point = parse_int(toks[0].substr(eq + 1), "point", lineno);
    int ei = s.element_index(elem);
    if (ei < 0)
      throw ParseError("unknown element " + elem, lineno);
    if (elem_seen[ei])
      throw ParseError("element " + elem + " assigned twice", lineno);
    if (point < 1 || point > static_cast<int>(s.universe.size()))
      throw ParseError("point outside [n]", lineno);
    if (point_seen[point - 1])
      throw ParseError("point " + std::to_string(point) + " used twice",
                       lineno);
    elem_seen[ei] = true;
    point_seen[point - 1] = true;
    a.to_point[ei] = point;
  }
  for (size_t i = 0; i < elem_seen.size(); ++i)
    if (!elem_seen[i])
      throw ParseError("element " + s.universe[i] + " not assigned");
  return a;
}

std::string Assignment::serialize(const Structure &s) const {
  std::ostringstream out;
  for (size_t i = 0; i < to_point.size(); ++i)
    out << s.universe[i] << "=" << to_point[i] << "\n";
  return out.str();
}

std::vector<int> Assignment::element_of_point() const {
  std::vector<int> inv(to_point.size(), -1);
  for (size_t i = 0; i < to_point.size(); ++i)
    inv[to_point[i] - 1] = static_cast<int>(i);
  return inv;
}

std::string QueryResult::format() const {
  if (q == 0)
    return truth() ? "result true\n" : "result false\n";
  std::ostringstream out;
  for (const auto &tuple : tuples) {
    for (size_t i = 0; i < tuple.size(); ++i)
      out << (i ? " " : "") << tuple[i];
    out << "\n";
  }
  return out.str();
}

void check_compatible(const Circuit &c, const Structure &s) {
  if (s.size() != c.n)
    throw Error(ErrorCode::Mismatch,
                "structure has " + std::to_string(s.size()) +
                    " elements but circuit universe is [" +
                    std::to_string(c.n) + "]");
  for (int g = 0; g < c.gate_count(); ++g) {
    const GateLabel &l = c.labels[g];
    if (l.kind != GateKind::Rel)
      continue;
    if (!s.vocab.has(l.rel))
      throw Error(ErrorCode::Mismatch,
                  "structure vocabulary lacks relation " + l.rel);
    if (s.vocab.arity(l.rel) != static_cast<int>(l.tuple.size()))
      throw Error(ErrorCode::Mismatch, "arity mismatch for relation " + l.rel);
  }
}

NaiveEval naive_evaluate(const Circuit &c, const Structure &s,
                         const Assignment &gamma) {
  require_valid(c);
  check_compatible(c, s);
  if (static_cast<int>(gamma.to_point.size()) != c.n)
    throw Error(ErrorCode::Mismatch, "assignment does not cover the universe");
  auto element_of = gamma.element_of_point();

  NaiveEval out;
  out.values.assign(c.gate_count(), 0);
  for (int g : topological_order(c)) {
    const GateLabel &l = c.labels[g];
    switch (l.kind) {
    case GateKind::Const0:
      out.values[g] = 0;
      break;
    case GateKind::Const1:
      out.values[g] = 1;
      break;
    case GateKind::Rel: {
      std::vector<int> elems;
      elems.reserve(l.tuple.size());
      for (int u : l.tuple)
        elems.push_back(element_of[u - 1]);
      out.values[g] = s.holds_idx(l.rel, elems) ? 1 : 0;
      break;
    }
    case GateKind::Not:
      out.values[g] = 1 - out.values[c.children[g][0]];
      break;
    default: {
      int ones = 0, total = static_cast<int>(c.children[g].size());
      for (int k : c.children[g])
        ones += out.values[k];
      if (l.kind == GateKind::And)
        out.values[g] = ones == total ? 1 : 0; // AND() = 1
      else if (l.kind == GateKind::Or)
        out.values[g] = ones > 0 ? 1 : 0; // OR() = 0
      else                                // MAJ() = 1: 0 ones >= 0 zeroes
        out.values[g] = 2 * ones >= total ? 1 : 0;
      break;
    }
    }
  }
  out.query.q = c.q;
  for (const auto &[tuple, gate] : c.outputs) {
    if (!out.values[gate])
      continue;
    std::vector<std::string> named;
    named.reserve(tuple.size());
    for (int u : tuple)
      named.push_back(s.universe[element_of[u - 1]]);
    out.query.tuples.insert(std::move(named));
  }
  return out;
}

bool is_invariant_bruteforce(const Circuit &c, const Structure &s) {
  if (c.n > 8)
    throw Error(ErrorCode::TooLarge,
                "invariance enumeration limited to n <= 8");
  require_valid(c);
  check_compatible(c, s);
  bool first = true;
  QueryResult reference;
  for (const auto &perm : all_permutations(c.n)) {
    Assignment gamma;
    gamma.to_point = perm.img; // element i -> perm(i+1)
    QueryResult q = naive_evaluate(c, s, gamma).query;
    if (first) {
      reference = std::move(q);
      first = false;
    } else if (!(q.q == reference.q && q.tuples == reference.tuples)) {
      return false;
    }
  }
  return true;
}

} // namespace symcirc
