#include "foc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace symcirc {

namespace {

struct Token {
  std::string text;
  bool is_paren;
};

std::vector<Token> lex(const std::string &text) {
  std::vector<Token> toks;
  std::string cur;
  auto flush = [&]() {
    if (!cur.empty()) {
      toks.push_back({cur, false});
      cur.clear();
    }
  };
  for (char ch : text) {
    if (ch == '(' || ch == ')') {
      flush();
      toks.push_back({std::string(1, ch), true});
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  return toks;
}

bool is_variable(const std::string &tok) {
  if (tok.empty())
    return false;
  for (char ch : tok)
    if (!std::isalpha(static_cast<unsigned char>(ch)))
      return false;
  return true;
}

class Parser {
public:
  explicit Parser(const std::string &text) : toks_(lex(text)) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_formula();
    if (pos_ != toks_.size())
      throw ParseError("trailing input after formula");
    return f;
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token &peek() {
    if (pos_ >= toks_.size())
      throw ParseError("unexpected end of formula");
    return toks_[pos_];
  }
  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string &p) {
    Token t = next();
    if (!t.is_paren || t.text != p)
      throw ParseError("expected '" + p + "', got '" + t.text + "'");
  }
  std::string variable() {
    Token t = next();
    if (t.is_paren || !is_variable(t.text))
      throw ParseError("expected a variable, got '" + t.text + "'");
    return t.text;
  }

  FormulaPtr parse_formula() {
    expect("(");
    Token head = next();
    if (head.is_paren)
      throw ParseError("expected an operator or relation name");
    auto f = std::make_shared<Formula>();
    const std::string &op = head.text;
    if (op == "exists" || op == "forall" || op == "maj") {
      f->kind = op == "exists"  ? Formula::Kind::Exists
                : op == "forall" ? Formula::Kind::Forall
                                 : Formula::Kind::Maj;
      f->var = variable();
      f->a = parse_formula();
    } else if (op == "and" || op == "or") {
      f->kind = op == "and" ? Formula::Kind::And : Formula::Kind::Or;
      f->a = parse_formula();
      f->b = parse_formula();
    } else if (op == "not") {
      f->kind = Formula::Kind::Not;
      f->a = parse_formula();
    } else if (op == "=") {
      f->kind = Formula::Kind::Eq;
      f->args.push_back(variable());
      f->args.push_back(variable());
    } else {
      f->kind = Formula::Kind::Atom;
      f->rel = op;
      while (!peek().is_paren)
        f->args.push_back(variable());
      if (f->args.empty())
        throw ParseError("atom " + op + " has no arguments");
    }
    expect(")");
    return f;
  }
};

void collect_free(const Formula &f, std::set<std::string> bound,
                  std::vector<std::string> &order,
                  std::set<std::string> &seen) {
  switch (f.kind) {
  case Formula::Kind::Atom:
  case Formula::Kind::Eq:
    for (const auto &v : f.args)
      if (!bound.count(v) && seen.insert(v).second)
        order.push_back(v);
    break;
  case Formula::Kind::Not:
    collect_free(*f.a, bound, order, seen);
    break;
  case Formula::Kind::And:
  case Formula::Kind::Or:
    collect_free(*f.a, bound, order, seen);
    collect_free(*f.b, bound, order, seen);
    break;
  default:
    bound.insert(f.var);
    collect_free(*f.a, bound, order, seen);
    break;
  }
}

void collect_all(const Formula &f, std::vector<std::string> &order,
                 std::set<std::string> &seen) {
  switch (f.kind) {
  case Formula::Kind::Atom:
  case Formula::Kind::Eq:
    for (const auto &v : f.args)
      if (seen.insert(v).second)
        order.push_back(v);
    break;
  case Formula::Kind::Not:
    collect_all(*f.a, order, seen);
    break;
  case Formula::Kind::And:
  case Formula::Kind::Or:
    collect_all(*f.a, order, seen);
    collect_all(*f.b, order, seen);
    break;
  default:
    if (seen.insert(f.var).second)
      order.push_back(f.var);
    collect_all(*f.a, order, seen);
    break;
  }
}

} // namespace

FormulaPtr parse_formula(const std::string &text) {
  return Parser(text).parse();
}

std::string formula_to_string(const Formula &f) {
  std::ostringstream out;
  switch (f.kind) {
  case Formula::Kind::Atom:
    out << "(" << f.rel;
    for (const auto &a : f.args)
      out << " " << a;
    out << ")";
    break;
  case Formula::Kind::Eq:
    out << "(= " << f.args[0] << " " << f.args[1] << ")";
    break;
  case Formula::Kind::Not:
    out << "(not " << formula_to_string(*f.a) << ")";
    break;
  case Formula::Kind::And:
    out << "(and " << formula_to_string(*f.a) << " " << formula_to_string(*f.b)
        << ")";
    break;
  case Formula::Kind::Or:
    out << "(or " << formula_to_string(*f.a) << " " << formula_to_string(*f.b)
        << ")";
    break;
  case Formula::Kind::Exists:
    out << "(exists " << f.var << " " << formula_to_string(*f.a) << ")";
    break;
  case Formula::Kind::Forall:
    out << "(forall " << f.var << " " << formula_to_string(*f.a) << ")";
    break;
  case Formula::Kind::Maj:
    out << "(maj " << f.var << " " << formula_to_string(*f.a) << ")";
    break;
  }
  return out.str();
}

std::vector<std::string> free_variables(const Formula &f) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_free(f, {}, order, seen);
  return order;
}

std::vector<std::string> all_variables(const Formula &f) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_all(f, order, seen);
  return order;
}

bool uses_maj(const Formula &f) {
  switch (f.kind) {
  case Formula::Kind::Atom:
  case Formula::Kind::Eq:
    return false;
  case Formula::Kind::Not:
    return uses_maj(*f.a);
  case Formula::Kind::And:
  case Formula::Kind::Or:
    return uses_maj(*f.a) || uses_maj(*f.b);
  case Formula::Kind::Maj:
    return true;
  default:
    return uses_maj(*f.a);
  }
}

namespace {

// Environment: variable -> point of [n], kept sorted by name.
using Env = std::vector<std::pair<std::string, int>>;

int env_get(const Env &env, const std::string &var) {
  for (const auto &[v, x] : env)
    if (v == var)
      return x;
  throw Error(ErrorCode::Internal, "unbound variable " + var);
}

Env env_set(Env env, const std::string &var, int value) {
  for (auto &[v, x] : env)
    if (v == var) {
      x = value;
      return env;
    }
  env.emplace_back(var, value);
  std::sort(env.begin(), env.end());
  return env;
}

Env env_restrict(const Env &env, const std::vector<std::string> &vars) {
  Env out;
  for (const auto &[v, x] : env)
    if (std::find(vars.begin(), vars.end(), v) != vars.end())
      out.emplace_back(v, x);
  return out;
}

class CompileState {
public:
  CompileState(const Formula &root, const CompileOptions &opts)
      : opts_(opts), root_(root) {
    c_.n = opts.n;
    c_.basis = opts.basis;
  }

  Circuit run() {
    auto free = free_variables(root_);
    c_.q = static_cast<int>(free.size());
    // row-major enumeration of [n]^q assignments to the free variables
    std::vector<int> point(free.size(), 1);
    while (true) {
      Env env;
      for (size_t i = 0; i < free.size(); ++i)
        env.emplace_back(free[i], point[i]);
      std::sort(env.begin(), env.end());
      int root_gate = build(root_, env);
      int wrapper = fresh(GateLabel{GateKind::And, "", {}}, {root_gate});
      c_.outputs.emplace_back(
          std::vector<int>(point.begin(), point.end()), wrapper);
      // advance row-major
      int i = static_cast<int>(point.size()) - 1;
      for (; i >= 0; --i) {
        if (point[i] < opts_.n) {
          ++point[i];
          std::fill(point.begin() + i + 1, point.end(), 1);
          break;
        }
      }
      if (i < 0)
        break;
    }
    c_.finalize();
    return std::move(c_);
  }

private:
  CompileOptions opts_;
  const Formula &root_;
  Circuit c_;
  int next_id_ = 0;
  int const_gate_[2] = {-1, -1};
  std::map<std::pair<std::string, std::vector<int>>, int> rel_cache_;
  std::map<std::pair<const Formula *, Env>, int> node_cache_;
  std::map<std::tuple<const Formula *, Env, int>, int> maj_wrapper_cache_;
  std::map<const Formula *, std::vector<std::string>> free_cache_;

  const std::vector<std::string> &free_of(const Formula &f) {
    auto it = free_cache_.find(&f);
    if (it == free_cache_.end())
      it = free_cache_.emplace(&f, free_variables(f)).first;
    return it->second;
  }

  int fresh(GateLabel label, std::vector<int> kids) {
    return c_.add_gate("g" + std::to_string(next_id_++), std::move(label),
                       std::move(kids));
  }

  int constant(int bit) {
    if (const_gate_[bit] < 0)
      const_gate_[bit] = fresh(
          GateLabel{bit ? GateKind::Const1 : GateKind::Const0, "", {}}, {});
    return const_gate_[bit];
  }

  int build(const Formula &f, const Env &env) {
    Env key_env = env_restrict(env, free_of(f));
    bool cacheable = opts_.share_subcircuits || f.kind == Formula::Kind::Atom ||
                     f.kind == Formula::Kind::Eq;
    if (cacheable) {
      auto it = node_cache_.find({&f, key_env});
      if (it != node_cache_.end())
        return it->second;
    }
    int gate = build_uncached(f, key_env);
    if (cacheable)
      node_cache_[{&f, key_env}] = gate;
    return gate;
  }

  int build_uncached(const Formula &f, const Env &env) {
    switch (f.kind) {
    case Formula::Kind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.args.size());
      for (const auto &v : f.args)
        tuple.push_back(env_get(env, v));
      auto key = std::make_pair(f.rel, tuple);
      auto it = rel_cache_.find(key);
      if (it != rel_cache_.end())
        return it->second;
      int gate = fresh(GateLabel{GateKind::Rel, f.rel, tuple}, {});
      rel_cache_[key] = gate;
      return gate;
    }
    case Formula::Kind::Eq:
      return constant(env_get(env, f.args[0]) == env_get(env, f.args[1]) ? 1
                                                                         : 0);
    case Formula::Kind::Not:
      return fresh(GateLabel{GateKind::Not, "", {}}, {build(*f.a, env)});
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<int> kids = {build(*f.a, env), build(*f.b, env)};
      return fresh(GateLabel{f.kind == Formula::Kind::And ? GateKind::And
                                                          : GateKind::Or,
                             "", {}},
                   std::move(kids));
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::vector<int> kids;
      for (int v = 1; v <= opts_.n; ++v)
        kids.push_back(build(*f.a, env_set(env, f.var, v)));
      return fresh(GateLabel{f.kind == Formula::Kind::Exists ? GateKind::Or
                                                             : GateKind::And,
                             "", {}},
                   std::move(kids));
    }
    case Formula::Kind::Maj: {
      // Instances of the body for different values can coincide (equality
      // atoms compile to the shared constants), which would corrupt the MAJ
      // count under set-semantics wires.  Give each value its own single-child
      // AND unless all instances are literally the same gate.
      std::vector<int> inst;
      for (int v = 1; v <= opts_.n; ++v)
        inst.push_back(build(*f.a, env_set(env, f.var, v)));
      bool all_same = std::all_of(inst.begin(), inst.end(),
                                  [&](int g) { return g == inst[0]; });
      std::vector<int> kids;
      if (all_same) {
        kids.push_back(inst[0]);
      } else {
        for (int v = 1; v <= opts_.n; ++v) {
          auto key = std::make_tuple(&f, env, v);
          auto it = maj_wrapper_cache_.find(key);
          if (it != maj_wrapper_cache_.end()) {
            kids.push_back(it->second);
            continue;
          }
          int w = fresh(GateLabel{GateKind::And, "", {}}, {inst[v - 1]});
          if (opts_.share_subcircuits)
            maj_wrapper_cache_[key] = w;
          kids.push_back(w);
        }
      }
      return fresh(GateLabel{GateKind::Maj, "", {}}, std::move(kids));
    }
    }
    throw Error(ErrorCode::Internal, "unreachable");
  }
};

} // namespace

Circuit compile(const Formula &f, const CompileOptions &opts) {
  if (opts.n < 1)
    throw Error(ErrorCode::Argument, "compile target n must be >= 1");
  if (opts.basis == Basis::Standard && uses_maj(f))
    throw Error(ErrorCode::Argument,
                "majority quantifier requires the majority basis");
  return CompileState(f, opts).run();
}

namespace {

bool eval_formula(const Formula &f, const Structure &s,
                  std::map<std::string, int> &env) {
  switch (f.kind) {
  case Formula::Kind::Atom: {
    std::vector<int> tuple;
    tuple.reserve(f.args.size());
    for (const auto &v : f.args)
      tuple.push_back(env.at(v));
    return s.holds_idx(f.rel, tuple);
  }
  case Formula::Kind::Eq:
    return env.at(f.args[0]) == env.at(f.args[1]);
  case Formula::Kind::Not:
    return !eval_formula(*f.a, s, env);
  case Formula::Kind::And:
    return eval_formula(*f.a, s, env) && eval_formula(*f.b, s, env);
  case Formula::Kind::Or:
    return eval_formula(*f.a, s, env) || eval_formula(*f.b, s, env);
  case Formula::Kind::Exists:
  case Formula::Kind::Forall:
  case Formula::Kind::Maj: {
    int count = 0;
    auto saved = env.find(f.var) != env.end()
                     ? std::optional<int>(env[f.var])
                     : std::nullopt;
    for (int e = 0; e < s.size(); ++e) {
      env[f.var] = e;
      if (eval_formula(*f.a, s, env))
        ++count;
    }
    if (saved)
      env[f.var] = *saved;
    else
      env.erase(f.var);
    if (f.kind == Formula::Kind::Exists)
      return count > 0;
    if (f.kind == Formula::Kind::Forall)
      return count == s.size();
    return 2 * count >= s.size(); // maj: at least half of the n values
  }
  }
  return false;
}

} // namespace

QueryResult model_check(const Formula &f, const Structure &s) {
  auto free = free_variables(f);
  QueryResult out;
  out.q = static_cast<int>(free.size());
  std::vector<int> elem(free.size(), 0);
  while (true) {
    std::map<std::string, int> env;
    for (size_t i = 0; i < free.size(); ++i)
      env[free[i]] = elem[i];
    if (eval_formula(f, s, env)) {
      std::vector<std::string> named;
      named.reserve(free.size());
      for (size_t i = 0; i < free.size(); ++i)
        named.push_back(s.universe[elem[i]]);
      out.tuples.insert(std::move(named));
    }
    int i = static_cast<int>(elem.size()) - 1;
    for (; i >= 0; --i) {
      if (elem[i] + 1 < s.size()) {
        ++elem[i];
        std::fill(elem.begin() + i + 1, elem.end(), 0);
        break;
      }
    }
    if (i < 0)
      break;
  }
  return out;
}

FormulaPtr random_formula(int depth, const Vocabulary &vocab, int num_vars,
                          std::uint64_t seed, Basis basis) {
  if (depth < 1)
    throw Error(ErrorCode::Argument, "depth must be >= 1");
  if (num_vars < 1)
    throw Error(ErrorCode::Argument, "need at least one variable");
  if (vocab.symbols.empty())
    throw Error(ErrorCode::Argument, "vocabulary is empty");
  static const char *kPool[] = {"x", "y", "z", "u", "w", "v", "p", "q"};
  int pool = std::min<int>(num_vars, 8);

  std::mt19937_64 rng(seed);
  auto pick_var = [&]() { return std::string(kPool[rng() % pool]); };

  auto leaf = [&]() {
    auto f = std::make_shared<Formula>();
    if (rng() % 4 == 0) {
      f->kind = Formula::Kind::Eq;
      f->args.push_back(pick_var());
      f->args.push_back(pick_var());
    } else {
      f->kind = Formula::Kind::Atom;
      const auto &[name, arity] = vocab.symbols[rng() % vocab.symbols.size()];
      f->rel = name;
      for (int i = 0; i < arity; ++i)
        f->args.push_back(pick_var());
    }
    return f;
  };

  auto rec = [&](auto &&self, int d) -> FormulaPtr {
    if (d <= 1)
      return leaf();
    int kinds = basis == Basis::Majority ? 6 : 5;
    auto f = std::make_shared<Formula>();
    switch (rng() % kinds) {
    case 0:
      f->kind = Formula::Kind::Not;
      f->a = self(self, d - 1);
      break;
    case 1:
      f->kind = Formula::Kind::And;
      f->a = self(self, d - 1);
      f->b = self(self, d - 1);
      break;
    case 2:
      f->kind = Formula::Kind::Or;
      f->a = self(self, d - 1);
      f->b = self(self, d - 1);
      break;
    case 3:
      f->kind = Formula::Kind::Exists;
      f->var = pick_var();
      f->a = self(self, d - 1);
      break;
    case 4:
      f->kind = Formula::Kind::Forall;
      f->var = pick_var();
      f->a = self(self, d - 1);
      break;
    default:
      f->kind = Formula::Kind::Maj;
      f->var = pick_var();
      f->a = self(self, d - 1);
      break;
    }
    return f;
  };
  return rec(rec, depth);
}

} // namespace symcirc
