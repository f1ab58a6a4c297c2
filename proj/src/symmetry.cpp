#include "symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace symcirc {

namespace {

struct LookupKey {
  GateKind kind;
  std::string rel;
  std::vector<int> tuple;
  std::vector<int> out_tuple; // {-1} marks "not an output gate" (valid
                              // markings never contain -1)
  std::vector<int> kids;

  bool operator<(const LookupKey &o) const {
    if (kind != o.kind)
      return kind < o.kind;
    if (rel != o.rel)
      return rel < o.rel;
    if (tuple != o.tuple)
      return tuple < o.tuple;
    if (out_tuple != o.out_tuple)
      return out_tuple < o.out_tuple;
    return kids < o.kids;
  }
};

std::vector<int> marking_or_sentinel(const Circuit &c, int g) {
  const std::vector<int> *t = c.output_tuple(g);
  return t ? *t : std::vector<int>{-1};
}

std::vector<int> apply_tuple(const Perm &sigma, const std::vector<int> &t) {
  std::vector<int> out;
  out.reserve(t.size());
  for (int u : t)
    out.push_back(u == -1 ? -1 : sigma.apply(u));
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

std::optional<InducedAutomorphism> induced_automorphism(const Circuit &c,
                                                        const Perm &sigma) {
  if (sigma.n() != c.n)
    throw Error(ErrorCode::Argument, "permutation size != circuit universe");
  if (!is_rigid(c))
    throw Error(ErrorCode::NotRigid,
                "induced automorphisms require a rigid circuit; run rigidify "
                "first");

  std::map<LookupKey, int> index;
  for (int g = 0; g < c.gate_count(); ++g)
    index[{c.labels[g].kind, c.labels[g].rel, c.labels[g].tuple,
           marking_or_sentinel(c, g), c.children[g]}] = g;

  InducedAutomorphism result;
  result.sigma = sigma;
  result.pi.assign(c.gate_count(), -1);
  for (int g : topological_order(c)) {
    const GateLabel &l = c.labels[g];
    LookupKey key;
    key.kind = l.kind;
    key.rel = l.rel;
    key.tuple = apply_tuple(sigma, l.tuple);
    key.out_tuple = apply_tuple(sigma, marking_or_sentinel(c, g));
    key.kids.reserve(c.children[g].size());
    for (int k : c.children[g])
      key.kids.push_back(result.pi[k]); // children already processed
    std::sort(key.kids.begin(), key.kids.end());
    auto it = index.find(key);
    if (it == index.end())
      return std::nullopt;
    result.pi[g] = it->second;
  }
  return result;
}

const InducedAutomorphism &SymmetryAnalysis::transposition(int u, int v) const {
  if (u > v)
    std::swap(u, v);
  auto it = transposition_autos.find({u, v});
  if (it == transposition_autos.end())
    throw Error(ErrorCode::Argument, "no such transposition");
  return it->second;
}

std::variant<SymmetryAnalysis, std::pair<int, int>>
analyze_symmetry(const Circuit &c) {
  if (!is_rigid(c))
    throw Error(ErrorCode::NotRigid,
                "symmetry analysis requires a rigid circuit; run rigidify "
                "first");
  SymmetryAnalysis a;
  a.n = c.n;
  for (int u = 1; u <= c.n; ++u)
    for (int v = u + 1; v <= c.n; ++v) {
      auto pi = induced_automorphism(c, Perm::transposition(c.n, u, v));
      if (!pi)
        return std::make_pair(u, v);
      a.transposition_autos.emplace(std::make_pair(u, v), std::move(*pi));
    }

  int gates = c.gate_count();
  a.gates.resize(gates);

  // orbits: connected components under all transposition automorphisms
  UnionFind orbit_uf(gates);
  for (const auto &[uv, auto_] : a.transposition_autos) {
    (void)uv;
    for (int g = 0; g < gates; ++g)
      orbit_uf.unite(g, auto_.pi[g]);
  }
  std::vector<int> orbit_min(gates, -1), orbit_count(gates, 0);
  for (int g = 0; g < gates; ++g) {
    int root = orbit_uf.find(g);
    if (orbit_min[root] < 0)
      orbit_min[root] = g;
    ++orbit_count[root];
  }
  for (int g = 0; g < gates; ++g) {
    int root = orbit_uf.find(g);
    a.gates[g].orbit_id = orbit_min[root];
    a.gates[g].orbit_size = orbit_count[root];
  }

  // SP(g): E-merge of the partitions P_(uv) whose automorphism fixes g.
  // Merging the two-element blocks {u,v} is a union-find over [n].
  for (int g = 0; g < gates; ++g) {
    UnionFind uf(c.n);
    for (const auto &[uv, auto_] : a.transposition_autos)
      if (auto_.pi[g] == g)
        uf.unite(uv.first - 1, uv.second - 1);
    std::vector<int> assignment(c.n);
    for (int i = 0; i < c.n; ++i)
      assignment[i] = uf.find(i);
    a.gates[g].sp = Partition::from_assignment(c.n, assignment);
    a.gates[g].support = canonical_support(a.gates[g].sp);
  }
  return a;
}

SymmetryAnalysis analyze_symmetry_or_throw(const Circuit &c) {
  auto result = analyze_symmetry(c);
  if (auto *cex = std::get_if<std::pair<int, int>>(&result))
    throw NotSymmetricError(cex->first, cex->second);
  return std::move(std::get<SymmetryAnalysis>(result));
}

bool orbit_stabiliser_check(const Circuit &c, const SymmetryAnalysis &a) {
  if (c.n > 5)
    throw Error(ErrorCode::TooLarge, "orbit_stabiliser_check limited to n <= 5");
  long long fact = 1;
  for (int i = 2; i <= c.n; ++i)
    fact *= i;
  std::vector<long long> stab(c.gate_count(), 0);
  for (const auto &sigma : all_permutations(c.n)) {
    auto pi = induced_automorphism(c, sigma);
    if (!pi)
      return false; // analysis claims symmetric; every sigma must act
    for (int g = 0; g < c.gate_count(); ++g)
      if (pi->pi[g] == g)
        ++stab[g];
  }
  for (int g = 0; g < c.gate_count(); ++g)
    if (a.gates[g].orbit_size * stab[g] != fact)
      return false;
  return true;
}

bool brute_force_support_check(const Circuit &c, const SymmetryAnalysis &a) {
  if (c.n > 5)
    throw Error(ErrorCode::TooLarge,
                "brute_force_support_check limited to n <= 5");
  // per-sigma action, computed once
  std::vector<std::pair<Perm, std::vector<int>>> actions;
  for (const auto &sigma : all_permutations(c.n)) {
    auto pi = induced_automorphism(c, sigma);
    if (!pi)
      return false;
    actions.emplace_back(sigma, pi->pi);
  }
  auto partitions = all_partitions(c.n);
  for (int g = 0; g < c.gate_count(); ++g) {
    const auto &support = a.gates[g].support;
    // (a) the canonical support is a support in the definitional sense
    for (const auto &[sigma, pi] : actions) {
      bool fixes_support = true;
      for (int x : support)
        if (sigma.apply(x) != x) {
          fixes_support = false;
          break;
        }
      if (fixes_support && pi[g] != g)
        return false;
    }
    // (b) SP(g) is the E-merge of every partition whose pointwise stabiliser
    // sits inside Stab(g); within-block transpositions suffice as generators
    auto fixed_by = [&](int u, int v) {
      return a.transposition(u, v).pi[g] == g;
    };
    Partition acc = Partition::singletons(c.n);
    for (const auto &p : partitions) {
      bool supporting = true;
      for (const auto &b : p.blocks) {
        for (size_t i = 0; i < b.size() && supporting; ++i)
          for (size_t j = i + 1; j < b.size(); ++j)
            if (!fixed_by(b[i], b[j])) {
              supporting = false;
              break;
            }
        if (!supporting)
          break;
      }
      if (supporting)
        acc = merge_partitions(acc, p);
    }
    if (!(acc == a.gates[g].sp))
      return false;
  }
  return true;
}

std::string SupportReport::format_kv() const {
  std::ostringstream out;
  out << "n=" << n << "\n";
  out << "max_orbit_size=" << max_orbit_size << "\n";
  out << "sp_of_circuit=" << sp_of_circuit << "\n";
  out << "epsilon=" << epsilon << "\n";
  out << "theorem_bound=" << theorem_bound << "\n";
  out << "hyp_epsilon_in_range=" << (hyp_epsilon ? "true" : "false") << "\n";
  out << "hyp_n_large_enough=" << (hyp_n ? "true" : "false") << "\n";
  out << "hyp_orbits_subexponential=" << (hyp_orbit ? "true" : "false") << "\n";
  out << "hypotheses_met=" << (hypotheses_met ? "true" : "false") << "\n";
  out << "bound_holds=" << (bound_holds ? "true" : "false") << "\n";
  return out.str();
}

SupportReport support_report(const Circuit &c, const SymmetryAnalysis &a,
                             double epsilon) {
  if (epsilon <= 0 || epsilon > 1)
    throw Error(ErrorCode::Argument, "epsilon must lie in (0, 1]");
  SupportReport r;
  r.n = c.n;
  r.epsilon = epsilon;
  for (const auto &info : a.gates) {
    r.max_orbit_size = std::max(r.max_orbit_size, info.orbit_size);
    r.sp_of_circuit = std::max(r.sp_of_circuit, info.sp.support_norm());
  }
  if (r.max_orbit_size == 0)
    r.max_orbit_size = 1; // empty circuit
  double log2n = c.n >= 2 ? std::log2(static_cast<double>(c.n)) : 0;
  double log2s = std::log2(static_cast<double>(r.max_orbit_size));
  r.theorem_bound = log2n > 0 ? (33.0 / epsilon) * (log2s / log2n) : 0;
  r.hyp_epsilon = epsilon >= 2.0 / 3.0;
  r.hyp_n = log2n > 56.0 / (epsilon * epsilon);
  r.hyp_orbit =
      c.n >= 2 && log2s <= std::pow(static_cast<double>(c.n), 1.0 - epsilon);
  r.hypotheses_met = r.hyp_epsilon && r.hyp_n && r.hyp_orbit;
  r.bound_holds = r.sp_of_circuit <= r.theorem_bound + 1e-9;
  if (r.hypotheses_met && !r.bound_holds)
    throw Error(ErrorCode::Internal,
                "support bound violated with hypotheses met");
  return r;
}

std::string supports_text(const Circuit &c, const SymmetryAnalysis &a) {
  std::ostringstream out;
  for (int g = 0; g < c.gate_count(); ++g) {
    const auto &info = a.gates[g];
    out << "gate " << c.gate_names[g] << " orbit=" << info.orbit_size
        << " sp=" << info.sp.to_string() << " support=";
    for (size_t i = 0; i < info.support.size(); ++i)
      out << (i ? "," : "") << info.support[i];
    out << "\n";
  }
  return out.str();
}

} // namespace symcirc
