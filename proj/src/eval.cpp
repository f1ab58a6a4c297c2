#include "eval.hpp"

#include <algorithm>
#include <sstream>

#include "rational.hpp"

namespace symcirc {

bool consistent(const PartialValuation &a, const PartialValuation &b) {
  // shared domain must agree
  size_t i = 0, j = 0;
  while (i < a.domain.size() && j < b.domain.size()) {
    if (a.domain[i] == b.domain[j]) {
      if (a.image[i] != b.image[j])
        return false;
      ++i;
      ++j;
    } else if (a.domain[i] < b.domain[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  // exclusive images must not collide
  for (size_t x = 0; x < a.domain.size(); ++x) {
    bool shared =
        std::binary_search(b.domain.begin(), b.domain.end(), a.domain[x]);
    if (shared)
      continue;
    for (size_t y = 0; y < b.domain.size(); ++y) {
      if (std::binary_search(a.domain.begin(), a.domain.end(), b.domain[y]))
        continue;
      if (a.image[x] == b.image[y])
        return false;
    }
  }
  return true;
}

bool EVRelation::contains(int gate, const std::vector<int> &row) const {
  const auto &rows = gates[gate].rows;
  return std::binary_search(rows.begin(), rows.end(), row);
}

std::uint64_t EVRelation::total_rows() const {
  std::uint64_t total = 0;
  for (const auto &g : gates)
    total += g.rows.size();
  return total;
}

std::int64_t consistent_extension_count(int n, const std::vector<int> &domain_g,
                                        const std::vector<int> &domain_h) {
  int exclusive = 0;
  for (int y : domain_h)
    if (!std::binary_search(domain_g.begin(), domain_g.end(), y))
      ++exclusive;
  std::int64_t pool = n - static_cast<std::int64_t>(domain_g.size());
  std::int64_t count = 1;
  for (int i = 0; i < exclusive; ++i)
    count *= pool - i;
  return count;
}

namespace {

// All injective maps from a k-point domain into n elements, as rows of
// element indices in lexicographic order.
std::vector<std::vector<int>> injective_rows(int k, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> row(k, -1);
  std::vector<bool> used(n, false);
  auto rec = [&](auto &&self, int pos) -> void {
    if (pos == k) {
      out.push_back(row);
      return;
    }
    for (int e = 0; e < n; ++e) {
      if (used[e])
        continue;
      used[e] = true;
      row[pos] = e;
      self(self, pos + 1);
      used[e] = false;
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> ev_domain_for_gate(const Circuit &c,
                                    const SymmetryAnalysis &a, int g) {
  std::vector<int> dom = a.gates[g].support;
  const GateLabel &l = c.labels[g];
  if (l.kind == GateKind::Rel)
    dom.insert(dom.end(), l.tuple.begin(), l.tuple.end());
  if (const std::vector<int> *marking = c.output_tuple(g))
    dom.insert(dom.end(), marking->begin(), marking->end());
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  return dom;
}

} // namespace

EVRelation build_ev(const Circuit &c, const Structure &s,
                    const SymmetryAnalysis &a, EvalStats *stats) {
  check_compatible(c, s);
  if (a.n != c.n || static_cast<int>(a.gates.size()) != c.gate_count())
    throw Error(ErrorCode::Mismatch, "analysis does not match this circuit");
  int n = c.n;

  EVRelation ev;
  ev.gates.resize(c.gate_count());
  EvalStats local;
  for (int g : topological_order(c)) {
    auto &slot = ev.gates[g];
    slot.domain = ev_domain_for_gate(c, a, g);
    int k = static_cast<int>(slot.domain.size());
    const GateLabel &l = c.labels[g];
    switch (l.kind) {
    case GateKind::Const0:
      break; // EV = empty
    case GateKind::Const1:
      slot.rows = injective_rows(k, n);
      break;
    case GateKind::Rel: {
      // position of each Lambda entry within the domain
      std::vector<int> pos;
      pos.reserve(l.tuple.size());
      for (int u : l.tuple) {
        auto it =
            std::lower_bound(slot.domain.begin(), slot.domain.end(), u);
        pos.push_back(static_cast<int>(it - slot.domain.begin()));
      }
      for (const auto &alpha : injective_rows(k, n)) {
        std::vector<int> elems;
        elems.reserve(pos.size());
        for (int p : pos)
          elems.push_back(alpha[p]);
        if (s.holds_idx(l.rel, elems))
          slot.rows.push_back(alpha);
      }
      break;
    }
    default: {
      const auto &kids = c.children[g];
      auto alphas = injective_rows(k, n);
      auto alpha_index = [&alphas](const std::vector<int> &row) {
        auto it = std::lower_bound(alphas.begin(), alphas.end(), row);
        return static_cast<size_t>(it - alphas.begin());
      };
      std::vector<std::vector<std::int64_t>> counts(
          kids.size(), std::vector<std::int64_t>(alphas.size(), 0));
      std::vector<std::int64_t> a_h(kids.size());
      for (size_t ci = 0; ci < kids.size(); ++ci) {
        int h = kids[ci];
        const auto &dom_h = ev.gates[h].domain;
        a_h[ci] = consistent_extension_count(n, slot.domain, dom_h);
        // positions of the shared points in both domains, and of the points
        // exclusive to the parent domain
        std::vector<std::pair<int, int>> shared; // (pos in X, pos in Y)
        std::vector<int> fill_pos;               // pos in X
        for (int xi = 0; xi < k; ++xi) {
          auto it = std::lower_bound(dom_h.begin(), dom_h.end(),
                                     slot.domain[xi]);
          if (it != dom_h.end() && *it == slot.domain[xi])
            shared.emplace_back(xi, static_cast<int>(it - dom_h.begin()));
          else
            fill_pos.push_back(xi);
        }
        // every consistent (alpha, beta) pair is one injective extension of
        // beta to the parent's exclusive points
        std::vector<int> alpha_row(k);
        std::vector<bool> used(n, false);
        for (const auto &beta : ev.gates[h].rows) {
          for (int e : beta)
            used[e] = true;
          for (const auto &[xi, yi] : shared)
            alpha_row[xi] = beta[yi];
          auto rec = [&](auto &&self, size_t fi) -> void {
            if (fi == fill_pos.size()) {
              counts[ci][alpha_index(alpha_row)]++;
              return;
            }
            for (int e = 0; e < n; ++e) {
              if (used[e])
                continue;
              used[e] = true;
              alpha_row[fill_pos[fi]] = e;
              self(self, fi + 1);
              used[e] = false;
            }
          };
          rec(rec, 0);
          for (int e : beta)
            used[e] = false;
        }
      }
      std::int64_t n_children = static_cast<std::int64_t>(kids.size());
      for (size_t ai = 0; ai < alphas.size(); ++ai) {
        Rat sum;
        for (size_t ci = 0; ci < kids.size(); ++ci)
          sum = sum + Rat(counts[ci][ai], a_h[ci]);
        ++local.integrality_checks;
        if (!sum.is_integer())
          throw Error(ErrorCode::Internal,
                      "child-fraction sum is not integral at gate " +
                          c.gate_names[g]);
        bool value = false;
        switch (l.kind) {
        case GateKind::And: {
          value = true;
          for (size_t ci = 0; ci < kids.size(); ++ci)
            if (counts[ci][ai] != a_h[ci]) {
              value = false;
              break;
            }
          if (value != (sum == Rat(n_children)))
            throw Error(ErrorCode::Internal,
                        "AND universal condition disagrees with the "
                        "child-fraction sum at gate " +
                            c.gate_names[g]);
          break;
        }
        case GateKind::Or:
          for (size_t ci = 0; ci < kids.size(); ++ci)
            if (counts[ci][ai] > 0) {
              value = true;
              break;
            }
          break;
        case GateKind::Not:
          value = counts[0][ai] < a_h[0];
          break;
        case GateKind::Maj:
          value = sum.ge(n_children, 2);
          break;
        default:
          throw Error(ErrorCode::Internal, "unexpected gate kind");
        }
        if (value)
          slot.rows.push_back(alphas[ai]);
      }
      break;
    }
    }
    local.ev_rows += slot.rows.size();
  }
  if (stats)
    *stats = local;
  return ev;
}

QueryResult extract_query(const Circuit &c, const Structure &s,
                          const SymmetryAnalysis &a, const EVRelation &ev) {
  (void)a;
  QueryResult out;
  out.q = c.q;
  for (const auto &[tuple, gate] : c.outputs) {
    const auto &slot = ev.gates[gate];
    std::vector<int> pos;
    pos.reserve(tuple.size());
    for (int u : tuple) {
      auto it = std::lower_bound(slot.domain.begin(), slot.domain.end(), u);
      if (it == slot.domain.end() || *it != u)
        throw Error(ErrorCode::Internal,
                    "output marking element missing from the evaluation "
                    "domain of gate " +
                        c.gate_names[gate]);
      pos.push_back(static_cast<int>(it - slot.domain.begin()));
    }
    for (const auto &alpha : slot.rows) {
      std::vector<std::string> named;
      named.reserve(pos.size());
      for (int p : pos)
        named.push_back(s.universe[alpha[p]]);
      out.tuples.insert(std::move(named));
    }
  }
  return out;
}

SuccinctRun succinct_evaluate_full(const Circuit &c, const Structure &s) {
  require_valid(c);
  check_compatible(c, s);
  SuccinctRun run;
  run.rigid = rigidify(c);
  run.analysis = analyze_symmetry_or_throw(run.rigid);
  run.ev = build_ev(run.rigid, s, run.analysis, &run.stats);
  run.query = extract_query(run.rigid, s, run.analysis, run.ev);
  return run;
}

QueryResult succinct_evaluate(const Circuit &c, const Structure &s) {
  return succinct_evaluate_full(c, s).query;
}

std::string dump_ev(const Circuit &c, const Structure &s,
                    const EVRelation &ev) {
  std::ostringstream out;
  for (int g = 0; g < c.gate_count(); ++g) {
    const auto &slot = ev.gates[g];
    out << "ev " << c.gate_names[g] << " domain=";
    for (size_t i = 0; i < slot.domain.size(); ++i)
      out << (i ? "," : "") << slot.domain[i];
    out << " rows=" << slot.rows.size();
    for (const auto &row : slot.rows) {
      out << " (";
      for (size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << s.universe[row[i]];
      out << ")";
    }
    out << "\n";
  }
  return out.str();
}

} // namespace symcirc
