#include "perm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace symcirc {

Perm Perm::identity(int n) {
  Perm p;
  p.img.resize(n);
  std::iota(p.img.begin(), p.img.end(), 1);
  return p;
}

Perm Perm::transposition(int n, int u, int v) {
  if (u < 1 || v < 1 || u > n || v > n || u == v)
    throw Error(ErrorCode::Argument, "bad transposition");
  Perm p = identity(n);
  std::swap(p.img[u - 1], p.img[v - 1]);
  return p;
}

Perm Perm::compose(const Perm &other) const {
  if (n() != other.n())
    throw Error(ErrorCode::Argument, "composing permutations of different n");
  Perm r;
  r.img.resize(img.size());
  for (int i = 1; i <= n(); ++i)
    r.img[i - 1] = apply(other.apply(i));
  return r;
}

Perm Perm::inverse() const {
  Perm r;
  r.img.resize(img.size());
  for (int i = 1; i <= n(); ++i)
    r.img[img[i - 1] - 1] = i;
  return r;
}

std::string Perm::to_string() const {
  std::ostringstream out;
  for (size_t i = 0; i < img.size(); ++i)
    out << (i ? " " : "") << img[i];
  return out.str();
}

Perm Perm::parse(const std::string &text) {
  Perm p;
  std::istringstream in(text);
  int x;
  while (in >> x)
    p.img.push_back(x);
  std::vector<bool> seen(p.img.size(), false);
  for (int v : p.img) {
    if (v < 1 || v > p.n() || seen[v - 1])
      throw ParseError("not a permutation image list: " + text);
    seen[v - 1] = true;
  }
  if (p.img.empty())
    throw ParseError("empty permutation");
  return p;
}

Partition Partition::singletons(int n) {
  Partition p;
  p.n = n;
  for (int i = 1; i <= n; ++i)
    p.blocks.push_back({i});
  return p;
}

Partition Partition::single_block(int n) {
  Partition p;
  p.n = n;
  std::vector<int> b(n);
  std::iota(b.begin(), b.end(), 1);
  p.blocks.push_back(b);
  return p;
}

Partition Partition::from_assignment(int n, const std::vector<int> &assignment) {
  if (static_cast<int>(assignment.size()) != n)
    throw Error(ErrorCode::Argument, "assignment length != n");
  std::map<int, std::vector<int>> by_id;
  for (int i = 0; i < n; ++i)
    by_id[assignment[i]].push_back(i + 1);
  Partition p;
  p.n = n;
  for (auto &[id, block] : by_id) {
    (void)id;
    std::sort(block.begin(), block.end());
    p.blocks.push_back(block);
  }
  std::sort(p.blocks.begin(), p.blocks.end(),
            [](const auto &a, const auto &b) { return a.front() < b.front(); });
  return p;
}

int Partition::max_block_size() const {
  int m = 0;
  for (const auto &b : blocks)
    m = std::max(m, static_cast<int>(b.size()));
  return m;
}

int Partition::largest_block_index() const {
  int best = -1, best_size = -1;
  for (size_t i = 0; i < blocks.size(); ++i) {
    int sz = static_cast<int>(blocks[i].size());
    if (sz > best_size) { // first (= smallest min element) wins ties
      best_size = sz;
      best = static_cast<int>(i);
    }
  }
  return best;
}

bool Partition::is_coarser_or_equal(const Partition &finer) const {
  if (n != finer.n)
    return false;
  std::vector<int> block_of(n + 1, -1);
  for (size_t i = 0; i < blocks.size(); ++i)
    for (int x : blocks[i])
      block_of[x] = static_cast<int>(i);
  for (const auto &b : finer.blocks) {
    for (int x : b)
      if (block_of[x] != block_of[b.front()])
        return false;
  }
  return true;
}

Partition Partition::apply(const Perm &sigma) const {
  std::vector<int> assignment(n, 0);
  for (size_t i = 0; i < blocks.size(); ++i)
    for (int x : blocks[i])
      assignment[sigma.apply(x) - 1] = static_cast<int>(i);
  return from_assignment(n, assignment);
}

std::string Partition::to_string() const {
  std::ostringstream out;
  for (const auto &b : blocks) {
    out << "{";
    for (size_t i = 0; i < b.size(); ++i)
      out << (i ? "," : "") << b[i];
    out << "}";
  }
  return out.str();
}

Partition Partition::parse(const std::string &text) {
  std::vector<std::vector<int>> blocks;
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '{')
      throw ParseError("expected '{' in partition: " + text);
    ++i;
    std::vector<int> block;
    std::string num;
    for (; i < text.size() && text[i] != '}'; ++i) {
      if (text[i] == ',') {
        if (num.empty())
          throw ParseError("empty entry in partition: " + text);
        block.push_back(std::stoi(num));
        num.clear();
      } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
        num += text[i];
      } else {
        throw ParseError("bad character in partition: " + text);
      }
    }
    if (i == text.size())
      throw ParseError("unterminated block in partition: " + text);
    ++i; // '}'
    if (!num.empty())
      block.push_back(std::stoi(num));
    if (block.empty())
      throw ParseError("empty block in partition: " + text);
    blocks.push_back(block);
  }
  int n = 0;
  for (const auto &b : blocks)
    n += static_cast<int>(b.size());
  std::vector<int> assignment(n, -1);
  for (size_t bi = 0; bi < blocks.size(); ++bi)
    for (int x : blocks[bi]) {
      if (x < 1 || x > n || assignment[x - 1] != -1)
        throw ParseError("blocks do not partition [n]: " + text);
      assignment[x - 1] = static_cast<int>(bi);
    }
  return Partition::from_assignment(n, assignment);
}

namespace {

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

Partition merge_partitions(const Partition &p, const Partition &q) {
  if (p.n != q.n)
    throw Error(ErrorCode::Argument, "merging partitions of different n");
  UnionFind uf(p.n);
  for (const auto &blocks : {p.blocks, q.blocks})
    for (const auto &b : blocks)
      for (size_t i = 1; i < b.size(); ++i)
        uf.unite(b[0] - 1, b[i] - 1);
  std::vector<int> assignment(p.n);
  for (int i = 0; i < p.n; ++i)
    assignment[i] = uf.find(i);
  return Partition::from_assignment(p.n, assignment);
}

std::vector<int> canonical_support(const Partition &p) {
  int skip = p.largest_block_index();
  std::vector<int> support;
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    if (static_cast<int>(i) == skip)
      continue;
    support.insert(support.end(), p.blocks[i].begin(), p.blocks[i].end());
  }
  std::sort(support.begin(), support.end());
  return support;
}

double setstab_log_size(const Partition &p) {
  double lg = 0;
  std::map<int, int> size_mult;
  for (const auto &b : p.blocks) {
    lg += std::lgamma(static_cast<double>(b.size()) + 1.0);
    size_mult[static_cast<int>(b.size())]++;
  }
  for (const auto &[size, mult] : size_mult) {
    (void)size;
    lg += std::lgamma(static_cast<double>(mult) + 1.0);
  }
  return lg;
}

double partition_log_index(const Partition &p) {
  return std::lgamma(static_cast<double>(p.n) + 1.0) - setstab_log_size(p);
}

unsigned long long partition_index_exact(const Partition &p) {
  if (p.n > 20)
    throw Error(ErrorCode::TooLarge, "exact index limited to n <= 20");
  using u128 = unsigned __int128;
  u128 num = 1;
  for (int i = 2; i <= p.n; ++i)
    num *= static_cast<u128>(i);
  auto divide_by_factorial = [&num](int k) {
    for (int i = 2; i <= k; ++i)
      num /= static_cast<u128>(i); // divides exactly: group order | n!
  };
  std::map<int, int> size_mult;
  for (const auto &b : p.blocks) {
    divide_by_factorial(static_cast<int>(b.size()));
    size_mult[static_cast<int>(b.size())]++;
  }
  for (const auto &[size, mult] : size_mult) {
    (void)size;
    divide_by_factorial(mult);
  }
  return static_cast<unsigned long long>(num);
}

ExplicitGroup ExplicitGroup::from_generators(int n,
                                             const std::vector<Perm> &gens) {
  for (const auto &g : gens)
    if (g.n() != n)
      throw Error(ErrorCode::Argument, "generator size mismatch");
  std::set<Perm> closed;
  std::vector<Perm> frontier{Perm::identity(n)};
  closed.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto &p : frontier)
      for (const auto &g : gens) {
        Perm q = g.compose(p);
        if (closed.insert(q).second)
          next.push_back(q);
      }
    frontier = std::move(next);
  }
  ExplicitGroup out;
  out.n = n;
  out.elements.assign(closed.begin(), closed.end());
  return out;
}

ExplicitGroup ExplicitGroup::from_elements(int n, std::vector<Perm> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  ExplicitGroup out;
  out.n = n;
  out.elements = std::move(elems);
  auto member = [&out](const Perm &p) {
    return std::binary_search(out.elements.begin(), out.elements.end(), p);
  };
  if (!member(Perm::identity(n)))
    throw Error(ErrorCode::Argument, "group does not contain the identity");
  for (const auto &p : out.elements) {
    if (p.n() != n)
      throw Error(ErrorCode::Argument, "group element size mismatch");
    if (!member(p.inverse()))
      throw Error(ErrorCode::Argument, "group not closed under inverse");
    for (const auto &q : out.elements)
      if (!member(p.compose(q)))
        throw Error(ErrorCode::Argument, "group not closed under composition");
  }
  return out;
}

ExplicitGroup ExplicitGroup::symmetric(int n) {
  ExplicitGroup out;
  out.n = n;
  out.elements = all_permutations(n);
  return out;
}

ExplicitGroup ExplicitGroup::trivial(int n) {
  ExplicitGroup out;
  out.n = n;
  out.elements = {Perm::identity(n)};
  return out;
}

ExplicitGroup ExplicitGroup::alternating(int n) {
  ExplicitGroup out;
  out.n = n;
  for (const auto &p : all_permutations(n)) {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p.img[i] > p.img[j])
          ++inversions;
    if (inversions % 2 == 0)
      out.elements.push_back(p);
  }
  return out;
}

bool ExplicitGroup::contains(const Perm &p) const {
  return std::binary_search(elements.begin(), elements.end(), p);
}

ExplicitGroup ExplicitGroup::conjugate(const Perm &sigma) const {
  ExplicitGroup out;
  out.n = n;
  Perm inv = sigma.inverse();
  for (const auto &p : elements)
    out.elements.push_back(sigma.compose(p).compose(inv));
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

std::vector<Perm> all_permutations(int n) {
  std::vector<Perm> out;
  Perm p = Perm::identity(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.img.begin(), p.img.end()));
  return out;
}

std::vector<Partition> all_partitions(int n) {
  if (n > 12)
    throw Error(ErrorCode::TooLarge, "partition enumeration limited to n <= 12");
  std::vector<Partition> out;
  std::vector<int> a(n, 0);
  // restricted growth strings: a[0] = 0, a[i] <= max(a[0..i-1]) + 1
  while (true) {
    out.push_back(Partition::from_assignment(n, a));
    int i = n - 1;
    for (; i > 0; --i) {
      int maxprev = *std::max_element(a.begin(), a.begin() + i);
      if (a[i] <= maxprev) {
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
        break;
      }
    }
    if (i == 0)
      break;
  }
  return out;
}

bool pointwise_stab_contained(const Partition &p, const ExplicitGroup &g) {
  // PointStab(P) is generated by the transpositions inside blocks; a group
  // containing all generators contains the generated group.
  for (const auto &b : p.blocks)
    for (size_t i = 0; i < b.size(); ++i)
      for (size_t j = i + 1; j < b.size(); ++j)
        if (!g.contains(Perm::transposition(g.n, b[i], b[j])))
          return false;
  return true;
}

Partition brute_force_sp(const ExplicitGroup &g) {
  if (g.n > 7)
    throw Error(ErrorCode::TooLarge, "brute_force_sp limited to n <= 7");
  Partition acc = Partition::singletons(g.n); // always supporting
  for (const auto &p : all_partitions(g.n))
    if (pointwise_stab_contained(p, g))
      acc = merge_partitions(acc, p);
  return acc;
}

bool group_sandwich_check(const ExplicitGroup &g) {
  Partition sp = brute_force_sp(g);
  if (!pointwise_stab_contained(sp, g))
    return false;
  std::set<std::vector<int>> block_set(sp.blocks.begin(), sp.blocks.end());
  for (const auto &sigma : g.elements)
    for (const auto &b : sp.blocks) {
      std::vector<int> image;
      image.reserve(b.size());
      for (int x : b)
        image.push_back(sigma.apply(x));
      std::sort(image.begin(), image.end());
      if (!block_set.count(image))
        return false;
    }
  return true;
}

bool conjugation_check(const ExplicitGroup &g, const Perm &sigma) {
  Partition lhs = brute_force_sp(g).apply(sigma);
  Partition rhs = brute_force_sp(g.conjugate(sigma));
  return lhs == rhs;
}

namespace {

constexpr double kLog2E = 1.4426950408889634; // log2(e)
constexpr double kTol = 1e-9;

void fill_common(PartitionBoundReport &r, const Partition &p, double epsilon) {
  r.n = p.n;
  r.k = p.part_count();
  r.k_prime = std::min(r.k, r.n - r.k);
  r.S = p.support_norm();
  r.epsilon = epsilon;
  r.log_index = partition_log_index(p);
  r.log2_index = r.log_index * kLog2E;
  double log2n = std::log2(static_cast<double>(r.n));
  // n <= index <= 2^(n^(1-eps)), checked in base-2 logs
  double cap = std::pow(static_cast<double>(r.n), 1.0 - epsilon);
  r.index_hypothesis = r.log2_index >= log2n * (1 - kTol) - kTol &&
                       r.log2_index <= cap * (1 + kTol) + kTol;
}

} // namespace

PartitionBoundReport check_small_large(const Partition &p, double epsilon) {
  if (epsilon < 0 || epsilon >= 1)
    throw Error(ErrorCode::Argument, "epsilon must satisfy 0 <= eps < 1");
  PartitionBoundReport r;
  r.lemma = "small-large";
  fill_common(r, p, epsilon);
  double log2n = std::log2(static_cast<double>(r.n));
  r.env_hypothesis = epsilon > 0 && log2n >= 4.0 / epsilon - kTol;
  r.parts_hypothesis = true;
  r.hypotheses_met = r.env_hypothesis && r.index_hypothesis;
  r.bound = epsilon > 0 ? (8.0 / epsilon) * (r.log2_index / log2n)
                        : std::numeric_limits<double>::infinity();
  r.conclusion = r.k_prime <= r.bound + kTol;
  r.holds = !r.hypotheses_met || r.conclusion;
  return r;
}

PartitionBoundReport check_large_part(const Partition &p, double epsilon) {
  if (epsilon < 0 || epsilon >= 1)
    throw Error(ErrorCode::Argument, "epsilon must satisfy 0 <= eps < 1");
  PartitionBoundReport r;
  r.lemma = "largepart";
  fill_common(r, p, epsilon);
  double log2n = std::log2(static_cast<double>(r.n));
  r.env_hypothesis =
      epsilon > 0 && log2n >= 8.0 / (epsilon * epsilon) - kTol;
  r.parts_hypothesis = r.k <= r.n / 2.0;
  r.hypotheses_met = r.env_hypothesis && r.parts_hypothesis && r.index_hypothesis;
  r.bound = epsilon > 0 ? (33.0 / epsilon) * (r.log2_index / log2n)
                        : std::numeric_limits<double>::infinity();
  // conclusion: max part >= n - bound, i.e. S <= bound
  r.conclusion = r.S <= r.bound + kTol;
  r.holds = !r.hypotheses_met || r.conclusion;
  return r;
}

std::string LemmaCheckResult::report_kv() const {
  std::ostringstream out;
  out << "lemma=" << (lemma == LemmaKind::SmallLarge ? "small-large" : "largepart")
      << "\n";
  out << "n=" << n << "\n";
  out << "epsilon=" << epsilon << "\n";
  out << "requested_samples=" << requested_samples << "\n";
  out << "samples_meeting_partition_hypotheses=" << samples << "\n";
  out << "env_hypothesis_met=" << (env_hypothesis ? "true" : "false") << "\n";
  out << "worst_margin=" << worst_margin << "\n";
  out << "violations=" << violations << "\n";
  return out.str();
}

LemmaCheckResult lemma_check(LemmaKind lemma, int n, double epsilon,
                             long samples, std::uint64_t seed) {
  if (n < 2)
    throw Error(ErrorCode::Argument, "lemma_check requires n >= 2");
  if (epsilon <= 0 || epsilon >= 1)
    throw Error(ErrorCode::Argument, "epsilon must satisfy 0 < eps < 1");
  LemmaCheckResult res;
  res.lemma = lemma;
  res.n = n;
  res.epsilon = epsilon;
  res.requested_samples = samples;
  res.worst_margin = std::numeric_limits<double>::infinity();

  double log2n = std::log2(static_cast<double>(n));
  res.env_hypothesis = lemma == LemmaKind::SmallLarge
                           ? log2n >= 4.0 / epsilon - kTol
                           : log2n >= 8.0 / (epsilon * epsilon) - kTol;

  // Admissible partitions have index at most 2^(n^(1-eps)); the cheapest
  // shape with j points outside the dominant block has index C(n,j), so cap
  // the dust size accordingly.
  double log2cap = std::pow(static_cast<double>(n), 1.0 - epsilon);
  int j_max = 0;
  double log2binom = 0;
  for (int j = 1; j <= n / 2; ++j) {
    log2binom += std::log2(static_cast<double>(n - j + 1) / j);
    if (log2binom <= log2cap)
      j_max = j;
    else
      break;
  }
  if (j_max == 0)
    throw Error(ErrorCode::Argument,
                "no partition can meet the index hypothesis at these parameters");

  std::mt19937_64 rng(seed);
  long attempts = 0;
  const long max_attempts = samples * 200;
  while (res.samples < samples && attempts < max_attempts) {
    ++attempts;
    int j = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(j_max));
    // pick j distinct dust elements
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 1);
    for (int i = 0; i < j; ++i)
      std::swap(pool[i], pool[i + rng() % static_cast<std::uint64_t>(n - i)]);
    // random set partition of the dust via a restricted growth string
    std::vector<int> assignment(n, 0);
    int max_id = 0;
    for (int i = 0; i < j; ++i) {
      int id = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_id + 1));
      max_id = std::max(max_id, id);
      assignment[pool[i] - 1] = id;
    }
    Partition p = Partition::from_assignment(n, assignment);
    PartitionBoundReport r = lemma == LemmaKind::SmallLarge
                                 ? check_small_large(p, epsilon)
                                 : check_large_part(p, epsilon);
    if (!r.index_hypothesis || !r.parts_hypothesis)
      continue; // dust split can push the index over the cap; resample
    ++res.samples;
    double measured = lemma == LemmaKind::SmallLarge
                          ? static_cast<double>(r.k_prime)
                          : static_cast<double>(r.S);
    res.worst_margin = std::min(res.worst_margin, r.bound - measured);
    if (!r.conclusion)
      ++res.violations;
  }
  if (res.samples < samples)
    throw Error(ErrorCode::Internal,
                "lemma_check sampler failed to meet its quota");
  return res;
}

} // namespace symcirc
