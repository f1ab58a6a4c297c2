#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace symcirc {

// Permutation of [n] = {1..n}; img[i-1] = sigma(i).
struct Perm {
  std::vector<int> img;

  static Perm identity(int n);
  static Perm transposition(int n, int u, int v);

  int n() const { return static_cast<int>(img.size()); }
  int apply(int x) const { return img[x - 1]; }
  Perm compose(const Perm &other) const; // (this ∘ other)(x) = this(other(x))
  Perm inverse() const;

  std::string to_string() const;              // "2 1 3"
  static Perm parse(const std::string &text); // one-line image list

  bool operator==(const Perm &o) const { return img == o.img; }
  bool operator<(const Perm &o) const { return img < o.img; }
};

// Partition of [n] in canonical block form: each block sorted ascending,
// blocks ordered by minimum element.
struct Partition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  static Partition singletons(int n);
  static Partition single_block(int n);
  // assignment[i] = block id of point i+1 (ids arbitrary); canonicalizes.
  static Partition from_assignment(int n, const std::vector<int> &assignment);

  int part_count() const { return static_cast<int>(blocks.size()); }
  int max_block_size() const;
  // ||P|| = n - size of the largest part.
  int support_norm() const { return n - max_block_size(); }
  // Index of the designated largest block (max size, ties broken by smallest
  // minimum element; blocks are in canonical order so that is the first one).
  int largest_block_index() const;

  bool is_coarser_or_equal(const Partition &finer) const;
  Partition apply(const Perm &sigma) const; // blockwise image

  std::string to_string() const; // "{1,2}{3}"
  static Partition parse(const std::string &text);

  bool operator==(const Partition &o) const {
    return n == o.n && blocks == o.blocks;
  }
};

// Finest partition coarser than both p and q (transitive closure of block
// overlap).
Partition merge_partitions(const Partition &p, const Partition &q);

// Union of all blocks except the designated largest one, sorted.  This is a
// minimum-size support when the partition supports a gate's stabiliser.
std::vector<int> canonical_support(const Partition &p);

// |SetStab(P)| = prod_B |B|! * prod over distinct block sizes d of m_d!,
// returned as a natural log.  partition_log_index is ln of n!/|SetStab(P)|.
double setstab_log_size(const Partition &p);
double partition_log_index(const Partition &p);

// Exact index for n <= 20 (fits in unsigned 128-bit arithmetic).
unsigned long long partition_index_exact(const Partition &p);

// Explicit permutation group on [n]: all elements materialized.  Intended for
// small-n oracles only.
struct ExplicitGroup {
  int n = 0;
  std::vector<Perm> elements; // sorted, unique

  static ExplicitGroup from_generators(int n, const std::vector<Perm> &gens);
  static ExplicitGroup from_elements(int n, std::vector<Perm> elems);
  static ExplicitGroup symmetric(int n);
  static ExplicitGroup trivial(int n);
  static ExplicitGroup alternating(int n);

  bool contains(const Perm &p) const;
  ExplicitGroup conjugate(const Perm &sigma) const; // sigma G sigma^-1
};

// All permutations of [n] in lexicographic order.
std::vector<Perm> all_permutations(int n);

// All partitions of [n] (restricted-growth-string enumeration); n <= 12.
std::vector<Partition> all_partitions(int n);

// True iff the pointwise stabiliser of p is contained in g, i.e. every
// transposition within a block of p lies in g.
bool pointwise_stab_contained(const Partition &p, const ExplicitGroup &g);

// The unique coarsest supporting partition of g, by Bell-number enumeration
// and E-merging of all supporting partitions.  Requires n <= 7.
Partition brute_force_sp(const ExplicitGroup &g);

// PointStab(SP(G)) <= G <= SetStab(SP(G)).
bool group_sandwich_check(const ExplicitGroup &g);

// sigma SP(G) == SP(sigma G sigma^-1).
bool conjugation_check(const ExplicitGroup &g, const Perm &sigma);

// Numeric check report for the small-large / largepart inequalities.
struct PartitionBoundReport {
  std::string lemma; // "small-large" or "largepart"
  int n = 0;
  int k = 0;       // part count
  int k_prime = 0; // min{k, n-k}
  int S = 0;       // n - max part size
  double epsilon = 0;
  double log_index = 0;  // natural log of [Sym(n) : SetStab(P)]
  double log2_index = 0; // same in base 2
  double bound = 0;      // right-hand side of the lemma's conclusion
  bool env_hypothesis = false;       // the (n, epsilon) hypothesis
  bool parts_hypothesis = false;     // largepart: |P| <= n/2 (true otherwise)
  bool index_hypothesis = false;     // n <= index <= 2^(n^(1-eps))
  bool hypotheses_met = false;       // all of the above
  bool conclusion = false;           // the inequality itself
  bool holds = false;                // hypotheses_met implies conclusion
};

PartitionBoundReport check_small_large(const Partition &p, double epsilon);
PartitionBoundReport check_large_part(const Partition &p, double epsilon);

enum class LemmaKind { SmallLarge, LargePart };

struct LemmaCheckResult {
  LemmaKind lemma;
  int n;
  double epsilon;
  long requested_samples = 0;
  long samples = 0;          // samples meeting the partition-level hypotheses
  long violations = 0;       // partition hypotheses met but conclusion false
  bool env_hypothesis = false;
  double worst_margin = 0;   // min over samples of (bound - measured value)
  std::string report_kv() const;
};

// Samples partitions of [n] whose setwise-stabiliser index satisfies
// n <= index <= 2^(n^(1-eps)) and checks the lemma's conclusion on each.
LemmaCheckResult lemma_check(LemmaKind lemma, int n, double epsilon,
                             long samples, std::uint64_t seed);

} // namespace symcirc
