#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topo/config.hpp"
#include "topo/logic.hpp"
#include "topo/structures.hpp"

namespace topo {

using BigInt = mpz_class;

// How many topologies on [r+n] satisfy the formula. In hard-wired mode the
// constants a1..ar denote the points 1..r; in free mode every tuple in
// [r+n]^r is a separate interpretation and (topology, tuple) pairs are
// counted.
struct CountQuery {
  FormulaPtr formula;
  int r = 0;
  int n = 0;
  std::vector<int> moduli;  // each >= 2
  ConstantTable::Mode mode = ConstantTable::Mode::hard_wired;
};

struct CountResult {
  BigInt count;
  std::map<int, int> residues;  // count mod m for each requested m
};

CountResult count_topologies(const CountQuery& query, const Config& cfg = {});

struct SequenceRecord {
  std::string label;
  int offset = 0;
  std::vector<BigInt> values;
  std::map<int, std::vector<int>> residues;
};

// T_phi,r(n) for n in [n_from, n_to], with residue tracks for each modulus.
SequenceRecord count_sequence(const FormulaPtr& formula, int r,
                              ConstantTable::Mode mode, int n_from, int n_to,
                              const std::vector<int>& moduli,
                              const Config& cfg = {},
                              const std::string& label = "");

// Classical sequences, exact. stirling2(n,k) is 0 for k > n; the r-variants
// force elements 1..r into distinct blocks (so n >= r is required for a
// nonzero result and r_stirling(r,r,r) = 1).
BigInt bell_number(int n);
BigInt stirling2(int n, int k);
BigInt catalan_number(int n);
BigInt binomial(int n, int k);
BigInt half_central_binomial(int n);  // n >= 1
BigInt r_stirling(int n, int k, int r);
BigInt r_bell(int n, int r);

enum class ClassicalKind {
  bell,
  stirling2,
  catalan,
  half_central_binomial,
  r_bell,
  r_stirling,
};

// Dispatcher used by the CLI; params are positional (n / n,k / n,k,r).
BigInt classical_number(ClassicalKind kind, const std::vector<int>& params);

// Partitions of [n] with no two blocks crossing under the natural order.
// Brute force over all set partitions; n <= 12.
BigInt count_noncrossing_partitions(int n);

struct StirlingIdentityReport {
  int n = 0;
  BigInt lhs;  // enumerated preorder count Q(n)
  BigInt rhs;  // sum_k S(n,k) * enumerated poset count P(k)
  bool equal = false;
};

StirlingIdentityReport verify_stirling_identity(int n, const Config& cfg = {});

// Topological set partitions: pairs (set partition of [n], topology on [n])
// where every block satisfies the condition in that topology; blocks of a
// k-block partition only when k is given. "closed" means the complement is
// open, "connected" means connected in the trace topology. n <= 5.
enum class BlockCondition { connected, open, closed };

std::optional<BlockCondition> block_condition_from_string(const std::string&);
std::string to_string(BlockCondition c);

BigInt count_topological_partitions(int n, BlockCondition condition,
                                    std::optional<int> k = std::nullopt);

// Per-partition breakdown of the same count.
struct PartitionCountRow {
  std::vector<Mask> blocks;
  BigInt topologies;
};
std::vector<PartitionCountRow> topological_partition_breakdown(
    int n, BlockCondition condition, std::optional<int> k = std::nullopt);

// True iff the subspace on `subset` is connected (empty and singleton
// subspaces count as connected).
bool subspace_connected(const Preorder& q, Mask subset);

// Result cache for count queries, line-oriented JSON keyed by the canonical
// rendering hash of the formula plus (r, mode, n). Loaded lazily, appended
// on miss.
class ResultCache {
 public:
  explicit ResultCache(std::string path);

  std::optional<BigInt> lookup(const std::string& formula_hash, int r,
                               ConstantTable::Mode mode, int n);
  void store(const std::string& formula_hash, int r, ConstantTable::Mode mode,
             int n, const BigInt& value);

  static std::string formula_hash(const FormulaPtr& f);

 private:
  void ensure_loaded();
  std::string path_;
  bool loaded_ = false;
  std::map<std::string, BigInt> entries_;
};

}  // namespace topo
