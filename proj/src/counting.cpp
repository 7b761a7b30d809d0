#include "topo/counting.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace topo {

namespace {

struct CountError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_query(const CountQuery& q, const Config& cfg) {
  if (!q.formula) throw CountError("count query without a formula");
  if (q.r < 0 || q.n < 0) throw CountError("negative r or n");
  const int ground = q.r + q.n;
  if (ground > cfg.enum_cap)
    throw CountError("ground-set size " + std::to_string(ground) +
                     " exceeds enumeration cap " + std::to_string(cfg.enum_cap));
  const int eval_cap = uses_point_set_quantifier(q.formula) ? cfg.eval_cap_mso
                                                            : cfg.eval_cap_fol;
  if (ground > eval_cap)
    throw CountError("ground-set size " + std::to_string(ground) +
                     " exceeds evaluation cap " + std::to_string(eval_cap));
  if (max_constant_index(q.formula) > q.r)
    throw CountError("formula uses constant a" +
                     std::to_string(max_constant_index(q.formula)) +
                     " but r = " + std::to_string(q.r));
  for (int m : q.moduli)
    if (m < 2) throw CountError("modulus must be >= 2");
  auto frees = free_variables(q.formula);
  if (!frees.empty())
    throw CountError("count needs a sentence; '" + frees.begin()->first +
                     "' is free");
}

// Structures satisfying the formula within one enumeration stripe.
std::uint64_t count_stripe(const CountQuery& q, const Config& cfg, int stripe,
                           int stripes) {
  const int ground = q.r + q.n;
  const EvalLimits limits = cfg.eval_limits();
  std::uint64_t hits = 0;

  std::vector<Environment> envs;
  if (q.mode == ConstantTable::Mode::hard_wired || q.r == 0) {
    envs.push_back(Environment::hard_wired(q.r));
  } else if (ground > 0) {
    // Every interpretation of (a1..ar) in [ground]^r.
    std::vector<int> tuple(q.r, 0);
    for (;;) {
      Environment env;
      env.constants = ConstantTable{q.r, ConstantTable::Mode::free};
      env.constant_points = tuple;
      envs.push_back(env);
      int i = q.r - 1;
      while (i >= 0 && tuple[i] == ground - 1) tuple[i--] = 0;
      if (i < 0) break;
      ++tuple[i];
    }
  }  // r >= 1 constants have no interpretation on the empty ground set

  for_each_preorder(
      ground,
      [&](const Preorder& pre) {
        Topology t = alpha_prime(pre);
        for (const Environment& env : envs)
          if (evaluate(t, q.formula, env, limits)) ++hits;
      },
      EnumPartition{stripes, stripe});
  return hits;
}

}  // namespace

CountResult count_topologies(const CountQuery& query, const Config& cfg) {
  check_query(query, cfg);
  const int workers = std::max(1, cfg.workers);

  BigInt total = 0;
  if (workers == 1) {
    total = count_stripe(query, cfg, 0, 1);
  } else {
    std::vector<std::uint64_t> partial(workers, 0);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w)
      threads.emplace_back([&, w] { partial[w] = count_stripe(query, cfg, w, workers); });
    for (auto& th : threads) th.join();
    // Merge in stripe order: addition is associative and commutative, so the
    // result is identical for every worker count.
    for (int w = 0; w < workers; ++w) total += partial[w];
  }

  CountResult result;
  result.count = total;
  for (int m : query.moduli) {
    BigInt r = result.count % m;
    result.residues[m] = (int)r.get_si();
  }
  return result;
}

SequenceRecord count_sequence(const FormulaPtr& formula, int r,
                              ConstantTable::Mode mode, int n_from, int n_to,
                              const std::vector<int>& moduli, const Config& cfg,
                              const std::string& label) {
  if (n_from < 0 || n_to < n_from)
    throw CountError("bad sequence range");
  SequenceRecord rec;
  rec.label = label;
  rec.offset = n_from;
  for (int m : moduli) rec.residues[m] = {};
  for (int n = n_from; n <= n_to; ++n) {
    CountQuery q{formula, r, n, moduli, mode};
    CountResult c = count_topologies(q, cfg);
    rec.values.push_back(c.count);
    for (int m : moduli) rec.residues[m].push_back(c.residues.at(m));
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Classical sequences
// ---------------------------------------------------------------------------

BigInt stirling2(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("stirling2 needs n, k >= 0");
  if (k > n) return 0;
  if (n == 0) return k == 0 ? 1 : 0;
  // Triangle S(n,k) = k*S(n-1,k) + S(n-1,k-1).
  std::vector<BigInt> row{1};  // S(0,0)
  for (int i = 1; i <= n; ++i) {
    std::vector<BigInt> next(i + 1, 0);
    for (int j = 0; j < (int)row.size(); ++j) {
      if (row[j] == 0) continue;
      next[j] += row[j] * j;
      next[j + 1] += row[j];
    }
    row = std::move(next);
  }
  return row[k];
}

BigInt bell_number(int n) {
  if (n < 0) throw std::invalid_argument("bell needs n >= 0");
  // Bell triangle.
  std::vector<BigInt> row{1};
  BigInt bell = 1;
  for (int i = 1; i <= n; ++i) {
    std::vector<BigInt> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const BigInt& v : row) next.push_back(next.back() + v);
    row = std::move(next);
    bell = row.front();
  }
  return bell;
}

BigInt binomial(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial needs n, k >= 0");
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt catalan_number(int n) {
  if (n < 0) throw std::invalid_argument("catalan needs n >= 0");
  return binomial(2 * n, n) / (n + 1);
}

BigInt half_central_binomial(int n) {
  if (n < 1)
    throw std::invalid_argument("half_central_binomial needs n >= 1");
  return binomial(2 * n, n) / 2;
}

BigInt r_stirling(int n, int k, int r) {
  if (n < 0 || k < 0 || r < 0)
    throw std::invalid_argument("r_stirling needs n, k, r >= 0");
  if (n < r || k < r) return 0;
  // Shifted triangle: base S_r(r,k) = [k == r]; same recurrence above r.
  std::vector<BigInt> row(k + 1, 0);
  if (r <= k) row[r] = 1;
  for (int i = r + 1; i <= n; ++i) {
    std::vector<BigInt> next(k + 1, 0);
    for (int j = 0; j <= k; ++j) {
      if (row[j] == 0) continue;
      next[j] += row[j] * j;
      if (j + 1 <= k) next[j + 1] += row[j];
    }
    row = std::move(next);
  }
  return row[k];
}

BigInt r_bell(int n, int r) {
  if (n < 0 || r < 0) throw std::invalid_argument("r_bell needs n, r >= 0");
  BigInt total = 0;
  for (int k = 0; k <= n; ++k) total += r_stirling(n, k, r);
  return total;
}

BigInt classical_number(ClassicalKind kind, const std::vector<int>& params) {
  auto need = [&](size_t count, const char* sig) {
    if (params.size() != count)
      throw std::invalid_argument(std::string("expected parameters ") + sig);
  };
  switch (kind) {
    case ClassicalKind::bell: need(1, "n"); return bell_number(params[0]);
    case ClassicalKind::stirling2:
      need(2, "n,k");
      return stirling2(params[0], params[1]);
    case ClassicalKind::catalan: need(1, "n"); return catalan_number(params[0]);
    case ClassicalKind::half_central_binomial:
      need(1, "n");
      return half_central_binomial(params[0]);
    case ClassicalKind::r_bell:
      need(2, "n,r");
      return r_bell(params[0], params[1]);
    case ClassicalKind::r_stirling:
      need(3, "n,k,r");
      return r_stirling(params[0], params[1], params[2]);
  }
  throw std::invalid_argument("unknown classical kind");
}

// ---------------------------------------------------------------------------
// Non-crossing partitions, Stirling identity, topological partitions
// ---------------------------------------------------------------------------

namespace {

// Blocks A and B cross iff their merged points alternate ABAB or BABA.
bool blocks_cross(Mask a, Mask b, int n) {
  int transitions = 0;
  int last = 0;  // 1 = a, 2 = b
  for (int p = 0; p < n; ++p) {
    int cur = has_point(a, p) ? 1 : has_point(b, p) ? 2 : 0;
    if (cur == 0) continue;
    if (last != 0 && cur != last) ++transitions;
    last = cur;
  }
  return transitions >= 3;
}

}  // namespace

BigInt count_noncrossing_partitions(int n) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (n > 12) throw CountError("non-crossing partition cap is n <= 12");
  BigInt count = 0;
  for_each_set_partition(n, [&](const std::vector<Mask>& blocks) {
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j)
        if (blocks_cross(blocks[i], blocks[j], n)) return;
    ++count;
  });
  return count;
}

StirlingIdentityReport verify_stirling_identity(int n, const Config& cfg) {
  StirlingIdentityReport report;
  report.n = n;
  report.lhs = count_structures(StructureKind::preorder, n, cfg.enum_cap);
  report.rhs = 0;
  for (int k = 0; k <= n; ++k) {
    BigInt posets = count_structures(StructureKind::poset, k, cfg.enum_cap);
    report.rhs += stirling2(n, k) * posets;
  }
  report.equal = report.lhs == report.rhs;
  return report;
}

bool subspace_connected(const Preorder& q, Mask subset) {
  if (subset == 0) return true;
  // Finite spaces are connected iff the comparability graph of the
  // specialization preorder is connected; traces restrict that graph.
  int start = std::countr_zero(subset);
  Mask seen = Mask{1} << start;
  Mask frontier = seen;
  while (frontier) {
    Mask next = 0;
    for (Mask rest = frontier; rest; rest &= rest - 1) {
      int y = std::countr_zero(rest);
      next |= q.below[y] & subset;
      for (Mask r2 = subset & ~seen; r2; r2 &= r2 - 1) {
        int z = std::countr_zero(r2);
        if (has_point(q.below[z], y)) next |= Mask{1} << z;
      }
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == subset;
}

namespace {

bool block_ok(const Preorder& pre, const Topology& t, Mask block,
              BlockCondition cond) {
  switch (cond) {
    case BlockCondition::open: return t.is_open(block);
    case BlockCondition::closed: return t.is_open(full_mask(t.n) & ~block);
    case BlockCondition::connected: return subspace_connected(pre, block);
  }
  return false;
}

}  // namespace

std::vector<PartitionCountRow> topological_partition_breakdown(
    int n, BlockCondition condition, std::optional<int> k) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (n > 5) throw CountError("topological partition cap is n <= 5");
  std::vector<PartitionCountRow> rows;
  for_each_set_partition(n, [&](const std::vector<Mask>& blocks) {
    if (k && (int)blocks.size() != *k) return;
    PartitionCountRow row;
    row.blocks = blocks;
    row.topologies = 0;
    for_each_preorder(n, [&](const Preorder& pre) {
      Topology t = alpha_prime(pre);
      for (Mask b : blocks)
        if (!block_ok(pre, t, b, condition)) return;
      ++row.topologies;
    });
    rows.push_back(std::move(row));
  });
  return rows;
}

BigInt count_topological_partitions(int n, BlockCondition condition,
                                    std::optional<int> k) {
  BigInt total = 0;
  for (const auto& row : topological_partition_breakdown(n, condition, k))
    total += row.topologies;
  return total;
}

std::optional<BlockCondition> block_condition_from_string(
    const std::string& s) {
  if (s == "connected") return BlockCondition::connected;
  if (s == "open") return BlockCondition::open;
  if (s == "closed") return BlockCondition::closed;
  return std::nullopt;
}

std::string to_string(BlockCondition c) {
  switch (c) {
    case BlockCondition::connected: return "connected";
    case BlockCondition::open: return "open";
    case BlockCondition::closed: return "closed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Result cache
// ---------------------------------------------------------------------------

namespace {

std::string cache_key(const std::string& hash, int r,
                      ConstantTable::Mode mode, int n) {
  return hash + "/" + std::to_string(r) + "/" +
         (mode == ConstantTable::Mode::hard_wired ? "hard-wired" : "free") +
         "/" + std::to_string(n);
}

}  // namespace

ResultCache::ResultCache(std::string path) : path_(std::move(path)) {}

std::string ResultCache::formula_hash(const FormulaPtr& f) {
  // FNV-1a over the canonical rendering; stable across runs and platforms.
  std::string text = render_formula(f);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void ResultCache::ensure_loaded() {
  if (loaded_) return;
  loaded_ = true;
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    if (!j.contains("key") || !j.contains("count")) continue;
    entries_[j["key"].get<std::string>()] =
        BigInt(j["count"].get<std::string>());
  }
}

std::optional<BigInt> ResultCache::lookup(const std::string& formula_hash,
                                          int r, ConstantTable::Mode mode,
                                          int n) {
  ensure_loaded();
  auto it = entries_.find(cache_key(formula_hash, r, mode, n));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResultCache::store(const std::string& formula_hash, int r,
                        ConstantTable::Mode mode, int n, const BigInt& value) {
  ensure_loaded();
  std::string key = cache_key(formula_hash, r, mode, n);
  if (entries_.count(key)) return;
  entries_[key] = value;
  std::ofstream out(path_, std::ios::app);
  nlohmann::ordered_json j;
  j["key"] = key;
  j["count"] = value.get_str();
  out << j.dump() << "\n";
}

}  // namespace topo
