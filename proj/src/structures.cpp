#include "topo/structures.hpp"

#include <algorithm>
#include <sstream>

namespace topo {

std::string mask_to_string(Mask m) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (Mask rest = m; rest; rest &= rest - 1) {
    if (!first) os << ',';
    os << std::countr_zero(rest) + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::preorder: return "preorder";
    case StructureKind::poset: return "poset";
    case StructureKind::topology: return "topology";
    case StructureKind::t0_topology: return "t0-topology";
  }
  return "?";
}

std::optional<StructureKind> structure_kind_from_string(const std::string& s) {
  if (s == "preorder") return StructureKind::preorder;
  if (s == "poset") return StructureKind::poset;
  if (s == "topology") return StructureKind::topology;
  if (s == "t0-topology") return StructureKind::t0_topology;
  return std::nullopt;
}

bool Topology::is_open(Mask m) const {
  return std::binary_search(opens.begin(), opens.end(), m);
}

TopologyValidation validate_topology(int n, std::vector<Mask> opens) {
  if (n < 0 || n > kMaxGroundSize)
    throw StructureError("ground-set size out of range: " + std::to_string(n));
  const Mask full = full_mask(n);
  for (Mask m : opens) {
    if (m & ~full)
      throw StructureError("open set " + mask_to_string(m) +
                           " uses points beyond the ground set");
  }
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());

  auto fail = [](std::string axiom, Mask a, Mask b, std::string msg) {
    TopologyValidation v;
    v.diagnostic = TopologyDiagnostic{std::move(axiom), a, b, std::move(msg)};
    return v;
  };

  if (!std::binary_search(opens.begin(), opens.end(), Mask{0}))
    return fail("empty set missing", 0, 0, "the empty set is not a member");
  if (!std::binary_search(opens.begin(), opens.end(), full))
    return fail("full set missing", full, 0,
                "the full set " + mask_to_string(full) + " is not a member");
  for (size_t i = 0; i < opens.size(); ++i) {
    for (size_t j = i + 1; j < opens.size(); ++j) {
      Mask u = opens[i] | opens[j];
      if (!std::binary_search(opens.begin(), opens.end(), u))
        return fail("not closed under union", opens[i], opens[j],
                    mask_to_string(opens[i]) + " ∪ " + mask_to_string(opens[j]) +
                        " = " + mask_to_string(u) + " is not a member");
      Mask v = opens[i] & opens[j];
      if (!std::binary_search(opens.begin(), opens.end(), v))
        return fail("not closed under intersection", opens[i], opens[j],
                    mask_to_string(opens[i]) + " ∩ " + mask_to_string(opens[j]) +
                        " = " + mask_to_string(v) + " is not a member");
    }
  }
  TopologyValidation out;
  out.topology = Topology{n, std::move(opens)};
  return out;
}

Topology make_topology(int n, std::vector<Mask> opens) {
  auto v = validate_topology(n, std::move(opens));
  if (!v.ok())
    throw StructureError("invalid topology: " + v.diagnostic->axiom + " (" +
                         v.diagnostic->message + ")");
  return *std::move(v.topology);
}

bool is_valid_preorder(const Preorder& q) {
  if (q.n < 0 || q.n > kMaxGroundSize || (int)q.below.size() != q.n)
    return false;
  const Mask full = full_mask(q.n);
  for (int y = 0; y < q.n; ++y) {
    if (q.below[y] & ~full) return false;
    if (!has_point(q.below[y], y)) return false;  // reflexive
    for (Mask rest = q.below[y]; rest; rest &= rest - 1) {
      int x = std::countr_zero(rest);
      if (q.below[x] & ~q.below[y]) return false;  // transitive
    }
  }
  return true;
}

Preorder alpha(const Topology& t) {
  Preorder q;
  q.n = t.n;
  q.below.assign(t.n, 0);
  for (int y = 0; y < t.n; ++y) {
    Mask u = full_mask(t.n);
    for (Mask open : t.opens)
      if (has_point(open, y)) u &= open;
    q.below[y] = u;
  }
  return q;
}

Topology alpha_prime(const Preorder& q) {
  Topology t;
  t.n = q.n;
  const Mask full = full_mask(q.n);
  for (Mask m = 0;; ++m) {
    bool down = true;
    for (Mask rest = m; rest; rest &= rest - 1) {
      int y = std::countr_zero(rest);
      if (q.below[y] & ~m) {  // some x <= y outside m
        down = false;
        break;
      }
    }
    if (down) t.opens.push_back(m);
    if (m == full) break;
  }
  return t;
}

Mask minimal_open_set(const Topology& t, int x) {
  if (x < 0 || x >= t.n)
    throw StructureError("point out of range: " + std::to_string(x + 1));
  Mask u = full_mask(t.n);
  for (Mask open : t.opens)
    if (has_point(open, x)) u &= open;
  return u;
}

std::vector<Mask> minimal_basis(const Topology& t) {
  std::vector<Mask> basis;
  for (int x = 0; x < t.n; ++x) basis.push_back(minimal_open_set(t, x));
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  return basis;
}

bool is_open_substructure(const Topology& t, const Topology& t2,
                          const std::vector<int>& embedding) {
  if ((int)embedding.size() != t.n)
    throw StructureError("embedding arity does not match ground-set size");
  Mask image = 0;
  for (int i = 0; i < t.n; ++i) {
    int p = embedding[i];
    if (p < 0 || p >= t2.n)
      throw StructureError("embedding target out of range");
    if (has_point(image, p)) throw StructureError("embedding not injective");
    image |= Mask{1} << p;
  }
  if (!t2.is_open(image)) return false;
  // Traces of t2's opens on the image, pulled back through the embedding.
  std::vector<Mask> traces;
  for (Mask open : t2.opens) {
    Mask trace = open & image;
    Mask pulled = 0;
    for (int i = 0; i < t.n; ++i)
      if (has_point(trace, embedding[i])) pulled |= Mask{1} << i;
    traces.push_back(pulled);
  }
  std::sort(traces.begin(), traces.end());
  traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
  return traces == t.opens;
}

namespace {

// Row-backtracking enumeration of reflexive relations given as below-masks,
// with pairwise transitivity checks (and antisymmetry when `antisym`).
// Assigning rows in ascending point order and candidates in ascending mask
// order yields ascending lexicographic emission.
void poset_dfs(int n, int row, std::vector<Mask>& below, bool antisym,
               const std::function<void(const Preorder&)>& fn,
               const EnumPartition& part) {
  if (row == n) {
    Preorder q;
    q.n = n;
    q.below = below;
    fn(q);
    return;
  }
  const Mask full = full_mask(n);
  const Mask self = Mask{1} << row;
  int candidate_index = 0;
  for (Mask m = self; m <= full; m = ((m | self) + 1) | self) {
    if (m > full) break;
    if (row == 0 && part.parts > 1) {
      bool mine = (candidate_index % part.parts) == part.part_index;
      ++candidate_index;
      if (!mine) continue;
    }
    bool ok = true;
    for (int j = 0; j < row && ok; ++j) {
      const bool j_below_i = has_point(m, j);
      const bool i_below_j = has_point(below[j], row);
      if (j_below_i && (below[j] & ~m)) ok = false;          // transitivity
      else if (i_below_j && (m & ~below[j])) ok = false;     // transitivity
      else if (antisym && j_below_i && i_below_j) ok = false;
    }
    if (!ok) continue;
    below[row] = m;
    poset_dfs(n, row + 1, below, antisym, fn, part);
  }
  below[row] = 0;
}

void rgs_dfs(int n, int pos, int max_block, std::vector<Mask>& blocks,
             const std::function<void(const std::vector<Mask>&)>& fn) {
  if (pos == n) {
    fn(blocks);
    return;
  }
  for (int b = 0; b <= max_block + 1 && b <= pos; ++b) {
    if (b == (int)blocks.size()) blocks.push_back(0);
    blocks[b] |= Mask{1} << pos;
    rgs_dfs(n, pos + 1, std::max(max_block, b), blocks, fn);
    blocks[b] &= ~(Mask{1} << pos);
    if (blocks[b] == 0) blocks.pop_back();
  }
}

}  // namespace

void for_each_set_partition(
    int n, const std::function<void(const std::vector<Mask>&)>& fn) {
  std::vector<Mask> blocks;
  rgs_dfs(n, 0, -1, blocks, fn);
}

void for_each_poset(int n, const std::function<void(const Preorder&)>& fn,
                    const EnumPartition& part) {
  if (n == 0) {
    if (part.part_index == 0) fn(Preorder{0, {}});
    return;
  }
  std::vector<Mask> below(n, 0);
  poset_dfs(n, 0, below, /*antisym=*/true, fn, part);
}

void for_each_preorder(int n, const std::function<void(const Preorder&)>& fn,
                       const EnumPartition& part) {
  long partition_index = 0;
  for_each_set_partition(n, [&](const std::vector<Mask>& blocks) {
    bool mine = part.parts <= 1 ||
                (partition_index % part.parts) == part.part_index;
    ++partition_index;
    if (!mine) return;
    const int k = (int)blocks.size();
    for_each_poset(k, [&](const Preorder& block_order) {
      Preorder q;
      q.n = n;
      q.below.assign(n, 0);
      for (int y = 0; y < n; ++y) {
        int by = 0;
        while (!has_point(blocks[by], y)) ++by;
        Mask m = 0;
        for (Mask rest = block_order.below[by]; rest; rest &= rest - 1)
          m |= blocks[std::countr_zero(rest)];
        q.below[y] = m;
      }
      fn(q);
    });
  });
}

void enumerate_structures(StructureKind kind, int n, const StructureVisitor& v,
                          int cap, const EnumPartition& part) {
  if (n < 0) throw StructureError("negative ground-set size");
  if (n > cap)
    throw StructureError("ground-set size " + std::to_string(n) +
                         " exceeds enumeration cap " + std::to_string(cap));
  switch (kind) {
    case StructureKind::preorder:
      for_each_preorder(n, v.on_preorder, part);
      break;
    case StructureKind::poset:
      for_each_poset(n, v.on_preorder, part);
      break;
    case StructureKind::topology:
      for_each_preorder(
          n, [&](const Preorder& q) { v.on_topology(alpha_prime(q)); }, part);
      break;
    case StructureKind::t0_topology:
      for_each_poset(
          n, [&](const Preorder& q) { v.on_topology(alpha_prime(q)); }, part);
      break;
  }
}

std::uint64_t count_structures(StructureKind kind, int n, int cap) {
  std::uint64_t count = 0;
  StructureVisitor v;
  v.on_preorder = [&](const Preorder&) { ++count; };
  v.on_topology = [&](const Topology&) { ++count; };
  enumerate_structures(kind, n, v, cap);
  return count;
}

}  // namespace topo
