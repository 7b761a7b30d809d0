#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topo/point_set.hpp"

namespace topo {

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite topology on [n] in canonical form: the open sets as a
// duplicate-free list of masks sorted ascending by integer value. Canonical
// form realizes extensionality: an open set is identified with its extension.
struct Topology {
  int n = 0;
  std::vector<Mask> opens;  // strictly ascending

  bool is_open(Mask m) const;
  bool operator==(const Topology&) const = default;
  auto operator<=>(const Topology&) const = default;
};

// A preorder (quasi-order) on [n]: below[y] = {x : x <= y}.
struct Preorder {
  int n = 0;
  std::vector<Mask> below;

  bool leq(int x, int y) const { return has_point(below[y], x); }
  bool operator==(const Preorder&) const = default;
  auto operator<=>(const Preorder&) const = default;
};

enum class StructureKind { preorder, poset, topology, t0_topology };

std::string to_string(StructureKind kind);
std::optional<StructureKind> structure_kind_from_string(const std::string& s);

// Diagnostic for a violated topology axiom: which axiom, and a witness pair
// of sets (witness_b unused for the membership axiom).
struct TopologyDiagnostic {
  std::string axiom;
  Mask witness_a = 0;
  Mask witness_b = 0;
  std::string message;
};

struct TopologyValidation {
  std::optional<Topology> topology;
  std::optional<TopologyDiagnostic> diagnostic;

  bool ok() const { return topology.has_value(); }
};

// Checks the three axioms (empty and full set present, closure under pairwise
// union, closure under pairwise intersection) and returns the canonical form.
// The input list may be unsorted and may contain duplicates.
TopologyValidation validate_topology(int n, std::vector<Mask> opens);

// Throwing convenience for inputs that are expected to be valid.
Topology make_topology(int n, std::vector<Mask> opens);

bool is_valid_preorder(const Preorder& q);

// The specialization preorder: below(y) = U_y, the intersection of all open
// sets containing y.
Preorder alpha(const Topology& t);

// The Alexandroff topology of a preorder: opens are exactly the down-sets of
// <=, i.e. all unions of the basic sets U_x = below(x).
Topology alpha_prime(const Preorder& q);

// U_x for a single point (0-based).
Mask minimal_open_set(const Topology& t, int x);

// The distinct sets {U_x : x in X}, sorted ascending. Every open is a union
// of these, and no proper subfamily has that property.
std::vector<Mask> minimal_basis(const Topology& t);

// True iff the image of t's ground set under `embedding` (0-based, injective)
// is open in t2 and t's opens are exactly the traces of t2's opens on it.
bool is_open_substructure(const Topology& t, const Topology& t2,
                          const std::vector<int>& embedding);

// Deterministic split of an enumeration into `parts` disjoint sub-streams;
// the union over part_index = 0..parts-1 is the full stream.
struct EnumPartition {
  int parts = 1;
  int part_index = 0;
};

// Emits every poset on [n] exactly once, in ascending lexicographic order of
// (below[0], below[1], ...). Partitioning strides over the below[0] choices.
void for_each_poset(int n, const std::function<void(const Preorder&)>& fn,
                    const EnumPartition& part = {});

// Emits every preorder on [n] exactly once: for each set partition of [n]
// (restricted-growth-string order) and each poset on its blocks, the preorder
// whose equivalence classes are the blocks. Partitioning strides over set
// partitions.
void for_each_preorder(int n, const std::function<void(const Preorder&)>& fn,
                       const EnumPartition& part = {});

struct StructureVisitor {
  std::function<void(const Preorder&)> on_preorder;   // preorder / poset kinds
  std::function<void(const Topology&)> on_topology;   // topology kinds
};

// Streams each labeled structure of the requested kind on [n] exactly once.
// Topologies are emitted as alpha_prime of enumerated preorders and
// t0-topologies as alpha_prime of posets. Throws StructureError if n exceeds
// `cap`.
void enumerate_structures(StructureKind kind, int n, const StructureVisitor& v,
                          int cap = 7, const EnumPartition& part = {});

// Stream length shortcut.
std::uint64_t count_structures(StructureKind kind, int n, int cap = 7);

// All set partitions of [n] as block masks, blocks ordered by least element;
// restricted-growth-string order. n = 0 yields one empty partition.
void for_each_set_partition(
    int n, const std::function<void(const std::vector<Mask>&)>& fn);

}  // namespace topo
