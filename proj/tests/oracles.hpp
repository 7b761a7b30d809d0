#pragma once

// Test-only oracles, independent of the enumeration and synthesis paths they
// cross-check.

#include <cstdint>
#include <functional>
#include <vector>

#include "topo/structures.hpp"

namespace topo::oracle {

// Every reflexive relation on [n] (2^(n^2-n) candidates) filtered by an
// O(n^3) transitivity test; n <= 4 keeps this instant.
inline void for_each_preorder_brute(
    int n, const std::function<void(const Preorder&)>& fn,
    bool require_antisymmetry = false) {
  const int off_diagonal = n * n - n;
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << off_diagonal);
       ++bits) {
    // Decode: rel[x][y] ("x <= y") for x != y from the bit string.
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
    int b = 0;
    for (int x = 0; x < n; ++x) {
      rel[x][x] = true;
      for (int y = 0; y < n; ++y) {
        if (x == y) continue;
        rel[x][y] = (bits >> b++) & 1;
      }
    }
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n && ok; ++y) {
        if (rel[x][y] && rel[y][x] && x != y && require_antisymmetry)
          ok = false;
        if (!rel[x][y]) continue;
        for (int z = 0; z < n; ++z)
          if (rel[y][z] && !rel[x][z]) {
            ok = false;
            break;
          }
      }
    if (!ok) continue;
    Preorder q;
    q.n = n;
    q.below.assign(n, 0);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (rel[x][y]) q.below[y] |= Mask{1} << x;
    fn(q);
  }
}

// Deterministic generator for randomized property tests.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

}  // namespace topo::oracle
