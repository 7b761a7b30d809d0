#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace topo {

// Points are 0-indexed internally; point i is named i+1 in all external text
// forms. A set of points is a bit-mask over points 0..n-1.
using Mask = std::uint32_t;

// Hard limit on ground-set sizes for structures held in memory. Enumeration
// and evaluation caps (much lower) live in Config.
inline constexpr int kMaxGroundSize = 16;

inline Mask full_mask(int n) { return n == 0 ? 0u : (Mask{1} << n) - 1u; }
inline bool has_point(Mask m, int p) { return (m >> p) & 1u; }
inline int popcount(Mask m) { return std::popcount(m); }

struct PointSet {
  Mask mask = 0;

  PointSet() = default;
  explicit PointSet(Mask m) : mask(m) {}

  bool contains(int p) const { return has_point(mask, p); }
  bool subset_of(PointSet other) const { return (mask & ~other.mask) == 0; }
  int size() const { return popcount(mask); }

  bool operator==(const PointSet&) const = default;
  auto operator<=>(const PointSet&) const = default;

  // 1-based point list, ascending.
  std::vector<int> points() const {
    std::vector<int> out;
    for (Mask m = mask; m; m &= m - 1)
      out.push_back(std::countr_zero(m) + 1);
    return out;
  }

  static PointSet from_points(const std::vector<int>& pts_1based) {
    Mask m = 0;
    for (int p : pts_1based) m |= Mask{1} << (p - 1);
    return PointSet(m);
  }
};

// "{1,3}" style rendering, 1-based.
std::string mask_to_string(Mask m);

}  // namespace topo
