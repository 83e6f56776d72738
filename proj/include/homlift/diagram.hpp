#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "homlift/common.hpp"

namespace homlift {

/// One persistence bar: (dimension, birth, death), death possibly infinite.
struct Bar {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool infinite() const { return std::isinf(death); }
  double length() const { return death - birth; }
};

inline bool operator==(const Bar& a, const Bar& b) {
  return a.dim == b.dim && a.birth == b.birth && a.death == b.death;
}

struct PersistenceDiagram {
  std::vector<Bar> bars;

  std::vector<Bar> in_dim(int dim) const {
    std::vector<Bar> out;
    for (const Bar& b : bars)
      if (b.dim == dim) out.push_back(b);
    return out;
  }

  int max_dim() const {
    int d = -1;
    for (const Bar& b : bars) d = std::max(d, b.dim);
    return d;
  }
};

/// Bars of the given dimension with length >= min_length, sorted by length
/// descending (infinite bars first, ties broken by earlier birth).
inline std::vector<Bar> prominent_bars(const PersistenceDiagram& diagram,
                                       int dim, double min_length) {
  std::vector<Bar> out;
  for (const Bar& b : diagram.bars)
    if (b.dim == dim && (b.infinite() || b.length() >= min_length))
      out.push_back(b);
  std::sort(out.begin(), out.end(), [](const Bar& x, const Bar& y) {
    if (x.infinite() != y.infinite()) return x.infinite();
    if (x.infinite() && y.infinite()) return x.birth < y.birth;
    if (x.length() != y.length()) return x.length() > y.length();
    return x.birth < y.birth;
  });
  return out;
}

}  // namespace homlift
