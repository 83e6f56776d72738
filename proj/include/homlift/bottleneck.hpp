#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/diagram.hpp"

namespace homlift {

namespace detail {

/// Hopcroft-Karp maximum bipartite matching on an adjacency list.
class BipartiteMatcher {
 public:
  BipartiteMatcher(int left, int right)
      : left_(left), right_(right), adj_(left) {}

  void add_edge(int l, int r) { adj_[l].push_back(r); }

  int max_matching() {
    match_l_.assign(left_, -1);
    match_r_.assign(right_, -1);
    int matched = 0;
    while (bfs()) {
      for (int l = 0; l < left_; ++l)
        if (match_l_[l] < 0 && dfs(l)) ++matched;
    }
    return matched;
  }

 private:
  bool bfs() {
    std::queue<int> q;
    dist_.assign(left_, -1);
    for (int l = 0; l < left_; ++l)
      if (match_l_[l] < 0) {
        dist_[l] = 0;
        q.push(l);
      }
    bool reachable = false;
    while (!q.empty()) {
      int l = q.front();
      q.pop();
      for (int r : adj_[l]) {
        int l2 = match_r_[r];
        if (l2 < 0) {
          reachable = true;
        } else if (dist_[l2] < 0) {
          dist_[l2] = dist_[l] + 1;
          q.push(l2);
        }
      }
    }
    return reachable;
  }

  bool dfs(int l) {
    for (int r : adj_[l]) {
      int l2 = match_r_[r];
      if (l2 < 0 || (dist_[l2] == dist_[l] + 1 && dfs(l2))) {
        match_l_[l] = r;
        match_r_[r] = l;
        return true;
      }
    }
    dist_[l] = -1;
    return false;
  }

  int left_, right_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_l_, match_r_, dist_;
};

struct FinitePoint {
  double birth, death;
  double diag() const { return 0.5 * (death - birth); }
};

inline double linf(const FinitePoint& a, const FinitePoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

/// Feasibility of a perfect matching at radius r in the standard reduction:
/// left = P + diagonal copies of Q, right = Q + diagonal copies of P;
/// diagonal copies always match each other.
inline bool matchable(const std::vector<FinitePoint>& p,
                      const std::vector<FinitePoint>& q, double r) {
  const int np = static_cast<int>(p.size());
  const int nq = static_cast<int>(q.size());
  const double slack = 1e-12 * (1.0 + std::abs(r));
  BipartiteMatcher matcher(np + nq, nq + np);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nq; ++j)
      if (linf(p[i], q[j]) <= r + slack) matcher.add_edge(i, j);
    if (p[i].diag() <= r + slack) matcher.add_edge(i, nq + i);
  }
  for (int j = 0; j < nq; ++j) {
    if (q[j].diag() <= r + slack) matcher.add_edge(np + j, j);
    for (int i = 0; i < np; ++i) matcher.add_edge(np + j, nq + i);
  }
  return matcher.max_matching() == np + nq;
}

/// Exact bottleneck between two finite multisets of off-diagonal points,
/// matching to the diagonal allowed: binary search over the candidate radii
/// (all pairwise L-inf distances and diagonal gaps).
inline double bottleneck_finite(const std::vector<FinitePoint>& p,
                                const std::vector<FinitePoint>& q) {
  if (p.empty() && q.empty()) return 0.0;
  std::vector<double> candidates{0.0};
  for (const auto& a : p) candidates.push_back(a.diag());
  for (const auto& b : q) candidates.push_back(b.diag());
  for (const auto& a : p)
    for (const auto& b : q) candidates.push_back(linf(a, b));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  // The largest candidate is always feasible: every point reaches the
  // diagonal within it.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (matchable(p, q, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace detail

/// Bottleneck distance between the bars of one homology dimension.
/// Infinite bars are matched to infinite bars by birth (sorted order); if
/// their counts differ the distance is +infinity, by convention, not an
/// error. Finite bars may be matched to the diagonal.
inline double bottleneck_distance(const PersistenceDiagram& d1,
                                  const PersistenceDiagram& d2, int dim) {
  std::vector<detail::FinitePoint> p, q;
  std::vector<double> inf1, inf2;
  for (const Bar& b : d1.bars)
    if (b.dim == dim) {
      if (b.infinite())
        inf1.push_back(b.birth);
      else
        p.push_back({b.birth, b.death});
    }
  for (const Bar& b : d2.bars)
    if (b.dim == dim) {
      if (b.infinite())
        inf2.push_back(b.birth);
      else
        q.push_back({b.birth, b.death});
    }
  if (inf1.size() != inf2.size()) return kInfinity;
  std::sort(inf1.begin(), inf1.end());
  std::sort(inf2.begin(), inf2.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < inf1.size(); ++i)
    worst = std::max(worst, std::abs(inf1[i] - inf2[i]));
  return std::max(worst, detail::bottleneck_finite(p, q));
}

/// Bottleneck distance between whole diagrams: the max over every homology
/// dimension present in either diagram.
inline double bottleneck_distance(const PersistenceDiagram& d1,
                                  const PersistenceDiagram& d2) {
  int top = std::max(d1.max_dim(), d2.max_dim());
  double worst = 0.0;
  for (int dim = 0; dim <= top; ++dim)
    worst = std::max(worst, bottleneck_distance(d1, d2, dim));
  return worst;
}

}  // namespace homlift
