#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/lift.hpp"
#include "homlift/measure.hpp"

namespace homlift {

/// Sparse optimal coupling between two weighted point sets.
/// Row sums equal the source weights and column sums the target weights.
struct TransportPlan {
  struct Entry {
    int source;
    int target;
    double mass;
  };
  std::vector<Entry> entries;
  double total_cost = 0.0;  // sum of mass * |x - y|^p over entries
};

struct WassersteinResult {
  double value = 0.0;
  TransportPlan plan;
};

namespace detail {

/// Exact solver for the balanced transportation problem
///   min sum_ij c_ij x_ij   s.t.  sum_j x_ij = a_i,  sum_i x_ij = b_j, x >= 0
/// by the primal network simplex on the bipartite graph. The basis is a
/// spanning tree over m + n nodes; pricing scans arcs in blocks and pivots on
/// the most negative reduced cost found, with reduced costs below
/// 1e-12 * (1 + max cost) treated as zero. If the pivot budget is exhausted
/// (degenerate cycling), the solver restarts pricing under Bland's rule,
/// which terminates unconditionally.
class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<double> supply, std::vector<double> demand,
                        std::function<double(int, int)> cost)
      : a_(std::move(supply)), b_(std::move(demand)), cost_(std::move(cost)) {
    m_ = static_cast<int>(a_.size());
    n_ = static_cast<int>(b_.size());
    nodes_ = m_ + n_;
  }

  void solve() {
    materialize_costs();
    northwest_corner();
    rebuild_tree();
    const std::int64_t soft_cap = 64LL * nodes_ + 4096;
    const std::int64_t hard_cap = 4000000LL + 512LL * nodes_;
    std::int64_t pivots = 0;
    bool bland = false;
    while (true) {
      int enter = bland ? price_bland() : price_block();
      if (enter < 0) break;
      pivot(enter);
      rebuild_tree();
      if (++pivots == soft_cap) bland = true;
      if (pivots > hard_cap)
        throw capacity_error("wasserstein: pivot budget exhausted");
    }
  }

  double objective() const {
    double total = 0.0;
    for (int k = 0; k < nodes_ - 1; ++k)
      total += std::max(0.0, flow_[k]) * cost_at(src_[k], snk_[k]);
    return total;
  }

  TransportPlan plan() const {
    TransportPlan out;
    out.total_cost = objective();
    for (int k = 0; k < nodes_ - 1; ++k)
      if (flow_[k] > 0.0)
        out.entries.push_back({src_[k], snk_[k], flow_[k]});
    return out;
  }

 private:
  double cost_at(int i, int j) const {
    return dense_.empty() ? cost_(i, j) : dense_[static_cast<std::size_t>(i) * n_ + j];
  }

  void materialize_costs() {
    const std::size_t total = static_cast<std::size_t>(m_) * n_;
    dense_.resize(total);
    cmax_ = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        double c = cost_(i, j);
        dense_[static_cast<std::size_t>(i) * n_ + j] = c;
        cmax_ = std::max(cmax_, c);
      }
    eps_ = 1e-12 * (1.0 + cmax_);
  }

  // Initial basic feasible solution with exactly m + n - 1 arcs, degenerate
  // zero-flow arcs included. The final arc absorbs the floating-point
  // residual between total supply and demand.
  void northwest_corner() {
    src_.clear();
    snk_.clear();
    flow_.clear();
    std::vector<double> ra = a_, rb = b_;
    int i = 0, j = 0;
    const int arcs = nodes_ - 1;
    for (int k = 0; k < arcs; ++k) {
      double f = (k == arcs - 1) ? std::max(ra[i], rb[j])
                                 : std::min(ra[i], rb[j]);
      src_.push_back(i);
      snk_.push_back(j);
      flow_.push_back(f);
      ra[i] -= f;
      rb[j] -= f;
      if (i == m_ - 1)
        ++j;
      else if (j == n_ - 1)
        ++i;
      else if (ra[i] <= rb[j])
        ++i;
      else
        ++j;
    }
  }

  // Parent pointers, depths and duals from a BFS over the basic tree.
  void rebuild_tree() {
    adj_.assign(nodes_, {});
    for (int k = 0; k < nodes_ - 1; ++k) {
      adj_[src_[k]].push_back(k);
      adj_[m_ + snk_[k]].push_back(k);
    }
    parent_arc_.assign(nodes_, -1);
    depth_.assign(nodes_, -1);
    dual_.assign(nodes_, 0.0);
    std::vector<int> queue{0};
    depth_[0] = 0;
    dual_[0] = 0.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int k : adj_[v]) {
        int other = (v < m_) ? m_ + snk_[k] : src_[k];
        if (depth_[other] >= 0) continue;
        depth_[other] = depth_[v] + 1;
        parent_arc_[other] = k;
        // On basic arcs u_src + v_snk = c.
        double c = cost_at(src_[k], snk_[k]);
        dual_[other] = c - dual_[v];
        queue.push_back(other);
      }
    }
    if (static_cast<int>(queue.size()) != nodes_)
      throw capacity_error("wasserstein: basis lost connectivity");
  }

  double reduced_cost(std::int64_t arc) const {
    int i = static_cast<int>(arc / n_);
    int j = static_cast<int>(arc % n_);
    return cost_at(i, j) - dual_[i] - dual_[m_ + j];
  }

  // Rolling block search; returns the most negative arc of the first block
  // containing one, or -1 at optimality.
  int price_block() {
    const std::int64_t total = static_cast<std::int64_t>(m_) * n_;
    const std::int64_t block =
        std::max<std::int64_t>(256, total / 64);
    std::int64_t scanned = 0;
    while (scanned < total) {
      double best_rc = -eps_;
      std::int64_t best = -1;
      std::int64_t stop = std::min(total, scanned + block);
      for (; scanned < stop; ++scanned) {
        std::int64_t arc = price_cursor_;
        if (++price_cursor_ == total) price_cursor_ = 0;
        double rc = reduced_cost(arc);
        if (rc < best_rc) {
          best_rc = rc;
          best = arc;
        }
      }
      if (best >= 0) return static_cast<int>(best);
    }
    return -1;
  }

  int price_bland() {
    const std::int64_t total = static_cast<std::int64_t>(m_) * n_;
    for (std::int64_t arc = 0; arc < total; ++arc)
      if (reduced_cost(arc) < -eps_) return static_cast<int>(arc);
    return -1;
  }

  void pivot(int enter_arc) {
    int ei = enter_arc / n_;
    int ej = enter_arc % n_;
    // Tree paths from both endpoints up to their lowest common ancestor.
    std::vector<int> up_src, up_snk;
    {
      int x = ei, y = m_ + ej;
      while (depth_[x] > depth_[y]) {
        up_src.push_back(parent_arc_[x]);
        x = other_end(parent_arc_[x], x);
      }
      while (depth_[y] > depth_[x]) {
        up_snk.push_back(parent_arc_[y]);
        y = other_end(parent_arc_[y], y);
      }
      while (x != y) {
        up_src.push_back(parent_arc_[x]);
        x = other_end(parent_arc_[x], x);
        up_snk.push_back(parent_arc_[y]);
        y = other_end(parent_arc_[y], y);
      }
    }
    // Cycle traversal: entering arc, then from the sink side up to the LCA,
    // then down to the source side. Signs alternate because the graph is
    // bipartite: the entering arc gains flow, its sink neighbour loses, ...
    std::vector<int> cycle;  // basic arc slots, traversal order
    cycle.reserve(up_src.size() + up_snk.size());
    for (int k : up_snk) cycle.push_back(k);
    for (std::size_t r = up_src.size(); r-- > 0;) cycle.push_back(up_src[r]);

    double theta = kInfinity;
    int leave = -1;
    int sign = -1;  // first tree arc after the entering arc loses flow
    for (std::size_t idx = 0; idx < cycle.size(); ++idx, sign = -sign) {
      if (sign < 0 && flow_[cycle[idx]] <= theta) {
        theta = flow_[cycle[idx]];
        leave = cycle[idx];
      }
    }
    if (leave < 0)
      throw capacity_error("wasserstein: malformed pivot cycle");
    sign = -1;
    for (std::size_t idx = 0; idx < cycle.size(); ++idx, sign = -sign)
      flow_[cycle[idx]] += sign * theta;
    // The leaving slot is recycled for the entering arc.
    src_[leave] = ei;
    snk_[leave] = ej;
    flow_[leave] = theta;
  }

  int other_end(int arc, int node) const {
    return (node < m_) ? m_ + snk_[arc] : src_[arc];
  }

  std::vector<double> a_, b_;
  std::function<double(int, int)> cost_;
  std::vector<double> dense_;
  int m_ = 0, n_ = 0, nodes_ = 0;
  double cmax_ = 0.0, eps_ = 1e-12;
  std::int64_t price_cursor_ = 0;

  // Basis: nodes-1 arcs (parallel arrays), plus tree scaffolding.
  std::vector<int> src_, snk_;
  std::vector<double> flow_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_arc_, depth_;
  std::vector<double> dual_;
};

inline void check_transport_capacity(std::size_t m, std::size_t n) {
  if (m + n > 20000)
    throw capacity_error(
        "wasserstein: combined support size exceeds the desk-scale limit of "
        "20000 points");
  if (m * n > 10000000)
    throw capacity_error(
        "wasserstein: dense cost matrix would exceed the desk-scale limit "
        "(m * n > 1e7); reduce one of the supports");
}

}  // namespace detail

/// Exact p-Wasserstein distance between empirical measures with cost
/// |x - y|^p, solved by the network simplex. Returns the distance
/// (optimal cost to the power 1/p) and an optimal plan.
inline WassersteinResult wasserstein(const EmpiricalMeasure& mu,
                                     const EmpiricalMeasure& nu, double p) {
  if (p < 1.0) throw validation_error("wasserstein: p must be >= 1");
  if (mu.points.ambient_dim != nu.points.ambient_dim)
    throw validation_error("wasserstein: ambient dimension mismatch");
  if (mu.size() == 0 || nu.size() == 0)
    throw validation_error("wasserstein: empty measure");
  detail::check_transport_capacity(mu.size(), nu.size());

  // Equalize total masses exactly so the flow problem is balanced.
  double sa = 0.0, sb = 0.0;
  for (double w : mu.weights) sa += w;
  for (double w : nu.weights) sb += w;
  if (std::abs(sa - 1.0) > 1e-9 || std::abs(sb - 1.0) > 1e-9)
    throw validation_error("wasserstein: weights must sum to 1");
  std::vector<double> demand = nu.weights;
  double fix = sa / sb;
  for (double& w : demand) w *= fix;

  auto cost = [&mu, &nu, p](int i, int j) {
    double d = (mu.points.points[i] - nu.points.points[j]).norm();
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
  };
  detail::TransportationSimplex solver(mu.weights, demand, cost);
  solver.solve();
  WassersteinResult out;
  out.plan = solver.plan();
  out.value = std::pow(out.plan.total_cost, 1.0 / p);
  return out;
}

/// p-Wasserstein between lifted measures under the gamma-norm, computed as
/// the ordinary Wasserstein distance between the gamma-embedded clouds
/// (W_{p,gamma}(a, b) = W_p(i_gamma a, i_gamma b)).
inline double gamma_wasserstein(const LiftedMeasure& a, const LiftedMeasure& b,
                                double p, double gamma) {
  EmpiricalMeasure ea{gamma_embed(a.cloud, gamma), a.weights};
  EmpiricalMeasure eb{gamma_embed(b.cloud, gamma), b.weights};
  return wasserstein(ea, eb, p).value;
}

}  // namespace homlift
