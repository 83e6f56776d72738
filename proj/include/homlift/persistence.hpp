#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/diagram.hpp"
#include "homlift/point_cloud.hpp"

namespace homlift {

inline constexpr std::int64_t kDefaultSimplexCap = 20000000;

/// Monotone simplex stream. Simplices are stored per dimension, each
/// dimension sorted by (filtration value, lexicographic vertices); this is
/// the global (value, dim, lex) order restricted to a dimension, since faces
/// never appear after cofaces. Vertex ids must be < 2^21 and dimensions <= 3
/// (desk scale: Rips/weighted-Rips in low homology degrees).
struct Filtration {
  int max_dim = 0;
  std::vector<std::vector<std::int32_t>> verts;  // verts[d]: (d+1) ids per simplex
  std::vector<std::vector<double>> values;       // values[d]: one per simplex

  std::int64_t count(int d) const {
    if (d < 0 || d > max_dim) return 0;
    return static_cast<std::int64_t>(values[d].size());
  }
  std::int64_t total_count() const {
    std::int64_t t = 0;
    for (int d = 0; d <= max_dim; ++d) t += count(d);
    return t;
  }

  std::vector<std::int32_t> simplex(int d, std::int64_t i) const {
    return {verts[d].begin() + i * (d + 1), verts[d].begin() + (i + 1) * (d + 1)};
  }

  /// Builds a filtration from explicit (vertices, value) pairs; sorts vertex
  /// lists and simplices. Intended for tests, debugging and file I/O.
  static Filtration from_simplices(
      std::vector<std::pair<std::vector<int>, double>> simplices);
};

namespace detail {

inline constexpr int kVertexBits = 21;
inline constexpr std::int64_t kMaxVertexId = 1 << kVertexBits;

/// Packs up to three sorted vertex ids into one key (dimensions 0..2).
inline std::uint64_t pack_verts(const std::int32_t* v, int dim) {
  std::uint64_t key = 0;
  for (int i = 0; i <= dim; ++i)
    key = (key << kVertexBits) | static_cast<std::uint64_t>(v[i]);
  return key;
}

/// Sorts each dimension of a raw filtration by (value, lex vertices).
inline void sort_dimension(std::vector<std::int32_t>& verts,
                           std::vector<double>& values, int d) {
  const int width = d + 1;
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    const std::int32_t* va = verts.data() + a * width;
    const std::int32_t* vb = verts.data() + b * width;
    for (int i = 0; i < width; ++i)
      if (va[i] != vb[i]) return va[i] < vb[i];
    return false;
  });
  std::vector<std::int32_t> new_verts(verts.size());
  std::vector<double> new_values(n);
  for (std::int64_t r = 0; r < n; ++r) {
    new_values[r] = values[order[r]];
    std::copy_n(verts.data() + order[r] * width, width,
                new_verts.data() + r * width);
  }
  verts.swap(new_verts);
  values.swap(new_values);
}

struct Candidate {
  std::int32_t v;
  double max_edge;  // max filtration value of edges to the current clique
};

/// Expands cliques of the edge graph into simplices of dimension >= 2.
/// `cands` holds the common neighbours (ids above the clique maximum) of the
/// current clique, each with the max edge value binding it to that clique.
template <typename Emit>
void expand_cliques(
    const std::vector<std::vector<Candidate>>& adjacency, int clique_dim,
    double clique_value, std::vector<std::int32_t>& clique,
    const std::vector<Candidate>& cands, int max_dim, Emit&& emit) {
  for (std::size_t idx = 0; idx < cands.size(); ++idx) {
    const Candidate& c = cands[idx];
    double value = std::max(clique_value, c.max_edge);
    clique.push_back(c.v);
    emit(clique_dim + 1, clique, value);
    if (clique_dim + 1 < max_dim) {
      // Intersect the remaining candidates with the neighbours of c.v.
      std::vector<Candidate> next;
      const std::vector<Candidate>& nbr = adjacency[c.v];
      std::size_t i = idx + 1, j = 0;
      while (i < cands.size() && j < nbr.size()) {
        if (cands[i].v < nbr[j].v) {
          ++i;
        } else if (nbr[j].v < cands[i].v) {
          ++j;
        } else {
          next.push_back({cands[i].v,
                          std::max(cands[i].max_edge, nbr[j].max_edge)});
          ++i;
          ++j;
        }
      }
      expand_cliques(adjacency, clique_dim + 1, value, clique, next, max_dim,
                     emit);
    }
    clique.pop_back();
  }
}

/// Shared machinery of the Rips and weighted-Rips constructions: vertices
/// carry the given values, edges the given values, higher simplices the max
/// over their edges; everything above max_value is dropped.
template <typename VertexValue, typename EdgeValue>
Filtration clique_filtration(std::size_t n_points, VertexValue&& vertex_value,
                             EdgeValue&& edge_value, int max_dim,
                             double max_value, std::int64_t simplex_cap) {
  if (max_dim < 0 || max_dim > 3)
    throw validation_error("filtration: max_dim must be in [0, 3]");
  if (static_cast<std::int64_t>(n_points) >= kMaxVertexId)
    throw capacity_error("filtration: too many vertices (>= 2^21)");

  Filtration f;
  f.max_dim = max_dim;
  f.verts.assign(max_dim + 1, {});
  f.values.assign(max_dim + 1, {});
  std::int64_t emitted = 0;
  auto emit = [&](int d, const std::vector<std::int32_t>& vs, double value) {
    if (++emitted > simplex_cap)
      throw capacity_error(
          "filtration: simplex cap exceeded (" + std::to_string(simplex_cap) +
          "); lower max_value or max_dim, or raise the cap explicitly");
    f.verts[d].insert(f.verts[d].end(), vs.begin(), vs.end());
    f.values[d].push_back(value);
  };

  std::vector<std::int32_t> active;
  std::vector<std::int32_t> single(1);
  for (std::size_t i = 0; i < n_points; ++i) {
    double fv = vertex_value(i);
    if (fv <= max_value) {
      active.push_back(static_cast<std::int32_t>(i));
      single[0] = static_cast<std::int32_t>(i);
      emit(0, single, fv);
    }
  }
  if (max_dim == 0) return f;

  // Edge graph over active vertices, kept as full sorted adjacency.
  std::vector<std::vector<Candidate>> adjacency(n_points);
  std::vector<std::int32_t> pair(2);
  for (std::size_t ai = 0; ai < active.size(); ++ai) {
    for (std::size_t aj = ai + 1; aj < active.size(); ++aj) {
      int i = active[ai], j = active[aj];
      double ev = edge_value(i, j);
      if (ev <= max_value) {
        pair[0] = i;
        pair[1] = j;
        emit(1, pair, ev);
        adjacency[i].push_back({j, ev});
        adjacency[j].push_back({i, ev});
      }
    }
  }
  if (max_dim == 1) {
    for (int d = 0; d <= max_dim; ++d) sort_dimension(f.verts[d], f.values[d], d);
    return f;
  }
  for (auto& nbr : adjacency)
    std::sort(nbr.begin(), nbr.end(),
              [](const Candidate& a, const Candidate& b) { return a.v < b.v; });

  std::vector<std::int32_t> clique(2);
  for (int i : active) {
    for (const Candidate& e : adjacency[i]) {
      int j = e.v;
      if (j <= i) continue;
      // Common neighbours above j, with the max of the two binding edges.
      std::vector<Candidate> cands;
      const auto& na = adjacency[i];
      const auto& nb = adjacency[j];
      std::size_t x = 0, y = 0;
      while (x < na.size() && y < nb.size()) {
        if (na[x].v < nb[y].v) {
          ++x;
        } else if (nb[y].v < na[x].v) {
          ++y;
        } else {
          if (na[x].v > j)
            cands.push_back({na[x].v, std::max(na[x].max_edge, nb[y].max_edge)});
          ++x;
          ++y;
        }
      }
      clique[0] = i;
      clique[1] = j;
      expand_cliques(adjacency, 1, e.max_edge, clique, cands, max_dim, emit);
    }
  }
  for (int d = 0; d <= max_dim; ++d) sort_dimension(f.verts[d], f.values[d], d);
  return f;
}

}  // namespace detail

inline Filtration Filtration::from_simplices(
    std::vector<std::pair<std::vector<int>, double>> simplices) {
  Filtration f;
  int max_dim = 0;
  for (auto& [vs, value] : simplices) {
    if (vs.empty()) throw validation_error("filtration: empty simplex");
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
      throw validation_error("filtration: repeated vertex in simplex");
    if (vs.front() < 0 || vs.back() >= detail::kMaxVertexId)
      throw validation_error("filtration: vertex id out of range");
    max_dim = std::max(max_dim, static_cast<int>(vs.size()) - 1);
  }
  if (max_dim > 3)
    throw validation_error("filtration: max_dim must be in [0, 3]");
  f.max_dim = max_dim;
  f.verts.assign(max_dim + 1, {});
  f.values.assign(max_dim + 1, {});
  for (const auto& [vs, value] : simplices) {
    int d = static_cast<int>(vs.size()) - 1;
    for (int v : vs) f.verts[d].push_back(v);
    f.values[d].push_back(value);
  }
  for (int d = 0; d <= max_dim; ++d)
    detail::sort_dimension(f.verts[d], f.values[d], d);
  return f;
}

/// Vietoris-Rips filtration: vertices at value 0, edges at the pairwise
/// distance, higher simplices at the max over their edges, truncated at
/// max_value. Guards against combinatorial blow-up with simplex_cap.
inline Filtration rips_filtration(const PointCloud& points, int max_dim,
                                  double max_value,
                                  std::int64_t simplex_cap = kDefaultSimplexCap) {
  return detail::clique_filtration(
      points.size(), [](std::size_t) { return 0.0; },
      [&points](int i, int j) {
        return (points.points[i] - points.points[j]).norm();
      },
      max_dim, max_value, simplex_cap);
}

/// Weighted-Rips approximation of the DTM-filtration: vertex x enters at
/// f(x), the edge xy at max(f(x), f(y), (f(x) + f(y) + |x-y|) / 2) and higher
/// simplices at the max over their edges. With f == 0 the edge value is
/// |x-y| / 2, the radius at which the two growing balls meet.
inline Filtration dtm_filtration(const PointCloud& points,
                                 const std::vector<double>& f, int max_dim,
                                 double max_value,
                                 std::int64_t simplex_cap = kDefaultSimplexCap) {
  if (f.size() != points.size())
    throw validation_error("dtm_filtration: value count mismatch");
  for (double v : f)
    if (!(v >= 0.0))
      throw validation_error("dtm_filtration: vertex values must be >= 0");
  return detail::clique_filtration(
      points.size(), [&f](std::size_t i) { return f[i]; },
      [&points, &f](int i, int j) {
        double d = (points.points[i] - points.points[j]).norm();
        return std::max({f[i], f[j], 0.5 * (f[i] + f[j] + d)});
      },
      max_dim, max_value, simplex_cap);
}

// ---------------------------------------------------------------------------
// Z2 persistence by boundary-matrix reduction
// ---------------------------------------------------------------------------

/// Raw pairing of the reduction: per dimension d, (birth, death) pairs of
/// local simplex indices (birth in dim d, death in dim d+1) plus the indices
/// of unpaired (essential) simplices. Zero-length pairs are present here and
/// only dropped when assembling the public diagram.
struct PersistencePairs {
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> pairs;
  std::vector<std::vector<std::int64_t>> unpaired;
};

namespace detail {

inline std::unordered_map<std::uint64_t, std::int64_t> face_index(
    const Filtration& f, int d) {
  std::unordered_map<std::uint64_t, std::int64_t> map;
  const std::int64_t n = f.count(d);
  map.reserve(static_cast<std::size_t>(n) * 2);
  for (std::int64_t i = 0; i < n; ++i)
    map.emplace(pack_verts(f.verts[d].data() + i * (d + 1), d), i);
  return map;
}

/// Local indices of the (d-1)-faces of simplex i of dimension d, ascending.
inline void boundary(const Filtration& f, int d, std::int64_t i,
                     const std::unordered_map<std::uint64_t, std::int64_t>& faces,
                     std::vector<std::int64_t>& out) {
  out.clear();
  const std::int32_t* v = f.verts[d].data() + i * (d + 1);
  std::int32_t face[4];
  for (int drop = 0; drop <= d; ++drop) {
    int k = 0;
    for (int q = 0; q <= d; ++q)
      if (q != drop) face[k++] = v[q];
    auto it = faces.find(pack_verts(face, d - 1));
    if (it == faces.end())
      throw validation_error("filtration: missing face (not a complex)");
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace detail

/// Checks that every face of every simplex is present with a value not
/// larger than the coface's (monotone filtration).
inline void validate_filtration(const Filtration& f) {
  std::vector<std::int64_t> faces;
  for (int d = 1; d <= f.max_dim; ++d) {
    auto map = detail::face_index(f, d - 1);
    for (std::int64_t i = 0; i < f.count(d); ++i) {
      detail::boundary(f, d, i, map, faces);
      for (std::int64_t face : faces)
        if (f.values[d - 1][face] > f.values[d][i])
          throw validation_error("filtration: face enters after coface");
    }
  }
}

/// Standard Z2 boundary-matrix reduction with the clearing optimization,
/// processing dimensions top-down. Dimension 0 uses the equivalent
/// elder-rule union-find pairing. Input must be a valid monotone filtration.
inline PersistencePairs reduce_filtration(const Filtration& f) {
  PersistencePairs out;
  out.pairs.assign(f.max_dim + 1, {});
  out.unpaired.assign(f.max_dim + 1, {});
  // birth_paired[d][i]: (d)-simplex i is the birth of a pair found in the
  // (d+1)-pass; its own column is skipped (clearing).
  std::vector<std::vector<char>> birth_paired(f.max_dim + 1);
  for (int d = 0; d <= f.max_dim; ++d)
    birth_paired[d].assign(static_cast<std::size_t>(f.count(d)), 0);

  std::vector<std::int64_t> col, tmp, chain;
  for (int d = f.max_dim; d >= 2; --d) {
    auto faces = detail::face_index(f, d - 1);
    std::vector<std::int64_t> pivot_owner(
        static_cast<std::size_t>(f.count(d - 1)), -1);
    std::vector<std::vector<std::int64_t>> storage;
    for (std::int64_t j = 0; j < f.count(d); ++j) {
      if (birth_paired[d][static_cast<std::size_t>(j)]) continue;  // cleared
      detail::boundary(f, d, j, faces, col);
      while (!col.empty()) {
        std::int64_t low = col.back();
        std::int64_t owner = pivot_owner[static_cast<std::size_t>(low)];
        if (owner < 0) break;
        // col ^= storage[owner] (symmetric difference of sorted lists)
        const auto& other = storage[static_cast<std::size_t>(owner)];
        tmp.clear();
        std::size_t x = 0, y = 0;
        while (x < col.size() && y < other.size()) {
          if (col[x] < other[y]) tmp.push_back(col[x++]);
          else if (other[y] < col[x]) tmp.push_back(other[y++]);
          else { ++x; ++y; }
        }
        while (x < col.size()) tmp.push_back(col[x++]);
        while (y < other.size()) tmp.push_back(other[y++]);
        col.swap(tmp);
      }
      if (col.empty()) {
        // Zero column and not cleared: essential class of dimension d
        // (the d+1 pass already ran and did not claim it).
        out.unpaired[d].push_back(j);
      } else {
        std::int64_t low = col.back();
        pivot_owner[static_cast<std::size_t>(low)] =
            static_cast<std::int64_t>(storage.size());
        storage.push_back(col);
        out.pairs[d - 1].push_back({low, j});
        birth_paired[d - 1][static_cast<std::size_t>(low)] = 1;
      }
    }
  }

  if (f.max_dim >= 1) {
    // Dimension-0 pairing by the elder rule: when an edge merges two
    // components, the component whose oldest vertex is younger dies.
    const std::int64_t nv = f.count(0);
    std::vector<std::int64_t> root(static_cast<std::size_t>(nv));
    std::iota(root.begin(), root.end(), 0);
    std::vector<std::int64_t> oldest = root;
    std::function<std::int64_t(std::int64_t)> find =
        [&](std::int64_t x) {
          while (root[static_cast<std::size_t>(x)] != x) {
            root[static_cast<std::size_t>(x)] =
                root[static_cast<std::size_t>(root[static_cast<std::size_t>(x)])];
            x = root[static_cast<std::size_t>(x)];
          }
          return x;
        };
    // Map vertex ids to local dim-0 indices.
    std::unordered_map<std::int32_t, std::int64_t> vid;
    vid.reserve(static_cast<std::size_t>(nv) * 2);
    for (std::int64_t i = 0; i < nv; ++i) vid.emplace(f.verts[0][i], i);
    for (std::int64_t j = 0; j < f.count(1); ++j) {
      std::int64_t a = vid.at(f.verts[1][2 * j]);
      std::int64_t b = vid.at(f.verts[1][2 * j + 1]);
      std::int64_t ra = find(a), rb = find(b);
      if (ra == rb) {
        if (!birth_paired[1][static_cast<std::size_t>(j)])
          out.unpaired[1].push_back(j);
        continue;
      }
      std::int64_t oa = oldest[static_cast<std::size_t>(ra)];
      std::int64_t ob = oldest[static_cast<std::size_t>(rb)];
      std::int64_t dying = std::max(oa, ob);
      out.pairs[0].push_back({dying, j});
      birth_paired[0][static_cast<std::size_t>(dying)] = 1;
      root[static_cast<std::size_t>(ra)] = rb;
      oldest[static_cast<std::size_t>(rb)] = std::min(oa, ob);
    }
    std::sort(out.unpaired[1].begin(), out.unpaired[1].end());
  }
  for (std::int64_t i = 0; i < f.count(0); ++i)
    if (!birth_paired[0][static_cast<std::size_t>(i)])
      out.unpaired[0].push_back(i);
  return out;
}

/// Persistence diagram of a monotone filtration. Zero-length pairs are
/// dropped from the output (they are retained in PersistencePairs).
inline PersistenceDiagram persistence_diagram(const Filtration& f) {
  validate_filtration(f);
  PersistencePairs pairs = reduce_filtration(f);
  PersistenceDiagram diagram;
  for (int d = 0; d <= f.max_dim; ++d) {
    for (auto [birth, death] : pairs.pairs[d]) {
      double b = f.values[d][birth];
      double dv = f.values[d + 1][death];
      if (dv > b) diagram.bars.push_back({d, b, dv});
    }
    for (std::int64_t i : pairs.unpaired[d])
      diagram.bars.push_back({d, f.values[d][i], kInfinity});
  }
  std::sort(diagram.bars.begin(), diagram.bars.end(),
            [](const Bar& a, const Bar& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.birth != b.birth) return a.birth < b.birth;
              return a.death < b.death;
            });
  return diagram;
}

}  // namespace homlift
