#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "homlift/homlift.hpp"
#include "oracles.hpp"

using namespace homlift;

namespace {

PointCloud unit_square() {
  PointCloud cloud(2);
  Vector p(2);
  p << 0, 0;
  cloud.add(p);
  p << 1, 0;
  cloud.add(p);
  p << 0, 1;
  cloud.add(p);
  p << 1, 1;
  cloud.add(p);
  return cloud;
}

bool same_bars(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.bars.size() != b.bars.size()) return false;
  for (std::size_t i = 0; i < a.bars.size(); ++i) {
    if (!(a.bars[i] == b.bars[i])) return false;
  }
  return true;
}

/// Random monotone filtration on up to 8 vertices with quantized values:
/// random edges, triangles on closed edge triples, values propagated by max
/// plus a nonnegative bump, then snapped to a coarse grid to force ties.
Filtration random_filtration(SplitMix64& rng) {
  int n = 2 + static_cast<int>(rng.next_double() * 7);  // 2..8
  std::vector<std::pair<std::vector<int>, double>> simplices;
  std::vector<double> vertex_value(n);
  auto snap = [](double v) { return std::round(v * 4.0) / 4.0; };
  for (int i = 0; i < n; ++i) {
    vertex_value[i] = snap(rng.uniform(0, 0.5));
    simplices.push_back({{i}, vertex_value[i]});
  }
  std::map<std::pair<int, int>, double> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rng.next_double() < 0.6) {
        double v = snap(std::max(vertex_value[i], vertex_value[j]) +
                        rng.uniform(0, 1.0));
        edges[{i, j}] = v;
        simplices.push_back({{i, j}, v});
      }
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        auto ij = edges.find({i, j});
        auto ik = edges.find({i, k});
        auto jk = edges.find({j, k});
        if (ij == edges.end() || ik == edges.end() || jk == edges.end())
          continue;
        if (rng.next_double() < 0.7) {
          double base =
              std::max({ij->second, ik->second, jk->second});
          simplices.push_back({{i, j, k}, snap(base + rng.uniform(0, 0.5))});
        }
      }
  return Filtration::from_simplices(std::move(simplices));
}

}  // namespace

TEST_CASE("single point has one infinite H0 bar") {
  PointCloud cloud(2);
  cloud.add(Vector::Zero(2));
  Filtration f = rips_filtration(cloud, 2, 10.0);
  PersistenceDiagram d = persistence_diagram(f);
  REQUIRE(d.bars.size() == 1);
  REQUIRE(d.bars[0].dim == 0);
  REQUIRE(d.bars[0].birth == 0.0);
  REQUIRE(d.bars[0].infinite());
}

TEST_CASE("unit square Rips barcode") {
  Filtration f = rips_filtration(unit_square(), 2, 3.0);
  PersistenceDiagram d = persistence_diagram(f);
  std::vector<Bar> h0 = d.in_dim(0);
  REQUIRE(h0.size() == 4);
  int infinite = 0;
  for (const Bar& b : h0) {
    if (b.infinite()) {
      ++infinite;
    } else {
      REQUIRE(b.birth == 0.0);
      REQUIRE(b.death == Catch::Approx(1.0));
    }
  }
  REQUIRE(infinite == 1);
  std::vector<Bar> h1 = d.in_dim(1);
  REQUIRE(h1.size() == 1);
  REQUIRE(h1[0].birth == Catch::Approx(1.0));
  REQUIRE(h1[0].death == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("equilateral triangle has empty H1") {
  PointCloud cloud(2);
  Vector p(2);
  p << 0, 0;
  cloud.add(p);
  p << 1, 0;
  cloud.add(p);
  p << 0.5, std::sqrt(3.0) / 2.0;
  cloud.add(p);
  Filtration f = rips_filtration(cloud, 2, 3.0);
  PersistenceDiagram d = persistence_diagram(f);
  REQUIRE(d.in_dim(1).empty());
}

TEST_CASE("dtm filtration vertex and edge values") {
  PointCloud cloud(1);
  Vector v(1);
  v[0] = 0.0;
  cloud.add(v);
  v[0] = 1.0;
  cloud.add(v);

  SECTION("zero weights reduce to half distances") {
    Filtration f = dtm_filtration(cloud, {0.0, 0.0}, 1, 10.0);
    REQUIRE(f.count(1) == 1);
    REQUIRE(f.values[1][0] == Catch::Approx(0.5));
  }
  SECTION("weighted edge uses the power-distance formula") {
    Filtration f = dtm_filtration(cloud, {0.2, 0.4}, 1, 10.0);
    REQUIRE(f.values[0][0] == Catch::Approx(0.2));
    REQUIRE(f.values[0][1] == Catch::Approx(0.4));
    // max(0.4, (0.2 + 0.4 + 1)/2) = 0.8
    REQUIRE(f.values[1][0] == Catch::Approx(0.8));
  }
  SECTION("negative vertex values are rejected") {
    REQUIRE_THROWS_AS(dtm_filtration(cloud, {-0.1, 0.0}, 1, 10.0),
                      validation_error);
  }
}

TEST_CASE("dtm filtration is monotone on random inputs") {
  SplitMix64 rng(246);
  for (int trial = 0; trial < 20; ++trial) {
    PointCloud cloud(2);
    int n = 2 + static_cast<int>(rng.next_double() * 15);
    std::vector<double> f;
    for (int i = 0; i < n; ++i) {
      Vector p(2);
      p << rng.uniform(-1, 1), rng.uniform(-1, 1);
      cloud.add(p);
      f.push_back(rng.next_double());
    }
    Filtration filt = dtm_filtration(cloud, f, 2, 2.0);
    REQUIRE_NOTHROW(validate_filtration(filt));
  }
}

TEST_CASE("non-monotone filtrations are rejected") {
  Filtration f = Filtration::from_simplices(
      {{{0}, 0.0}, {{1}, 0.0}, {{0, 1}, 1.0}});
  f.values[1][0] = -0.5;  // edge before its vertices
  REQUIRE_THROWS_AS(persistence_diagram(f), validation_error);
}

TEST_CASE("diagrams match the rank-function oracle on random filtrations") {
  SplitMix64 rng(1009);
  for (int trial = 0; trial < 40; ++trial) {
    Filtration f = random_filtration(rng);
    PersistenceDiagram lib = persistence_diagram(f);
    PersistenceDiagram oracle = oracles::RankFunctionOracle(f).diagram();
    INFO("trial " << trial);
    REQUIRE(same_bars(lib, oracle));
  }
}

TEST_CASE("dim-0 bar multiplicity counts every vertex") {
  SplitMix64 rng(888);
  for (int trial = 0; trial < 10; ++trial) {
    Filtration f = random_filtration(rng);
    PersistencePairs pairs = reduce_filtration(f);
    REQUIRE(static_cast<std::int64_t>(pairs.pairs[0].size() +
                                      pairs.unpaired[0].size()) == f.count(0));
  }
}

TEST_CASE("rips diagrams are stable under Hausdorff perturbations") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    PointCloud x(2);
    int n = 5 + static_cast<int>(rng.next_double() * 10);
    for (int i = 0; i < n; ++i) {
      Vector p(2);
      p << rng.uniform(-1, 1), rng.uniform(-1, 1);
      x.add(p);
    }
    PointCloud y = x;
    double h = 0.0;
    for (Vector& p : y.points) {
      Vector d(2);
      d << rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05);
      p += d;
      h = std::max(h, d.norm());
    }
    PersistenceDiagram dx = persistence_diagram(rips_filtration(x, 2, 3.0));
    PersistenceDiagram dy = persistence_diagram(rips_filtration(y, 2, 3.0));
    for (int dim = 0; dim <= 1; ++dim)
      REQUIRE(bottleneck_distance(dx, dy, dim) <= 2.0 * h + 1e-9);
  }
}

TEST_CASE("dtm filtration diagrams converge as the subsample grows") {
  ParametricShape circle = make_circle(1.0);
  SampleResult s = sample_uniform(circle, 300, 606);
  EmpiricalMeasure full = EmpiricalMeasure::uniform(s.cloud);
  std::vector<double> f_full = dtm_field(full, 0.05, full.points);
  PersistenceDiagram d_full =
      persistence_diagram(dtm_filtration(full.points, f_full, 2, 2.0));

  auto subsample_diagram = [&](int count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    PointCloud sub(2);
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < count)
      chosen.insert(static_cast<int>(rng.next_double() * s.cloud.size()));
    for (int idx : chosen) sub.add(s.cloud.points[idx]);
    EmpiricalMeasure nu = EmpiricalMeasure::uniform(sub);
    std::vector<double> f = dtm_field(nu, 0.05, nu.points);
    return persistence_diagram(dtm_filtration(nu.points, f, 2, 2.0));
  };
  double d30 = bottleneck_distance(d_full, subsample_diagram(30, 1), 1);
  double d100 = bottleneck_distance(d_full, subsample_diagram(100, 1), 1);
  double d250 = bottleneck_distance(d_full, subsample_diagram(250, 1), 1);
  REQUIRE(d100 <= d30 + 1e-9);
  REQUIRE(d250 <= d100 + 1e-9);
}

TEST_CASE("prominent bars filter and order") {
  PersistenceDiagram d;
  REQUIRE(prominent_bars(d, 1, 0.0).empty());
  d.bars = {{1, 1.0, std::sqrt(2.0)}, {1, 0.5, 0.6}, {0, 0.0, kInfinity}};
  std::vector<Bar> all = prominent_bars(d, 1, 0.0);
  REQUIRE(all.size() == 2);
  REQUIRE(all[0].length() >= all[1].length());
  // The square's H1 bar has length sqrt(2) - 1 < 0.5.
  REQUIRE(prominent_bars(d, 1, 0.5).empty());
  std::vector<Bar> h0 = prominent_bars(d, 0, 100.0);
  REQUIRE(h0.size() == 1);  // infinite bars always included
  REQUIRE(h0[0].infinite());
}

TEST_CASE("simplex cap raises a capacity error") {
  SplitMix64 rng(5);
  PointCloud cloud(2);
  for (int i = 0; i < 40; ++i) {
    Vector p(2);
    p << rng.uniform(-1, 1), rng.uniform(-1, 1);
    cloud.add(p);
  }
  REQUIRE_THROWS_AS(rips_filtration(cloud, 2, 10.0, 100), capacity_error);
}
