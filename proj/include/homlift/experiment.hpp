#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "homlift/bottleneck.hpp"
#include "homlift/common.hpp"
#include "homlift/dtm.hpp"
#include "homlift/io.hpp"
#include "homlift/measure.hpp"
#include "homlift/persistence.hpp"
#include "homlift/point_cloud.hpp"
#include "homlift/shapes.hpp"
#include "homlift/transport.hpp"

namespace homlift {

inline constexpr const char* kToolVersion = "homlift 0.1.0";

/// Everything a seeded run needs. The filtration is built either on the
/// observed points ("ambient") or on the gamma-embedded lifted cloud
/// ("lifted"), as plain Rips or as the DTM-weighted variant.
struct ExperimentConfig {
  ShapeId shape = ShapeId::lemniscate;
  int sample_size = 100;
  std::uint64_t seed = 1;
  double r = 0.1;           // covariance radius
  double gamma = 2.0;
  double m = 0.01;          // DTM mass
  double p = 2.0;           // Wasserstein order
  std::string filtration = "dtm";  // rips | dtm
  std::string space = "lifted";    // ambient | lifted
  std::string sampling = "random"; // random | grid (grid: curves only)
  int max_dim = 2;
  double max_value = 1.0;
  double min_bar_length = 0.1;
  int noise_count = 0;
  std::vector<double> noise_box;   // lo0,hi0,lo1,hi1,...; empty = auto
  int ref_size = 0;                // 0 = 2000 for curves, 8000 for surfaces
  std::int64_t simplex_cap = kDefaultSimplexCap;

  void validate() const {
    if (sample_size < 1)
      throw validation_error("config: sample_size must be >= 1");
    if (!(r > 0.0)) throw validation_error("config: r must be > 0");
    if (!(gamma > 0.0)) throw validation_error("config: gamma must be > 0");
    if (!(m > 0.0 && m < 1.0))
      throw validation_error("config: m must lie in (0, 1)");
    if (p < 1.0) throw validation_error("config: p must be >= 1");
    if (filtration != "rips" && filtration != "dtm")
      throw validation_error("config: filtration must be rips or dtm");
    if (space != "ambient" && space != "lifted")
      throw validation_error("config: space must be ambient or lifted");
    if (sampling != "random" && sampling != "grid")
      throw validation_error("config: sampling must be random or grid");
    if (max_dim < 0 || max_dim > 3)
      throw validation_error("config: max_dim must be in [0, 3]");
    if (!(max_value > 0.0))
      throw validation_error("config: max_value must be > 0");
    if (min_bar_length < 0.0)
      throw validation_error("config: min_bar_length must be >= 0");
    if (noise_count < 0)
      throw validation_error("config: noise_count must be >= 0");
    if (!noise_box.empty() && noise_box.size() % 2 != 0)
      throw validation_error("config: noise_box needs lo,hi per coordinate");
  }

  std::map<std::string, std::string> to_key_values() const {
    std::map<std::string, std::string> kv;
    kv["shape"] = to_string(shape);
    kv["sample_size"] = std::to_string(sample_size);
    kv["seed"] = std::to_string(seed);
    kv["r"] = format_double(r);
    kv["gamma"] = format_double(gamma);
    kv["m"] = format_double(m);
    kv["p"] = format_double(p);
    kv["filtration"] = filtration;
    kv["space"] = space;
    kv["sampling"] = sampling;
    kv["max_dim"] = std::to_string(max_dim);
    kv["max_value"] = format_double(max_value);
    kv["min_bar_length"] = format_double(min_bar_length);
    kv["noise_count"] = std::to_string(noise_count);
    if (!noise_box.empty()) {
      std::string box;
      for (std::size_t i = 0; i < noise_box.size(); ++i)
        box += (i ? "," : "") + format_double(noise_box[i]);
      kv["noise_box"] = box;
    }
    kv["ref_size"] = std::to_string(ref_size);
    kv["simplex_cap"] = std::to_string(simplex_cap);
    return kv;
  }
};

inline ShapeId shape_from_string(const std::string& s) {
  if (s == "circle") return ShapeId::circle;
  if (s == "lemniscate") return ShapeId::lemniscate;
  if (s == "torus_figure8") return ShapeId::torus_figure8;
  if (s == "five_circles") return ShapeId::five_circles;
  throw validation_error("unknown shape: " + s);
}

/// Key = value configuration files; '#' starts a comment.
inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (blank) continue;
      throw validation_error("config " + path + " line " +
                             std::to_string(lineno) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const std::string where = path + " line " + std::to_string(lineno);
    if (key == "shape") cfg.shape = shape_from_string(value);
    else if (key == "sample_size") cfg.sample_size = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "r") cfg.r = detail::parse_double(value, where);
    else if (key == "gamma") cfg.gamma = detail::parse_double(value, where);
    else if (key == "m") cfg.m = detail::parse_double(value, where);
    else if (key == "p") cfg.p = detail::parse_double(value, where);
    else if (key == "filtration") cfg.filtration = value;
    else if (key == "space") cfg.space = value;
    else if (key == "sampling") cfg.sampling = value;
    else if (key == "max_dim") cfg.max_dim = std::stoi(value);
    else if (key == "max_value") cfg.max_value = detail::parse_double(value, where);
    else if (key == "min_bar_length") cfg.min_bar_length = detail::parse_double(value, where);
    else if (key == "noise_count") cfg.noise_count = std::stoi(value);
    else if (key == "noise_box") {
      cfg.noise_box.clear();
      for (const std::string& field : detail::split_csv_line(value))
        cfg.noise_box.push_back(detail::parse_double(field, where));
    } else if (key == "ref_size") cfg.ref_size = std::stoi(value);
    else if (key == "simplex_cap") cfg.simplex_cap = std::stoll(value);
    else throw validation_error("config " + path + " line " +
                                std::to_string(lineno) + ": unknown key '" +
                                key + "'");
  }
  return cfg;
}

/// Deterministic reference measure standing in for the continuous one:
/// arc-length-uniform parameters with equal weights for curves, a parameter
/// grid weighted by the area element for surfaces.
struct ReferenceMeasure {
  std::vector<Vector> params;
  EmpiricalMeasure measure;
};

inline ReferenceMeasure reference_measure(const ParametricShape& shape,
                                          int ref_size) {
  ReferenceMeasure out;
  if (shape.intrinsic_dim == 1) {
    int n = ref_size > 0 ? ref_size : 2000;
    detail::ArcLengthTable table(shape);
    PointCloud cloud(shape.ambient_dim);
    for (int i = 0; i < n; ++i) {
      Vector t = make_param(table.invert((i + 0.5) / n));
      out.params.push_back(t);
      cloud.add(shape.eval(t));
    }
    out.measure = EmpiricalMeasure::uniform(std::move(cloud));
    return out;
  }
  int n = ref_size > 0 ? ref_size : 8000;
  int nu = static_cast<int>(std::round(std::sqrt(static_cast<double>(n))));
  int nv = (n + nu - 1) / nu;
  const Interval& du = shape.domain[0];
  const Interval& dv = shape.domain[1];
  PointCloud cloud(shape.ambient_dim);
  std::vector<double> weights;
  for (int i = 0; i < nu; ++i)
    for (int k = 0; k < nv; ++k) {
      Vector t = make_param(du.lo + (i + 0.5) / nu * du.length(),
                            dv.lo + (k + 0.5) / nv * dv.length());
      Matrix j = shape.jacobian(t);
      Matrix gram = j.transpose() * j;
      double det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
      double area = std::sqrt(std::max(0.0, det));
      if (area <= 0.0) continue;
      out.params.push_back(t);
      cloud.add(shape.eval(t));
      weights.push_back(area);
    }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  out.measure = EmpiricalMeasure{std::move(cloud), std::move(weights)};
  return out;
}

struct ExperimentSummary {
  double wasserstein_ref = 0.0;        // W_p(ref measure, observed)
  double gamma_wasserstein_lift = 0.0; // W_{p,gamma}(exact ref lift, lifted observed)
  double hausdorff_ambient = 0.0;      // d_H(ref points, observed points)
  double hausdorff_lift = 0.0;         // d_H(embedded exact lift, embedded lifted observed)
  double c_lifted = 0.0;               // c of the embedded lifted measure at mass m
  PersistenceDiagram diagram;
  std::vector<Bar> prominent;
};

/// Runs the full pipeline for one seeded configuration and writes the run
/// directory: points.csv, lifted.csv, exact_lift.csv, errors.csv,
/// diagram.json, summary.json, config.txt. Fully deterministic: rerunning
/// the same config produces byte-identical files.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                        const std::string& out_dir) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto path = [&out_dir](const char* name) {
    return (fs::path(out_dir) / name).string();
  };

  ParametricShape shape = make_shape(cfg.shape);
  SampleResult sampled = (cfg.sampling == "grid")
                             ? sample_grid(shape, cfg.sample_size)
                             : sample_uniform(shape, cfg.sample_size, cfg.seed);

  // Clutter noise, drawn from the same generator stream after the samples.
  PointCloud observed = sampled.cloud;
  ReferenceMeasure ref = reference_measure(shape, cfg.ref_size);
  if (cfg.noise_count > 0) {
    std::vector<double> box = cfg.noise_box;
    if (box.empty()) {
      // Bounding box of the shape inflated by 10%.
      for (int c = 0; c < shape.ambient_dim; ++c) {
        double lo = kInfinity, hi = -kInfinity;
        for (const Vector& q : ref.measure.points.points) {
          lo = std::min(lo, q[c]);
          hi = std::max(hi, q[c]);
        }
        double pad = 0.05 * (hi - lo);
        box.push_back(lo - pad);
        box.push_back(hi + pad);
      }
    }
    if (static_cast<int>(box.size()) != 2 * shape.ambient_dim)
      throw validation_error("config: noise_box does not match ambient dim");
    SplitMix64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    for (int i = 0; i < cfg.noise_count; ++i) {
      Vector q(shape.ambient_dim);
      for (int c = 0; c < shape.ambient_dim; ++c)
        q[c] = rng.uniform(box[2 * c], box[2 * c + 1]);
      observed.add(q);
    }
  }
  write_point_csv(observed, path("points.csv"));

  EmpiricalMeasure nu = EmpiricalMeasure::uniform(observed);
  LiftedMeasure lifted = lift_measure(nu, cfg.r);
  write_lifted_csv(lifted.cloud, path("lifted.csv"));

  // Exact lift at the sampled parameters (matched by index with the first
  // sample_size rows of lifted.csv), and the tangent-estimation errors.
  LiftedCloud exact_at_samples = exact_lift(shape, sampled.params);
  write_lifted_csv(exact_at_samples, path("exact_lift.csv"));
  {
    LiftedCloud estimated_at_samples;
    estimated_at_samples.ambient_dim = lifted.cloud.ambient_dim;
    for (int i = 0; i < cfg.sample_size; ++i)
      estimated_at_samples.add(lifted.cloud.base_points[i],
                               lifted.cloud.matrices[i]);
    std::vector<double> errors =
        tangent_error_field(estimated_at_samples, exact_at_samples);
    std::ofstream err(path("errors.csv"));
    err << "error\n";
    for (double e : errors) err << format_double(e) << "\n";
  }

  ExperimentSummary summary;
  summary.wasserstein_ref = wasserstein(ref.measure, nu, cfg.p).value;
  summary.hausdorff_ambient = hausdorff_distance(ref.measure.points, observed);

  LiftedMeasure exact_ref{exact_lift(shape, ref.params), ref.measure.weights};
  summary.gamma_wasserstein_lift =
      gamma_wasserstein(exact_ref, lifted, cfg.p, cfg.gamma);

  PointCloud embedded = gamma_embed(lifted.cloud, cfg.gamma);
  PointCloud embedded_exact = gamma_embed(exact_ref.cloud, cfg.gamma);
  summary.hausdorff_lift = hausdorff_distance(embedded_exact, embedded);

  EmpiricalMeasure lifted_embedded{embedded, lifted.weights};
  summary.c_lifted = c_mu(lifted_embedded, cfg.m);

  // Filtration and barcode.
  const PointCloud& filt_points =
      (cfg.space == "ambient") ? observed : embedded;
  Filtration filt;
  if (cfg.filtration == "rips") {
    filt = rips_filtration(filt_points, cfg.max_dim, cfg.max_value,
                           cfg.simplex_cap);
  } else {
    EmpiricalMeasure base = (cfg.space == "ambient") ? nu : lifted_embedded;
    std::vector<double> f = dtm_field(base, cfg.m, filt_points);
    filt = dtm_filtration(filt_points, f, cfg.max_dim, cfg.max_value,
                          cfg.simplex_cap);
  }
  summary.diagram = persistence_diagram(filt);
  write_diagram_json(summary.diagram, path("diagram.json"));
  for (int d = 0; d <= cfg.max_dim; ++d)
    for (const Bar& b : prominent_bars(summary.diagram, d, cfg.min_bar_length))
      summary.prominent.push_back(b);

  // Echo the configuration verbatim, then the self-describing summary.
  {
    std::ofstream out(path("config.txt"));
    for (const auto& [k, v] : cfg.to_key_values())
      out << k << " = " << v << "\n";
  }
  {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["rng"] = rng_algorithm_name();
    nlohmann::ordered_json jc;
    for (const auto& [k, v] : cfg.to_key_values()) jc[k] = v;
    j["config"] = jc;
    j["wasserstein_ref"] = summary.wasserstein_ref;
    j["gamma_wasserstein_exact_lift"] = summary.gamma_wasserstein_lift;
    j["hausdorff_ambient"] = summary.hausdorff_ambient;
    j["hausdorff_lift"] = summary.hausdorff_lift;
    j["c_lifted"] = summary.c_lifted;
    nlohmann::ordered_json bars = nlohmann::ordered_json::array();
    for (const Bar& b : summary.prominent) {
      nlohmann::ordered_json jb;
      jb["dim"] = b.dim;
      jb["birth"] = b.birth;
      if (b.infinite()) {
        jb["death"] = "inf";
        jb["length"] = "inf";
      } else {
        jb["death"] = b.death;
        jb["length"] = b.length();
      }
      bars.push_back(jb);
    }
    j["prominent_bars"] = bars;
    std::ofstream out(path("summary.json"));
    out << j.dump(2) << "\n";
  }
  return summary;
}

struct DiagramComparison {
  std::map<int, double> per_dim;
  double overall = 0.0;
};

/// Bottleneck comparison of two diagram files, per dimension and overall.
inline DiagramComparison compare_diagrams(const std::string& path_a,
                                          const std::string& path_b) {
  PersistenceDiagram a = read_diagram_json(path_a);
  PersistenceDiagram b = read_diagram_json(path_b);
  DiagramComparison out;
  int top = std::max(a.max_dim(), b.max_dim());
  for (int d = 0; d <= top; ++d) {
    double v = bottleneck_distance(a, b, d);
    out.per_dim[d] = v;
    out.overall = std::max(out.overall, v);
  }
  return out;
}

}  // namespace homlift
