// Command-line front end: sample parametric shapes, lift point clouds,
// evaluate the DTM, compute persistence barcodes, compare diagrams and run
// full seeded experiments.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homlift/homlift.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;

using namespace homlift;

void apply_config_flags(CLI::App* cmd, ExperimentConfig& cfg,
                        std::string& shape_name, std::string& config_path) {
  cmd->add_option("--config", config_path, "key = value config file");
  cmd->add_option("--shape", shape_name,
                  "circle | lemniscate | torus_figure8 | five_circles");
  cmd->add_option("--n", cfg.sample_size, "sample size");
  cmd->add_option("--seed", cfg.seed, "RNG seed (splitmix64)");
  cmd->add_option("--r", cfg.r, "local covariance radius");
  cmd->add_option("--gamma", cfg.gamma, "matrix weight of the gamma-norm");
  cmd->add_option("--m", cfg.m, "DTM mass parameter in (0,1)");
  cmd->add_option("--p", cfg.p, "Wasserstein order");
  cmd->add_option("--filtration", cfg.filtration, "rips | dtm");
  cmd->add_option("--space", cfg.space, "ambient | lifted");
  cmd->add_option("--sampling", cfg.sampling, "random | grid");
  cmd->add_option("--max-dim", cfg.max_dim, "top simplex dimension");
  cmd->add_option("--max-value", cfg.max_value, "filtration truncation value");
  cmd->add_option("--min-bar-length", cfg.min_bar_length,
                  "prominence threshold in the summary");
  cmd->add_option("--noise-count", cfg.noise_count, "clutter points");
  cmd->add_option("--noise-box", cfg.noise_box,
                  "clutter bounding box lo,hi per coordinate");
  cmd->add_option("--ref-size", cfg.ref_size,
                  "reference grid size (0 = default)");
  cmd->add_option("--simplex-cap", cfg.simplex_cap, "simplex count guard");
}

int run(int argc, char** argv) {
  CLI::App app{"Tangent-lifted point clouds, DTM filtrations and persistence"};
  app.require_subcommand(1);

  // --- sample ---------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "sample a parametric shape");
  std::string sample_shape = "lemniscate";
  int sample_n = 100;
  std::uint64_t sample_seed = 1;
  std::string sample_out = "points.csv";
  sample_cmd->add_option("--shape", sample_shape, "shape id")->required();
  sample_cmd->add_option("--n", sample_n, "number of points")->required();
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_option("--out", sample_out, "output point CSV");

  // --- lift -----------------------------------------------------------
  auto* lift_cmd =
      app.add_subcommand("lift", "attach normalized local covariance matrices");
  std::string lift_in, lift_out = "lifted.csv", lift_embedded;
  double lift_r = 0.1, lift_gamma = 0.0;
  lift_cmd->add_option("--in", lift_in, "input point CSV")->required();
  lift_cmd->add_option("--r", lift_r, "covariance radius")->required();
  lift_cmd->add_option("--out", lift_out, "output lifted CSV");
  lift_cmd->add_option("--gamma", lift_gamma,
                       "also write the gamma-embedded cloud (needs --embedded-out)");
  lift_cmd->add_option("--embedded-out", lift_embedded,
                       "output CSV for the embedded cloud");

  // --- dtm ------------------------------------------------------------
  auto* dtm_cmd = app.add_subcommand("dtm", "distance to measure");
  std::string dtm_in, dtm_queries, dtm_out;
  double dtm_m = 0.01;
  dtm_cmd->add_option("--in", dtm_in, "input point CSV (uniform measure)")
      ->required();
  dtm_cmd->add_option("--m", dtm_m, "mass parameter in (0,1)")->required();
  dtm_cmd->add_option("--queries", dtm_queries,
                      "query point CSV (default: the input itself)");
  dtm_cmd->add_option("--out", dtm_out, "output CSV of DTM values");

  // --- persist --------------------------------------------------------
  auto* persist_cmd =
      app.add_subcommand("persist", "barcode of a Rips or DTM filtration");
  std::string persist_in, persist_kind = "rips", persist_out = "diagram.json";
  std::string persist_dump;
  double persist_m = 0.01, persist_max_value = 1.0;
  int persist_max_dim = 2;
  std::int64_t persist_cap = kDefaultSimplexCap;
  persist_cmd->add_option("--in", persist_in, "input point CSV")->required();
  persist_cmd->add_option("--kind", persist_kind, "rips | dtm");
  persist_cmd->add_option("--m", persist_m, "DTM mass (kind = dtm)");
  persist_cmd->add_option("--max-dim", persist_max_dim, "top simplex dimension");
  persist_cmd->add_option("--max-value", persist_max_value, "truncation value");
  persist_cmd->add_option("--simplex-cap", persist_cap, "simplex count guard");
  persist_cmd->add_option("--out", persist_out, "output diagram JSON");
  persist_cmd->add_option("--dump-filtration", persist_dump,
                          "also dump the filtration, one simplex per line");

  // --- compare --------------------------------------------------------
  auto* compare_cmd =
      app.add_subcommand("compare", "bottleneck distance between diagrams");
  std::string cmp_a, cmp_b, cmp_metric = "bottleneck";
  compare_cmd->add_option("a", cmp_a, "first diagram JSON")->required();
  compare_cmd->add_option("b", cmp_b, "second diagram JSON")->required();
  compare_cmd->add_option("--metric", cmp_metric, "bottleneck (per-dim table)");

  // --- experiment -----------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "run a full seeded pipeline");
  ExperimentConfig cfg;
  std::string exp_shape, exp_config, exp_out = "run";
  apply_config_flags(exp_cmd, cfg, exp_shape, exp_config);
  exp_cmd->add_option("--out", exp_out, "run directory");

  CLI11_PARSE(app, argc, argv);

  if (sample_cmd->parsed()) {
    ParametricShape shape = make_shape(shape_from_string(sample_shape));
    SampleResult result = sample_uniform(shape, sample_n, sample_seed);
    write_point_csv(result.cloud, sample_out);
    std::cout << "wrote " << result.cloud.size() << " points to " << sample_out
              << "\n";
    return 0;
  }

  if (lift_cmd->parsed()) {
    PointCloud cloud = read_point_csv(lift_in);
    EmpiricalMeasure nu = EmpiricalMeasure::uniform(cloud);
    LiftedMeasure lifted = lift_measure(nu, lift_r);
    write_lifted_csv(lifted.cloud, lift_out);
    std::cout << "wrote " << lifted.cloud.size() << " lifted entries to "
              << lift_out << "\n";
    if (!lift_embedded.empty()) {
      if (lift_gamma <= 0.0)
        throw validation_error("lift: --embedded-out needs --gamma > 0");
      write_point_csv(gamma_embed(lifted.cloud, lift_gamma), lift_embedded);
      std::cout << "wrote embedded cloud to " << lift_embedded << "\n";
    }
    return 0;
  }

  if (dtm_cmd->parsed()) {
    PointCloud cloud = read_point_csv(dtm_in);
    EmpiricalMeasure mu = EmpiricalMeasure::uniform(cloud);
    PointCloud queries =
        dtm_queries.empty() ? mu.points : read_point_csv(dtm_queries);
    std::vector<double> values = dtm_field(mu, dtm_m, queries);
    if (dtm_out.empty()) {
      for (double v : values) std::cout << format_double(v) << "\n";
    } else {
      std::ofstream out(dtm_out);
      out << "dtm\n";
      for (double v : values) out << format_double(v) << "\n";
      std::cout << "wrote " << values.size() << " values to " << dtm_out << "\n";
    }
    return 0;
  }

  if (persist_cmd->parsed()) {
    PointCloud cloud = read_point_csv(persist_in);
    Filtration filt;
    if (persist_kind == "rips") {
      filt = rips_filtration(cloud, persist_max_dim, persist_max_value,
                             persist_cap);
    } else if (persist_kind == "dtm") {
      EmpiricalMeasure mu = EmpiricalMeasure::uniform(cloud);
      std::vector<double> f = dtm_field(mu, persist_m, mu.points);
      filt = dtm_filtration(mu.points, f, persist_max_dim, persist_max_value,
                            persist_cap);
    } else {
      throw validation_error("persist: --kind must be rips or dtm");
    }
    if (!persist_dump.empty()) write_filtration_dump(filt, persist_dump);
    PersistenceDiagram diagram = persistence_diagram(filt);
    write_diagram_json(diagram, persist_out);
    std::cout << "wrote " << diagram.bars.size() << " bars to " << persist_out
              << "\n";
    return 0;
  }

  if (compare_cmd->parsed()) {
    if (cmp_metric != "bottleneck")
      throw validation_error("compare: unknown metric " + cmp_metric);
    DiagramComparison cmp = compare_diagrams(cmp_a, cmp_b);
    for (const auto& [dim, value] : cmp.per_dim)
      std::cout << "dim " << dim << ": "
                << (std::isinf(value) ? std::string("inf")
                                      : format_double(value))
                << "\n";
    std::cout << "bottleneck: "
              << (std::isinf(cmp.overall) ? std::string("inf")
                                          : format_double(cmp.overall))
              << "\n";
    return 0;
  }

  if (exp_cmd->parsed()) {
    if (!exp_config.empty()) {
      ExperimentConfig from_file = parse_config_file(exp_config);
      // Command-line flags override file values where given.
      ExperimentConfig defaults;
      auto keep = [&](auto ExperimentConfig::*field) {
        if (cfg.*field == defaults.*field) cfg.*field = from_file.*field;
      };
      keep(&ExperimentConfig::sample_size);
      keep(&ExperimentConfig::seed);
      keep(&ExperimentConfig::r);
      keep(&ExperimentConfig::gamma);
      keep(&ExperimentConfig::m);
      keep(&ExperimentConfig::p);
      keep(&ExperimentConfig::max_dim);
      keep(&ExperimentConfig::max_value);
      keep(&ExperimentConfig::min_bar_length);
      keep(&ExperimentConfig::noise_count);
      keep(&ExperimentConfig::ref_size);
      keep(&ExperimentConfig::simplex_cap);
      if (cfg.filtration == defaults.filtration)
        cfg.filtration = from_file.filtration;
      if (cfg.space == defaults.space) cfg.space = from_file.space;
      if (cfg.sampling == defaults.sampling) cfg.sampling = from_file.sampling;
      if (cfg.noise_box.empty()) cfg.noise_box = from_file.noise_box;
      if (exp_shape.empty()) cfg.shape = from_file.shape;
    }
    if (!exp_shape.empty()) cfg.shape = shape_from_string(exp_shape);
    ExperimentSummary summary = run_experiment(cfg, exp_out);
    std::cout << "run written to " << exp_out << "\n"
              << "  W_p(ref, observed)        = "
              << format_double(summary.wasserstein_ref) << "\n"
              << "  W_{p,gamma}(lift)         = "
              << format_double(summary.gamma_wasserstein_lift) << "\n"
              << "  d_H(ambient)              = "
              << format_double(summary.hausdorff_ambient) << "\n"
              << "  d_H(lift)                 = "
              << format_double(summary.hausdorff_lift) << "\n"
              << "  c(lifted measure)         = "
              << format_double(summary.c_lifted) << "\n"
              << "  prominent bars            = " << summary.prominent.size()
              << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const homlift::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const homlift::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
