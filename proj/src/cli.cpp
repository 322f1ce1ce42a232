#include "eal/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "eal/datasets.hpp"
#include "eal/error.hpp"
#include "eal/experiment.hpp"
#include "eal/fetch.hpp"
#include "eal/format.hpp"
#include "eal/landscape.hpp"
#include "eal/report.hpp"
#include "eal/selfcheck.hpp"
#include "eal/version.hpp"

namespace eal {
namespace {

// Validation problems (bad input, bad config, contract violations) exit 2;
// failures of the run itself (I/O, network, numerical dead ends) exit 1.
int exit_code_for(errc code) {
  switch (code) {
    case errc::io_error:
    case errc::total_conflict:
      return 1;
    default:
      return 2;
  }
}

std::string default_data_dir() {
  if (const char* env = std::getenv("EAL_DATA_DIR"); env && *env) return env;
  return "data";
}

double default_noise(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::two_blob_ignorance:
      return 0.55;
    case SyntheticKind::three_class_imprecise:
      return 0.45;
    default:
      return 0.15;
  }
}

struct FetchArgs {
  std::string manifest = "data/manifest.json";
  std::string data_dir = default_data_dir();
  std::vector<std::string> only;
};

int cmd_fetch(const FetchArgs& a) {
  const int failures = fetch_datasets(a.manifest, a.data_dir, a.only, std::cout);
  if (failures > 0) {
    std::cerr << "fetch: " << failures << " dataset(s) failed\n";
    return 1;
  }
  return 0;
}

struct LandscapeArgs {
  std::string kind = "three_class_imprecise";
  int n = 200;
  double noise = -1.0;  // negative: per-kind default
  uint64_t seed = 7;
  std::string measure;
  double lambda = 0.2;
  int resolution = 101;
  int k = 7;
  double alpha0 = 0.95;
  std::string gamma = "auto";
  std::vector<double> bounds;  // empty or xmin xmax ymin ymax
  std::string out;
  bool no_pgm = false;
  int parallelism = 0;
};

int cmd_landscape(const LandscapeArgs& a) {
  const SyntheticKind kind = parse_synthetic_kind(a.kind);
  const Measure measure = parse_measure(a.measure);
  Rng rng(a.seed);
  const double noise = a.noise < 0.0 ? default_noise(kind) : a.noise;
  const RichDataset data = generate_synthetic(kind, a.n, noise, rng);

  GammaMode gamma = GammaMode::autocal();
  if (a.gamma != "auto")
    gamma = GammaMode::fixed(parse_double(a.gamma, "--gamma"));

  const EknnModel eknn =
      EknnModel::fit(data.features, data.rich_labels, a.k, a.alpha0, gamma);
  std::optional<PknnModel> pknn;
  if (measure == Measure::entropy || measure == Measure::least_confidence ||
      measure == Measure::rl_epistemic || measure == Measure::rl_aleatoric)
    pknn = PknnModel::fit(data.features, data.true_labels, data.frame, a.k);

  Bounds bounds = bounds_of(data.features);
  if (!a.bounds.empty()) {
    if (a.bounds.size() != 4)
      fail(errc::bad_argument, "--bounds needs xmin xmax ymin ymax");
    bounds = {a.bounds[0], a.bounds[1], a.bounds[2], a.bounds[3]};
  }

  const LandscapeModels models{&eknn, pknn ? &*pknn : nullptr};
  const LandscapeRaster raster = landscape(models, bounds, a.resolution, measure,
                                           a.lambda, a.parallelism);

  const std::string stem =
      a.out.empty() ? "landscape_" + a.kind + "_" + a.measure : a.out;
  write_raster_csv(raster, stem + ".csv");
  std::cout << "wrote " << stem << ".csv";
  if (!a.no_pgm) {
    write_raster_pgm(raster, stem + ".pgm");
    std::cout << " and " << stem << ".pgm";
  }
  std::cout << " (" << a.resolution << "x" << a.resolution << " "
            << measure_name(measure) << ")\n";
  return 0;
}

struct AlRunArgs {
  std::string config;
  std::string data_dir = default_data_dir();
  std::optional<uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> parallelism;
};

int cmd_al_run(const AlRunArgs& a) {
  ExperimentSpec spec = load_experiment_spec(a.config);
  if (a.seed) spec.base.seed = *a.seed;
  if (a.out_dir) spec.output_dir = *a.out_dir;
  if (a.parallelism) spec.parallelism = *a.parallelism;
  run_experiment(spec, a.data_dir, std::cout);
  return 0;
}

struct ReportArgs {
  std::string results;
  std::string out = "report.md";
};

int cmd_report(const ReportArgs& a) {
  const ComparisonTable table = build_comparison(load_results_dir(a.results));
  render_report_markdown(table, a.out);
  std::cout << "wrote " << a.out << " (" << table.datasets.size() << " datasets x "
            << table.strategies.size() << " strategies)\n";
  return 0;
}

struct CdArgs {
  std::string results;
  std::string out = "cd.csv";
  double alpha = 0.05;
};

int cmd_cd(const CdArgs& a) {
  const ComparisonTable table = build_comparison(load_results_dir(a.results));
  if (table.strategies.size() < 2)
    fail(errc::bad_argument, "critical-difference analysis needs >= 2 strategies");
  const CDResult cd = wilcoxon_holm_cd(table.mean_auac, a.alpha);
  write_cd_csv(cd, table.strategies, a.out);
  std::cout << "wrote " << a.out << " (" << table.datasets.size()
            << " datasets, alpha " << a.alpha << ")\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Belief-function active learning toolkit"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(1);

  FetchArgs fetch_args;
  CLI::App* fetch = app.add_subcommand(
      "fetch", "Download datasets listed in the manifest and verify checksums");
  fetch->add_option("--manifest", fetch_args.manifest, "Manifest JSON path")
      ->capture_default_str();
  fetch->add_option("--data-dir", fetch_args.data_dir,
                    "Where canonical CSVs live (default: $EAL_DATA_DIR or data)")
      ->capture_default_str();
  fetch->add_option("--only", fetch_args.only,
                    "Restrict to these dataset names (repeatable)");

  LandscapeArgs land_args;
  CLI::App* land = app.add_subcommand(
      "landscape", "Render an uncertainty raster over a synthetic 2D dataset");
  land->add_option("--kind", land_args.kind, "Synthetic dataset kind")
      ->capture_default_str();
  land->add_option("--n", land_args.n, "Number of instances")->capture_default_str();
  land->add_option("--noise", land_args.noise, "Noise level (default: per kind)");
  land->add_option("--seed", land_args.seed, "Generator seed")->capture_default_str();
  land->add_option("--measure", land_args.measure,
                   "entropy | least_confidence | discord | nonspecificity | klir | "
                   "evidential_epistemic | evidential_aleatoric | rl_epistemic | "
                   "rl_aleatoric")
      ->required();
  land->add_option("--lambda", land_args.lambda, "Klir weighting")
      ->capture_default_str();
  land->add_option("--resolution", land_args.resolution, "Grid resolution per axis")
      ->capture_default_str();
  land->add_option("--k", land_args.k, "Neighbour count")->capture_default_str();
  land->add_option("--alpha0", land_args.alpha0, "Base discount factor")
      ->capture_default_str();
  land->add_option("--gamma", land_args.gamma, "Kernel width: auto or a number")
      ->capture_default_str();
  land->add_option("--bounds", land_args.bounds,
                   "Raster bounds: xmin xmax ymin ymax (default: data bounds)")
      ->expected(4);
  land->add_option("--out", land_args.out,
                   "Output stem (default landscape_<kind>_<measure>)");
  land->add_flag("--no-pgm", land_args.no_pgm, "Skip the PGM rendering");
  land->add_option("--parallelism", land_args.parallelism,
                   "Worker threads (0 = all cores)")
      ->capture_default_str();

  AlRunArgs al_args;
  CLI::App* al = app.add_subcommand(
      "al-run", "Run an active-learning experiment batch from a config file");
  al->add_option("--config", al_args.config, "Experiment JSON config")->required();
  al->add_option("--data-dir", al_args.data_dir,
                 "Where canonical CSVs live (default: $EAL_DATA_DIR or data)")
      ->capture_default_str();
  uint64_t seed_override = 0;
  CLI::Option* seed_opt =
      al->add_option("--seed", seed_override, "Override the config seed");
  std::string out_dir_override;
  CLI::Option* out_dir_opt =
      al->add_option("--out-dir", out_dir_override, "Override the output directory");
  int parallelism_override = 0;
  CLI::Option* par_opt = al->add_option("--parallelism", parallelism_override,
                                        "Override worker threads (0 = all cores)");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "Aggregate result files into a Markdown comparison table");
  report->add_option("--results", report_args.results, "Directory of result JSONs")
      ->required();
  report->add_option("--out", report_args.out, "Output path")->capture_default_str();

  CdArgs cd_args;
  CLI::App* cd = app.add_subcommand(
      "cd", "Pairwise Wilcoxon-Holm critical-difference data from results");
  cd->add_option("--results", cd_args.results, "Directory of result JSONs")
      ->required();
  cd->add_option("--out", cd_args.out, "Output CSV path")->capture_default_str();
  cd->add_option("--alpha", cd_args.alpha, "Significance level")
      ->capture_default_str();

  CLI::App* self = app.add_subcommand("selfcheck", "Run the built-in invariant suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(fetch)) return cmd_fetch(fetch_args);
    if (app.got_subcommand(land)) return cmd_landscape(land_args);
    if (app.got_subcommand(al)) {
      if (*seed_opt) al_args.seed = seed_override;
      if (*out_dir_opt) al_args.out_dir = out_dir_override;
      if (*par_opt) al_args.parallelism = parallelism_override;
      return cmd_al_run(al_args);
    }
    if (app.got_subcommand(report)) return cmd_report(report_args);
    if (app.got_subcommand(cd)) return cmd_cd(cd_args);
    if (app.got_subcommand(self)) return run_selfcheck(std::cout) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}

}  // namespace eal
