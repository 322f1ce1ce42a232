#include "eal/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "eal/datasets.hpp"
#include "eal/error.hpp"
#include "eal/format.hpp"
#include "eal/version.hpp"

namespace eal {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  fail(errc::schema_error, path + ": " + what);
}

void require_object(const json& value, const std::string& path) {
  if (!value.is_object()) schema_fail(path, "expected an object");
}

// Strict key check: a misspelled option should fail loudly instead of
// silently falling back to its default.
void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) schema_fail(path + "." + it.key(), "unknown key");
  }
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) schema_fail(path, "expected a string");
  return value.get<std::string>();
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) schema_fail(path, "expected a number");
  return value.get<double>();
}

int as_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) schema_fail(path, "expected an integer");
  const auto wide = value.get<int64_t>();
  if (wide < INT_MIN || wide > INT_MAX) schema_fail(path, "integer out of range");
  return static_cast<int>(wide);
}

uint64_t as_seed(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<uint64_t>();
  if (value.is_number_integer() && value.get<int64_t>() >= 0)
    return static_cast<uint64_t>(value.get<int64_t>());
  schema_fail(path, "expected a non-negative integer");
}

double as_fraction(const json& value, const std::string& path, double lo, double hi) {
  const double x = as_number(value, path);
  if (!(x >= lo && x <= hi))
    schema_fail(path, "expected a number in [" + format_double(lo) + ", " +
                          format_double(hi) + "]");
  return x;
}

QueryStrategy parse_strategy_entry(const json& value, const std::string& path) {
  if (value.is_string()) {
    const StrategyKind kind = [&] {
      try {
        return parse_strategy_kind(value.get<std::string>());
      } catch (const Error& e) {
        schema_fail(path, e.what());
      }
    }();
    // Bare "klir" means the default weighting.
    if (kind == StrategyKind::klir) return QueryStrategy::klir(0.2);
    return QueryStrategy::simple(kind);
  }
  require_object(value, path);
  reject_unknown_keys(value, path, {"kind", "klir_lambda"});
  if (!value.contains("kind")) schema_fail(path + ".kind", "missing required key");
  const StrategyKind kind = [&] {
    try {
      return parse_strategy_kind(as_string(value.at("kind"), path + ".kind"));
    } catch (const Error& e) {
      schema_fail(path + ".kind", e.what());
    }
  }();
  if (value.contains("klir_lambda")) {
    if (kind != StrategyKind::klir)
      schema_fail(path + ".klir_lambda",
                  "only valid for the klir strategy");
    return QueryStrategy::klir(
        as_fraction(value.at("klir_lambda"), path + ".klir_lambda", 0.0, 1.0));
  }
  if (kind == StrategyKind::klir) return QueryStrategy::klir(0.2);
  return QueryStrategy::simple(kind);
}

ModelParams parse_model(const json& value, const std::string& path) {
  require_object(value, path);
  reject_unknown_keys(value, path, {"k", "alpha0", "gamma"});
  ModelParams model;
  if (value.contains("k")) {
    model.k = as_int(value.at("k"), path + ".k");
    if (model.k < 1) schema_fail(path + ".k", "expected a positive integer");
  }
  if (value.contains("alpha0"))
    model.alpha0 = as_fraction(value.at("alpha0"), path + ".alpha0", 0.0, 1.0);
  if (value.contains("gamma")) {
    const json& g = value.at("gamma");
    if (g.is_string()) {
      if (g.get<std::string>() != "auto")
        schema_fail(path + ".gamma", "expected \"auto\" or a positive number");
      model.gamma = GammaMode::autocal();
    } else {
      const double x = as_number(g, path + ".gamma");
      if (!(x > 0.0))
        schema_fail(path + ".gamma", "expected \"auto\" or a positive number");
      model.gamma = GammaMode::fixed(x);
    }
  }
  return model;
}

std::optional<LabelMode> parse_label_mode(const json& value, const std::string& path) {
  const std::string name = as_string(value, path);
  if (name == "auto") return std::nullopt;
  if (name == "crisp") return LabelMode::crisp;
  if (name == "rich") return LabelMode::rich;
  schema_fail(path, "expected \"auto\", \"crisp\" or \"rich\"");
}

json strategy_to_json(const QueryStrategy& strategy) {
  json out;
  out["kind"] = strategy_kind_name(strategy.kind);
  if (strategy.klir_lambda) out["klir_lambda"] = *strategy.klir_lambda;
  return out;
}

json config_to_json(const ALConfig& cfg) {
  json out;
  out["strategy"] = strategy_to_json(cfg.strategy);
  out["budget_fraction"] = cfg.budget_fraction;
  out["repetitions"] = cfg.repetitions;
  out["seed"] = cfg.seed;
  out["test_fraction"] = cfg.test_fraction;
  out["initial_labeled"] = cfg.initial_labeled;
  out["batch_size"] = cfg.batch_size;
  out["model"] = json::object();
  out["model"]["k"] = cfg.model.k;
  out["model"]["alpha0"] = cfg.model.alpha0;
  if (cfg.model.gamma.automatic)
    out["model"]["gamma"] = "auto";
  else
    out["model"]["gamma"] = cfg.model.gamma.value;
  if (cfg.label_mode)
    out["label_mode"] = *cfg.label_mode == LabelMode::rich ? "rich" : "crisp";
  else
    out["label_mode"] = "auto";
  return out;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  return out;
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
}

}  // namespace

void ExperimentSpec::validate() const {
  if (datasets.empty()) fail(errc::bad_argument, "experiment has no datasets");
  if (strategies.empty()) fail(errc::bad_argument, "experiment has no strategies");
  for (const QueryStrategy& s : strategies) s.validate();
  if (parallelism < 0) fail(errc::bad_argument, "parallelism must be >= 0");
  if (output_dir.empty()) fail(errc::bad_argument, "output_dir is empty");
  ALConfig probe = base;
  probe.strategy = strategies.front();
  probe.validate();
}

ExperimentSpec parse_experiment_spec(const json& doc) {
  require_object(doc, "$");
  reject_unknown_keys(doc, "$",
                      {"datasets", "strategies", "budget_fraction", "repetitions",
                       "seed", "test_fraction", "initial_labeled", "batch_size",
                       "model", "label_mode", "output_dir", "parallelism"});
  ExperimentSpec spec;

  if (!doc.contains("datasets")) schema_fail(".datasets", "missing required key");
  const json& datasets = doc.at("datasets");
  if (!datasets.is_array() || datasets.empty())
    schema_fail(".datasets", "expected a non-empty array of names");
  for (size_t i = 0; i < datasets.size(); ++i)
    spec.datasets.push_back(
        as_string(datasets[i], ".datasets[" + std::to_string(i) + "]"));

  if (!doc.contains("strategies")) schema_fail(".strategies", "missing required key");
  const json& strategies = doc.at("strategies");
  if (!strategies.is_array() || strategies.empty())
    schema_fail(".strategies", "expected a non-empty array");
  for (size_t i = 0; i < strategies.size(); ++i)
    spec.strategies.push_back(parse_strategy_entry(
        strategies[i], ".strategies[" + std::to_string(i) + "]"));

  if (doc.contains("budget_fraction"))
    spec.base.budget_fraction =
        as_fraction(doc.at("budget_fraction"), ".budget_fraction", 0.0, 1.0);
  if (doc.contains("repetitions")) {
    spec.base.repetitions = as_int(doc.at("repetitions"), ".repetitions");
    if (spec.base.repetitions < 1)
      schema_fail(".repetitions", "expected a positive integer");
  }
  if (doc.contains("seed")) spec.base.seed = as_seed(doc.at("seed"), ".seed");
  if (doc.contains("test_fraction"))
    spec.base.test_fraction =
        as_fraction(doc.at("test_fraction"), ".test_fraction", 0.0, 1.0);
  if (doc.contains("initial_labeled")) {
    spec.base.initial_labeled = as_int(doc.at("initial_labeled"), ".initial_labeled");
    if (spec.base.initial_labeled < 0)
      schema_fail(".initial_labeled", "expected a non-negative integer");
  }
  if (doc.contains("batch_size")) {
    spec.base.batch_size = as_int(doc.at("batch_size"), ".batch_size");
    if (spec.base.batch_size < 1)
      schema_fail(".batch_size", "expected a positive integer");
  }
  if (doc.contains("model")) spec.base.model = parse_model(doc.at("model"), ".model");
  if (doc.contains("label_mode"))
    spec.base.label_mode = parse_label_mode(doc.at("label_mode"), ".label_mode");
  if (doc.contains("output_dir"))
    spec.output_dir = as_string(doc.at("output_dir"), ".output_dir");
  if (doc.contains("parallelism")) {
    spec.parallelism = as_int(doc.at("parallelism"), ".parallelism");
    if (spec.parallelism < 0)
      schema_fail(".parallelism", "expected a non-negative integer");
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  return parse_experiment_spec(parse_json_file(path));
}

json result_to_json(const ALRunResult& run) {
  json out;
  out["dataset"] = run.dataset;
  out["strategy"] = run.config.strategy.tag();
  out["version"] = version_string;
  out["config"] = config_to_json(run.config);
  out["repetitions"] = json::array();
  for (const RepetitionResult& rep : run.repetitions) {
    json r;
    r["auac"] = rep.auac;
    r["full_pool_accuracy"] = rep.full_pool_accuracy;
    r["accuracy_curve"] = rep.accuracy_curve;
    r["labeled_counts"] = rep.labeled_counts;
    r["queries"] = rep.queries;
    if (!rep.diagnostic.empty()) r["diagnostic"] = rep.diagnostic;
    out["repetitions"].push_back(std::move(r));
  }
  return out;
}

void write_result_json(const ALRunResult& run, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << result_to_json(run).dump(2) << '\n';
  if (!out) fail(errc::io_error, "failed while writing " + path);
}

void write_result_csv(const ALRunResult& run, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "dataset,strategy,repetition,step,labeled_count,accuracy\n";
  const std::string tag = run.config.strategy.tag();
  for (size_t rep = 0; rep < run.repetitions.size(); ++rep) {
    const RepetitionResult& r = run.repetitions[rep];
    for (size_t step = 0; step < r.accuracy_curve.size(); ++step)
      out << run.dataset << ',' << tag << ',' << rep << ',' << step << ','
          << r.labeled_counts[step] << ',' << format_double(r.accuracy_curve[step])
          << '\n';
  }
  if (!out) fail(errc::io_error, "failed while writing " + path);
}

std::string result_stem(const std::string& dataset, const std::string& strategy_tag) {
  return dataset + "__" + strategy_tag;
}

std::vector<SeriesResult> load_results_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(errc::io_error, "not a directory: " + dir);
  std::vector<std::string> paths;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) fail(errc::io_error, "no .json result files in " + dir);

  std::vector<SeriesResult> series;
  for (const std::string& path : paths) {
    const json doc = parse_json_file(path);
    require_object(doc, "$");
    for (const char* key : {"dataset", "strategy", "repetitions"})
      if (!doc.contains(key))
        fail(errc::schema_error, path + ": missing key \"" + key + "\"");
    SeriesResult one;
    one.dataset = as_string(doc.at("dataset"), ".dataset");
    one.strategy = as_string(doc.at("strategy"), ".strategy");
    const json& reps = doc.at("repetitions");
    if (!reps.is_array()) fail(errc::schema_error, path + ": repetitions not an array");
    for (size_t i = 0; i < reps.size(); ++i) {
      const json& rep = reps[i];
      if (rep.contains("diagnostic"))
        fail(errc::degenerate_input,
             path + ": repetition " + std::to_string(i) + " failed: " +
                 rep.at("diagnostic").get<std::string>() +
                 " (rerun before aggregating)");
      one.auacs.push_back(
          as_number(rep.at("auac"), ".repetitions[" + std::to_string(i) + "].auac"));
    }
    series.push_back(std::move(one));
  }
  return series;
}

void run_experiment(const ExperimentSpec& spec, const std::string& data_dir,
                    std::ostream& log) {
  spec.validate();
  std::filesystem::create_directories(spec.output_dir);
  for (const std::string& name : spec.datasets) {
    const RichDataset data = load_dataset(name, data_dir);
    for (const QueryStrategy& strategy : spec.strategies) {
      ALConfig cfg = spec.base;
      cfg.strategy = strategy;
      const auto started = std::chrono::steady_clock::now();
      const ALRunResult run = run_active_learning(data, cfg, spec.parallelism);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
              .count();

      const std::string stem =
          (std::filesystem::path(spec.output_dir) / result_stem(name, strategy.tag()))
              .string();
      write_result_json(run, stem + ".json");
      write_result_csv(run, stem + ".csv");

      double mean = 0.0;
      int ok = 0, failed = 0;
      for (const RepetitionResult& rep : run.repetitions) {
        if (rep.diagnostic.empty()) {
          mean += rep.auac;
          ++ok;
        } else {
          ++failed;
        }
      }
      if (ok > 0) mean /= ok;
      char line[160];
      std::snprintf(line, sizeof line, "%s/%s: mean AUAC %.2f over %d reps (%.1fs)",
                    name.c_str(), strategy.tag().c_str(), mean, ok, seconds);
      log << line;
      if (failed > 0) log << "  [" << failed << " repetition(s) failed]";
      log << '\n' << std::flush;
    }
  }
}

}  // namespace eal
