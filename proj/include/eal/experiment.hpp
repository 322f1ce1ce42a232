#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "eal/active_loop.hpp"
#include "eal/report.hpp"

namespace eal {

// A batch of active-learning runs: every dataset is run against every
// strategy with one shared base configuration, and each (dataset, strategy)
// pair produces a JSON result file plus a flat CSV next to it.
struct ExperimentSpec {
  std::vector<std::string> datasets;
  std::vector<QueryStrategy> strategies;
  ALConfig base;  // base.strategy is overwritten per run
  std::string output_dir = "results";
  int parallelism = 0;  // 0 = one worker per hardware thread

  void validate() const;
};

// Parses a config document.  Unknown keys and type mismatches raise
// Error(errc::schema_error) whose message starts with the JSON path of the
// offending value (".strategies[0].klir_lambda: ...").  Missing optional
// keys fall back to the defaults baked into ExperimentSpec/ALConfig.
ExperimentSpec parse_experiment_spec(const nlohmann::ordered_json& doc);
ExperimentSpec load_experiment_spec(const std::string& path);

// Serialization of one run.  The layout is fully deterministic: key order is
// fixed, doubles use the shortest round-trip form, and wall-clock time is
// deliberately left out so repeated runs produce byte-identical files.
nlohmann::ordered_json result_to_json(const ALRunResult& run);
void write_result_json(const ALRunResult& run, const std::string& path);
void write_result_csv(const ALRunResult& run, const std::string& path);

// File name stem shared by the JSON/CSV pair of one run.
std::string result_stem(const std::string& dataset, const std::string& strategy_tag);

// Reads every "*.json" result in a directory into per-run AUAC series,
// ordered by file name.  A repetition that carries a diagnostic would poison
// downstream statistics, so encountering one is an error, not a silent drop.
std::vector<SeriesResult> load_results_dir(const std::string& dir);

// Runs the whole experiment, writing result files into spec.output_dir and
// one progress line per run to `log`.  `data_dir` is where named datasets
// are looked up (see load_dataset).
void run_experiment(const ExperimentSpec& spec, const std::string& data_dir,
                    std::ostream& log);

}  // namespace eal
