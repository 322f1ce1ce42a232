#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eal/classifiers.hpp"
#include "eal/datasets.hpp"
#include "eal/rng.hpp"
#include "eal/uncertainty.hpp"

namespace eal {

enum class StrategyKind {
  random,
  entropy,
  least_confidence,
  klir,
  evid_epistemic,
  rl_epistemic,
};

const char* strategy_kind_name(StrategyKind kind);
StrategyKind parse_strategy_kind(const std::string& name);  // throws schema_error

struct QueryStrategy {
  StrategyKind kind = StrategyKind::random;
  std::optional<double> klir_lambda;  // present exactly when kind == klir

  static QueryStrategy simple(StrategyKind kind) { return {kind, std::nullopt}; }
  static QueryStrategy klir(double lambda) { return {StrategyKind::klir, lambda}; }

  void validate() const;
  // Identifier used in result files; the default lambda keeps the plain
  // name, other lambdas get a suffix ("klir_l0.5").
  std::string tag() const;
};

struct ModelParams {
  int k = 7;
  double alpha0 = 0.95;
  GammaMode gamma = GammaMode::autocal();
};

enum class LabelMode { crisp, rich };

struct ALConfig {
  QueryStrategy strategy;
  double budget_fraction = 0.6;
  int repetitions = 100;
  uint64_t seed = 0;
  double test_fraction = 0.3;
  int initial_labeled = 0;  // 0 means one instance per class
  int batch_size = 1;
  ModelParams model;
  std::optional<LabelMode> label_mode;  // unset: rich when the dataset has it

  void validate() const;
};

struct RepetitionResult {
  std::vector<double> accuracy_curve;  // one entry per refit, first at the seed set
  std::vector<int> labeled_counts;     // labeled-set size at each curve entry
  double auac = 0.0;
  std::vector<int> queries;  // dataset row indices in reveal order (seed set included)
  double full_pool_accuracy = 0.0;  // test accuracy with every pool row labeled
  std::string diagnostic;           // non-empty when the repetition aborted
  double wall_seconds = 0.0;        // informational only, never serialized
};

struct ALRunResult {
  std::string dataset;
  ALConfig config;
  std::vector<RepetitionResult> repetitions;
};

struct SplitIndices {
  std::vector<int> pool;  // sorted dataset row indices
  std::vector<int> test;
};

// Shuffles within each class and reserves ~test_fraction of every class for
// the test side (at least one row per class stays in the pool).
SplitIndices stratified_split(const std::vector<int>& labels, int num_classes,
                              double test_fraction, Rng& rng);

// Replays labels for the active learner and enforces single reveals.
class Oracle {
 public:
  Oracle(const RichDataset& data, LabelMode mode)
      : data_(data), mode_(mode), seen_(data.size(), false) {}

  MassFunction reveal(int dataset_index);
  bool revealed(int dataset_index) const { return seen_[static_cast<size_t>(dataset_index)]; }

 private:
  const RichDataset& data_;
  LabelMode mode_;
  std::vector<bool> seen_;
};

struct FittedModels {
  const EknnModel* eknn = nullptr;
  const PknnModel* pknn = nullptr;
};

// Row index into `candidates` of the next query: a uniform draw for the
// random strategy, otherwise the argmax of the strategy's score with ties
// broken toward the lowest row.
int select_query(const QueryStrategy& strategy, const FittedModels& models,
                 const Matrix& candidates, Rng& rng);

double evaluate_accuracy(const EknnModel& model, const RichDataset& data,
                         std::span<const int> test_indices);

// Mean accuracy scaled to the 0-100 range of the comparison tables.
double auac(std::span<const double> curve);

ALRunResult run_active_learning(const RichDataset& data, const ALConfig& config,
                                int parallelism = 1);

}  // namespace eal
