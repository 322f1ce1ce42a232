#include "eal/active_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "eal/format.hpp"
#include "eal/parallel.hpp"

namespace eal {

const char* strategy_kind_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::random: return "random";
    case StrategyKind::entropy: return "entropy";
    case StrategyKind::least_confidence: return "least_confidence";
    case StrategyKind::klir: return "klir";
    case StrategyKind::evid_epistemic: return "evid_epistemic";
    case StrategyKind::rl_epistemic: return "rl_epistemic";
  }
  return "unknown";
}

StrategyKind parse_strategy_kind(const std::string& name) {
  for (StrategyKind k : {StrategyKind::random, StrategyKind::entropy,
                         StrategyKind::least_confidence, StrategyKind::klir,
                         StrategyKind::evid_epistemic, StrategyKind::rl_epistemic}) {
    if (name == strategy_kind_name(k)) return k;
  }
  fail(errc::schema_error, "unknown strategy '" + name + "'");
}

void QueryStrategy::validate() const {
  if (kind == StrategyKind::klir) {
    if (!klir_lambda) fail(errc::schema_error, "klir strategy needs klir_lambda");
    if (!(*klir_lambda >= 0.0 && *klir_lambda <= 1.0))
      fail(errc::schema_error, "klir_lambda must be in [0, 1]");
  } else if (klir_lambda) {
    fail(errc::schema_error, "klir_lambda only applies to the klir strategy");
  }
}

std::string QueryStrategy::tag() const {
  if (kind == StrategyKind::klir && klir_lambda && *klir_lambda != 0.2)
    return "klir_l" + format_double(*klir_lambda);
  return strategy_kind_name(kind);
}

void ALConfig::validate() const {
  strategy.validate();
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0))
    fail(errc::schema_error, "budget_fraction must be in (0, 1]");
  if (repetitions < 1) fail(errc::schema_error, "repetitions must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    fail(errc::schema_error, "test_fraction must be in (0, 1)");
  if (initial_labeled < 0) fail(errc::schema_error, "initial_labeled must be >= 0");
  if (batch_size < 1) fail(errc::schema_error, "batch_size must be >= 1");
  if (model.k < 1) fail(errc::schema_error, "model.k must be >= 1");
  if (!(model.alpha0 >= 0.0 && model.alpha0 <= 1.0))
    fail(errc::schema_error, "model.alpha0 must be in [0, 1]");
  if (!model.gamma.automatic && !(model.gamma.value > 0.0))
    fail(errc::schema_error, "model.gamma must be positive");
}

SplitIndices stratified_split(const std::vector<int>& labels, int num_classes,
                              double test_fraction, Rng& rng) {
  std::vector<std::vector<int>> by_class(static_cast<size_t>(num_classes));
  for (size_t i = 0; i < labels.size(); ++i)
    by_class[static_cast<size_t>(labels[i])].push_back(static_cast<int>(i));

  SplitIndices split;
  for (auto& members : by_class) {
    rng.shuffle(members);
    const long long n = static_cast<long long>(members.size());
    long long take = std::llround(test_fraction * static_cast<double>(n));
    // Keep at least one instance of every class in the pool, and when the
    // class has two or more, at least one in the test set.
    take = std::min(take, n - 1);
    if (n >= 2) take = std::max(take, 1ll);
    if (take < 0) take = 0;
    for (long long i = 0; i < n; ++i)
      (i < take ? split.test : split.pool).push_back(members[static_cast<size_t>(i)]);
  }
  std::sort(split.pool.begin(), split.pool.end());
  std::sort(split.test.begin(), split.test.end());
  if (split.test.empty()) fail(errc::degenerate_input, "empty test split");
  return split;
}

MassFunction Oracle::reveal(int dataset_index) {
  if (dataset_index < 0 || static_cast<size_t>(dataset_index) >= data_.size())
    fail(errc::bad_argument, "reveal index out of range");
  if (seen_[static_cast<size_t>(dataset_index)])
    fail(errc::already_labeled,
         "instance " + std::to_string(dataset_index) + " was already revealed");
  if (mode_ == LabelMode::rich && !data_.native_rich_labels)
    fail(errc::no_rich_label, "dataset '" + data_.name + "' has crisp labels only");
  seen_[static_cast<size_t>(dataset_index)] = true;
  if (mode_ == LabelMode::rich) return data_.rich_labels[static_cast<size_t>(dataset_index)];
  return categorical_mass(data_.frame,
                          FocalSet::singleton(data_.true_labels[static_cast<size_t>(dataset_index)]));
}

int select_query(const QueryStrategy& strategy, const FittedModels& models,
                 const Matrix& candidates, Rng& rng) {
  if (candidates.rows == 0) fail(errc::empty_pool, "no unlabeled candidates");
  if (strategy.kind == StrategyKind::random)
    return static_cast<int>(rng.index(candidates.rows));

  auto score = [&](size_t row) -> double {
    const auto x = candidates.row(row);
    switch (strategy.kind) {
      case StrategyKind::entropy:
        return shannon_entropy(models.pknn->predict(x));
      case StrategyKind::least_confidence:
        return least_confidence(models.pknn->predict(x));
      case StrategyKind::klir:
        return klir(models.eknn->predict(x), *strategy.klir_lambda);
      case StrategyKind::evid_epistemic:
        return evidential_epistemic_aleatoric(models.eknn->predict(x)).epistemic;
      case StrategyKind::rl_epistemic: {
        const std::vector<double> counts = models.pknn->weighted_counts(x);
        return relative_likelihood_binary(counts[1], counts[0]).epistemic;
      }
      default:
        fail(errc::bad_argument, "unscored strategy");
    }
  };

  const bool needs_pknn = strategy.kind == StrategyKind::entropy ||
                          strategy.kind == StrategyKind::least_confidence ||
                          strategy.kind == StrategyKind::rl_epistemic;
  if (needs_pknn && !models.pknn)
    fail(errc::bad_argument, "strategy needs the probabilistic model");
  if (!needs_pknn && !models.eknn)
    fail(errc::bad_argument, "strategy needs the evidential model");

  int best = 0;
  double best_score = score(0);
  for (size_t row = 1; row < candidates.rows; ++row) {
    const double s = score(row);
    if (s > best_score) {  // strict: ties keep the lowest row
      best_score = s;
      best = static_cast<int>(row);
    }
  }
  return best;
}

double evaluate_accuracy(const EknnModel& model, const RichDataset& data,
                         std::span<const int> test_indices) {
  if (test_indices.empty()) fail(errc::degenerate_input, "empty test set");
  size_t hits = 0;
  for (int row : test_indices) {
    if (model.predict_class(data.features.row(static_cast<size_t>(row))) ==
        data.true_labels[static_cast<size_t>(row)])
      ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test_indices.size());
}

double auac(std::span<const double> curve) {
  if (curve.empty()) fail(errc::empty_curve, "AUAC of an empty curve");
  double sum = 0.0;
  for (double a : curve) sum += a;
  return 100.0 * sum / static_cast<double>(curve.size());
}

namespace {

struct RepContext {
  const RichDataset& data;
  const ALConfig& config;
  LabelMode mode;
};

RepetitionResult run_repetition(const RepContext& ctx, int rep) {
  const auto started = std::chrono::steady_clock::now();
  RepetitionResult out;
  const RichDataset& data = ctx.data;
  const ALConfig& cfg = ctx.config;
  const int classes = data.num_classes();

  Rng rng = Rng::child(cfg.seed, static_cast<uint64_t>(rep));
  const SplitIndices split =
      stratified_split(data.true_labels, classes, cfg.test_fraction, rng);

  // Seed set: one random instance of every class (or the first
  // `initial_labeled` classes when that is smaller), topped up uniformly.
  const int initial = cfg.initial_labeled == 0
                          ? classes
                          : std::min<int>(cfg.initial_labeled,
                                          static_cast<int>(split.pool.size()));
  std::vector<int> unlabeled = split.pool;  // stays sorted ascending
  std::vector<int> labeled;
  std::vector<MassFunction> labeled_masses;
  Oracle oracle(data, ctx.mode);
  auto reveal = [&](int row) {
    labeled_masses.push_back(oracle.reveal(row));
    labeled.push_back(row);
    unlabeled.erase(std::find(unlabeled.begin(), unlabeled.end(), row));
  };
  for (int c = 0; c < classes && static_cast<int>(labeled.size()) < initial; ++c) {
    std::vector<int> members;
    for (int row : unlabeled)
      if (data.true_labels[static_cast<size_t>(row)] == c) members.push_back(row);
    if (!members.empty()) reveal(members[rng.index(members.size())]);
  }
  while (static_cast<int>(labeled.size()) < initial)
    reveal(unlabeled[rng.index(unlabeled.size())]);

  const int target = std::max<int>(
      static_cast<int>(labeled.size()),
      static_cast<int>(std::ceil(cfg.budget_fraction *
                                 static_cast<double>(split.pool.size()))));

  const bool needs_pknn = cfg.strategy.kind == StrategyKind::entropy ||
                          cfg.strategy.kind == StrategyKind::least_confidence ||
                          cfg.strategy.kind == StrategyKind::rl_epistemic;
  if (cfg.strategy.kind == StrategyKind::rl_epistemic && classes != 2)
    fail(errc::bad_argument, "rl_epistemic applies to two-class data only");

  auto fit_models = [&](const std::vector<int>& rows,
                        const std::vector<MassFunction>& masses,
                        std::optional<EknnModel>& eknn, std::optional<PknnModel>& pknn) {
    const Matrix feats = data.features.take_rows(rows);
    const int k_eff = std::min<int>(cfg.model.k, static_cast<int>(rows.size()));
    eknn = EknnModel::fit(feats, masses, k_eff, cfg.model.alpha0, cfg.model.gamma);
    if (needs_pknn) {
      // Conventional strategies score with hard ground-truth labels.
      std::vector<int> crisp;
      crisp.reserve(rows.size());
      for (int row : rows) crisp.push_back(data.true_labels[static_cast<size_t>(row)]);
      pknn = PknnModel::fit(feats, std::move(crisp), data.frame, k_eff);
    }
  };

  std::optional<EknnModel> eknn;
  std::optional<PknnModel> pknn;
  while (true) {
    fit_models(labeled, labeled_masses, eknn, pknn);
    out.accuracy_curve.push_back(evaluate_accuracy(*eknn, data, split.test));
    out.labeled_counts.push_back(static_cast<int>(labeled.size()));
    if (static_cast<int>(labeled.size()) >= target) break;
    const int batch =
        std::min<int>(cfg.batch_size, target - static_cast<int>(labeled.size()));
    for (int b = 0; b < batch; ++b) {
      const Matrix candidates = data.features.take_rows(unlabeled);
      FittedModels models{eknn ? &*eknn : nullptr, pknn ? &*pknn : nullptr};
      const int pos = select_query(cfg.strategy, models, candidates, rng);
      reveal(unlabeled[static_cast<size_t>(pos)]);
    }
  }
  out.queries = labeled;
  out.auac = auac(out.accuracy_curve);

  // Reference ceiling: the same split with the entire pool labeled.
  for (int row : split.pool)
    if (!oracle.revealed(row)) reveal(row);
  std::optional<EknnModel> full_eknn;
  std::optional<PknnModel> unused;
  fit_models(labeled, labeled_masses, full_eknn, unused);
  out.full_pool_accuracy = evaluate_accuracy(*full_eknn, data, split.test);

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace

ALRunResult run_active_learning(const RichDataset& data, const ALConfig& config,
                                int parallelism) {
  data.validate();
  config.validate();
  const LabelMode mode = config.label_mode
                             ? *config.label_mode
                             : (data.native_rich_labels ? LabelMode::rich
                                                        : LabelMode::crisp);
  if (mode == LabelMode::rich && !data.native_rich_labels)
    fail(errc::no_rich_label, "dataset '" + data.name + "' has crisp labels only");
  if (config.strategy.kind == StrategyKind::rl_epistemic && data.num_classes() != 2)
    fail(errc::bad_argument, "rl_epistemic applies to two-class data only");

  ALRunResult result;
  result.dataset = data.name;
  result.config = config;
  result.repetitions.resize(static_cast<size_t>(config.repetitions));
  const RepContext ctx{data, config, mode};
  parallel_for(static_cast<size_t>(config.repetitions), parallelism, [&](size_t rep) {
    try {
      result.repetitions[rep] = run_repetition(ctx, static_cast<int>(rep));
    } catch (const Error& e) {
      // A failed repetition must not abort the batch; keep the reason.
      result.repetitions[rep] = RepetitionResult{};
      result.repetitions[rep].diagnostic = e.what();
    }
  });
  return result;
}

}  // namespace eal
