#include "eal/classifiers.hpp"

#include <algorithm>
#include <cmath>

namespace eal {

Standardizer Standardizer::fit(const Matrix& features) {
  if (features.rows == 0) fail(errc::too_few_instances, "no rows to standardize");
  Standardizer s;
  s.mean.assign(features.cols, 0.0);
  s.stdev.assign(features.cols, 1.0);
  for (size_t i = 0; i < features.rows; ++i)
    for (size_t j = 0; j < features.cols; ++j) s.mean[j] += features.at(i, j);
  for (double& m : s.mean) m /= static_cast<double>(features.rows);
  if (features.rows > 1) {
    std::vector<double> ss(features.cols, 0.0);
    for (size_t i = 0; i < features.rows; ++i)
      for (size_t j = 0; j < features.cols; ++j) {
        const double d = features.at(i, j) - s.mean[j];
        ss[j] += d * d;
      }
    for (size_t j = 0; j < features.cols; ++j) {
      const double sd = std::sqrt(ss[j] / static_cast<double>(features.rows));
      if (sd > 0.0) s.stdev[j] = sd;
    }
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / stdev[j];
  return out;
}

Matrix Standardizer::apply(const Matrix& features) const {
  Matrix out(features.rows, features.cols);
  for (size_t i = 0; i < features.rows; ++i)
    for (size_t j = 0; j < features.cols; ++j)
      out.at(i, j) = (features.at(i, j) - mean[j]) / stdev[j];
  return out;
}

std::vector<std::pair<double, int>> k_nearest(const Matrix& train,
                                              std::span<const double> x, int k) {
  std::vector<std::pair<double, int>> all;
  all.reserve(train.rows);
  for (size_t i = 0; i < train.rows; ++i)
    all.emplace_back(squared_distance(train.row(i), x), static_cast<int>(i));
  const size_t keep = std::min<size_t>(static_cast<size_t>(k), all.size());
  std::partial_sort(all.begin(), all.begin() + keep, all.end());
  all.resize(keep);
  return all;
}

namespace {

// Average squared pairwise distance over at most `budget` pairs, walked with
// a fixed stride through the lexicographic pair enumeration so the sample is
// reproducible and spread across the data.
double mean_squared_pairwise(const Matrix& rows, size_t budget = 10000) {
  const size_t n = rows.rows;
  if (n < 2) return 0.0;
  const size_t total = n * (n - 1) / 2;
  const size_t stride = (total + budget - 1) / budget;
  double sum = 0.0;
  size_t used = 0;
  for (size_t t = 0; t * stride < total; ++t) {
    size_t linear = t * stride;
    // Unflatten the pair index: row i owns (n - 1 - i) pairs.
    size_t i = 0, span = n - 1;
    while (linear >= span) {
      linear -= span;
      ++i;
      --span;
    }
    const size_t j = i + 1 + linear;
    sum += squared_distance(rows.row(i), rows.row(j));
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

}  // namespace

EknnModel EknnModel::fit(const Matrix& features, std::vector<MassFunction> labels,
                         int k, double alpha0, GammaMode gamma) {
  if (features.rows == 0)
    fail(errc::too_few_instances, "cannot fit on an empty training set");
  if (features.rows != labels.size())
    fail(errc::bad_argument, "feature rows and label count differ");
  if (k < 1) fail(errc::bad_argument, "k must be at least 1");
  if (static_cast<size_t>(k) > features.rows)
    fail(errc::too_few_instances, "k exceeds the number of training instances");
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0))
    fail(errc::bad_argument, "alpha0 must be in [0, 1]");
  for (size_t i = 1; i < labels.size(); ++i)
    if (!same_frame(labels[i].frame(), labels[0].frame()))
      fail(errc::frame_mismatch, "training labels use different frames");

  EknnModel model;
  model.scaler_ = Standardizer::fit(features);
  model.train_ = model.scaler_.apply(features);
  model.frame_ = labels[0].frame();
  model.labels_ = std::move(labels);
  model.k_ = k;
  model.alpha0_ = alpha0;
  if (gamma.automatic) {
    const double msd = mean_squared_pairwise(model.train_);
    model.gamma_ = msd > 1e-12 ? 1.0 / msd : 1.0;
  } else {
    if (!(gamma.value > 0.0)) fail(errc::bad_argument, "gamma must be positive");
    model.gamma_ = gamma.value;
  }
  return model;
}

MassFunction EknnModel::predict(std::span<const double> x) const {
  const std::vector<double> z = scaler_.apply(x);
  const auto neighbours = k_nearest(train_, z, k_);
  auto fuse = [&](double penalty) {
    std::optional<MassFunction> combined;
    for (const auto& [d2, idx] : neighbours) {
      const double alpha = alpha0_ * std::exp(-gamma_ * d2) * penalty;
      MassFunction contribution = discount(labels_[static_cast<size_t>(idx)], alpha);
      combined = combined ? dempster_combine(*combined, contribution)
                          : std::move(contribution);
    }
    return *combined;
  };
  try {
    return fuse(1.0);
  } catch (const Error& e) {
    if (e.code() != errc::total_conflict) throw;
    // Fully certain, fully conflicting neighbours (alpha0 == 1 on disjoint
    // labels).  A hair of extra discounting restores a defined result.
    return fuse(1.0 - 1e-6);
  }
}

int EknnModel::predict_class(std::span<const double> x) const {
  return betp(predict(x)).argmax();
}

PknnModel PknnModel::fit(const Matrix& features, std::vector<int> labels,
                         FramePtr frame, int k) {
  if (features.rows == 0)
    fail(errc::too_few_instances, "cannot fit on an empty training set");
  if (features.rows != labels.size())
    fail(errc::bad_argument, "feature rows and label count differ");
  if (k < 1) fail(errc::bad_argument, "k must be at least 1");
  if (static_cast<size_t>(k) > features.rows)
    fail(errc::too_few_instances, "k exceeds the number of training instances");
  for (int y : labels)
    if (y < 0 || y >= frame->size())
      fail(errc::unknown_class, "label index " + std::to_string(y));

  PknnModel model;
  model.scaler_ = Standardizer::fit(features);
  model.train_ = model.scaler_.apply(features);
  model.labels_ = std::move(labels);
  model.frame_ = std::move(frame);
  model.k_ = k;
  return model;
}

std::vector<double> PknnModel::weighted_counts(std::span<const double> x) const {
  const std::vector<double> z = scaler_.apply(x);
  const auto neighbours = k_nearest(train_, z, k_);
  std::vector<double> counts(static_cast<size_t>(frame_->size()), 0.0);
  bool exact_hit = false;
  for (const auto& [d2, idx] : neighbours) {
    if (d2 == 0.0) {
      if (!exact_hit) std::fill(counts.begin(), counts.end(), 0.0);
      exact_hit = true;
      counts[static_cast<size_t>(labels_[static_cast<size_t>(idx)])] = 1.0;
    } else if (!exact_hit) {
      counts[static_cast<size_t>(labels_[static_cast<size_t>(idx)])] +=
          1.0 / std::sqrt(d2);
    }
  }
  return counts;
}

ProbabilityVector PknnModel::predict(std::span<const double> x) const {
  std::vector<double> counts = weighted_counts(x);
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) fail(errc::degenerate_input, "no usable neighbour weights");
  for (double& c : counts) c /= total;
  return {frame_, std::move(counts)};
}

}  // namespace eal
