#pragma once

#include <optional>
#include <span>
#include <vector>

#include "eal/belief.hpp"
#include "eal/matrix.hpp"

namespace eal {

// Per-column z-score transform.  Constant columns keep stdev 1 so they map
// to exactly zero instead of dividing by zero.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stdev;

  static Standardizer fit(const Matrix& features);
  std::vector<double> apply(std::span<const double> x) const;
  Matrix apply(const Matrix& features) const;
};

struct GammaMode {
  bool automatic = true;
  double value = 1.0;

  static GammaMode autocal() { return {true, 1.0}; }
  static GammaMode fixed(double gamma) { return {false, gamma}; }
};

// (squared distance, training index) pairs of the k nearest training rows,
// ordered by distance with index as the tie-break.
std::vector<std::pair<double, int>> k_nearest(const Matrix& train,
                                              std::span<const double> x, int k);

// Evidential k-nearest-neighbour classifier.  Each neighbour contributes its
// (possibly set-valued) label discounted by alpha0 * exp(-gamma * d^2); the
// contributions are fused with Dempster's rule.
class EknnModel {
 public:
  static EknnModel fit(const Matrix& features, std::vector<MassFunction> labels,
                       int k = 7, double alpha0 = 0.95,
                       GammaMode gamma = GammaMode::autocal());

  MassFunction predict(std::span<const double> x) const;
  int predict_class(std::span<const double> x) const;  // argmax of BetP

  double gamma() const { return gamma_; }
  int k() const { return k_; }
  const FramePtr& frame() const { return frame_; }
  const Standardizer& scaler() const { return scaler_; }
  size_t train_size() const { return train_.rows; }

 private:
  EknnModel() = default;

  Matrix train_;  // standardized copies of the training rows
  std::vector<MassFunction> labels_;
  Standardizer scaler_;
  FramePtr frame_;
  int k_ = 7;
  double alpha0_ = 0.95;
  double gamma_ = 1.0;
};

// Distance-weighted voting k-NN over crisp labels; the probabilistic
// baseline the conventional strategies score with.
class PknnModel {
 public:
  static PknnModel fit(const Matrix& features, std::vector<int> labels,
                       FramePtr frame, int k = 7);

  // Unnormalized per-class weights: sum of 1/d over the k nearest
  // neighbours of each class.  If any neighbour sits at distance zero the
  // weights collapse to indicators of the zero-distance classes.
  std::vector<double> weighted_counts(std::span<const double> x) const;
  ProbabilityVector predict(std::span<const double> x) const;

  const FramePtr& frame() const { return frame_; }
  int k() const { return k_; }
  size_t train_size() const { return train_.rows; }

 private:
  PknnModel() = default;

  Matrix train_;
  std::vector<int> labels_;
  Standardizer scaler_;
  FramePtr frame_;
  int k_ = 7;
};

}  // namespace eal
