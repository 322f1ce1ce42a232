#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eal/error.hpp"

namespace eal {

// Frame of discernment: an ordered list of distinct class labels.
class Frame {
 public:
  static constexpr int max_classes = 20;

  explicit Frame(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;  // -1 when absent

  bool operator==(const Frame& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
};

using FramePtr = std::shared_ptr<const Frame>;

FramePtr make_frame(std::vector<std::string> labels);
FramePtr make_frame(int num_classes);  // labels "0", "1", ...

inline bool same_frame(const FramePtr& a, const FramePtr& b) {
  return a == b || (a && b && *a == *b);
}

// Subset of frame elements, one bit per class index.
class FocalSet {
 public:
  constexpr FocalSet() = default;
  constexpr explicit FocalSet(uint32_t bits) : bits_(bits) {}

  static FocalSet singleton(int i) { return FocalSet(1u << i); }
  static FocalSet of(std::initializer_list<int> indices);
  static FocalSet universe(int num_classes) {
    return FocalSet(num_classes == 32 ? ~0u : (1u << num_classes) - 1u);
  }

  uint32_t bits() const { return bits_; }
  int count() const { return __builtin_popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  bool contains(int i) const { return (bits_ >> i) & 1u; }
  bool is_subset_of(FocalSet other) const { return (bits_ & ~other.bits_) == 0; }
  bool intersects(FocalSet other) const { return (bits_ & other.bits_) != 0; }
  FocalSet intersect(FocalSet other) const { return FocalSet(bits_ & other.bits_); }
  FocalSet unite(FocalSet other) const { return FocalSet(bits_ | other.bits_); }
  FocalSet complement(int num_classes) const {
    return FocalSet(~bits_ & universe(num_classes).bits_);
  }
  std::vector<int> indices() const;

  auto operator<=>(const FocalSet&) const = default;

 private:
  uint32_t bits_ = 0;
};

struct FocalMass {
  FocalSet set;
  double mass = 0.0;
  bool operator==(const FocalMass&) const = default;
};

enum class Renormalize { off, on };

// Mass sums within this distance of 1 are accepted verbatim.
inline constexpr double mass_sum_tolerance = 1e-9;
// With Renormalize::on, sums off by up to this much are rescaled to 1.
inline constexpr double renormalize_limit = 0.01;

// Mass function over the powerset of a frame.  Focal elements are stored
// sparsely, sorted by bit pattern, with strictly positive masses summing to 1.
class MassFunction {
 public:
  const FramePtr& frame() const { return frame_; }
  const std::vector<FocalMass>& focal() const { return focal_; }
  int num_focal() const { return static_cast<int>(focal_.size()); }
  double mass_of(FocalSet set) const;  // 0 when not focal
  bool is_bayesian() const;            // all focal elements singletons
  bool is_vacuous() const;             // single focal element, the whole frame

  bool operator==(const MassFunction& other) const {
    return same_frame(frame_, other.frame_) && focal_ == other.focal_;
  }

 private:
  MassFunction(FramePtr frame, std::vector<FocalMass> focal)
      : frame_(std::move(frame)), focal_(std::move(focal)) {}
  friend MassFunction make_mass(FramePtr, std::vector<FocalMass>, Renormalize);
  friend MassFunction mean_combine(std::span<const MassFunction>);
  friend MassFunction dempster_combine(const MassFunction&, const MassFunction&);
  friend MassFunction discount(const MassFunction&, double);

  FramePtr frame_;
  std::vector<FocalMass> focal_;
};

// Validates, sorts and deduplicates an assignment.  Zero-mass entries are
// dropped; duplicate subsets are accumulated.  Throws empty_focal, bad_subset,
// bad_argument (negative mass) or sum_not_one.
MassFunction make_mass(FramePtr frame, std::vector<FocalMass> assignment,
                       Renormalize renorm = Renormalize::off);

MassFunction categorical_mass(FramePtr frame, FocalSet set);
MassFunction vacuous_mass(FramePtr frame);
MassFunction bayesian_mass(FramePtr frame, std::span<const double> probabilities);

// Probability distribution over the classes of a frame.
struct ProbabilityVector {
  FramePtr frame;
  std::vector<double> p;
  int argmax() const;  // ties broken toward the lowest class index
};

// Pignistic transform: BetP(w) = sum_{A contains w} m(A) / |A|.
ProbabilityVector betp(const MassFunction& m);
double betp_subset(const MassFunction& m, FocalSet set);

double bel(const MassFunction& m, FocalSet set);
double pl(const MassFunction& m, FocalSet set);

// Focal-wise arithmetic mean of mass functions on a shared frame.
MassFunction mean_combine(std::span<const MassFunction> masses);

// Dempster's rule: conjunctive combination renormalized by 1 - conflict.
// Throws total_conflict when the combined masses agree on nothing.
MassFunction dempster_combine(const MassFunction& a, const MassFunction& b);

// Shafer discounting: scales every proper focal element by alpha and moves
// the removed mass onto the whole frame.
MassFunction discount(const MassFunction& m, double alpha);

}  // namespace eal
