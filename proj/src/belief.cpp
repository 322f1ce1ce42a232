#include "eal/belief.hpp"

#include <algorithm>
#include <cmath>

namespace eal {

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  const int m = static_cast<int>(labels_.size());
  if (m < 2 || m > max_classes)
    fail(errc::bad_argument,
         "frame must have between 2 and 20 classes, got " + std::to_string(m));
  for (size_t i = 0; i < labels_.size(); ++i)
    for (size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j])
        fail(errc::bad_argument, "duplicate class label '" + labels_[i] + "'");
}

int Frame::index_of(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

FramePtr make_frame(std::vector<std::string> labels) {
  return std::make_shared<const Frame>(std::move(labels));
}

FramePtr make_frame(int num_classes) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(num_classes));
  for (int i = 0; i < num_classes; ++i) labels.push_back(std::to_string(i));
  return make_frame(std::move(labels));
}

FocalSet FocalSet::of(std::initializer_list<int> indices) {
  uint32_t bits = 0;
  for (int i : indices) bits |= 1u << i;
  return FocalSet(bits);
}

std::vector<int> FocalSet::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

double MassFunction::mass_of(FocalSet set) const {
  auto it = std::lower_bound(
      focal_.begin(), focal_.end(), set,
      [](const FocalMass& fm, FocalSet s) { return fm.set < s; });
  return (it != focal_.end() && it->set == set) ? it->mass : 0.0;
}

bool MassFunction::is_bayesian() const {
  return std::all_of(focal_.begin(), focal_.end(),
                     [](const FocalMass& fm) { return fm.set.count() == 1; });
}

bool MassFunction::is_vacuous() const {
  return focal_.size() == 1 && focal_[0].set == FocalSet::universe(frame_->size());
}

namespace {

// Sorts by bit pattern and accumulates duplicate subsets.
void sort_and_merge(std::vector<FocalMass>& focal) {
  std::sort(focal.begin(), focal.end(),
            [](const FocalMass& a, const FocalMass& b) { return a.set < b.set; });
  size_t out = 0;
  for (size_t i = 0; i < focal.size(); ++i) {
    if (out > 0 && focal[out - 1].set == focal[i].set)
      focal[out - 1].mass += focal[i].mass;
    else
      focal[out++] = focal[i];
  }
  focal.resize(out);
}

}  // namespace

MassFunction make_mass(FramePtr frame, std::vector<FocalMass> assignment,
                       Renormalize renorm) {
  if (!frame) fail(errc::bad_argument, "mass function needs a frame");
  const FocalSet universe = FocalSet::universe(frame->size());
  std::vector<FocalMass> focal;
  focal.reserve(assignment.size());
  for (const FocalMass& fm : assignment) {
    if (fm.mass < 0.0)
      fail(errc::bad_argument, "negative mass " + std::to_string(fm.mass));
    if (fm.mass == 0.0) continue;
    if (fm.set.empty()) fail(errc::empty_focal, "empty set cannot carry mass");
    if (!fm.set.is_subset_of(universe))
      fail(errc::bad_subset, "subset bits outside a frame of size " +
                                 std::to_string(frame->size()));
    focal.push_back(fm);
  }
  sort_and_merge(focal);

  double sum = 0.0;
  for (const FocalMass& fm : focal) sum += fm.mass;
  const double off = std::fabs(sum - 1.0);
  if (off > mass_sum_tolerance) {
    if (renorm == Renormalize::on && off <= renormalize_limit) {
      for (FocalMass& fm : focal) fm.mass /= sum;
    } else {
      fail(errc::sum_not_one, "masses sum to " + std::to_string(sum));
    }
  }
  if (focal.empty()) fail(errc::sum_not_one, "no positive masses given");
  return MassFunction(std::move(frame), std::move(focal));
}

MassFunction categorical_mass(FramePtr frame, FocalSet set) {
  return make_mass(std::move(frame), {{set, 1.0}});
}

MassFunction vacuous_mass(FramePtr frame) {
  const int m = frame->size();
  return make_mass(std::move(frame), {{FocalSet::universe(m), 1.0}});
}

MassFunction bayesian_mass(FramePtr frame, std::span<const double> probabilities) {
  if (static_cast<int>(probabilities.size()) != frame->size())
    fail(errc::bad_argument, "probability vector length does not match frame");
  std::vector<FocalMass> focal;
  for (size_t i = 0; i < probabilities.size(); ++i)
    focal.push_back({FocalSet::singleton(static_cast<int>(i)), probabilities[i]});
  return make_mass(std::move(frame), std::move(focal));
}

int ProbabilityVector::argmax() const {
  int best = 0;
  for (size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = static_cast<int>(i);
  return best;
}

ProbabilityVector betp(const MassFunction& m) {
  const int classes = m.frame()->size();
  std::vector<double> p(static_cast<size_t>(classes), 0.0);
  for (const FocalMass& fm : m.focal()) {
    const double share = fm.mass / fm.set.count();
    for (int w = 0; w < classes; ++w)
      if (fm.set.contains(w)) p[static_cast<size_t>(w)] += share;
  }
  return {m.frame(), std::move(p)};
}

namespace {

void check_query_set(const MassFunction& m, FocalSet set) {
  if (set.empty()) fail(errc::empty_focal, "query set must be non-empty");
  if (!set.is_subset_of(FocalSet::universe(m.frame()->size())))
    fail(errc::bad_subset, "subset bits outside the frame");
}

}  // namespace

double betp_subset(const MassFunction& m, FocalSet set) {
  check_query_set(m, set);
  double total = 0.0;
  for (const FocalMass& fm : m.focal()) {
    const int overlap = fm.set.intersect(set).count();
    if (overlap > 0) total += fm.mass * overlap / fm.set.count();
  }
  return total;
}

double bel(const MassFunction& m, FocalSet set) {
  check_query_set(m, set);
  double total = 0.0;
  for (const FocalMass& fm : m.focal())
    if (fm.set.is_subset_of(set)) total += fm.mass;
  return total;
}

double pl(const MassFunction& m, FocalSet set) {
  check_query_set(m, set);
  double total = 0.0;
  for (const FocalMass& fm : m.focal())
    if (fm.set.intersects(set)) total += fm.mass;
  return total;
}

MassFunction mean_combine(std::span<const MassFunction> masses) {
  if (masses.empty()) fail(errc::empty_list, "mean of zero mass functions");
  const FramePtr& frame = masses[0].frame();
  std::vector<FocalMass> merged;
  for (const MassFunction& m : masses) {
    if (!same_frame(m.frame(), frame))
      fail(errc::frame_mismatch, "mean across different frames");
    merged.insert(merged.end(), m.focal().begin(), m.focal().end());
  }
  sort_and_merge(merged);
  const double n = static_cast<double>(masses.size());
  for (FocalMass& fm : merged) fm.mass /= n;
  return MassFunction(frame, std::move(merged));
}

MassFunction dempster_combine(const MassFunction& a, const MassFunction& b) {
  if (!same_frame(a.frame(), b.frame()))
    fail(errc::frame_mismatch, "Dempster combination across different frames");
  std::vector<FocalMass> products;
  products.reserve(a.focal().size() * b.focal().size());
  double conflict = 0.0;
  for (const FocalMass& fa : a.focal()) {
    for (const FocalMass& fb : b.focal()) {
      const FocalSet inter = fa.set.intersect(fb.set);
      const double w = fa.mass * fb.mass;
      if (inter.empty())
        conflict += w;
      else
        products.push_back({inter, w});
    }
  }
  sort_and_merge(products);
  double kept = 0.0;
  for (const FocalMass& fm : products) kept += fm.mass;
  if (kept <= 1e-12)
    fail(errc::total_conflict,
         "conflict weight " + std::to_string(conflict) + " leaves nothing to keep");
  for (FocalMass& fm : products) fm.mass /= kept;
  return MassFunction(a.frame(), std::move(products));
}

MassFunction discount(const MassFunction& m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(errc::bad_argument, "discount rate must be in [0, 1]");
  const FocalSet universe = FocalSet::universe(m.frame()->size());
  std::vector<FocalMass> focal;
  double on_universe = 1.0 - alpha;
  for (const FocalMass& fm : m.focal()) {
    if (fm.set == universe)
      on_universe += alpha * fm.mass;
    else if (alpha > 0.0)
      focal.push_back({fm.set, alpha * fm.mass});
  }
  if (on_universe > 0.0) focal.push_back({universe, on_universe});
  sort_and_merge(focal);
  return MassFunction(m.frame(), std::move(focal));
}

}  // namespace eal
