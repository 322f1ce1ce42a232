#pragma once

#include <string>
#include <vector>

#include "eal/belief.hpp"
#include "eal/matrix.hpp"
#include "eal/rng.hpp"

namespace eal {

// A dataset with crisp ground truth and a mass-function label per instance.
// When the source provides only crisp labels the rich labels are the
// corresponding categorical masses and native_rich_labels stays false.
struct RichDataset {
  std::string name;
  Matrix features;
  FramePtr frame;
  std::vector<int> true_labels;
  std::vector<MassFunction> rich_labels;
  bool native_rich_labels = false;

  size_t size() const { return features.rows; }
  int num_classes() const { return frame->size(); }
  void validate() const;  // length and frame consistency
};

struct CsvSchema {
  std::string label_column = "label";
  std::string rich_label_column = "rich_label";
};

// CSV layout: header row naming feature columns plus `label` and an optional
// `rich_label` column.  Classes are the sorted distinct label strings; rich
// labels reference class indices in that order.
RichDataset load_csv(const std::string& path, const CsvSchema& schema = {});
void save_csv(const RichDataset& data, const std::string& path);

// Text form of a mass function: `subset ":" mass (";" subset ":" mass)*`
// where a subset is class indices joined by `|` (e.g. "0:0.5;0|1:0.5").
MassFunction parse_rich_label(const FramePtr& frame, const std::string& text);

// Masses are written with 9 decimal digits, adjusted so the printed digits
// sum to exactly 1.000000000; parsing the output reproduces it bit-for-bit.
std::string format_rich_label(const MassFunction& m);

enum class SyntheticKind {
  line,                   // two classes split by a straight line
  sine,                   // two classes split by a sine wave
  circle,                 // inside vs outside a circle
  two_blob_ignorance,     // two Gaussian blobs, partial ignorance between them
  three_class_imprecise,  // three blobs, a fraction of labels imprecise
};

SyntheticKind parse_synthetic_kind(const std::string& name);  // throws schema_error
const char* synthetic_kind_name(SyntheticKind kind);

struct SyntheticOptions {
  // Fraction of instances given a set-valued label component (imprecise kinds).
  double imprecise_fraction = 0.2;
  // Mass placed on the 2-class subset; the rest stays on the true singleton.
  double pair_mass = 0.5;
};

// Pure function of its arguments: identical rng states give identical data.
RichDataset generate_synthetic(SyntheticKind kind, int n, double noise, Rng& rng,
                               const SyntheticOptions& options = {});

// Stand-in for the crowdsourced rich-label dog photographs: a fixed-seed
// two-blob ignorance set rotated isometrically into 42 feature dimensions,
// matching the published shape (N=200, d=42, M=2).
RichDataset dog2_surrogate();

// Resolves a dataset name: built-in synthetic names are generated on the fly
// with fixed seeds, "dog2" falls back to the surrogate when no file exists,
// anything else loads <data_dir>/<name>.csv.
RichDataset load_dataset(const std::string& name, const std::string& data_dir);

}  // namespace eal
