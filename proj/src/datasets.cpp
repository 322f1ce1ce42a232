#include "eal/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "eal/format.hpp"

namespace eal {

void RichDataset::validate() const {
  if (!frame) fail(errc::bad_argument, "dataset has no frame");
  const size_t n = features.rows;
  if (true_labels.size() != n || rich_labels.size() != n)
    fail(errc::bad_argument, "dataset column lengths are inconsistent");
  for (int y : true_labels)
    if (y < 0 || y >= frame->size())
      fail(errc::unknown_class, "true label index " + std::to_string(y));
  for (const MassFunction& m : rich_labels)
    if (!same_frame(m.frame(), frame))
      fail(errc::frame_mismatch, "rich label on a different frame");
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

MassFunction parse_rich_label(const FramePtr& frame, const std::string& text) {
  if (trimmed(text).empty()) fail(errc::parse_error, "empty rich label");
  std::vector<FocalMass> assignment;
  for (const std::string& part : split(text, ';')) {
    const size_t colon = part.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == part.size())
      fail(errc::parse_error, "rich label entry '" + part + "' is not subset:mass");
    FocalSet set;
    for (const std::string& tok : split(part.substr(0, colon), '|')) {
      const long long idx = parse_int(trimmed(tok), "rich label class index");
      if (idx < 0 || idx >= frame->size())
        fail(errc::parse_error,
             "rich label class index " + std::to_string(idx) + " out of range");
      set = set.unite(FocalSet::singleton(static_cast<int>(idx)));
    }
    const double mass = parse_double(trimmed(part.substr(colon + 1)), "rich label mass");
    assignment.push_back({set, mass});
  }
  return make_mass(frame, std::move(assignment), Renormalize::on);
}

std::string format_rich_label(const MassFunction& m) {
  constexpr long long grain = 1000000000LL;  // 9 decimal digits
  const auto& focal = m.focal();
  std::vector<long long> grains(focal.size());
  long long total = 0;
  size_t largest = 0;
  for (size_t i = 0; i < focal.size(); ++i) {
    grains[i] = std::llround(focal[i].mass * static_cast<double>(grain));
    total += grains[i];
    if (focal[i].mass > focal[largest].mass) largest = i;
  }
  // Push the rounding remainder onto the largest mass so the printed digits
  // sum to exactly 1; reparsing then never triggers renormalization.
  grains[largest] += grain - total;
  std::string out;
  for (size_t i = 0; i < focal.size(); ++i) {
    if (i > 0) out += ';';
    const std::vector<int> idx = focal[i].set.indices();
    for (size_t j = 0; j < idx.size(); ++j) {
      if (j > 0) out += '|';
      out += std::to_string(idx[j]);
    }
    out += ':';
    out += std::to_string(grains[i] / grain);
    out += '.';
    std::string frac = std::to_string(grains[i] % grain);
    out += std::string(9 - frac.size(), '0') + frac;
  }
  return out;
}

RichDataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open dataset file " + path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::parse_error, path + ": empty file");

  const std::vector<std::string> header = split(line, ',');
  int label_col = -1, rich_col = -1;
  std::vector<int> feature_cols;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string name = trimmed(header[c]);
    if (name == schema.label_column)
      label_col = static_cast<int>(c);
    else if (name == schema.rich_label_column)
      rich_col = static_cast<int>(c);
    else
      feature_cols.push_back(static_cast<int>(c));
  }
  if (label_col < 0)
    fail(errc::parse_error, path + ": no '" + schema.label_column + "' column");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::vector<std::string> rich_texts;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size())
      fail(errc::parse_error, path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " cells, got " +
                                  std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(feature_cols.size());
    for (int c : feature_cols)
      row.push_back(parse_double(trimmed(cells[static_cast<size_t>(c)]),
                                 path + ":" + std::to_string(line_no)));
    rows.push_back(std::move(row));
    labels.push_back(trimmed(cells[static_cast<size_t>(label_col)]));
    if (rich_col >= 0) rich_texts.push_back(trimmed(cells[static_cast<size_t>(rich_col)]));
  }
  if (rows.empty()) fail(errc::parse_error, path + ": no data rows");

  // Classes are the sorted distinct label strings, so the frame (and the
  // indices rich labels refer to) is independent of row order.
  std::vector<std::string> classes = labels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  RichDataset data;
  data.name = std::filesystem::path(path).stem().string();
  data.frame = make_frame(classes);
  data.features = Matrix(rows.size(), feature_cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), data.features.row(i).begin());
  data.true_labels.reserve(rows.size());
  for (const std::string& l : labels) data.true_labels.push_back(data.frame->index_of(l));
  data.rich_labels.reserve(rows.size());
  if (rich_col >= 0) {
    data.native_rich_labels = true;
    for (const std::string& text : rich_texts)
      data.rich_labels.push_back(parse_rich_label(data.frame, text));
  } else {
    for (int y : data.true_labels)
      data.rich_labels.push_back(categorical_mass(data.frame, FocalSet::singleton(y)));
  }
  data.validate();
  return data;
}

void save_csv(const RichDataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
  if (!out) fail(errc::io_error, "cannot write " + path);
  for (size_t j = 0; j < data.features.cols; ++j) out << "f" << j << ",";
  out << "label";
  if (data.native_rich_labels) out << ",rich_label";
  out << "\n";
  for (size_t i = 0; i < data.size(); ++i) {
    for (size_t j = 0; j < data.features.cols; ++j)
      out << format_double(data.features.at(i, j)) << ",";
    out << data.frame->label(data.true_labels[i]);
    if (data.native_rich_labels) out << "," << format_rich_label(data.rich_labels[i]);
    out << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for " + path);
}

const char* synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::line: return "line";
    case SyntheticKind::sine: return "sine";
    case SyntheticKind::circle: return "circle";
    case SyntheticKind::two_blob_ignorance: return "two_blob_ignorance";
    case SyntheticKind::three_class_imprecise: return "three_class_imprecise";
  }
  return "unknown";
}

SyntheticKind parse_synthetic_kind(const std::string& name) {
  for (SyntheticKind k :
       {SyntheticKind::line, SyntheticKind::sine, SyntheticKind::circle,
        SyntheticKind::two_blob_ignorance, SyntheticKind::three_class_imprecise}) {
    if (name == synthetic_kind_name(k)) return k;
  }
  fail(errc::schema_error, "unknown synthetic kind '" + name + "'");
}

namespace {

// Two-class sets separated by s(x, y) = 0.  Points are sampled in the unit
// square, jittered by `noise`, then pushed out of a +/-margin band around the
// boundary so the final labels are separable by construction.
RichDataset boundary_dataset(SyntheticKind kind, int n, double noise, Rng& rng) {
  constexpr double margin = 0.04;
  auto surface = [&](double x, double y) {
    switch (kind) {
      case SyntheticKind::line: return y - (0.3 * x + 0.1);
      case SyntheticKind::sine: return y - 0.4 * std::sin(3.0 * x);
      default: return std::hypot(x, y) - 0.6;  // circle
    }
  };
  RichDataset data;
  data.name = synthetic_kind_name(kind);
  data.frame = make_frame(2);
  data.features = Matrix(static_cast<size_t>(n), 2);
  data.true_labels.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform(-1.0, 1.0) + rng.normal(0.0, noise);
    double y = rng.uniform(-1.0, 1.0) + rng.normal(0.0, noise);
    double s = surface(x, y);
    if (std::fabs(s) < margin) {
      const double push = (s >= 0.0 ? 1.0 : -1.0) * (margin - std::fabs(s));
      if (kind == SyntheticKind::circle) {
        const double r = std::hypot(x, y);
        const double target = 0.6 + (s >= 0.0 ? margin : -margin);
        if (r > 0.0) {
          x *= target / r;
          y *= target / r;
        } else {
          x = target;  // dead centre: move radially along +x
        }
      } else {
        y += push;
      }
      s = surface(x, y);
    }
    data.features.at(static_cast<size_t>(i), 0) = x;
    data.features.at(static_cast<size_t>(i), 1) = y;
    data.true_labels[static_cast<size_t>(i)] = s >= 0.0 ? 1 : 0;
  }
  for (int y : data.true_labels)
    data.rich_labels.push_back(categorical_mass(data.frame, FocalSet::singleton(y)));
  return data;
}

// Indices of the `count` instances most ambiguous under `score` (lower score
// first), ties broken by instance index.
std::vector<size_t> most_ambiguous(const std::vector<double>& score, size_t count) {
  std::vector<size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return score[a] != score[b] ? score[a] < score[b] : a < b;
  });
  order.resize(std::min(count, order.size()));
  return order;
}

RichDataset blob_dataset(SyntheticKind kind, int n, double noise, Rng& rng,
                         const SyntheticOptions& options) {
  const bool three = kind == SyntheticKind::three_class_imprecise;
  const int classes = three ? 3 : 2;
  double cx[3], cy[3];
  if (three) {
    cx[0] = 0.0;    cy[0] = 1.0;
    cx[1] = -0.87;  cy[1] = -0.5;
    cx[2] = 0.87;   cy[2] = -0.5;
  } else {
    cx[0] = -1.0;  cy[0] = 0.0;
    cx[1] = 1.0;   cy[1] = 0.0;
    cx[2] = 0.0;   cy[2] = 0.0;
  }

  RichDataset data;
  data.name = synthetic_kind_name(kind);
  data.frame = make_frame(classes);
  data.features = Matrix(static_cast<size_t>(n), 2);
  data.true_labels.resize(static_cast<size_t>(n));
  data.native_rich_labels = true;
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;  // fixed near-even class counts
    data.features.at(static_cast<size_t>(i), 0) = cx[c] + rng.normal(0.0, noise);
    data.features.at(static_cast<size_t>(i), 1) = cy[c] + rng.normal(0.0, noise);
    data.true_labels[static_cast<size_t>(i)] = c;
  }

  // Ambiguity score: distance to own centre minus distance to the nearest
  // other centre; the smallest values sit closest to a class boundary.
  std::vector<double> score(static_cast<size_t>(n));
  std::vector<int> nearest_other(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = data.features.at(static_cast<size_t>(i), 0);
    const double y = data.features.at(static_cast<size_t>(i), 1);
    const int own = data.true_labels[static_cast<size_t>(i)];
    double best = 1e300;
    int who = (own + 1) % classes;
    for (int c = 0; c < classes; ++c) {
      if (c == own) continue;
      const double d = std::hypot(x - cx[c], y - cy[c]);
      if (d < best) {
        best = d;
        who = c;
      }
    }
    score[static_cast<size_t>(i)] =
        std::hypot(x - cx[own], y - cy[own]) - best;
    nearest_other[static_cast<size_t>(i)] = who;
  }

  const size_t imprecise =
      static_cast<size_t>(std::llround(options.imprecise_fraction * n));
  std::vector<bool> fuzzy(static_cast<size_t>(n), false);
  for (size_t i : most_ambiguous(score, imprecise)) fuzzy[i] = true;

  for (int i = 0; i < n; ++i) {
    const int own = data.true_labels[static_cast<size_t>(i)];
    if (fuzzy[static_cast<size_t>(i)]) {
      const FocalSet pair = FocalSet::singleton(own).unite(
          FocalSet::singleton(nearest_other[static_cast<size_t>(i)]));
      data.rich_labels.push_back(make_mass(
          data.frame, {{FocalSet::singleton(own), 1.0 - options.pair_mass},
                       {pair, options.pair_mass}}));
    } else {
      data.rich_labels.push_back(
          categorical_mass(data.frame, FocalSet::singleton(own)));
    }
  }
  return data;
}

}  // namespace

RichDataset generate_synthetic(SyntheticKind kind, int n, double noise, Rng& rng,
                               const SyntheticOptions& options) {
  if (n < 10) fail(errc::bad_argument, "synthetic datasets need n >= 10");
  if (!(noise >= 0.0)) fail(errc::bad_argument, "noise must be nonnegative");
  if (!(options.imprecise_fraction >= 0.0 && options.imprecise_fraction <= 1.0))
    fail(errc::bad_argument, "imprecise_fraction must be in [0, 1]");
  if (!(options.pair_mass > 0.0 && options.pair_mass < 1.0))
    fail(errc::bad_argument, "pair_mass must be in (0, 1)");
  RichDataset data;
  switch (kind) {
    case SyntheticKind::line:
    case SyntheticKind::sine:
    case SyntheticKind::circle:
      data = boundary_dataset(kind, n, noise, rng);
      break;
    default:
      data = blob_dataset(kind, n, noise, rng, options);
      break;
  }
  data.validate();
  return data;
}

RichDataset dog2_surrogate() {
  Rng rng(0x2d0950c5u);
  RichDataset flat = generate_synthetic(SyntheticKind::two_blob_ignorance, 200, 0.55, rng);

  // Isometric embedding into 42 dimensions: pairwise distances (hence the
  // K-NN behaviour) match the 2D set up to rounding.
  Rng basis_rng(0x42d06u);
  std::vector<double> q1(42), q2(42);
  for (double& v : q1) v = basis_rng.normal();
  for (double& v : q2) v = basis_rng.normal();
  double n1 = 0.0;
  for (double v : q1) n1 += v * v;
  n1 = std::sqrt(n1);
  for (double& v : q1) v /= n1;
  double dot = 0.0;
  for (size_t i = 0; i < q2.size(); ++i) dot += q1[i] * q2[i];
  for (size_t i = 0; i < q2.size(); ++i) q2[i] -= dot * q1[i];
  double n2 = 0.0;
  for (double v : q2) n2 += v * v;
  n2 = std::sqrt(n2);
  for (double& v : q2) v /= n2;

  RichDataset data = flat;
  data.name = "dog2";
  data.features = Matrix(flat.size(), 42);
  for (size_t i = 0; i < flat.size(); ++i) {
    const double x = flat.features.at(i, 0);
    const double y = flat.features.at(i, 1);
    for (size_t j = 0; j < 42; ++j) data.features.at(i, j) = x * q1[j] + y * q2[j];
  }
  data.validate();
  return data;
}

RichDataset load_dataset(const std::string& name, const std::string& data_dir) {
  const std::string path = data_dir + "/" + name + ".csv";
  const bool have_file = std::filesystem::exists(path);

  bool is_synthetic = true;
  SyntheticKind kind{};
  try {
    kind = parse_synthetic_kind(name);
  } catch (const Error&) {
    is_synthetic = false;
  }
  if (is_synthetic) {
    // Fixed per-kind seeds: the built-in names always mean the same data.
    Rng rng(Rng::mix(0xea1da7a5e7ULL + static_cast<uint64_t>(kind) * 0x9e37ULL));
    const double noise =
        (kind == SyntheticKind::two_blob_ignorance)    ? 0.55
        : (kind == SyntheticKind::three_class_imprecise) ? 0.45
                                                         : 0.15;
    return generate_synthetic(kind, 200, noise, rng);
  }
  if (name == "dog2" && !have_file) return dog2_surrogate();
  if (!have_file)
    fail(errc::io_error, "dataset file " + path +
                             " not found; run `eal fetch` or place the CSV there");
  RichDataset data = load_csv(path);
  data.name = name;
  return data;
}

}  // namespace eal
