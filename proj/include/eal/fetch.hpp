#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eal/datasets.hpp"

namespace eal {

// How to turn one raw download (UCI-style delimited text) into the canonical
// CSV layout that load_csv consumes.  Column indices refer to the raw row
// after splitting, before any column is dropped.
struct RawFormat {
  std::string delimiter = ",";    // single character, or "ws" for any whitespace run
  int header_lines = 0;           // leading lines to skip (last one names columns)
  int label_column = -1;          // raw index of the class column; negative = from end
  std::string label_name;        // alternative: column name looked up in the header
  std::vector<int> drop_columns;  // raw indices to discard (ids, free-text fields)
  std::string missing;            // token marking a missing value; such rows are dropped
  bool binarize_label = false;    // "0" stays "0", any other label becomes "1"
};

struct ManifestEntry {
  std::string name;
  std::string url;     // empty: no public source, file must be placed manually
  std::string sha256;  // hex digest of the canonical CSV; empty: record on first fetch
  std::string note;
  RawFormat format;
};

std::vector<ManifestEntry> load_manifest(const std::string& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

// Parses raw delimited text into a dataset (crisp labels only).  Rows with a
// missing-value token are dropped; non-numeric feature cells are an error.
RichDataset convert_raw_table(const std::string& raw_text, const RawFormat& format,
                              const std::string& name);

// Downloads/verifies every manifest entry (optionally restricted to `only`)
// into data_dir/<name>.csv.  Files that already match their checksum are not
// touched and cause no network access.  First-time checksums for entries the
// manifest leaves unpinned are recorded in data_dir/checksums.lock.json.
// Returns the number of entries that failed; skips (no URL) are not failures.
int fetch_datasets(const std::string& manifest_path, const std::string& data_dir,
                   const std::vector<std::string>& only, std::ostream& log);

}  // namespace eal
