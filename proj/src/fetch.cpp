#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "eal/fetch.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "eal/error.hpp"
#include "eal/format.hpp"

namespace eal {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  fail(errc::schema_error, path + ": " + what);
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) schema_fail(path, "expected a string");
  return v.get<std::string>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_fail(path, "expected an integer");
  return v.get<int>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(errc::io_error, "failed while writing " + path);
}

std::vector<std::string> split_line(const std::string& line, const std::string& delim) {
  std::vector<std::string> fields;
  if (delim == "ws") {
    std::istringstream in(line);
    std::string field;
    while (in >> field) fields.push_back(field);
    return fields;
  }
  const char sep = delim.front();
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

RawFormat parse_format(const json& v, const std::string& path) {
  RawFormat fmt;
  if (!v.is_object()) schema_fail(path, "expected an object");
  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string key = it.key();
    const std::string kp = path + "." + key;
    if (key == "delimiter") {
      fmt.delimiter = as_string(*it, kp);
      if (fmt.delimiter != "ws" && fmt.delimiter.size() != 1)
        schema_fail(kp, "expected a single character or \"ws\"");
    } else if (key == "header_lines") {
      fmt.header_lines = as_int(*it, kp);
      if (fmt.header_lines < 0) schema_fail(kp, "expected >= 0");
    } else if (key == "label_column") {
      fmt.label_column = as_int(*it, kp);
    } else if (key == "label_name") {
      if (!it->is_null()) fmt.label_name = as_string(*it, kp);
    } else if (key == "drop_columns") {
      if (!it->is_array()) schema_fail(kp, "expected an array of integers");
      for (size_t i = 0; i < it->size(); ++i)
        fmt.drop_columns.push_back(
            as_int((*it)[i], kp + "[" + std::to_string(i) + "]"));
    } else if (key == "missing") {
      if (!it->is_null()) fmt.missing = as_string(*it, kp);
    } else if (key == "binarize_label") {
      if (!it->is_boolean()) schema_fail(kp, "expected a boolean");
      fmt.binarize_label = it->get<bool>();
    } else {
      schema_fail(kp, "unknown key");
    }
  }
  if (!fmt.label_name.empty() && fmt.header_lines < 1)
    schema_fail(path, "label_name requires header_lines >= 1");
  return fmt;
}

// Chasing one redirect level is handled by httplib itself; this only splits
// the URL into what the client wants.
void split_url(const std::string& url, std::string& origin, std::string& request) {
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos) fail(errc::bad_argument, "bad url: " + url);
  const size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos) {
    origin = url;
    request = "/";
  } else {
    origin = url.substr(0, path);
    request = url.substr(path);
  }
}

std::string download(const std::string& url) {
  std::string origin, request;
  split_url(url, origin, request);
  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(20);
  client.set_read_timeout(60);
  httplib::Result res = client.Get(request);
  if (!res)
    fail(errc::io_error, "download failed: " + url + " (" +
                             httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    fail(errc::io_error,
         "download failed: " + url + " (HTTP " + std::to_string(res->status) + ")");
  return res->body;
}

std::string lock_path(const std::string& data_dir) {
  return (std::filesystem::path(data_dir) / "checksums.lock.json").string();
}

std::map<std::string, std::string> load_lock(const std::string& data_dir) {
  std::map<std::string, std::string> lock;
  const std::string path = lock_path(data_dir);
  if (!std::filesystem::exists(path)) return lock;
  json doc;
  try {
    std::ifstream in(path, std::ios::binary);
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
  for (auto it = doc.begin(); it != doc.end(); ++it)
    lock[it.key()] = it->get<std::string>();
  return lock;
}

void save_lock(const std::string& data_dir,
               const std::map<std::string, std::string>& lock) {
  json doc = json::object();
  for (const auto& [name, hash] : lock) doc[name] = hash;
  write_file(lock_path(data_dir), doc.dump(2) + "\n");
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1)
    fail(errc::io_error, "sha256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  json doc;
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot read " + path);
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("datasets") || !doc.at("datasets").is_array())
    schema_fail("$", "expected an object with a \"datasets\" array");
  std::vector<ManifestEntry> entries;
  const json& list = doc.at("datasets");
  for (size_t i = 0; i < list.size(); ++i) {
    const std::string base = ".datasets[" + std::to_string(i) + "]";
    const json& item = list[i];
    if (!item.is_object()) schema_fail(base, "expected an object");
    ManifestEntry entry;
    if (!item.contains("name")) schema_fail(base + ".name", "missing required key");
    entry.name = as_string(item.at("name"), base + ".name");
    if (item.contains("url") && !item.at("url").is_null())
      entry.url = as_string(item.at("url"), base + ".url");
    if (item.contains("sha256") && !item.at("sha256").is_null())
      entry.sha256 = as_string(item.at("sha256"), base + ".sha256");
    if (item.contains("note") && !item.at("note").is_null())
      entry.note = as_string(item.at("note"), base + ".note");
    if (item.contains("format"))
      entry.format = parse_format(item.at("format"), base + ".format");
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) schema_fail(".datasets", "manifest lists no datasets");
  return entries;
}

RichDataset convert_raw_table(const std::string& raw_text, const RawFormat& format,
                              const std::string& name) {
  std::istringstream in(raw_text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> feature_rows;
  std::vector<std::string> labels;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no <= format.header_lines) {
      header = split_line(line, format.delimiter);
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line, format.delimiter);

    int label_index = format.label_column;
    if (!format.label_name.empty()) {
      const auto it = std::find(header.begin(), header.end(), format.label_name);
      if (it == header.end())
        fail(errc::parse_error,
             name + ": header has no column named " + format.label_name);
      label_index = static_cast<int>(it - header.begin());
    }
    if (label_index < 0) label_index += static_cast<int>(fields.size());
    if (label_index < 0 || label_index >= static_cast<int>(fields.size()))
      fail(errc::parse_error, name + " line " + std::to_string(line_no) +
                                  ": label column out of range");

    const bool has_missing =
        !format.missing.empty() &&
        std::find(fields.begin(), fields.end(), format.missing) != fields.end();
    if (has_missing) continue;

    std::vector<double> features;
    std::string label;
    for (int col = 0; col < static_cast<int>(fields.size()); ++col) {
      if (std::find(format.drop_columns.begin(), format.drop_columns.end(), col) !=
          format.drop_columns.end())
        continue;
      if (col == label_index) {
        label = fields[static_cast<size_t>(col)];
        continue;
      }
      features.push_back(parse_double(fields[static_cast<size_t>(col)],
                                      name + " line " + std::to_string(line_no)));
    }
    if (format.binarize_label) label = (label == "0") ? "0" : "1";
    if (!feature_rows.empty() && features.size() != feature_rows.front().size())
      fail(errc::parse_error, name + " line " + std::to_string(line_no) +
                                  ": inconsistent column count");
    feature_rows.push_back(std::move(features));
    labels.push_back(std::move(label));
  }

  if (feature_rows.size() < 10)
    fail(errc::degenerate_input,
         name + ": only " + std::to_string(feature_rows.size()) + " usable rows");

  std::vector<std::string> classes = labels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  RichDataset data;
  data.name = name;
  data.frame = make_frame(classes);
  data.features = Matrix(feature_rows.size(), feature_rows.front().size());
  for (size_t r = 0; r < feature_rows.size(); ++r)
    for (size_t c = 0; c < feature_rows[r].size(); ++c)
      data.features.at(r, c) = feature_rows[r][c];
  for (const std::string& label : labels) {
    const int cls = data.frame->index_of(label);
    data.true_labels.push_back(cls);
    data.rich_labels.push_back(
        categorical_mass(data.frame, FocalSet::singleton(cls)));
  }
  data.validate();
  return data;
}

int fetch_datasets(const std::string& manifest_path, const std::string& data_dir,
                   const std::vector<std::string>& only, std::ostream& log) {
  const std::vector<ManifestEntry> entries = load_manifest(manifest_path);
  for (const std::string& name : only) {
    const bool known = std::any_of(entries.begin(), entries.end(),
                                   [&](const ManifestEntry& e) { return e.name == name; });
    if (!known) fail(errc::bad_argument, "not in manifest: " + name);
  }
  std::filesystem::create_directories(data_dir);
  std::map<std::string, std::string> lock = load_lock(data_dir);
  bool lock_dirty = false;
  int failures = 0;

  for (const ManifestEntry& entry : entries) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), entry.name) == only.end())
      continue;
    const std::string path =
        (std::filesystem::path(data_dir) / (entry.name + ".csv")).string();
    // Manifest hash wins; otherwise fall back to what an earlier fetch recorded.
    std::string expected = entry.sha256;
    if (expected.empty()) {
      const auto it = lock.find(entry.name);
      if (it != lock.end()) expected = it->second;
    }

    try {
      if (std::filesystem::exists(path)) {
        const std::string actual = sha256_file(path);
        if (expected.empty()) {
          lock[entry.name] = actual;
          lock_dirty = true;
          log << entry.name << ": present, checksum recorded " << actual.substr(0, 12)
              << "...\n";
        } else if (actual == expected) {
          log << entry.name << ": ok (cached)\n";
        } else {
          ++failures;
          log << entry.name << ": CHECKSUM MISMATCH, refusing to overwrite " << path
              << " (expected " << expected.substr(0, 12) << "..., got "
              << actual.substr(0, 12) << "...)\n";
        }
        continue;
      }
      if (entry.url.empty()) {
        log << entry.name << ": skipped, no public source";
        if (!entry.note.empty()) log << " (" << entry.note << ")";
        log << '\n';
        continue;
      }
      const std::string raw = download(entry.url);
      const RichDataset data = convert_raw_table(raw, entry.format, entry.name);
      save_csv(data, path);
      const std::string actual = sha256_file(path);
      if (!expected.empty() && actual != expected) {
        ++failures;
        log << entry.name << ": fetched but checksum differs (expected "
            << expected.substr(0, 12) << "..., got " << actual.substr(0, 12)
            << "...); kept at " << path << '\n';
        continue;
      }
      if (entry.sha256.empty()) {
        lock[entry.name] = actual;
        lock_dirty = true;
      }
      log << entry.name << ": fetched " << data.size() << " rows, "
          << data.features.cols << " features, " << data.num_classes()
          << " classes\n";
    } catch (const Error& e) {
      ++failures;
      log << entry.name << ": FAILED (" << e.what() << ")\n";
    }
    log << std::flush;
  }
  if (lock_dirty) save_lock(data_dir, lock);
  return failures;
}

}  // namespace eal
