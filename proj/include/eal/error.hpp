#pragma once

#include <stdexcept>
#include <string>

namespace eal {

// Error categories surfaced by the library.  Every throw site goes through
// Error so callers (and the CLI) can distinguish usage errors from data errors.
enum class errc {
  sum_not_one,        // mass assignment does not sum to 1 within tolerance
  empty_focal,        // empty set given a positive mass
  bad_subset,         // subset bits outside the frame / empty where forbidden
  frame_mismatch,     // operation across mass functions on different frames
  empty_list,         // combination over zero mass functions
  total_conflict,     // Dempster combination with conflict weight 1
  bad_argument,       // parameter outside its documented domain
  too_few_instances,  // not enough training data for the requested fit
  empty_pool,         // query selection over an empty candidate pool
  already_labeled,    // oracle asked twice for the same instance
  no_rich_label,      // rich reveal requested but dataset has crisp labels only
  parse_error,        // malformed CSV / rich-label text / manifest
  unknown_class,      // label value not present in the frame
  empty_curve,        // AUAC of a zero-length accuracy curve
  zero_variance,      // paired test on non-identical samples with sd == 0
  degenerate_input,   // statistic undefined for the given shape (n < 2, ...)
  schema_error,       // experiment config violates the schema
  io_error,           // filesystem or network failure
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::sum_not_one: return "sum_not_one";
    case errc::empty_focal: return "empty_focal";
    case errc::bad_subset: return "bad_subset";
    case errc::frame_mismatch: return "frame_mismatch";
    case errc::empty_list: return "empty_list";
    case errc::total_conflict: return "total_conflict";
    case errc::bad_argument: return "bad_argument";
    case errc::too_few_instances: return "too_few_instances";
    case errc::empty_pool: return "empty_pool";
    case errc::already_labeled: return "already_labeled";
    case errc::no_rich_label: return "no_rich_label";
    case errc::parse_error: return "parse_error";
    case errc::unknown_class: return "unknown_class";
    case errc::empty_curve: return "empty_curve";
    case errc::zero_variance: return "zero_variance";
    case errc::degenerate_input: return "degenerate_input";
    case errc::schema_error: return "schema_error";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace eal
