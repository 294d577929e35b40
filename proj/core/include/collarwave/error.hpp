#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace collarwave {

enum class errc {
  // binary log parsing
  malformed_header,
  checksum_mismatch,
  empty_recording,
  // CSV parsing
  bad_header,
  row_parse,
  non_monotonic_timestamp,
  unknown_label,
  inverted_interval,
  overlap_within_track,
  // recording / annotation operations
  recording_mismatch,
  too_few_samples,
  recording_too_short,
  // feature extraction
  empty_input,
  mixed_window_length,
  too_few_rows,
  // model training / prediction
  single_class_dataset,
  schema_mismatch,
  non_finite_input,
  class_smaller_than_k,
  version_mismatch,
  corrupt_artifact,
  // evaluation
  length_mismatch,
  empty_eval,
  // generic
  invalid_argument,
  io_error,
  internal,
};

const char* errc_name(errc code);

// Process exit code the CLI maps each error class to:
//   1 usage, 2 input/parse, 3 validation failure, 4 internal breach.
int errc_exit_code(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Error(errc code, std::string message, std::size_t line)
      : std::runtime_error(std::move(message)), code_(code), line_(line) {}

  errc code() const { return code_; }
  // 1-based line number for CSV parse errors, when known.
  std::optional<std::size_t> line() const { return line_; }

 private:
  errc code_;
  std::optional<std::size_t> line_;
};

}  // namespace collarwave
