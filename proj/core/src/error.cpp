#include "collarwave/error.hpp"

namespace collarwave {

const char* errc_name(errc code) {
  switch (code) {
    case errc::malformed_header: return "MalformedHeader";
    case errc::checksum_mismatch: return "ChecksumMismatch";
    case errc::empty_recording: return "EmptyRecording";
    case errc::bad_header: return "BadHeader";
    case errc::row_parse: return "RowParse";
    case errc::non_monotonic_timestamp: return "NonMonotonicTimestamp";
    case errc::unknown_label: return "UnknownLabel";
    case errc::inverted_interval: return "InvertedInterval";
    case errc::overlap_within_track: return "OverlapWithinTrack";
    case errc::recording_mismatch: return "RecordingMismatch";
    case errc::too_few_samples: return "TooFewSamples";
    case errc::recording_too_short: return "RecordingTooShort";
    case errc::empty_input: return "EmptyInput";
    case errc::mixed_window_length: return "MixedWindowLength";
    case errc::too_few_rows: return "TooFewRows";
    case errc::single_class_dataset: return "SingleClassDataset";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::non_finite_input: return "NonFiniteInput";
    case errc::class_smaller_than_k: return "ClassSmallerThanK";
    case errc::version_mismatch: return "VersionMismatch";
    case errc::corrupt_artifact: return "CorruptArtifact";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::empty_eval: return "Empty";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_error: return "IoError";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

int errc_exit_code(errc code) {
  switch (code) {
    case errc::malformed_header:
    case errc::checksum_mismatch:
    case errc::empty_recording:
    case errc::bad_header:
    case errc::row_parse:
    case errc::non_monotonic_timestamp:
    case errc::unknown_label:
    case errc::inverted_interval:
    case errc::overlap_within_track:
    case errc::version_mismatch:
    case errc::corrupt_artifact:
    case errc::io_error:
      return 2;
    case errc::recording_mismatch:
    case errc::too_few_samples:
    case errc::recording_too_short:
    case errc::empty_input:
    case errc::mixed_window_length:
    case errc::too_few_rows:
    case errc::single_class_dataset:
    case errc::schema_mismatch:
    case errc::non_finite_input:
    case errc::class_smaller_than_k:
    case errc::length_mismatch:
    case errc::empty_eval:
      return 3;
    case errc::invalid_argument:
      return 1;
    case errc::internal:
      return 4;
  }
  return 4;
}

}  // namespace collarwave
