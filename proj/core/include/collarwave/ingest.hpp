#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "collarwave/types.hpp"

namespace collarwave {

// Keeps only the intersections of same-label intervals appearing in both
// tracks; everything seen by a single annotator is discarded. The result
// carries annotator "merged". Symmetric in its arguments.
AnnotationTrack merge_annotations(const AnnotationTrack& a, const AnnotationTrack& b);

// Keeps samples whose timestamp falls inside some [start_ms, end_ms]
// interval (inclusive bounds). `keep` must be sorted and non-overlapping.
RawRecording trim_recording(const RawRecording& rec,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& keep);

struct RateReport {
  double empirical_hz = 0.0;
  double expected_hz = 0.0;
  double rel_tol = 0.0;
  bool pass = false;
};

// Empirical rate is (n-1)/(t_last - t_first); passes when it is within
// rel_tol * expected of the expected rate.
RateReport validate_rate(const RawRecording& rec, double expected_hz, double rel_tol);

}  // namespace collarwave
