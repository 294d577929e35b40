#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collarwave/types.hpp"

namespace collarwave {

struct MagnitudeSample {
  std::int64_t t_ms = 0;
  double amag = 0.0;
};

// Orientation-invariant magnitude series, amag = sqrt(x^2 + y^2 + z^2).
std::vector<MagnitudeSample> magnitude(const RawRecording& rec);

struct WindowSpec {
  std::size_t length_samples = 12;
  double overlap_fraction = 0.5;  // in [0, 1)

  // hop = round(length * (1 - overlap)), at least 1.
  std::size_t hop() const;
};

struct LabeledWindow {
  std::string recording_id;
  std::size_t start_index = 0;  // global sample index in the source recording
  std::int64_t t_start_ms = 0;
  std::int64_t t_end_ms = 0;  // nominal span end: t_start + round(L * 1000 / rate)
  std::vector<double> x, y, z, amag;
  std::string label{window_label::negative};
};

// Slices the recording into fixed-length overlapping windows. Gaps larger
// than twice the nominal sample period split the recording into segments
// that are windowed independently; trailing partial windows are dropped.
// Throws RecordingTooShort when the recording holds fewer than
// spec.length_samples samples in total.
std::vector<LabeledWindow> make_windows(const RawRecording& rec, const WindowSpec& spec);

struct LabelConfig {
  double min_overlap_fraction = 0.5;
  // Fold spin_cw / spin_ccw into the single positive class `spin`.
  bool collapse_spin_directions = true;
};

// Assigns each window the label of the interval covering at least
// min_overlap_fraction of its span; the largest overlap wins, ties broken
// by earlier interval start. Windows with no qualifying interval are
// labeled `negative`.
std::vector<LabeledWindow> label_windows(std::vector<LabeledWindow> windows,
                                         const AnnotationTrack& track,
                                         const LabelConfig& config = {});

}  // namespace collarwave
