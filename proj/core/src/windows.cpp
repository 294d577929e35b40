#include "collarwave/windows.hpp"

#include <algorithm>
#include <cmath>

#include "collarwave/error.hpp"

namespace collarwave {

std::vector<MagnitudeSample> magnitude(const RawRecording& rec) {
  std::vector<MagnitudeSample> out;
  out.reserve(rec.samples.size());
  for (const Sample& s : rec.samples) {
    out.push_back({s.t_ms, std::sqrt(s.x_g * s.x_g + s.y_g * s.y_g + s.z_g * s.z_g)});
  }
  return out;
}

std::size_t WindowSpec::hop() const {
  if (length_samples == 0 || overlap_fraction < 0.0 || overlap_fraction >= 1.0) {
    throw Error(errc::invalid_argument, "window spec: length > 0 and overlap in [0,1) required");
  }
  const long h = std::lround(static_cast<double>(length_samples) * (1.0 - overlap_fraction));
  return static_cast<std::size_t>(std::max(1L, h));
}

std::vector<LabeledWindow> make_windows(const RawRecording& rec, const WindowSpec& spec) {
  const std::size_t length = spec.length_samples;
  const std::size_t hop = spec.hop();
  if (rec.samples.size() < length) {
    throw Error(errc::recording_too_short,
                "recording has " + std::to_string(rec.samples.size()) + " samples, window needs " +
                    std::to_string(length));
  }

  const double period_ms = 1000.0 / rec.nominal_rate_hz;
  const std::int64_t span_ms =
      static_cast<std::int64_t>(std::llround(static_cast<double>(length) * period_ms));

  // Segment boundaries at gaps larger than twice the nominal period.
  std::vector<std::size_t> segment_starts = {0};
  for (std::size_t i = 1; i < rec.samples.size(); ++i) {
    const double dt = static_cast<double>(rec.samples[i].t_ms - rec.samples[i - 1].t_ms);
    if (dt > 2.0 * period_ms) segment_starts.push_back(i);
  }
  segment_starts.push_back(rec.samples.size());

  std::vector<LabeledWindow> windows;
  for (std::size_t seg = 0; seg + 1 < segment_starts.size(); ++seg) {
    const std::size_t seg_begin = segment_starts[seg];
    const std::size_t seg_len = segment_starts[seg + 1] - seg_begin;
    if (seg_len < length) continue;
    const std::size_t count = (seg_len - length) / hop + 1;
    for (std::size_t w = 0; w < count; ++w) {
      const std::size_t start = seg_begin + w * hop;
      LabeledWindow win;
      win.recording_id = rec.device_id;
      win.start_index = start;
      win.t_start_ms = rec.samples[start].t_ms;
      win.t_end_ms = win.t_start_ms + span_ms;
      win.x.reserve(length);
      win.y.reserve(length);
      win.z.reserve(length);
      win.amag.reserve(length);
      for (std::size_t i = start; i < start + length; ++i) {
        const Sample& s = rec.samples[i];
        win.x.push_back(s.x_g);
        win.y.push_back(s.y_g);
        win.z.push_back(s.z_g);
        win.amag.push_back(std::sqrt(s.x_g * s.x_g + s.y_g * s.y_g + s.z_g * s.z_g));
      }
      windows.push_back(std::move(win));
    }
  }
  return windows;
}

std::vector<LabeledWindow> label_windows(std::vector<LabeledWindow> windows,
                                         const AnnotationTrack& track,
                                         const LabelConfig& config) {
  for (LabeledWindow& win : windows) {
    if (win.recording_id != track.recording_id) {
      throw Error(errc::recording_mismatch, "window recording '" + win.recording_id +
                                                "' does not match track '" + track.recording_id +
                                                "'");
    }
    const double span = static_cast<double>(win.t_end_ms - win.t_start_ms);

    double best_overlap = 0.0;
    std::int64_t best_start = 0;
    const std::string* best_label = nullptr;
    for (const LabeledInterval& iv : track.intervals) {
      const std::int64_t lo = std::max(win.t_start_ms, iv.start_ms);
      const std::int64_t hi = std::min(win.t_end_ms, iv.end_ms);
      const double overlap = static_cast<double>(hi - lo);
      if (overlap <= 0.0 || overlap < config.min_overlap_fraction * span) continue;
      if (best_label == nullptr || overlap > best_overlap ||
          (overlap == best_overlap && iv.start_ms < best_start)) {
        best_overlap = overlap;
        best_start = iv.start_ms;
        best_label = &iv.label;
      }
    }

    if (best_label == nullptr) {
      win.label = window_label::negative;
    } else if (config.collapse_spin_directions &&
               (*best_label == behaviour::spin_cw || *best_label == behaviour::spin_ccw)) {
      win.label = window_label::spin;
    } else {
      win.label = *best_label;
    }
  }
  return windows;
}

}  // namespace collarwave
