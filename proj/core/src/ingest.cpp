#include "collarwave/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "collarwave/error.hpp"

namespace collarwave {

AnnotationTrack merge_annotations(const AnnotationTrack& a, const AnnotationTrack& b) {
  if (a.recording_id != b.recording_id) {
    throw Error(errc::recording_mismatch,
                "cannot merge tracks for '" + a.recording_id + "' and '" + b.recording_id + "'");
  }

  AnnotationTrack merged;
  merged.recording_id = a.recording_id;
  merged.annotator = "merged";

  for (const LabeledInterval& ia : a.intervals) {
    for (const LabeledInterval& ib : b.intervals) {
      if (ia.label != ib.label) continue;
      const std::int64_t start = std::max(ia.start_ms, ib.start_ms);
      const std::int64_t end = std::min(ia.end_ms, ib.end_ms);
      if (start < end) {
        merged.intervals.push_back({start, end, ia.label});
      }
    }
  }

  std::sort(merged.intervals.begin(), merged.intervals.end(),
            [](const LabeledInterval& x, const LabeledInterval& y) {
              return std::tie(x.start_ms, x.end_ms, x.label) <
                     std::tie(y.start_ms, y.end_ms, y.label);
            });
  return merged;
}

RawRecording trim_recording(const RawRecording& rec,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& keep) {
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i].first > keep[i].second) {
      throw Error(errc::invalid_argument, "keep interval with start > end");
    }
    if (i > 0 && keep[i - 1].second >= keep[i].first) {
      throw Error(errc::invalid_argument, "keep intervals must be sorted and non-overlapping");
    }
  }

  RawRecording out;
  out.device_id = rec.device_id;
  out.nominal_rate_hz = rec.nominal_rate_hz;

  std::size_t k = 0;
  for (const Sample& s : rec.samples) {
    while (k < keep.size() && keep[k].second < s.t_ms) ++k;
    if (k < keep.size() && keep[k].first <= s.t_ms && s.t_ms <= keep[k].second) {
      out.samples.push_back(s);
    }
  }
  return out;
}

RateReport validate_rate(const RawRecording& rec, double expected_hz, double rel_tol) {
  if (rec.samples.size() < 2) {
    throw Error(errc::too_few_samples, "rate validation needs at least 2 samples");
  }
  const std::int64_t span_ms = rec.samples.back().t_ms - rec.samples.front().t_ms;
  RateReport report;
  report.expected_hz = expected_hz;
  report.rel_tol = rel_tol;
  report.empirical_hz =
      static_cast<double>(rec.samples.size() - 1) * 1000.0 / static_cast<double>(span_ms);
  report.pass = std::fabs(report.empirical_hz - expected_hz) <= rel_tol * expected_hz;
  return report;
}

}  // namespace collarwave
