#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "collarwave/features.hpp"
#include "collarwave/models.hpp"
#include "collarwave/windows.hpp"

namespace collarwave {

struct DetectorConfig {
  WindowSpec window{};
  int m = 2;  // positives required among the last n window decisions
  int n = 3;
  std::int64_t refractory_ms = 30000;
  double sample_rate_hz = 12.5;  // must match the rate used at featurize time
  // Keep every window decision for offline comparison against the batch
  // pipeline. Off for long-running live streams.
  bool collect_decisions = false;
};

struct AlertEvent {
  std::int64_t t_ms = 0;
  double confidence = 0.0;  // mean positive score of the contributing windows
  std::int64_t span_start_ms = 0;
  std::int64_t span_end_ms = 0;
};

struct WindowDecision {
  std::size_t start_index = 0;  // global sample index since the last reset
  std::int64_t t_start_ms = 0;
  std::int64_t t_end_ms = 0;
  bool positive = false;
  double score = 0.0;
};

// Online spin detector. Single writer: push_sample calls must be serialized
// by the caller; distinct instances are independent. Sample gaps larger
// than twice the nominal period start a fresh segment, mirroring the batch
// windowing, and clear the debounce history.
class Detector {
 public:
  Detector(ModelArtifact model, DetectorConfig config);

  // Returns an alert when at least m of the last n window decisions are
  // positive and no alert fired within the refractory period.
  std::optional<AlertEvent> push_sample(const Sample& s);

  void reset();

  const std::vector<WindowDecision>& decisions() const { return decision_log_; }

 private:
  std::optional<AlertEvent> evaluate_window(std::int64_t now_ms);

  ModelArtifact model_;
  DetectorConfig config_;
  std::size_t hop_ = 1;
  std::int64_t window_span_ms_ = 0;

  std::deque<Sample> buffer_;
  std::size_t global_index_ = 0;   // samples pushed since reset
  std::size_t segment_count_ = 0;  // samples in the current segment
  std::optional<std::int64_t> prev_t_ms_;
  std::deque<WindowDecision> recent_;  // last n decisions
  std::optional<std::int64_t> last_alert_ms_;
  std::vector<WindowDecision> decision_log_;
};

}  // namespace collarwave
