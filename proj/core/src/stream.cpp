#include "collarwave/stream.hpp"

#include <cmath>

#include "collarwave/error.hpp"

namespace collarwave {

Detector::Detector(ModelArtifact model, DetectorConfig config)
    : model_(std::move(model)), config_(std::move(config)) {
  if (config_.m < 1 || config_.n < config_.m) {
    throw Error(errc::invalid_argument, "debounce requires 1 <= m <= n");
  }
  if (config_.refractory_ms < 0) {
    throw Error(errc::invalid_argument, "refractory_ms must be non-negative");
  }
  if (model_.schema_hash != feature_schema().hash()) {
    throw Error(errc::schema_mismatch, "model was trained under a different feature schema");
  }
  hop_ = config_.window.hop();
  window_span_ms_ = static_cast<std::int64_t>(
      std::llround(static_cast<double>(config_.window.length_samples) * 1000.0 /
                   config_.sample_rate_hz));
}

void Detector::reset() {
  buffer_.clear();
  global_index_ = 0;
  segment_count_ = 0;
  prev_t_ms_.reset();
  recent_.clear();
  last_alert_ms_.reset();
  decision_log_.clear();
}

std::optional<AlertEvent> Detector::push_sample(const Sample& s) {
  if (prev_t_ms_ && s.t_ms <= *prev_t_ms_) {
    throw Error(errc::non_monotonic_timestamp, "stream timestamps must be strictly increasing");
  }
  const double period_ms = 1000.0 / config_.sample_rate_hz;
  if (prev_t_ms_ && static_cast<double>(s.t_ms - *prev_t_ms_) > 2.0 * period_ms) {
    // Data gap: window the new segment independently of the old one.
    buffer_.clear();
    segment_count_ = 0;
    recent_.clear();
  }
  prev_t_ms_ = s.t_ms;

  buffer_.push_back(s);
  if (buffer_.size() > config_.window.length_samples) buffer_.pop_front();
  ++global_index_;
  ++segment_count_;

  const std::size_t length = config_.window.length_samples;
  if (segment_count_ < length || (segment_count_ - length) % hop_ != 0) {
    return std::nullopt;
  }
  return evaluate_window(s.t_ms);
}

std::optional<AlertEvent> Detector::evaluate_window(std::int64_t now_ms) {
  const std::size_t length = config_.window.length_samples;

  LabeledWindow window;
  window.start_index = global_index_ - length;
  window.t_start_ms = buffer_.front().t_ms;
  window.t_end_ms = window.t_start_ms + window_span_ms_;
  window.x.reserve(length);
  window.y.reserve(length);
  window.z.reserve(length);
  window.amag.reserve(length);
  for (const Sample& s : buffer_) {
    window.x.push_back(s.x_g);
    window.y.push_back(s.y_g);
    window.z.push_back(s.z_g);
    window.amag.push_back(std::sqrt(s.x_g * s.x_g + s.y_g * s.y_g + s.z_g * s.z_g));
  }

  FeatureVector v;
  v.values = featurize_window(window, {config_.sample_rate_hz});
  v.schema_hash = feature_schema().hash();
  const Prediction pred = predict(model_, v);

  WindowDecision decision;
  decision.start_index = window.start_index;
  decision.t_start_ms = window.t_start_ms;
  decision.t_end_ms = window.t_end_ms;
  decision.positive = pred.positive;
  decision.score = pred.score;

  recent_.push_back(decision);
  if (recent_.size() > static_cast<std::size_t>(config_.n)) recent_.pop_front();
  if (config_.collect_decisions) decision_log_.push_back(decision);

  int positives = 0;
  for (const WindowDecision& d : recent_) positives += d.positive;
  if (positives < config_.m) return std::nullopt;
  if (last_alert_ms_ && now_ms - *last_alert_ms_ < config_.refractory_ms) return std::nullopt;

  AlertEvent alert;
  alert.t_ms = now_ms;
  double score_sum = 0.0;
  int contributing = 0;
  bool first = true;
  for (const WindowDecision& d : recent_) {
    if (!d.positive) continue;
    score_sum += d.score;
    ++contributing;
    if (first) {
      alert.span_start_ms = d.t_start_ms;
      first = false;
    }
    alert.span_end_ms = d.t_end_ms;
  }
  alert.confidence = score_sum / static_cast<double>(contributing);
  last_alert_ms_ = now_ms;
  return alert;
}

}  // namespace collarwave
