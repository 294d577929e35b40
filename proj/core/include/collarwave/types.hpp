#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace collarwave {

// One triaxial reading. Acceleration in g, timestamp in ms since epoch.
struct Sample {
  std::int64_t t_ms = 0;
  double x_g = 0.0;
  double y_g = 0.0;
  double z_g = 0.0;
};

// Device full-scale bound on each axis, in g.
inline constexpr double kFullScaleG = 16.0;

struct RawRecording {
  std::string device_id;
  double nominal_rate_hz = 12.5;
  std::vector<Sample> samples;
};

// Validates the RawRecording invariants: strictly increasing timestamps,
// positive rate, finite in-range accelerations. Throws on violation.
void validate_recording(const RawRecording& rec);

// Closed behaviour vocabulary used by annotation tracks.
namespace behaviour {
inline constexpr std::string_view spin_cw = "spin_cw";
inline constexpr std::string_view spin_ccw = "spin_ccw";
inline constexpr std::string_view stand = "stand";
inline constexpr std::string_view jump = "jump";
inline constexpr std::string_view sit = "sit";
inline constexpr std::string_view rollover = "rollover";
inline constexpr std::string_view idle = "idle";
inline constexpr std::string_view other = "other";

inline constexpr std::array<std::string_view, 8> all = {
    spin_cw, spin_ccw, stand, jump, sit, rollover, idle, other};

bool is_valid(std::string_view label);
}  // namespace behaviour

// Window-level class labels. Both spin directions collapse onto `spin`
// for the binary signalling task; unmatched windows get `negative`.
namespace window_label {
inline constexpr std::string_view spin = "spin";
inline constexpr std::string_view negative = "negative";
}  // namespace window_label

// Half-open [start_ms, end_ms) labeled span on the sensor clock.
struct LabeledInterval {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string label;
};

struct AnnotationTrack {
  std::string recording_id;
  std::vector<LabeledInterval> intervals;  // sorted by start_ms, non-overlapping
  std::string annotator;
};

}  // namespace collarwave
