#include "collarwave/types.hpp"

#include <cmath>

#include "collarwave/error.hpp"

namespace collarwave {

void validate_recording(const RawRecording& rec) {
  if (!(rec.nominal_rate_hz > 0.0)) {
    throw Error(errc::invalid_argument, "nominal_rate_hz must be positive");
  }
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const Sample& s = rec.samples[i];
    if (s.t_ms < 0) {
      throw Error(errc::invalid_argument, "negative timestamp at sample " + std::to_string(i));
    }
    if (i > 0 && s.t_ms <= prev) {
      throw Error(errc::non_monotonic_timestamp,
                  "timestamps not strictly increasing at sample " + std::to_string(i));
    }
    if (!std::isfinite(s.x_g) || !std::isfinite(s.y_g) || !std::isfinite(s.z_g)) {
      throw Error(errc::non_finite_input, "non-finite acceleration at sample " + std::to_string(i));
    }
    if (std::fabs(s.x_g) > kFullScaleG || std::fabs(s.y_g) > kFullScaleG ||
        std::fabs(s.z_g) > kFullScaleG) {
      throw Error(errc::invalid_argument,
                  "acceleration exceeds device full scale at sample " + std::to_string(i));
    }
    prev = s.t_ms;
  }
}

namespace behaviour {
bool is_valid(std::string_view label) {
  for (std::string_view v : all) {
    if (v == label) return true;
  }
  return false;
}
}  // namespace behaviour

}  // namespace collarwave
