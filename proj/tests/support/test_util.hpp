#pragma once

#include <functional>
#include <utility>

#include "collarwave/error.hpp"
#include "collarwave/rng.hpp"
#include "collarwave/types.hpp"

namespace collarwave::testutil {

inline constexpr errc kNoThrow = static_cast<errc>(-1);

// Runs fn and reports the collarwave error code it threw, or kNoThrow.
template <typename Fn>
errc thrown_code(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const Error& e) {
    return e.code();
  }
  return kNoThrow;
}

// Uniform 12.5 Hz grid (80 ms) starting at t = 0 with constant z = 1 g.
inline RawRecording uniform_recording(std::size_t n, double rate_hz = 12.5,
                                      std::string device_id = "test") {
  RawRecording rec;
  rec.device_id = std::move(device_id);
  rec.nominal_rate_hz = rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.t_ms = static_cast<std::int64_t>(
        std::llround(static_cast<double>(i) * 1000.0 / rate_hz));
    s.z_g = 1.0;
    rec.samples.push_back(s);
  }
  return rec;
}

// Uniform-grid recording with bounded random accelerations.
inline RawRecording random_recording(Rng& rng, std::size_t n, double rate_hz = 12.5) {
  RawRecording rec = uniform_recording(n, rate_hz);
  for (Sample& s : rec.samples) {
    s.x_g = rng.uniform(-2.0, 2.0);
    s.y_g = rng.uniform(-2.0, 2.0);
    s.z_g = rng.uniform(-2.0, 2.0);
  }
  return rec;
}

}  // namespace collarwave::testutil
