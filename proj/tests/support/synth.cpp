#include "synth.hpp"

#include <cmath>

#include "collarwave/features.hpp"
#include "collarwave/windows.hpp"

namespace collarwave::synth {

Rotation random_rotation(Rng& rng) {
  // Normalized 4-normal quaternion is uniform on SO(3).
  double q[4];
  double norm = 0.0;
  for (double& c : q) {
    c = rng.normal();
    norm += c * c;
  }
  norm = std::sqrt(norm);
  for (double& c : q) c /= norm;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return Rotation{{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
                   {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
                   {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

std::array<double, 3> apply(const Rotation& r, const std::array<double, 3>& v) {
  return {r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
          r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
          r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2]};
}

RawRecording rotate_recording(const RawRecording& rec, const Rotation& r) {
  RawRecording out = rec;
  for (Sample& s : out.samples) {
    const auto v = apply(r, {s.x_g, s.y_g, s.z_g});
    s.x_g = v[0];
    s.y_g = v[1];
    s.z_g = v[2];
  }
  return out;
}

namespace {

struct Builder {
  DogConfig cfg;
  Rng rng;
  Rotation mount;
  RawRecording rec;
  AnnotationTrack track;
  std::size_t index = 0;

  explicit Builder(const DogConfig& c) : cfg(c), rng(c.seed), mount(random_rotation(rng)) {
    rec.device_id = c.dog_id;
    rec.nominal_rate_hz = c.rate_hz;
    track.recording_id = c.dog_id;
    track.annotator = "synth";
  }

  std::int64_t now_ms() const {
    return static_cast<std::int64_t>(
        std::llround(static_cast<double>(index) * 1000.0 / cfg.rate_hz));
  }

  void push(const std::array<double, 3>& body) {
    auto v = apply(mount, body);
    Sample s;
    s.t_ms = now_ms();
    s.x_g = v[0] + cfg.idle_noise_g * rng.normal();
    s.y_g = v[1] + cfg.idle_noise_g * rng.normal();
    s.z_g = v[2] + cfg.idle_noise_g * rng.normal();
    rec.samples.push_back(s);
    ++index;
  }

  void idle(double seconds) {
    const auto n = static_cast<std::size_t>(std::llround(seconds * cfg.rate_hz));
    for (std::size_t i = 0; i < n; ++i) push({0.0, 0.0, 1.0});
  }

  void gait(double seconds) {
    const auto n = static_cast<std::size_t>(std::llround(seconds * cfg.rate_hz));
    const double f = rng.uniform(1.2, 2.2);
    const double p1 = rng.uniform(0.0, 2.0 * M_PI);
    const double p2 = rng.uniform(0.0, 2.0 * M_PI);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / cfg.rate_hz;
      push({cfg.gait_amp_g * std::sin(2.0 * M_PI * f * t + p1),
            cfg.gait_amp_g * 0.6 * std::sin(2.0 * M_PI * f * t + p2),
            1.0 + cfg.gait_amp_g * 0.5 * std::sin(4.0 * M_PI * f * t)});
    }
  }

  void spin(bool clockwise) {
    const double seconds = rng.uniform(1.2, 1.5);
    const double f = rng.uniform(2.0, 4.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double dir = clockwise ? 1.0 : -1.0;
    const std::int64_t start = now_ms();
    const auto n = static_cast<std::size_t>(std::llround(seconds * cfg.rate_hz));
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / cfg.rate_hz;
      // Rotating-frame sinusoid with a little amplitude wobble so the
      // magnitude channel carries the burst too.
      const double amp = cfg.spin_amp_g * (1.0 + 0.25 * std::sin(2.0 * M_PI * 1.5 * t));
      push({amp * std::cos(2.0 * M_PI * f * t + phase),
            dir * amp * std::sin(2.0 * M_PI * f * t + phase),
            1.0 + 0.15 * cfg.spin_amp_g * std::sin(2.0 * M_PI * f * t)});
    }
    track.intervals.push_back(
        {start, now_ms(), std::string(clockwise ? behaviour::spin_cw : behaviour::spin_ccw)});
  }

  void jump() {
    const double seconds = rng.uniform(0.7, 1.0);
    const std::int64_t start = now_ms();
    const auto n = static_cast<std::size_t>(std::llround(seconds * cfg.rate_hz));
    const double peak = rng.uniform(1.0, 1.4);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / cfg.rate_hz;
      const double u = (t - seconds / 2.0) / (seconds / 5.0);
      push({0.1 * rng.normal(), 0.1 * rng.normal(), 1.0 + peak * std::exp(-u * u)});
    }
    track.intervals.push_back({start, now_ms(), std::string(behaviour::jump)});
  }
};

}  // namespace

DogData make_dog(const DogConfig& config) {
  Builder b(config);
  b.idle(b.rng.uniform(3.0, 5.0));
  int jumps_left = config.n_jumps;
  for (int i = 0; i < config.n_spins; ++i) {
    if (b.rng.uniform01() < 0.5) {
      b.gait(b.rng.uniform(2.5, 4.5));
    } else {
      b.idle(b.rng.uniform(2.5, 4.5));
    }
    if (jumps_left > 0 && b.rng.uniform01() < 0.5) {
      b.jump();
      --jumps_left;
      b.idle(b.rng.uniform(1.0, 2.0));
    }
    b.spin(i % 2 == 0);
  }
  while (jumps_left-- > 0) {
    b.idle(b.rng.uniform(1.5, 2.5));
    b.jump();
  }
  b.idle(b.rng.uniform(3.0, 5.0));
  return {std::move(b.rec), std::move(b.track)};
}

AnnotationTrack jitter_track(const AnnotationTrack& track, std::uint64_t seed,
                             std::int64_t max_jitter_ms) {
  Rng rng(seed);
  AnnotationTrack out = track;
  for (LabeledInterval& iv : out.intervals) {
    const auto dither = [&rng, max_jitter_ms]() {
      return static_cast<std::int64_t>(rng.uniform_index(
                 static_cast<std::size_t>(2 * max_jitter_ms + 1))) -
             max_jitter_ms;
    };
    iv.start_ms += dither();
    iv.end_ms += dither();
    if (iv.end_ms <= iv.start_ms) iv.end_ms = iv.start_ms + 1;
  }
  return out;
}

Dataset make_corpus(std::uint64_t seed, int n_dogs) {
  std::vector<LabeledWindow> windows;
  for (int d = 0; d < n_dogs; ++d) {
    DogConfig cfg;
    char id[8];
    std::snprintf(id, sizeof(id), "dog%02d", d + 1);
    cfg.dog_id = id;
    cfg.seed = seed + static_cast<std::uint64_t>(d) * 1000;
    const DogData dog = make_dog(cfg);
    auto labeled = label_windows(make_windows(dog.recording, WindowSpec{}), dog.track);
    windows.insert(windows.end(), labeled.begin(), labeled.end());
  }
  return featurize(windows, {12.5});
}

BurstScenario make_burst_scenario(std::uint64_t seed) {
  DogConfig cfg;
  cfg.dog_id = "burst";
  cfg.seed = seed;
  Builder b(cfg);
  b.idle(60.0);
  const std::int64_t burst_start = b.now_ms();
  const double f = 3.0;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * cfg.rate_hz));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.rate_hz;
    const double amp = cfg.spin_amp_g * (1.0 + 0.25 * std::sin(2.0 * M_PI * 1.5 * t));
    b.push({amp * std::cos(2.0 * M_PI * f * t), amp * std::sin(2.0 * M_PI * f * t),
            1.0 + 0.15 * cfg.spin_amp_g * std::sin(2.0 * M_PI * f * t)});
  }
  const std::int64_t burst_end = b.now_ms();
  b.idle(60.0);
  return {std::move(b.rec), burst_start, burst_end};
}

}  // namespace collarwave::synth
