#pragma once

#include <array>
#include <span>
#include <vector>

#include "collarwave/dataset.hpp"
#include "collarwave/windows.hpp"

namespace collarwave {

// All per-window operations use population moments (divisor n). Degenerate
// inputs (variance below 1e-12) follow return-zero conventions so feature
// rows are always finite.

struct StatFeatures {
  double kurtosis = 0.0;  // Fisher excess, normal -> 0
  double skewness = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double iqr = 0.0;  // exclusive-method linear interpolation quantiles
  double rms = 0.0;
  double mad = 0.0;  // median absolute deviation from the median
};

StatFeatures stat_features(std::span<const double> seq);

// Quantile by the exclusive (n+1 position) method: the q-quantile sits at
// 1-based position h = q*(n+1), linearly interpolated between neighbours
// and clamped to the data range.
double quantile_exclusive(std::vector<double> values, double q);

// Sign changes of (v - mean); exact zeros inherit the previous sign.
int zero_crossings(std::span<const double> seq);

// Pearson correlation; 0 by convention if either input is constant.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

// Lag-1 Pearson autocorrelation: correlation of seq[0..n-2] with seq[1..n-1].
double autocorrelation_lag1(std::span<const double> seq);

// One-sided power spectrum of the mean-removed sequence:
// P[k] = |X[k]|^2 / L for k = 0..floor(L/2), with X the unnormalized DFT.
std::vector<double> power_spectrum(std::span<const double> seq);

// Two-sided spectrum, k = 0..L-1. Sums to the mean-removed signal energy.
std::vector<double> full_power_spectrum(std::span<const double> seq);

struct SpectralFeatures {
  double max_frequency = 0.0;     // cumulative power reaches 95%
  double median_frequency = 0.0;  // cumulative power reaches 50%
  std::array<double, 4> cepstral{};  // real cepstrum of log(P + 1e-12)
  double max_power = 0.0;
  double power_bandwidth = 0.0;  // between 2.5% and 97.5% cumulative crossings
  double fundamental_frequency = 0.0;  // largest non-DC bin, lowest wins ties
};

SpectralFeatures spectral_features(std::span<const double> seq, double sample_rate_hz);

struct FeaturizeConfig {
  double sample_rate_hz = 12.5;
};

// The fixed 75-column layout: channels {x, y, z, amag} x {7 statistical,
// autocorrelation, zero crossings, 9 spectral} plus the 3 pairwise
// correlations. Names are stable public API.
const FeatureSchema& feature_schema();

Dataset featurize(const std::vector<LabeledWindow>& windows, const FeaturizeConfig& config = {});

// Single-window extraction used by the streaming detector.
std::vector<double> featurize_window(const LabeledWindow& window, const FeaturizeConfig& config);

}  // namespace collarwave
