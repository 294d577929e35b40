#include "collarwave/features.hpp"

#include <algorithm>
#include <cmath>

#include "collarwave/error.hpp"

namespace collarwave {

namespace {

constexpr double kVarianceEps = 1e-12;

double population_mean(std::span<const double> seq) {
  double sum = 0.0;
  for (double v : seq) sum += v;
  return sum / static_cast<double>(seq.size());
}

double median_of_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double quantile_exclusive(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double h = q * static_cast<double>(n + 1);
  if (h <= 1.0) return values.front();
  if (h >= static_cast<double>(n)) return values.back();
  const auto k = static_cast<std::size_t>(h);  // 1-based lower neighbour
  const double frac = h - static_cast<double>(k);
  return values[k - 1] + frac * (values[k] - values[k - 1]);
}

StatFeatures stat_features(std::span<const double> seq) {
  if (seq.size() < 2) {
    throw Error(errc::invalid_argument, "stat_features needs at least 2 values");
  }
  const double n = static_cast<double>(seq.size());

  StatFeatures f;
  f.mean = population_mean(seq);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, sumsq = 0.0;
  for (double v : seq) {
    const double d = v - f.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    sumsq += v * v;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  f.stddev = std::sqrt(m2);
  f.rms = std::sqrt(sumsq / n);
  if (m2 >= kVarianceEps) {
    f.kurtosis = m4 / (m2 * m2) - 3.0;
    f.skewness = m3 / (m2 * std::sqrt(m2));
  }

  std::vector<double> sorted(seq.begin(), seq.end());
  std::sort(sorted.begin(), sorted.end());
  f.iqr = quantile_exclusive(sorted, 0.75) - quantile_exclusive(sorted, 0.25);

  const double med = median_of_sorted(sorted);
  std::vector<double> dev(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) dev[i] = std::fabs(seq[i] - med);
  std::sort(dev.begin(), dev.end());
  f.mad = median_of_sorted(dev);
  return f;
}

int zero_crossings(std::span<const double> seq) {
  const double mean = population_mean(seq);
  int count = 0;
  int prev_sign = 0;
  for (double v : seq) {
    const double d = v - mean;
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : prev_sign);
    if (prev_sign != 0 && sign != prev_sign) ++count;
    if (sign != 0) prev_sign = sign;
  }
  return count;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(errc::length_mismatch, "correlation inputs must have equal nonzero length");
  }
  const double n = static_cast<double>(a.size());
  const double ma = population_mean(a);
  const double mb = population_mean(b);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  cov /= n;
  va /= n;
  vb /= n;
  if (va < kVarianceEps || vb < kVarianceEps) return 0.0;
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

double autocorrelation_lag1(std::span<const double> seq) {
  if (seq.size() < 2) {
    throw Error(errc::invalid_argument, "autocorrelation needs at least 2 values");
  }
  return pearson_correlation(seq.first(seq.size() - 1), seq.subspan(1));
}

namespace {

// Table-driven DFT of the mean-removed input. Windows are short (12
// samples), so the O(L^2) loop with precomputed twiddles is the fast path.
void dft_mean_removed(std::span<const double> seq, std::vector<double>& re,
                      std::vector<double>& im) {
  const std::size_t n = seq.size();
  const double mean = population_mean(seq);

  std::vector<double> cos_tab(n), sin_tab(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
    cos_tab[j] = std::cos(angle);
    sin_tab[j] = std::sin(angle);
  }

  re.assign(n, 0.0);
  im.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum_re = 0.0, sum_im = 0.0;
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const double x = seq[t] - mean;
      sum_re += x * cos_tab[idx];
      sum_im -= x * sin_tab[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    re[k] = sum_re;
    im[k] = sum_im;
  }
}

}  // namespace

std::vector<double> full_power_spectrum(std::span<const double> seq) {
  if (seq.size() < 4) {
    throw Error(errc::invalid_argument, "power spectrum needs at least 4 values");
  }
  std::vector<double> re, im;
  dft_mean_removed(seq, re, im);
  const double n = static_cast<double>(seq.size());
  std::vector<double> power(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) power[k] = (re[k] * re[k] + im[k] * im[k]) / n;
  return power;
}

std::vector<double> power_spectrum(std::span<const double> seq) {
  std::vector<double> full = full_power_spectrum(seq);
  full.resize(seq.size() / 2 + 1);
  return full;
}

SpectralFeatures spectral_features(std::span<const double> seq, double sample_rate_hz) {
  SpectralFeatures f;

  double m2 = 0.0;
  const double mean = population_mean(seq);
  for (double v : seq) m2 += (v - mean) * (v - mean);
  m2 /= static_cast<double>(seq.size());
  if (m2 < kVarianceEps) return f;  // constant input: all zeros

  const std::vector<double> full = full_power_spectrum(seq);
  const std::size_t n = seq.size();
  const std::size_t half = n / 2;
  const double bin_hz = sample_rate_hz / static_cast<double>(n);

  double total = 0.0;
  for (std::size_t k = 0; k <= half; ++k) total += full[k];

  auto cumulative_crossing = [&](double fraction) {
    const double target = fraction * total;
    double cum = 0.0;
    for (std::size_t k = 0; k <= half; ++k) {
      cum += full[k];
      if (cum >= target) return static_cast<double>(k) * bin_hz;
    }
    return static_cast<double>(half) * bin_hz;
  };

  f.median_frequency = cumulative_crossing(0.5);
  f.max_frequency = cumulative_crossing(0.95);
  f.power_bandwidth = cumulative_crossing(0.975) - cumulative_crossing(0.025);

  std::size_t peak = 1;
  for (std::size_t k = 1; k <= half; ++k) {
    if (full[k] > full[peak]) peak = k;
  }
  f.fundamental_frequency = static_cast<double>(peak) * bin_hz;
  f.max_power = *std::max_element(full.begin(), full.begin() + half + 1);

  // Real cepstrum: inverse DFT of the log two-sided spectrum. The log
  // spectrum is symmetric, so the cosine sum is the full real part.
  for (std::size_t m = 0; m < f.cepstral.size(); ++m) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double angle =
          2.0 * M_PI * static_cast<double>(k) * static_cast<double>(m) / static_cast<double>(n);
      sum += std::log(full[k] + 1e-12) * std::cos(angle);
    }
    f.cepstral[m] = sum / static_cast<double>(n);
  }
  return f;
}

namespace {

constexpr const char* kChannelNames[4] = {"x", "y", "z", "amag"};
constexpr const char* kPerChannelFeatures[] = {
    "kurtosis",      "skewness",         "mean",       "std",
    "iqr",           "rms",              "mad",        "autocorr",
    "zero_crossings", "max_frequency",   "median_frequency",
    "cepstral_0",    "cepstral_1",       "cepstral_2", "cepstral_3",
    "max_power",     "power_bandwidth",  "fundamental_frequency"};

FeatureSchema build_schema() {
  FeatureSchema schema;
  for (const char* channel : kChannelNames) {
    for (const char* feature : kPerChannelFeatures) {
      schema.names.push_back(std::string(channel) + "." + feature);
    }
  }
  schema.names.push_back("xy.pairwise_corr");
  schema.names.push_back("xz.pairwise_corr");
  schema.names.push_back("yz.pairwise_corr");
  return schema;
}

void extract_channel(std::span<const double> seq, double fs, std::vector<double>& out) {
  const StatFeatures s = stat_features(seq);
  const SpectralFeatures sp = spectral_features(seq, fs);
  out.push_back(s.kurtosis);
  out.push_back(s.skewness);
  out.push_back(s.mean);
  out.push_back(s.stddev);
  out.push_back(s.iqr);
  out.push_back(s.rms);
  out.push_back(s.mad);
  out.push_back(autocorrelation_lag1(seq));
  out.push_back(static_cast<double>(zero_crossings(seq)));
  out.push_back(sp.max_frequency);
  out.push_back(sp.median_frequency);
  for (double c : sp.cepstral) out.push_back(c);
  out.push_back(sp.max_power);
  out.push_back(sp.power_bandwidth);
  out.push_back(sp.fundamental_frequency);
}

}  // namespace

const FeatureSchema& feature_schema() {
  static const FeatureSchema schema = build_schema();
  return schema;
}

std::vector<double> featurize_window(const LabeledWindow& window, const FeaturizeConfig& config) {
  std::vector<double> row;
  row.reserve(feature_schema().names.size());
  extract_channel(window.x, config.sample_rate_hz, row);
  extract_channel(window.y, config.sample_rate_hz, row);
  extract_channel(window.z, config.sample_rate_hz, row);
  extract_channel(window.amag, config.sample_rate_hz, row);
  row.push_back(pearson_correlation(window.x, window.y));
  row.push_back(pearson_correlation(window.x, window.z));
  row.push_back(pearson_correlation(window.y, window.z));
  return row;
}

Dataset featurize(const std::vector<LabeledWindow>& windows, const FeaturizeConfig& config) {
  if (windows.empty()) {
    throw Error(errc::empty_input, "no windows to featurize");
  }
  const std::size_t length = windows.front().x.size();
  for (const LabeledWindow& w : windows) {
    if (w.x.size() != length || w.y.size() != length || w.z.size() != length ||
        w.amag.size() != length) {
      throw Error(errc::mixed_window_length, "windows have differing lengths");
    }
  }

  Dataset ds;
  ds.schema = feature_schema();
  ds.n_cols = ds.schema.names.size();
  ds.n_rows = windows.size();
  ds.values.reserve(ds.n_rows * ds.n_cols);
  for (const LabeledWindow& w : windows) {
    std::vector<double> row = featurize_window(w, config);
    ds.values.insert(ds.values.end(), row.begin(), row.end());
    ds.labels.push_back(w.label);
    ds.groups.push_back(w.recording_id);
    ds.window_starts.push_back(static_cast<std::int64_t>(w.start_index));
  }
  return ds;
}

}  // namespace collarwave
