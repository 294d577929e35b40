#include "collarwave/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "collarwave/error.hpp"
#include "collarwave/types.hpp"

namespace collarwave {

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "nb" || name == "naive_bayes") return ModelKind::naive_bayes;
  if (name == "logreg" || name == "logistic_regression") return ModelKind::logreg;
  if (name == "knn") return ModelKind::knn;
  if (name == "rf" || name == "random_forest") return ModelKind::random_forest;
  if (name == "svm" || name == "svm_linear") return ModelKind::svm_linear;
  throw Error(errc::invalid_argument, "unknown model kind '" + std::string(name) + "'");
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::naive_bayes: return "naive_bayes";
    case ModelKind::logreg: return "logreg";
    case ModelKind::knn: return "knn";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::svm_linear: return "svm_linear";
  }
  return "unknown";
}

std::uint64_t dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix_byte = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  auto mix_u64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  };
  mix_u64(ds.schema.hash());
  mix_u64(ds.n_rows);
  mix_u64(ds.n_cols);
  for (double v : ds.values) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    mix_u64(bits);
  }
  for (const std::string& s : ds.labels) {
    for (char c : s) mix_byte(static_cast<unsigned char>(c));
    mix_byte('\n');
  }
  return h;
}

namespace {

struct BinaryProblem {
  std::span<const double> x;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> y;        // 1 = positive class
  std::vector<double> row_weights;    // empty unless class weighting is on
};

BinaryProblem make_problem(const Dataset& ds, const TrainConfig& cfg) {
  if (ds.n_rows < 10) {
    throw Error(errc::too_few_rows, "training needs at least 10 rows");
  }
  BinaryProblem p;
  p.x = ds.values;
  p.rows = ds.n_rows;
  p.cols = ds.n_cols;
  p.y.resize(ds.n_rows);
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < ds.n_rows; ++i) {
    p.y[i] = ds.labels[i] == cfg.positive_label;
    n_pos += p.y[i];
  }
  if (n_pos == 0 || n_pos == ds.n_rows) {
    throw Error(errc::single_class_dataset,
                "training data must contain both '" + cfg.positive_label + "' and other rows");
  }
  if (cfg.class_weighting) {
    const double n = static_cast<double>(p.rows);
    const double w_pos = n / (2.0 * static_cast<double>(n_pos));
    const double w_neg = n / (2.0 * static_cast<double>(p.rows - n_pos));
    p.row_weights.resize(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) p.row_weights[i] = p.y[i] ? w_pos : w_neg;
  }
  return p;
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// --- gaussian naive bayes ---------------------------------------------------

NaiveBayesParams train_naive_bayes(const BinaryProblem& p, const TrainConfig& cfg) {
  // Smoothing scale: the largest overall column variance.
  double max_var = 0.0;
  {
    std::vector<double> mean(p.cols, 0.0);
    for (std::size_t r = 0; r < p.rows; ++r)
      for (std::size_t c = 0; c < p.cols; ++c) mean[c] += p.x[r * p.cols + c];
    for (double& m : mean) m /= static_cast<double>(p.rows);
    std::vector<double> var(p.cols, 0.0);
    for (std::size_t r = 0; r < p.rows; ++r)
      for (std::size_t c = 0; c < p.cols; ++c) {
        const double d = p.x[r * p.cols + c] - mean[c];
        var[c] += d * d;
      }
    for (double v : var) max_var = std::max(max_var, v / static_cast<double>(p.rows));
  }
  const double eps = std::max(cfg.nb.var_smoothing * max_var, 1e-30);

  NaiveBayesParams params;
  for (int cls = 0; cls < 2; ++cls) {
    GaussianClassStats& out = cls ? params.positive : params.negative;
    out.mean.assign(p.cols, 0.0);
    out.variance.assign(p.cols, 0.0);
    std::size_t count = 0;
    for (std::size_t r = 0; r < p.rows; ++r) {
      if (p.y[r] != cls) continue;
      ++count;
      for (std::size_t c = 0; c < p.cols; ++c) out.mean[c] += p.x[r * p.cols + c];
    }
    for (double& m : out.mean) m /= static_cast<double>(count);
    for (std::size_t r = 0; r < p.rows; ++r) {
      if (p.y[r] != cls) continue;
      for (std::size_t c = 0; c < p.cols; ++c) {
        const double d = p.x[r * p.cols + c] - out.mean[c];
        out.variance[c] += d * d;
      }
    }
    for (double& v : out.variance) v = v / static_cast<double>(count) + eps;

    double prior = static_cast<double>(count) / static_cast<double>(p.rows);
    if (cfg.class_weighting) prior = 0.5;  // inverse-frequency weights equalize priors
    out.log_prior = std::log(prior);
  }
  return params;
}

double nb_positive_posterior(const NaiveBayesParams& params, std::span<const double> v) {
  auto log_likelihood = [&](const GaussianClassStats& s) {
    double ll = s.log_prior;
    for (std::size_t c = 0; c < v.size(); ++c) {
      const double d = v[c] - s.mean[c];
      ll -= 0.5 * (std::log(2.0 * M_PI * s.variance[c]) + d * d / s.variance[c]);
    }
    return ll;
  };
  const double lp = log_likelihood(params.positive);
  const double ln = log_likelihood(params.negative);
  const double m = std::max(lp, ln);
  const double ep = std::exp(lp - m);
  const double en = std::exp(ln - m);
  return ep / (ep + en);
}

// --- logistic regression ----------------------------------------------------

LogRegParams train_logreg(const BinaryProblem& p, const TrainConfig& cfg) {
  LogRegParams params;
  params.weights.assign(p.cols, 0.0);
  params.bias = 0.0;

  std::vector<double> grad(p.cols, 0.0);
  double grad_b = 0.0;
  for (int it = 0; it < cfg.logreg.iterations; ++it) {
    logreg_detail::gradient(p.x, p.rows, p.cols, p.y, params.weights, params.bias,
                            cfg.logreg.lambda, grad, grad_b, p.row_weights);
    for (std::size_t c = 0; c < p.cols; ++c) params.weights[c] -= cfg.logreg.learning_rate * grad[c];
    params.bias -= cfg.logreg.learning_rate * grad_b;
  }
  return params;
}

// --- k nearest neighbours -----------------------------------------------------

KnnParams train_knn(const BinaryProblem& p, const TrainConfig& cfg) {
  KnnParams params;
  params.k = cfg.knn.k;
  params.n_cols = p.cols;
  params.points.assign(p.x.begin(), p.x.end());
  params.positive = p.y;
  return params;
}

double knn_positive_fraction(const KnnParams& params, std::span<const double> v) {
  const std::size_t n = params.positive.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    const double* row = params.points.data() + i * params.n_cols;
    for (std::size_t c = 0; c < params.n_cols; ++c) {
      const double d = v[c] - row[c];
      d2 += d * d;
    }
    dist[i] = {d2, i};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(params.k), n);
  // Lexicographic order makes neighbour selection deterministic under ties.
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) pos += params.positive[dist[i].second];
  return static_cast<double>(pos) / static_cast<double>(k);
}

}  // namespace

namespace logreg_detail {

double objective(std::span<const double> x, std::size_t rows, std::size_t cols,
                 std::span<const std::uint8_t> y, std::span<const double> w, double bias,
                 double lambda, std::span<const double> row_weights) {
  double loss = 0.0;
  double total_weight = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double z = bias;
    for (std::size_t c = 0; c < cols; ++c) z += w[c] * x[r * cols + c];
    const double sign = y[r] ? 1.0 : -1.0;
    const double m = -sign * z;
    // log(1 + exp(m)) without overflow
    const double ll = m > 30.0 ? m : std::log1p(std::exp(m));
    const double wt = row_weights.empty() ? 1.0 : row_weights[r];
    loss += wt * ll;
    total_weight += wt;
  }
  loss /= total_weight;
  double reg = 0.0;
  for (double wi : w) reg += wi * wi;
  return loss + 0.5 * lambda * reg;
}

void gradient(std::span<const double> x, std::size_t rows, std::size_t cols,
              std::span<const std::uint8_t> y, std::span<const double> w, double bias,
              double lambda, std::span<double> grad_w, double& grad_b,
              std::span<const double> row_weights) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  double total_weight = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double z = bias;
    for (std::size_t c = 0; c < cols; ++c) z += w[c] * x[r * cols + c];
    const double wt = row_weights.empty() ? 1.0 : row_weights[r];
    const double resid = wt * (sigmoid(z) - static_cast<double>(y[r]));
    for (std::size_t c = 0; c < cols; ++c) grad_w[c] += resid * x[r * cols + c];
    grad_b += resid;
    total_weight += wt;
  }
  for (std::size_t c = 0; c < cols; ++c) grad_w[c] = grad_w[c] / total_weight + lambda * w[c];
  grad_b /= total_weight;
}

}  // namespace logreg_detail

// Defined in forest.cpp / svm.cpp.
ForestParams train_random_forest(std::span<const double> x, std::size_t rows, std::size_t cols,
                                 std::span<const std::uint8_t> y, const TrainConfig& cfg);
double forest_positive_fraction(const ForestParams& params, std::span<const double> v);

ModelArtifact train(const Dataset& normalized, const TrainConfig& cfg,
                    const NormalizationStats& stats) {
  if (stats.mean.size() != normalized.n_cols) {
    throw Error(errc::schema_mismatch, "normalization stats do not match dataset width");
  }
  const BinaryProblem p = make_problem(normalized, cfg);

  ModelArtifact m;
  m.kind = cfg.kind;
  m.positive_label = cfg.positive_label;
  m.schema_hash = normalized.schema.hash();
  m.normalization = stats;
  m.config = cfg;
  m.dataset_fingerprint = dataset_fingerprint(normalized);

  switch (cfg.kind) {
    case ModelKind::naive_bayes:
      m.params = train_naive_bayes(p, cfg);
      break;
    case ModelKind::logreg:
      m.params = train_logreg(p, cfg);
      break;
    case ModelKind::knn:
      m.params = train_knn(p, cfg);
      break;
    case ModelKind::random_forest:
      m.params = train_random_forest(p.x, p.rows, p.cols, p.y, cfg);
      break;
    case ModelKind::svm_linear: {
      auto res = svm_detail::train(p.x, p.rows, p.cols, p.y, cfg.svm.lambda, cfg.svm.epochs,
                                   cfg.seed, nullptr, p.row_weights);
      m.params = SvmParams{std::move(res.weights), res.bias};
      break;
    }
  }
  return m;
}

ModelArtifact train_standardized(const Dataset& raw, const TrainConfig& cfg) {
  const NormalizationStats stats = fit_normalizer(raw);
  return train(apply_normalizer(raw, stats), cfg, stats);
}

Prediction predict(const ModelArtifact& m, const FeatureVector& v) {
  if (v.schema_hash != m.schema_hash) {
    throw Error(errc::schema_mismatch, "feature vector schema does not match model");
  }
  if (v.values.size() != m.normalization.mean.size()) {
    throw Error(errc::schema_mismatch, "feature vector width does not match model");
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) {
      throw Error(errc::non_finite_input, "non-finite feature value");
    }
  }

  std::vector<double> z = v.values;
  normalize_in_place(z, m.normalization);

  double score = 0.0;
  switch (m.kind) {
    case ModelKind::naive_bayes:
      score = nb_positive_posterior(std::get<NaiveBayesParams>(m.params), z);
      break;
    case ModelKind::logreg: {
      const auto& p = std::get<LogRegParams>(m.params);
      double zz = p.bias;
      for (std::size_t c = 0; c < z.size(); ++c) zz += p.weights[c] * z[c];
      score = sigmoid(zz);
      break;
    }
    case ModelKind::knn:
      score = knn_positive_fraction(std::get<KnnParams>(m.params), z);
      break;
    case ModelKind::random_forest:
      score = forest_positive_fraction(std::get<ForestParams>(m.params), z);
      break;
    case ModelKind::svm_linear: {
      const auto& p = std::get<SvmParams>(m.params);
      double margin = p.bias;
      for (std::size_t c = 0; c < z.size(); ++c) margin += p.weights[c] * z[c];
      score = sigmoid(margin);
      break;
    }
  }

  Prediction out;
  out.score = score;
  out.positive = score >= 0.5;  // ties resolve positive
  out.label = out.positive ? m.positive_label : std::string(window_label::negative);
  return out;
}

std::vector<Prediction> predict_all(const ModelArtifact& m, const Dataset& raw) {
  if (raw.schema.hash() != m.schema_hash) {
    throw Error(errc::schema_mismatch, "dataset schema does not match model");
  }
  std::vector<Prediction> out;
  out.reserve(raw.n_rows);
  FeatureVector v;
  v.schema_hash = m.schema_hash;
  for (std::size_t r = 0; r < raw.n_rows; ++r) {
    auto row = raw.row(r);
    v.values.assign(row.begin(), row.end());
    out.push_back(predict(m, v));
  }
  return out;
}

}  // namespace collarwave
