#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "collarwave/dataset.hpp"

namespace collarwave {

enum class ModelKind { naive_bayes, logreg, knn, random_forest, svm_linear };

// Accepts both long names and the CLI short forms nb/logreg/knn/rf/svm.
ModelKind model_kind_from_string(std::string_view name);
const char* model_kind_name(ModelKind kind);

struct TrainConfig {
  ModelKind kind = ModelKind::naive_bayes;
  std::uint64_t seed = 42;
  std::string positive_label = "spin";
  // Inverse-frequency class weights in the logreg/svm losses and the
  // naive Bayes priors. Off by default.
  bool class_weighting = false;

  struct {
    double var_smoothing = 1e-9;  // times the largest column variance
  } nb;
  struct {
    double lambda = 1e-3;
    double learning_rate = 0.1;
    int iterations = 500;
  } logreg;
  struct {
    int k = 5;
  } knn;
  struct {
    int n_trees = 100;
    int min_samples_split = 2;
    int max_depth = 0;  // 0 = unlimited
  } forest;
  struct {
    double lambda = 1e-2;
    int epochs = 200;
  } svm;
};

// --- learned parameters ---------------------------------------------------

struct GaussianClassStats {
  double log_prior = 0.0;
  std::vector<double> mean;
  std::vector<double> variance;  // smoothed at training time
};

struct NaiveBayesParams {
  GaussianClassStats negative;
  GaussianClassStats positive;
};

struct LogRegParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct KnnParams {
  int k = 5;
  std::size_t n_cols = 0;
  std::vector<double> points;  // row-major training matrix (normalized)
  std::vector<std::uint8_t> positive;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint8_t leaf_positive = 0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at index 0
};

struct ForestParams {
  std::vector<DecisionTree> trees;
};

struct SvmParams {
  std::vector<double> weights;
  double bias = 0.0;
};

using ModelParams =
    std::variant<NaiveBayesParams, LogRegParams, KnnParams, ForestParams, SvmParams>;

struct ModelArtifact {
  ModelKind kind = ModelKind::naive_bayes;
  std::string positive_label = "spin";
  std::uint64_t schema_hash = 0;
  NormalizationStats normalization;
  ModelParams params;
  TrainConfig config;              // hyperparameters the model was trained with
  std::uint64_t dataset_fingerprint = 0;
};

struct Prediction {
  std::string label;
  double score = 0.0;  // positive-class confidence in [0, 1]
  bool positive = false;
};

// --- training and prediction ----------------------------------------------

// Trains on an already-normalized dataset; `stats` are the statistics that
// normalization used and are stored in the artifact. The task is binary:
// rows labeled cfg.positive_label against everything else.
ModelArtifact train(const Dataset& normalized, const TrainConfig& cfg,
                    const NormalizationStats& stats);

// fit_normalizer + apply_normalizer + train on a raw dataset.
ModelArtifact train_standardized(const Dataset& raw, const TrainConfig& cfg);

// `v` holds raw (unnormalized) features; the artifact's stored stats are
// applied before scoring. Ties in class score resolve toward the positive
// class, so a signalling behaviour is never dropped on a coin flip.
Prediction predict(const ModelArtifact& m, const FeatureVector& v);

// Row-wise predict over a raw dataset (same schema check).
std::vector<Prediction> predict_all(const ModelArtifact& m, const Dataset& raw);

// Versioned JSON document; load(save(m)) reproduces predictions bit-exactly.
std::string save_model(const ModelArtifact& m);
ModelArtifact load_model(std::string_view bytes);

std::uint64_t dataset_fingerprint(const Dataset& ds);

// --- solver internals exposed for verification -----------------------------

namespace logreg_detail {

// Mean weighted logistic loss plus (lambda/2)||w||^2; the bias is not
// regularized. `y` holds 0/1 targets; empty `row_weights` means all ones.
double objective(std::span<const double> x, std::size_t rows, std::size_t cols,
                 std::span<const std::uint8_t> y, std::span<const double> w, double bias,
                 double lambda, std::span<const double> row_weights = {});

void gradient(std::span<const double> x, std::size_t rows, std::size_t cols,
              std::span<const std::uint8_t> y, std::span<const double> w, double bias,
              double lambda, std::span<double> grad_w, double& grad_b,
              std::span<const double> row_weights = {});

}  // namespace logreg_detail

namespace svm_detail {

// Primal objective (lambda/2)(||w||^2 + b^2) + mean weighted hinge loss;
// the bias is part of the regularized augmented weight vector.
double objective(std::span<const double> x, std::size_t rows, std::size_t cols,
                 std::span<const std::uint8_t> y, std::span<const double> w, double bias,
                 double lambda, std::span<const double> row_weights = {});

struct PegasosResult {
  std::vector<double> weights;
  double bias = 0.0;
};

// Epoch-shuffled Pegasos subgradient descent. When `epoch_mean_objective`
// is given it receives the mean primal objective over each epoch's steps.
PegasosResult train(std::span<const double> x, std::size_t rows, std::size_t cols,
                    std::span<const std::uint8_t> y, double lambda, int epochs,
                    std::uint64_t seed, std::vector<double>* epoch_mean_objective = nullptr,
                    std::span<const double> row_weights = {});

}  // namespace svm_detail

}  // namespace collarwave
