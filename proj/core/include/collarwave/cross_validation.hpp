#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collarwave/dataset.hpp"
#include "collarwave/eval.hpp"
#include "collarwave/models.hpp"

namespace collarwave {

// Stratified fold assignment: within each class (classes visited in sorted
// order), rows are shuffled by `seed` and dealt round-robin, so per-class
// fold sizes differ by at most one. Throws ClassSmallerThanK if any class
// has fewer than k members.
std::vector<std::size_t> stratified_fold_assignment(const std::vector<std::string>& labels, int k,
                                                    std::uint64_t seed);

struct CVReport {
  ModelKind kind = ModelKind::naive_bayes;
  int k = 10;
  std::uint64_t seed = 0;
  std::string mode;  // "stratified-kfold" or "leave-one-out"
  ConfusionMatrix confusion;
  MetricsReport metrics;
  std::vector<std::size_t> fold_of_row;
  // Normalization statistics fitted on each fold's training portion;
  // lets callers verify that held-out rows never leak into them.
  std::vector<NormalizationStats> fold_stats;
};

// For each fold: fit the normalizer on the training portion only, train,
// predict the held-out rows; all held-out predictions pool into a single
// confusion matrix. `ds` is the raw (unnormalized) feature dataset.
CVReport cross_validate(const Dataset& ds, const TrainConfig& cfg, int k = 10,
                        std::uint64_t seed = 42);

// n-fold-where-n-is-the-dataset variant used when classes are too small
// for stratified k-fold. Requires every class to have at least 2 rows.
CVReport leave_one_out(const Dataset& ds, const TrainConfig& cfg);

}  // namespace collarwave
