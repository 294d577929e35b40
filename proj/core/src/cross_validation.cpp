#include "collarwave/cross_validation.hpp"

#include <algorithm>
#include <map>

#include "collarwave/error.hpp"
#include "collarwave/rng.hpp"

namespace collarwave {

std::vector<std::size_t> stratified_fold_assignment(const std::vector<std::string>& labels, int k,
                                                    std::uint64_t seed) {
  if (k < 2) {
    throw Error(errc::invalid_argument, "k must be at least 2");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  for (const auto& [label, rows] : by_class) {
    if (rows.size() < static_cast<std::size_t>(k)) {
      throw Error(errc::class_smaller_than_k, "class '" + label + "' has " +
                                                  std::to_string(rows.size()) +
                                                  " rows, fewer than k=" + std::to_string(k));
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> fold_of_row(labels.size(), 0);
  for (auto& [label, rows] : by_class) {
    rng.shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      fold_of_row[rows[i]] = i % static_cast<std::size_t>(k);
    }
  }
  return fold_of_row;
}

namespace {

struct FoldOutcome {
  std::vector<std::uint8_t> predicted;
  std::vector<std::uint8_t> truth;
  NormalizationStats stats;
};

FoldOutcome run_fold(const Dataset& ds, const TrainConfig& cfg,
                     const std::vector<std::size_t>& train_rows,
                     const std::vector<std::size_t>& test_rows) {
  const Dataset train_raw = ds.subset(train_rows);
  FoldOutcome out;
  out.stats = fit_normalizer(train_raw);
  const ModelArtifact model = train(apply_normalizer(train_raw, out.stats), cfg, out.stats);

  FeatureVector v;
  v.schema_hash = ds.schema.hash();
  for (std::size_t r : test_rows) {
    auto row = ds.row(r);
    v.values.assign(row.begin(), row.end());
    out.predicted.push_back(predict(model, v).positive);
    out.truth.push_back(ds.labels[r] == cfg.positive_label);
  }
  return out;
}

CVReport pool(const Dataset& ds, const TrainConfig& cfg,
              const std::vector<std::size_t>& fold_of_row, std::size_t n_folds) {
  CVReport report;
  report.fold_of_row = fold_of_row;

  std::vector<std::uint8_t> predicted, truth;
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
      (fold_of_row[r] == f ? test_rows : train_rows).push_back(r);
    }
    FoldOutcome fold = run_fold(ds, cfg, train_rows, test_rows);
    predicted.insert(predicted.end(), fold.predicted.begin(), fold.predicted.end());
    truth.insert(truth.end(), fold.truth.begin(), fold.truth.end());
    report.fold_stats.push_back(std::move(fold.stats));
  }

  report.confusion = confusion(predicted, truth);
  report.metrics = metrics(report.confusion);
  return report;
}

}  // namespace

CVReport cross_validate(const Dataset& ds, const TrainConfig& cfg, int k, std::uint64_t seed) {
  const auto folds = stratified_fold_assignment(ds.labels, k, seed);
  CVReport report = pool(ds, cfg, folds, static_cast<std::size_t>(k));
  report.kind = cfg.kind;
  report.k = k;
  report.seed = seed;
  report.mode = "stratified-kfold";
  return report;
}

CVReport leave_one_out(const Dataset& ds, const TrainConfig& cfg) {
  std::map<std::string, std::size_t> class_count;
  for (const std::string& l : ds.labels) ++class_count[l];
  for (const auto& [label, count] : class_count) {
    if (count < 2) {
      throw Error(errc::class_smaller_than_k,
                  "class '" + label + "' has a single row, cannot leave-one-out");
    }
  }

  std::vector<std::size_t> fold_of_row(ds.n_rows);
  for (std::size_t r = 0; r < ds.n_rows; ++r) fold_of_row[r] = r;
  CVReport report = pool(ds, cfg, fold_of_row, ds.n_rows);
  report.kind = cfg.kind;
  report.k = static_cast<int>(ds.n_rows);
  report.seed = cfg.seed;
  report.mode = "leave-one-out";
  return report;
}

}  // namespace collarwave
