#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace collarwave {

// Binary confusion counts, positive class first.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(std::span<const std::uint8_t> predicted_positive,
                          std::span<const std::uint8_t> truth_positive);

ConfusionMatrix confusion(const std::vector<std::string>& predictions,
                          const std::vector<std::string>& truths,
                          const std::string& positive_label);

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t support = 0;  // tp + fn
  // 0/0 cases resolved by the zero-division convention, flagged explicitly.
  bool precision_zero_division = false;
  bool recall_zero_division = false;
  bool f1_zero_division = false;
};

MetricsReport metrics(const ConfusionMatrix& cm, double zero_division_value = 0.0);

}  // namespace collarwave
