#include "collarwave/eval.hpp"

#include "collarwave/error.hpp"

namespace collarwave {

ConfusionMatrix confusion(std::span<const std::uint8_t> predicted_positive,
                          std::span<const std::uint8_t> truth_positive) {
  if (predicted_positive.size() != truth_positive.size()) {
    throw Error(errc::length_mismatch, "prediction and truth vectors differ in length");
  }
  if (predicted_positive.empty()) {
    throw Error(errc::empty_eval, "nothing to evaluate");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted_positive.size(); ++i) {
    const bool p = predicted_positive[i] != 0;
    const bool t = truth_positive[i] != 0;
    if (p && t) ++cm.tp;
    else if (p && !t) ++cm.fp;
    else if (!p && t) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

ConfusionMatrix confusion(const std::vector<std::string>& predictions,
                          const std::vector<std::string>& truths,
                          const std::string& positive_label) {
  std::vector<std::uint8_t> p(predictions.size()), t(truths.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) p[i] = predictions[i] == positive_label;
  for (std::size_t i = 0; i < truths.size(); ++i) t[i] = truths[i] == positive_label;
  return confusion(p, t);
}

MetricsReport metrics(const ConfusionMatrix& cm, double zero_division_value) {
  if (cm.total() == 0) {
    throw Error(errc::empty_eval, "empty confusion matrix");
  }
  MetricsReport r;
  r.support = cm.tp + cm.fn;

  if (cm.tp + cm.fp == 0) {
    r.precision = zero_division_value;
    r.precision_zero_division = true;
  } else {
    r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  }
  if (cm.tp + cm.fn == 0) {
    r.recall = zero_division_value;
    r.recall_zero_division = true;
  } else {
    r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  if (r.precision + r.recall == 0.0) {
    r.f1 = zero_division_value;
    r.f1_zero_division = true;
  } else {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  return r;
}

}  // namespace collarwave
