#include <algorithm>
#include <cmath>
#include <numeric>

#include "collarwave/error.hpp"
#include "collarwave/models.hpp"
#include "collarwave/rng.hpp"

namespace collarwave {

namespace svm_detail {

double objective(std::span<const double> x, std::size_t rows, std::size_t cols,
                 std::span<const std::uint8_t> y, std::span<const double> w, double bias,
                 double lambda, std::span<const double> row_weights) {
  double hinge = 0.0;
  double total_weight = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double z = bias;
    for (std::size_t c = 0; c < cols; ++c) z += w[c] * x[r * cols + c];
    const double sign = y[r] ? 1.0 : -1.0;
    const double wt = row_weights.empty() ? 1.0 : row_weights[r];
    hinge += wt * std::max(0.0, 1.0 - sign * z);
    total_weight += wt;
  }
  double reg = bias * bias;
  for (double wi : w) reg += wi * wi;
  return 0.5 * lambda * reg + hinge / total_weight;
}

PegasosResult train(std::span<const double> x, std::size_t rows, std::size_t cols,
                    std::span<const std::uint8_t> y, double lambda, int epochs,
                    std::uint64_t seed, std::vector<double>* epoch_mean_objective,
                    std::span<const double> row_weights) {
  // Bias handled as an extra always-one feature; it shares the L2 term.
  std::vector<double> w(cols + 1, 0.0);
  const double radius = 1.0 / std::sqrt(lambda);

  Rng rng(seed);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);

  std::uint64_t t = 0;
  if (epoch_mean_objective) epoch_mean_objective->clear();
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    double objective_sum = 0.0;
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));

      double z = w[cols];
      for (std::size_t c = 0; c < cols; ++c) z += w[c] * x[i * cols + c];
      const double sign = y[i] ? 1.0 : -1.0;

      const double shrink = 1.0 - eta * lambda;
      for (double& wc : w) wc *= shrink;
      if (sign * z < 1.0) {
        const double step = eta * sign * (row_weights.empty() ? 1.0 : row_weights[i]);
        for (std::size_t c = 0; c < cols; ++c) w[c] += step * x[i * cols + c];
        w[cols] += step;
      }

      double norm_sq = 0.0;
      for (double wc : w) norm_sq += wc * wc;
      if (norm_sq > radius * radius) {
        const double scale = radius / std::sqrt(norm_sq);
        for (double& wc : w) wc *= scale;
      }

      if (epoch_mean_objective) {
        objective_sum += objective(x, rows, cols, y, std::span<const double>(w.data(), cols),
                                   w[cols], lambda, row_weights);
      }
    }
    if (epoch_mean_objective) {
      epoch_mean_objective->push_back(objective_sum / static_cast<double>(rows));
    }
  }

  PegasosResult out;
  out.bias = w[cols];
  w.resize(cols);
  out.weights = std::move(w);
  return out;
}

}  // namespace svm_detail

}  // namespace collarwave
