#include <algorithm>
#include <cmath>

#include "collarwave/error.hpp"
#include "collarwave/models.hpp"
#include "collarwave/rng.hpp"

namespace collarwave {

namespace {

struct TreeBuilder {
  std::span<const double> x;
  std::size_t cols = 0;
  std::span<const std::uint8_t> y;
  std::size_t mtry = 0;
  int min_samples_split = 2;
  int max_depth = 0;
  Rng* rng = nullptr;
  std::vector<TreeNode> nodes;

  double value(std::size_t row, std::size_t col) const { return x[row * cols + col]; }

  // Weighted Gini impurity of a candidate split.
  static double split_gini(std::size_t left_n, std::size_t left_pos, std::size_t n,
                           std::size_t pos) {
    const auto impurity = [](std::size_t cnt, std::size_t p) {
      if (cnt == 0) return 0.0;
      const double fp = static_cast<double>(p) / static_cast<double>(cnt);
      return 2.0 * fp * (1.0 - fp);
    };
    const std::size_t right_n = n - left_n;
    const std::size_t right_pos = pos - left_pos;
    return (static_cast<double>(left_n) * impurity(left_n, left_pos) +
            static_cast<double>(right_n) * impurity(right_n, right_pos)) /
           static_cast<double>(n);
  }

  std::int32_t build(std::vector<std::size_t>& rows, int depth) {
    std::size_t pos = 0;
    for (std::size_t r : rows) pos += y[r];

    const auto make_leaf = [&]() {
      TreeNode leaf;
      leaf.feature = -1;
      leaf.leaf_positive = 2 * pos >= rows.size();  // majority, ties positive
      nodes.push_back(leaf);
      return static_cast<std::int32_t>(nodes.size() - 1);
    };

    if (pos == 0 || pos == rows.size() ||
        rows.size() < static_cast<std::size_t>(min_samples_split) ||
        (max_depth > 0 && depth >= max_depth)) {
      return make_leaf();
    }

    // Feature subsample without replacement.
    std::vector<std::size_t> candidates(cols);
    for (std::size_t c = 0; c < cols; ++c) candidates[c] = c;
    for (std::size_t i = 0; i < mtry; ++i) {
      const std::size_t j = i + rng->uniform_index(cols - i);
      std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(mtry);

    double best_gini = std::numeric_limits<double>::infinity();
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;

    std::vector<std::pair<double, std::uint8_t>> sorted(rows.size());
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        sorted[i] = {value(rows[i], f), y[rows[i]]};
      }
      std::sort(sorted.begin(), sorted.end());

      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_pos += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double g = split_gini(i + 1, left_pos, rows.size(), pos);
        if (g < best_gini) {
          best_gini = g;
          best_feature = f;
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          found = true;
        }
      }
    }
    if (!found) return make_leaf();

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      (value(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    TreeNode node;
    node.feature = static_cast<std::int32_t>(best_feature);
    node.threshold = best_threshold;
    nodes.push_back(node);
    const auto index = static_cast<std::int32_t>(nodes.size() - 1);
    const std::int32_t left = build(left_rows, depth + 1);
    nodes[index].left = left;
    const std::int32_t right = build(right_rows, depth + 1);
    nodes[index].right = right;
    return index;
  }
};

bool tree_vote(const DecisionTree& tree, std::span<const double> v) {
  std::int32_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const TreeNode& n = tree.nodes[i];
    i = v[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return tree.nodes[i].leaf_positive != 0;
}

}  // namespace

ForestParams train_random_forest(std::span<const double> x, std::size_t rows, std::size_t cols,
                                 std::span<const std::uint8_t> y, const TrainConfig& cfg) {
  ForestParams params;
  params.trees.resize(cfg.forest.n_trees);
  const auto mtry = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(cols))));

  for (int t = 0; t < cfg.forest.n_trees; ++t) {
    // Positional per-tree seed: training order cannot change the forest.
    Rng rng(cfg.seed + static_cast<std::uint64_t>(t));

    std::vector<std::size_t> sample(rows);
    for (std::size_t i = 0; i < rows; ++i) sample[i] = rng.uniform_index(rows);

    TreeBuilder builder;
    builder.x = x;
    builder.cols = cols;
    builder.y = y;
    builder.mtry = std::min(mtry, cols);
    builder.min_samples_split = cfg.forest.min_samples_split;
    builder.max_depth = cfg.forest.max_depth;
    builder.rng = &rng;
    builder.build(sample, 0);
    params.trees[t].nodes = std::move(builder.nodes);
  }
  return params;
}

double forest_positive_fraction(const ForestParams& params, std::span<const double> v) {
  std::size_t votes = 0;
  for (const DecisionTree& tree : params.trees) votes += tree_vote(tree, v);
  return static_cast<double>(votes) / static_cast<double>(params.trees.size());
}

}  // namespace collarwave
