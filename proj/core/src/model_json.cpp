#include <charconv>
#include <cstdio>

#include <json.hpp>

#include "collarwave/error.hpp"
#include "collarwave/models.hpp"
#include "collarwave/version.hpp"

namespace collarwave {

namespace {

using nlohmann::json;

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t from_hex(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(errc::corrupt_artifact, "bad hex field '" + s + "'");
  }
  return v;
}

json gaussian_to_json(const GaussianClassStats& s) {
  return json{{"log_prior", s.log_prior}, {"mean", s.mean}, {"variance", s.variance}};
}

GaussianClassStats gaussian_from_json(const json& j) {
  GaussianClassStats s;
  s.log_prior = j.at("log_prior").get<double>();
  s.mean = j.at("mean").get<std::vector<double>>();
  s.variance = j.at("variance").get<std::vector<double>>();
  return s;
}

json params_to_json(const ModelArtifact& m) {
  json j;
  switch (m.kind) {
    case ModelKind::naive_bayes: {
      const auto& p = std::get<NaiveBayesParams>(m.params);
      j["negative"] = gaussian_to_json(p.negative);
      j["positive"] = gaussian_to_json(p.positive);
      break;
    }
    case ModelKind::logreg: {
      const auto& p = std::get<LogRegParams>(m.params);
      j["weights"] = p.weights;
      j["bias"] = p.bias;
      break;
    }
    case ModelKind::knn: {
      const auto& p = std::get<KnnParams>(m.params);
      j["k"] = p.k;
      j["n_cols"] = p.n_cols;
      j["points"] = p.points;
      j["positive"] = p.positive;
      break;
    }
    case ModelKind::random_forest: {
      const auto& p = std::get<ForestParams>(m.params);
      json trees = json::array();
      for (const DecisionTree& tree : p.trees) {
        json nodes = json::array();
        for (const TreeNode& n : tree.nodes) {
          nodes.push_back(json::array(
              {n.feature, n.threshold, n.left, n.right, static_cast<int>(n.leaf_positive)}));
        }
        trees.push_back(std::move(nodes));
      }
      j["trees"] = std::move(trees);
      break;
    }
    case ModelKind::svm_linear: {
      const auto& p = std::get<SvmParams>(m.params);
      j["weights"] = p.weights;
      j["bias"] = p.bias;
      break;
    }
  }
  return j;
}

ModelParams params_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::naive_bayes: {
      NaiveBayesParams p;
      p.negative = gaussian_from_json(j.at("negative"));
      p.positive = gaussian_from_json(j.at("positive"));
      return p;
    }
    case ModelKind::logreg: {
      LogRegParams p;
      p.weights = j.at("weights").get<std::vector<double>>();
      p.bias = j.at("bias").get<double>();
      return p;
    }
    case ModelKind::knn: {
      KnnParams p;
      p.k = j.at("k").get<int>();
      p.n_cols = j.at("n_cols").get<std::size_t>();
      p.points = j.at("points").get<std::vector<double>>();
      p.positive = j.at("positive").get<std::vector<std::uint8_t>>();
      if (p.n_cols == 0 || p.points.size() != p.positive.size() * p.n_cols) {
        throw Error(errc::corrupt_artifact, "knn matrix shape mismatch");
      }
      return p;
    }
    case ModelKind::random_forest: {
      ForestParams p;
      for (const json& jt : j.at("trees")) {
        DecisionTree tree;
        for (const json& jn : jt) {
          TreeNode n;
          n.feature = jn.at(0).get<std::int32_t>();
          n.threshold = jn.at(1).get<double>();
          n.left = jn.at(2).get<std::int32_t>();
          n.right = jn.at(3).get<std::int32_t>();
          n.leaf_positive = static_cast<std::uint8_t>(jn.at(4).get<int>());
          tree.nodes.push_back(n);
        }
        if (tree.nodes.empty()) {
          throw Error(errc::corrupt_artifact, "empty tree");
        }
        p.trees.push_back(std::move(tree));
      }
      return p;
    }
    case ModelKind::svm_linear: {
      SvmParams p;
      p.weights = j.at("weights").get<std::vector<double>>();
      p.bias = j.at("bias").get<double>();
      return p;
    }
  }
  throw Error(errc::corrupt_artifact, "unknown model kind");
}

json hyperparameters_to_json(const TrainConfig& c) {
  return json{
      {"nb", {{"var_smoothing", c.nb.var_smoothing}}},
      {"logreg",
       {{"lambda", c.logreg.lambda},
        {"learning_rate", c.logreg.learning_rate},
        {"iterations", c.logreg.iterations}}},
      {"knn", {{"k", c.knn.k}}},
      {"forest",
       {{"n_trees", c.forest.n_trees},
        {"min_samples_split", c.forest.min_samples_split},
        {"max_depth", c.forest.max_depth}}},
      {"svm", {{"lambda", c.svm.lambda}, {"epochs", c.svm.epochs}}},
  };
}

void hyperparameters_from_json(const json& j, TrainConfig& c) {
  c.nb.var_smoothing = j.at("nb").at("var_smoothing").get<double>();
  c.logreg.lambda = j.at("logreg").at("lambda").get<double>();
  c.logreg.learning_rate = j.at("logreg").at("learning_rate").get<double>();
  c.logreg.iterations = j.at("logreg").at("iterations").get<int>();
  c.knn.k = j.at("knn").at("k").get<int>();
  c.forest.n_trees = j.at("forest").at("n_trees").get<int>();
  c.forest.min_samples_split = j.at("forest").at("min_samples_split").get<int>();
  c.forest.max_depth = j.at("forest").at("max_depth").get<int>();
  c.svm.lambda = j.at("svm").at("lambda").get<double>();
  c.svm.epochs = j.at("svm").at("epochs").get<int>();
}

}  // namespace

std::string save_model(const ModelArtifact& m) {
  json j;
  j["format"] = "collarwave-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = model_kind_name(m.kind);
  j["positive_label"] = m.positive_label;
  j["schema_hash"] = to_hex(m.schema_hash);
  j["normalization"] = {{"mean", m.normalization.mean},
                        {"stddev", m.normalization.stddev},
                        {"constant", m.normalization.constant}};
  j["params"] = params_to_json(m);
  j["meta"] = {{"seed", m.config.seed},
               {"class_weighting", m.config.class_weighting},
               {"dataset_fingerprint", to_hex(m.dataset_fingerprint)},
               {"hyperparameters", hyperparameters_to_json(m.config)},
               {"library_version", kVersion}};
  return j.dump(2) + "\n";
}

ModelArtifact load_model(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error(errc::corrupt_artifact, std::string("unparseable artifact: ") + e.what());
  }

  try {
    if (!j.is_object() || j.value("format", "") != "collarwave-model") {
      throw Error(errc::corrupt_artifact, "not a collarwave model document");
    }
    if (!j.contains("version") || j.at("version") != json(kModelFormatVersion)) {
      throw Error(errc::version_mismatch, "unsupported model format version");
    }

    ModelArtifact m;
    m.kind = model_kind_from_string(j.at("kind").get<std::string>());
    m.positive_label = j.at("positive_label").get<std::string>();
    m.schema_hash = from_hex(j.at("schema_hash").get<std::string>());
    const json& norm = j.at("normalization");
    m.normalization.mean = norm.at("mean").get<std::vector<double>>();
    m.normalization.stddev = norm.at("stddev").get<std::vector<double>>();
    m.normalization.constant = norm.at("constant").get<std::vector<std::uint8_t>>();
    if (m.normalization.stddev.size() != m.normalization.mean.size() ||
        m.normalization.constant.size() != m.normalization.mean.size()) {
      throw Error(errc::corrupt_artifact, "normalization arrays differ in length");
    }
    m.params = params_from_json(m.kind, j.at("params"));

    const json& meta = j.at("meta");
    m.config.kind = m.kind;
    m.config.positive_label = m.positive_label;
    m.config.seed = meta.at("seed").get<std::uint64_t>();
    m.config.class_weighting = meta.at("class_weighting").get<bool>();
    m.dataset_fingerprint = from_hex(meta.at("dataset_fingerprint").get<std::string>());
    hyperparameters_from_json(meta.at("hyperparameters"), m.config);
    return m;
  } catch (const json::exception& e) {
    throw Error(errc::corrupt_artifact, std::string("malformed artifact: ") + e.what());
  }
}

}  // namespace collarwave
