#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collarwave/cross_validation.hpp"
#include "collarwave/csv.hpp"
#include "collarwave/cwa.hpp"
#include "collarwave/error.hpp"
#include "collarwave/features.hpp"
#include "collarwave/ingest.hpp"
#include "collarwave/models.hpp"
#include "collarwave/report.hpp"
#include "collarwave/stream.hpp"
#include "collarwave/version.hpp"

namespace {

using namespace collarwave;

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::io_error, "cannot open '" + path + "'");
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::string read_file_text(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_error, "cannot write '" + path + "'");
  }
  out << content;
}

std::string path_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

bool looks_like_cwa(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'M' && bytes[1] == 'D';
}

// CWA files carry their own device id and rate; CSVs get them from the
// caller (id defaults to the file stem).
RawRecording load_recording(const std::string& path, double rate_hz) {
  const auto bytes = read_file_bytes(path);
  if (looks_like_cwa(bytes)) {
    CwaParseResult result = parse_cwa(bytes);
    for (const std::string& w : result.warnings) {
      std::cerr << "warning: " << path << ": " << w << "\n";
    }
    if (result.recording.device_id.empty()) {
      result.recording.device_id = path_stem(path);
    }
    return std::move(result.recording);
  }
  return parse_samples_csv(std::string(bytes.begin(), bytes.end()), path_stem(path), rate_hz);
}

std::vector<ModelKind> parse_kind_list(const std::string& csv) {
  std::vector<ModelKind> kinds;
  if (csv.empty()) return kinds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) kinds.push_back(model_kind_from_string(item));
  }
  return kinds;
}

nlohmann::json metrics_to_json(const MetricsReport& m) {
  nlohmann::json flags = nlohmann::json::array();
  if (m.precision_zero_division) flags.push_back("precision_zero_division");
  if (m.recall_zero_division) flags.push_back("recall_zero_division");
  if (m.f1_zero_division) flags.push_back("f1_zero_division");
  return {{"precision", m.precision}, {"recall", m.recall},     {"f1", m.f1},
          {"accuracy", m.accuracy},   {"support", m.support},   {"flags", flags}};
}

struct SharedTrainOptions {
  std::string positive_label = "spin";
  bool class_weighting = false;
  TrainConfig hyper;  // hyperparameter defaults, tweaked by flags
};

void add_hyper_flags(CLI::App* cmd, SharedTrainOptions& opt) {
  cmd->add_option("--positive", opt.positive_label, "Positive class label")
      ->capture_default_str();
  cmd->add_flag("--class-weights", opt.class_weighting,
                "Weight classes by inverse frequency");
  cmd->add_option("--knn-k", opt.hyper.knn.k, "kNN neighbour count")->capture_default_str();
  cmd->add_option("--trees", opt.hyper.forest.n_trees, "Random forest size")
      ->capture_default_str();
  cmd->add_option("--logreg-lambda", opt.hyper.logreg.lambda, "Logistic L2 strength")
      ->capture_default_str();
  cmd->add_option("--logreg-lr", opt.hyper.logreg.learning_rate, "Logistic learning rate")
      ->capture_default_str();
  cmd->add_option("--logreg-iters", opt.hyper.logreg.iterations, "Logistic iterations")
      ->capture_default_str();
  cmd->add_option("--svm-lambda", opt.hyper.svm.lambda, "SVM L2 strength")
      ->capture_default_str();
  cmd->add_option("--svm-epochs", opt.hyper.svm.epochs, "SVM training epochs")
      ->capture_default_str();
  cmd->add_option("--nb-smoothing", opt.hyper.nb.var_smoothing,
                  "Naive Bayes variance smoothing factor")
      ->capture_default_str();
}

TrainConfig make_config(const SharedTrainOptions& opt, const std::string& model,
                        std::uint64_t seed) {
  TrainConfig cfg = opt.hyper;
  cfg.kind = model_kind_from_string(model);
  cfg.seed = seed;
  cfg.positive_label = opt.positive_label;
  cfg.class_weighting = opt.class_weighting;
  return cfg;
}

void print_alert(const AlertEvent& alert) {
  std::printf("ALERT t_ms=%lld confidence=%.3f span=%lld-%lld\n",
              static_cast<long long>(alert.t_ms), alert.confidence,
              static_cast<long long>(alert.span_start_ms),
              static_cast<long long>(alert.span_end_ms));
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collarwave: spin-signalling detection from collar accelerometer logs"};
  app.require_subcommand(1);
  std::string version_line = std::string("collarwave ") + kVersion + " (model format v" +
                             std::to_string(kModelFormatVersion) + ")";
  app.set_version_flag("--version", version_line);

  // convert
  auto* cmd_convert = app.add_subcommand("convert", "Convert a binary log to samples CSV");
  std::string convert_in, convert_out;
  cmd_convert->add_option("--in", convert_in, "Input .cwa file")->required();
  cmd_convert->add_option("--out", convert_out, "Output samples CSV")->required();

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "Check the empirical sample rate");
  std::string validate_in;
  double validate_rate_hz = 12.5, validate_tol = 0.02;
  cmd_validate->add_option("--in", validate_in, "Input .cwa or samples CSV")->required();
  cmd_validate->add_option("--rate", validate_rate_hz, "Expected rate in Hz")
      ->capture_default_str();
  cmd_validate->add_option("--tol", validate_tol, "Relative tolerance")->capture_default_str();

  // featurize
  auto* cmd_featurize = app.add_subcommand("featurize", "Extract labeled window features");
  std::string feat_samples, feat_ann, feat_ann2, feat_out, feat_recording_id;
  std::size_t feat_window = 12;
  double feat_overlap = 0.5, feat_min_overlap = 0.5, feat_rate = 12.5;
  cmd_featurize->add_option("--samples", feat_samples, "Input .cwa or samples CSV")->required();
  cmd_featurize->add_option("--annotations", feat_ann, "Annotations CSV")->required();
  cmd_featurize->add_option("--annotations2", feat_ann2,
                            "Second annotator track; only agreements are kept");
  cmd_featurize->add_option("--out", feat_out, "Output feature CSV")->required();
  cmd_featurize->add_option("--window", feat_window, "Window length in samples")
      ->capture_default_str();
  cmd_featurize->add_option("--overlap", feat_overlap, "Window overlap fraction")
      ->capture_default_str();
  cmd_featurize->add_option("--min-overlap", feat_min_overlap,
                            "Fraction of a window an interval must cover to label it")
      ->capture_default_str();
  cmd_featurize->add_option("--rate", feat_rate, "Nominal rate for CSV input (Hz)")
      ->capture_default_str();
  cmd_featurize->add_option("--recording-id", feat_recording_id,
                            "Override the recording id (default: device id or file stem)");

  // train
  auto* cmd_train = app.add_subcommand("train", "Train a classifier on a feature CSV");
  std::string train_features, train_model, train_out;
  std::uint64_t train_seed = 42;
  SharedTrainOptions train_opt;
  cmd_train->add_option("--features", train_features, "Feature CSV")->required();
  cmd_train->add_option("--model", train_model, "nb|logreg|knn|rf|svm")->required();
  cmd_train->add_option("--seed", train_seed, "Training seed")->capture_default_str();
  cmd_train->add_option("--out", train_out, "Output model JSON")->required();
  add_hyper_flags(cmd_train, train_opt);

  // cv
  auto* cmd_cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  std::string cv_features, cv_model, cv_out;
  int cv_k = 10;
  std::uint64_t cv_seed = 42;
  SharedTrainOptions cv_opt;
  cmd_cv->add_option("--features", cv_features, "Feature CSV")->required();
  cmd_cv->add_option("--model", cv_model, "nb|logreg|knn|rf|svm")->required();
  cmd_cv->add_option("--k", cv_k, "Fold count")->capture_default_str();
  cmd_cv->add_option("--seed", cv_seed, "Fold shuffle and training seed")->capture_default_str();
  cmd_cv->add_option("--out", cv_out, "Output report JSON (default: stdout)");
  add_hyper_flags(cmd_cv, cv_opt);

  // report
  auto* cmd_report = app.add_subcommand("report", "Per-dog or pooled evaluation tables");
  std::string rep_features, rep_mode = "pooled", rep_models = "nb,logreg,knn,rf,svm";
  std::string rep_out, rep_plot;
  int rep_k = 10;
  std::uint64_t rep_seed = 42;
  SharedTrainOptions rep_opt;
  cmd_report->add_option("--features", rep_features, "Feature CSV")->required();
  cmd_report->add_option("--mode", rep_mode, "per-dog|pooled")
      ->check(CLI::IsMember({"per-dog", "pooled"}))
      ->capture_default_str();
  cmd_report->add_option("--models", rep_models, "Comma-separated classifier list")
      ->capture_default_str();
  cmd_report->add_option("--out", rep_out, "Output report CSV (default: stdout)");
  cmd_report->add_option("--plot", rep_plot, "Write a recall bar chart SVG");
  cmd_report->add_option("--k", rep_k, "Fold count")->capture_default_str();
  cmd_report->add_option("--seed", rep_seed, "Fold shuffle and training seed")
      ->capture_default_str();
  add_hyper_flags(cmd_report, rep_opt);

  // detect
  auto* cmd_detect = app.add_subcommand("detect", "Run the online detector");
  std::string det_model, det_replay;
  bool det_live = false;
  int det_m = 2, det_n = 3;
  std::int64_t det_refractory = 30000;
  std::size_t det_window = 12;
  double det_overlap = 0.5, det_rate = 12.5;
  cmd_detect->add_option("--model", det_model, "Trained model JSON")->required();
  auto* opt_replay = cmd_detect->add_option("--replay", det_replay, "Replay a recorded file");
  auto* opt_live =
      cmd_detect->add_flag("--live", det_live, "Read `t_ms x_g y_g z_g` lines from stdin");
  opt_replay->excludes(opt_live);
  cmd_detect->add_option("--m", det_m, "Positive windows required")->capture_default_str();
  cmd_detect->add_option("--n", det_n, "Decision history length")->capture_default_str();
  cmd_detect->add_option("--refractory-ms", det_refractory, "Alert suppression period")
      ->capture_default_str();
  cmd_detect->add_option("--window", det_window, "Window length in samples")
      ->capture_default_str();
  cmd_detect->add_option("--overlap", det_overlap, "Window overlap fraction")
      ->capture_default_str();
  cmd_detect->add_option("--rate", det_rate, "Nominal sample rate (Hz)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_convert->parsed()) {
      const auto bytes = read_file_bytes(convert_in);
      CwaParseResult result = parse_cwa(bytes);
      for (const std::string& w : result.warnings) {
        std::cerr << "warning: " << convert_in << ": " << w << "\n";
      }
      write_file(convert_out, write_samples_csv(result.recording));
      std::cerr << "wrote " << result.recording.samples.size() << " samples to " << convert_out
                << "\n";
      return 0;
    }

    if (cmd_validate->parsed()) {
      const RawRecording rec = load_recording(validate_in, validate_rate_hz);
      const RateReport report = validate_rate(rec, validate_rate_hz, validate_tol);
      std::printf("empirical_hz=%.6f expected_hz=%.6f rel_tol=%.6f pass=%s\n",
                  report.empirical_hz, report.expected_hz, report.rel_tol,
                  report.pass ? "true" : "false");
      return report.pass ? 0 : 3;
    }

    if (cmd_featurize->parsed()) {
      RawRecording rec = load_recording(feat_samples, feat_rate);
      if (!feat_recording_id.empty()) rec.device_id = feat_recording_id;

      AnnotationTrack track = parse_annotations_csv(read_file_text(feat_ann), rec.device_id);
      if (!feat_ann2.empty()) {
        const AnnotationTrack second =
            parse_annotations_csv(read_file_text(feat_ann2), rec.device_id);
        track = merge_annotations(track, second);
      }

      const WindowSpec spec{feat_window, feat_overlap};
      LabelConfig label_cfg;
      label_cfg.min_overlap_fraction = feat_min_overlap;
      const auto windows = label_windows(make_windows(rec, spec), track, label_cfg);
      const Dataset ds = featurize(windows, {rec.nominal_rate_hz});
      write_file(feat_out, write_dataset_csv(ds));
      std::cerr << "wrote " << ds.n_rows << " windows x " << ds.n_cols << " features to "
                << feat_out << "\n";
      return 0;
    }

    if (cmd_train->parsed()) {
      const Dataset ds = read_dataset_csv(read_file_text(train_features));
      const TrainConfig cfg = make_config(train_opt, train_model, train_seed);
      const ModelArtifact model = train_standardized(ds, cfg);
      write_file(train_out, save_model(model));
      std::cerr << "trained " << model_kind_name(cfg.kind) << " on " << ds.n_rows
                << " rows, wrote " << train_out << "\n";
      return 0;
    }

    if (cmd_cv->parsed()) {
      const Dataset ds = read_dataset_csv(read_file_text(cv_features));
      TrainConfig cfg = make_config(cv_opt, cv_model, cv_seed);
      const CVReport report = cross_validate(ds, cfg, cv_k, cv_seed);

      std::vector<std::size_t> fold_sizes(static_cast<std::size_t>(cv_k), 0);
      for (std::size_t f : report.fold_of_row) ++fold_sizes[f];
      nlohmann::json j{{"format", "collarwave-cv-report"},
                       {"version", 1},
                       {"kind", model_kind_name(report.kind)},
                       {"k", report.k},
                       {"seed", report.seed},
                       {"mode", report.mode},
                       {"confusion",
                        {{"tp", report.confusion.tp},
                         {"fp", report.confusion.fp},
                         {"fn", report.confusion.fn},
                         {"tn", report.confusion.tn}}},
                       {"metrics", metrics_to_json(report.metrics)},
                       {"fold_sizes", fold_sizes}};
      const std::string text = j.dump(2) + "\n";
      if (cv_out.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        write_file(cv_out, text);
      }
      return 0;
    }

    if (cmd_report->parsed()) {
      const Dataset ds = read_dataset_csv(read_file_text(rep_features));
      const std::vector<ModelKind> kinds = parse_kind_list(rep_models);
      TrainConfig base = make_config(rep_opt, "nb", rep_seed);

      ReportTable table;
      if (rep_mode == "pooled") {
        table = pooled_report(ds, kinds, base, rep_k, rep_seed);
      } else {
        for (ModelKind kind : kinds) {
          TrainConfig cfg = base;
          cfg.kind = kind;
          ReportTable part = per_group_report(ds, cfg, rep_k, rep_seed);
          table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
        }
      }

      const std::string csv = render_table_csv(table);
      if (rep_out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        write_file(rep_out, csv);
        std::cerr << render_table_text(table);
      }
      if (!rep_plot.empty()) {
        write_file(rep_plot, render_recall_svg(table));
      }
      return 0;
    }

    if (cmd_detect->parsed()) {
      const ModelArtifact model = load_model(read_file_text(det_model));
      DetectorConfig cfg;
      cfg.window = WindowSpec{det_window, det_overlap};
      cfg.m = det_m;
      cfg.n = det_n;
      cfg.refractory_ms = det_refractory;
      cfg.sample_rate_hz = det_rate;
      Detector detector(model, cfg);

      std::size_t alerts = 0;
      if (!det_replay.empty()) {
        const RawRecording rec = load_recording(det_replay, det_rate);
        for (const Sample& s : rec.samples) {
          if (auto alert = detector.push_sample(s)) {
            print_alert(*alert);
            ++alerts;
          }
        }
      } else if (det_live) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(std::cin, line)) {
          ++line_no;
          if (line.empty()) continue;
          Sample s;
          std::istringstream ss(line);
          if (!(ss >> s.t_ms >> s.x_g >> s.y_g >> s.z_g)) {
            throw Error(errc::row_parse, "bad feed line " + std::to_string(line_no), line_no);
          }
          if (auto alert = detector.push_sample(s)) {
            print_alert(*alert);
            ++alerts;
          }
        }
      } else {
        std::cerr << "detect: one of --replay or --live is required\n";
        return 1;
      }
      std::cerr << alerts << " alert(s)\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return errc_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
