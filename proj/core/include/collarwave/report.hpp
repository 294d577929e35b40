#pragma once

#include <string>
#include <vector>

#include "collarwave/cross_validation.hpp"

namespace collarwave {

struct ReportRow {
  std::string group;  // dog/recording id, "all" for pooled, "average" for the mean row
  std::string model;
  MetricsReport metrics;
  std::string flags;  // semicolon-joined: zero-division markers, "loo" fallback
  bool is_average = false;
};

struct ReportTable {
  std::vector<ReportRow> rows;
};

// One row per group (sorted ids) from within-group CV, plus an `average`
// row holding the unweighted mean of precision/recall/f1/accuracy. Groups
// whose classes are smaller than k fall back to leave-one-out, flagged
// "loo".
ReportTable per_group_report(const Dataset& ds, const TrainConfig& cfg, int k = 10,
                             std::uint64_t seed = 42);

// One row per requested classifier from pooled CV over the whole dataset.
// An empty kind list yields an empty table.
ReportTable pooled_report(const Dataset& ds, const std::vector<ModelKind>& kinds,
                          const TrainConfig& base_cfg, int k = 10, std::uint64_t seed = 42);

// Deterministic renderers. CSV columns:
// group,model,precision,recall,f1,support,accuracy,flags
std::string render_table_csv(const ReportTable& table);
std::string render_table_text(const ReportTable& table);

// Static bar chart of per-model recall.
std::string render_recall_svg(const ReportTable& table);

}  // namespace collarwave
