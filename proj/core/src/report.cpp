#include "collarwave/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "collarwave/error.hpp"

namespace collarwave {

namespace {

std::string metric_flags(const MetricsReport& m) {
  std::string flags;
  auto add = [&flags](const char* f) {
    if (!flags.empty()) flags += ';';
    flags += f;
  };
  if (m.precision_zero_division) add("precision_zero_division");
  if (m.recall_zero_division) add("recall_zero_division");
  if (m.f1_zero_division) add("f1_zero_division");
  return flags;
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

ReportRow average_row(const std::vector<ReportRow>& rows, const std::string& model) {
  ReportRow avg;
  avg.group = "average";
  avg.model = model;
  avg.is_average = true;
  const double n = static_cast<double>(rows.size());
  for (const ReportRow& r : rows) {
    avg.metrics.precision += r.metrics.precision / n;
    avg.metrics.recall += r.metrics.recall / n;
    avg.metrics.f1 += r.metrics.f1 / n;
    avg.metrics.accuracy += r.metrics.accuracy / n;
    avg.metrics.support += r.metrics.support;
  }
  return avg;
}

}  // namespace

ReportTable per_group_report(const Dataset& ds, const TrainConfig& cfg, int k,
                             std::uint64_t seed) {
  if (ds.n_rows == 0) {
    throw Error(errc::empty_input, "empty dataset");
  }
  std::set<std::string> group_ids(ds.groups.begin(), ds.groups.end());

  ReportTable table;
  for (const std::string& group : group_ids) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
      if (ds.groups[r] == group) rows.push_back(r);
    }
    const Dataset group_ds = ds.subset(rows);

    ReportRow row;
    row.group = group;
    row.model = model_kind_name(cfg.kind);
    try {
      const CVReport cv = cross_validate(group_ds, cfg, k, seed);
      row.metrics = cv.metrics;
      row.flags = metric_flags(cv.metrics);
    } catch (const Error& e) {
      if (e.code() != errc::class_smaller_than_k) throw;
      const CVReport cv = leave_one_out(group_ds, cfg);
      row.metrics = cv.metrics;
      row.flags = metric_flags(cv.metrics);
      row.flags = row.flags.empty() ? "loo" : row.flags + ";loo";
    }
    table.rows.push_back(std::move(row));
  }

  table.rows.push_back(average_row(table.rows, model_kind_name(cfg.kind)));
  return table;
}

ReportTable pooled_report(const Dataset& ds, const std::vector<ModelKind>& kinds,
                          const TrainConfig& base_cfg, int k, std::uint64_t seed) {
  ReportTable table;
  for (ModelKind kind : kinds) {
    TrainConfig cfg = base_cfg;
    cfg.kind = kind;
    const CVReport cv = cross_validate(ds, cfg, k, seed);
    ReportRow row;
    row.group = "all";
    row.model = model_kind_name(kind);
    row.metrics = cv.metrics;
    row.flags = metric_flags(cv.metrics);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_table_csv(const ReportTable& table) {
  std::string out = "group,model,precision,recall,f1,support,accuracy,flags\n";
  for (const ReportRow& r : table.rows) {
    out += r.group;
    out += ',';
    out += r.model;
    out += ',';
    out += format_metric(r.metrics.precision);
    out += ',';
    out += format_metric(r.metrics.recall);
    out += ',';
    out += format_metric(r.metrics.f1);
    out += ',';
    if (!r.is_average) out += std::to_string(r.metrics.support);
    out += ',';
    out += format_metric(r.metrics.accuracy);
    out += ',';
    out += r.flags;
    out += '\n';
  }
  return out;
}

std::string render_table_text(const ReportTable& table) {
  std::size_t group_w = 5, model_w = 5;
  for (const ReportRow& r : table.rows) {
    group_w = std::max(group_w, r.group.size());
    model_w = std::max(model_w, r.model.size());
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %-*s  %9s  %9s  %9s  %7s  %9s\n",
                static_cast<int>(group_w), "group", static_cast<int>(model_w), "model",
                "precision", "recall", "f1", "support", "accuracy");
  std::string out = buf;
  for (const ReportRow& r : table.rows) {
    char support[16] = "";
    if (!r.is_average) {
      std::snprintf(support, sizeof(support), "%zu", r.metrics.support);
    }
    std::snprintf(buf, sizeof(buf), "%-*s  %-*s  %9.2f  %9.2f  %9.2f  %7s  %9.2f\n",
                  static_cast<int>(group_w), r.group.c_str(), static_cast<int>(model_w),
                  r.model.c_str(), r.metrics.precision, r.metrics.recall, r.metrics.f1, support,
                  r.metrics.accuracy);
    out += buf;
  }
  return out;
}

std::string render_recall_svg(const ReportTable& table) {
  // Average rows are summaries, not bars.
  std::vector<const ReportRow*> rows;
  for (const ReportRow& r : table.rows) {
    if (!r.is_average) rows.push_back(&r);
  }

  const int bar_w = 60;
  const int gap = 20;
  const int plot_h = 200;
  const int margin = 40;
  const int width = margin * 2 + static_cast<int>(rows.size()) * (bar_w + gap);
  const int height = plot_h + margin * 2;

  char buf[512];
  std::string svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n", width,
                height);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "  <line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                margin + plot_h, width - margin, margin + plot_h);
  svg += buf;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ReportRow& r = *rows[i];
    const int h = static_cast<int>(r.metrics.recall * plot_h);
    const int x = margin + static_cast<int>(i) * (bar_w + gap);
    const int y = margin + plot_h - h;
    std::snprintf(buf, sizeof(buf),
                  "  <rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"#4477aa\"/>\n", x, y,
                  bar_w, h);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
                  x + bar_w / 2, margin + plot_h + 16, (r.group + "/" + r.model).c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">%.2f</text>\n",
                  x + bar_w / 2, y - 4, r.metrics.recall);
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace collarwave
