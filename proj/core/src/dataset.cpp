#include "collarwave/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "collarwave/error.hpp"

namespace collarwave {

std::uint64_t FeatureSchema::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const std::string& name : names) {
    for (char c : name) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

std::vector<std::string> Dataset::classes() const {
  std::set<std::string> distinct(labels.begin(), labels.end());
  return {distinct.begin(), distinct.end()};
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.schema = schema;
  out.n_rows = rows.size();
  out.n_cols = n_cols;
  out.values.reserve(rows.size() * n_cols);
  out.labels.reserve(rows.size());
  out.groups.reserve(rows.size());
  out.window_starts.reserve(rows.size());
  for (std::size_t r : rows) {
    auto src = row(r);
    out.values.insert(out.values.end(), src.begin(), src.end());
    out.labels.push_back(labels[r]);
    out.groups.push_back(groups[r]);
    out.window_starts.push_back(window_starts[r]);
  }
  return out;
}

NormalizationStats NormalizationStats::identity(std::size_t d) {
  NormalizationStats s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 1.0);
  s.constant.assign(d, 0);
  return s;
}

NormalizationStats fit_normalizer(const Dataset& ds) {
  if (ds.n_rows < 2) {
    throw Error(errc::too_few_rows, "normalizer needs at least 2 rows");
  }
  NormalizationStats stats;
  stats.mean.assign(ds.n_cols, 0.0);
  stats.stddev.assign(ds.n_cols, 0.0);
  stats.constant.assign(ds.n_cols, 0);

  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    auto row = ds.row(r);
    for (std::size_t c = 0; c < ds.n_cols; ++c) stats.mean[c] += row[c];
  }
  for (std::size_t c = 0; c < ds.n_cols; ++c) stats.mean[c] /= static_cast<double>(ds.n_rows);

  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    auto row = ds.row(r);
    for (std::size_t c = 0; c < ds.n_cols; ++c) {
      const double d = row[c] - stats.mean[c];
      stats.stddev[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < ds.n_cols; ++c) {
    stats.stddev[c] = std::sqrt(stats.stddev[c] / static_cast<double>(ds.n_rows));
    if (stats.stddev[c] < NormalizationStats::kConstantEps) stats.constant[c] = 1;
  }
  return stats;
}

void normalize_in_place(std::span<double> row, const NormalizationStats& stats) {
  if (row.size() != stats.mean.size()) {
    throw Error(errc::schema_mismatch, "row width does not match normalization stats");
  }
  for (std::size_t c = 0; c < row.size(); ++c) {
    row[c] = stats.constant[c] ? 0.0 : (row[c] - stats.mean[c]) / stats.stddev[c];
  }
}

Dataset apply_normalizer(const Dataset& ds, const NormalizationStats& stats) {
  if (ds.n_cols != stats.mean.size()) {
    throw Error(errc::schema_mismatch, "dataset width does not match normalization stats");
  }
  Dataset out = ds;
  for (std::size_t r = 0; r < out.n_rows; ++r) normalize_in_place(out.row(r), stats);
  return out;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

}  // namespace

std::string write_dataset_csv(const Dataset& ds) {
  std::string out = "recording_id,window_start_index,label";
  for (const std::string& name : ds.schema.names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    out += ds.groups[r];
    out += ',';
    out += std::to_string(ds.window_starts[r]);
    out += ',';
    out += ds.labels[r];
    for (double v : ds.row(r)) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

Dataset read_dataset_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view line =
          (nl == std::string_view::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }
  if (lines.empty()) {
    throw Error(errc::bad_header, "empty dataset CSV");
  }
  const auto header = split(lines[0], ',');
  if (header.size() < 4 || header[0] != "recording_id" || header[1] != "window_start_index" ||
      header[2] != "label") {
    throw Error(errc::bad_header,
                "dataset CSV header must start with recording_id,window_start_index,label");
  }

  Dataset ds;
  for (std::size_t i = 3; i < header.size(); ++i) ds.schema.names.emplace_back(header[i]);
  ds.n_cols = ds.schema.names.size();

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 3 + ds.n_cols) {
      throw Error(errc::row_parse, "wrong field count at line " + std::to_string(line_no),
                  line_no);
    }
    std::int64_t start = 0;
    {
      auto f = fields[1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), start);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(errc::row_parse, "bad window_start_index at line " + std::to_string(line_no),
                    line_no);
      }
    }
    ds.groups.emplace_back(fields[0]);
    ds.window_starts.push_back(start);
    ds.labels.emplace_back(fields[2]);
    for (std::size_t c = 0; c < ds.n_cols; ++c) {
      auto f = fields[3 + c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw Error(errc::row_parse, "bad feature value at line " + std::to_string(line_no),
                    line_no);
      }
      ds.values.push_back(v);
    }
    ++ds.n_rows;
  }
  return ds;
}

}  // namespace collarwave
