#include "collarwave/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "collarwave/error.hpp"

namespace collarwave {

namespace {

// Splits `text` into lines, stripping one trailing '\r' per line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos) ? text.substr(pos)
                                                           : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

bool parse_i64(std::string_view s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

RawRecording parse_samples_csv(std::string_view text, std::string device_id,
                               double nominal_rate_hz) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "t_ms,x_g,y_g,z_g") {
    throw Error(errc::bad_header, "samples CSV header must be t_ms,x_g,y_g,z_g");
  }

  RawRecording rec;
  rec.device_id = std::move(device_id);
  rec.nominal_rate_hz = nominal_rate_hz;

  std::int64_t prev_t = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;  // tolerate trailing blank line
    const auto fields = split_fields(lines[i]);
    Sample s;
    if (fields.size() != 4 || !parse_i64(fields[0], s.t_ms) || !parse_double(fields[1], s.x_g) ||
        !parse_double(fields[2], s.y_g) || !parse_double(fields[3], s.z_g)) {
      throw Error(errc::row_parse, "bad sample row at line " + std::to_string(line_no), line_no);
    }
    if (s.t_ms < 0 || std::fabs(s.x_g) > kFullScaleG || std::fabs(s.y_g) > kFullScaleG ||
        std::fabs(s.z_g) > kFullScaleG) {
      throw Error(errc::row_parse, "value out of range at line " + std::to_string(line_no),
                  line_no);
    }
    if (s.t_ms <= prev_t) {
      throw Error(errc::non_monotonic_timestamp,
                  "timestamp not increasing at line " + std::to_string(line_no), line_no);
    }
    prev_t = s.t_ms;
    rec.samples.push_back(s);
  }
  return rec;
}

std::string write_samples_csv(const RawRecording& rec) {
  std::string out = "t_ms,x_g,y_g,z_g\n";
  for (const Sample& s : rec.samples) {
    out += std::to_string(s.t_ms);
    out += ',';
    append_double(out, s.x_g);
    out += ',';
    append_double(out, s.y_g);
    out += ',';
    append_double(out, s.z_g);
    out += '\n';
  }
  return out;
}

AnnotationTrack parse_annotations_csv(std::string_view text, std::string recording_id) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "start_ms,end_ms,label,annotator") {
    throw Error(errc::bad_header, "annotations CSV header must be start_ms,end_ms,label,annotator");
  }

  AnnotationTrack track;
  track.recording_id = std::move(recording_id);

  struct Row {
    LabeledInterval interval;
    std::size_t line_no;
  };
  std::vector<Row> rows;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = split_fields(lines[i]);
    LabeledInterval iv;
    if (fields.size() != 4 || !parse_i64(fields[0], iv.start_ms) ||
        !parse_i64(fields[1], iv.end_ms)) {
      throw Error(errc::row_parse, "bad annotation row at line " + std::to_string(line_no),
                  line_no);
    }
    iv.label = std::string(fields[2]);
    if (!behaviour::is_valid(iv.label)) {
      throw Error(errc::unknown_label,
                  "unknown label '" + iv.label + "' at line " + std::to_string(line_no), line_no);
    }
    if (iv.start_ms >= iv.end_ms) {
      throw Error(errc::inverted_interval, "start >= end at line " + std::to_string(line_no),
                  line_no);
    }
    if (track.annotator.empty()) track.annotator = std::string(fields[3]);
    rows.push_back({std::move(iv), line_no});
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.interval.start_ms < b.interval.start_ms;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].interval.end_ms > rows[i].interval.start_ms) {
      throw Error(errc::overlap_within_track,
                  "interval overlaps previous one at line " + std::to_string(rows[i].line_no),
                  rows[i].line_no);
    }
  }

  track.intervals.reserve(rows.size());
  for (Row& r : rows) track.intervals.push_back(std::move(r.interval));
  return track;
}

std::string write_annotations_csv(const AnnotationTrack& track) {
  std::string out = "start_ms,end_ms,label,annotator\n";
  for (const LabeledInterval& iv : track.intervals) {
    out += std::to_string(iv.start_ms);
    out += ',';
    out += std::to_string(iv.end_ms);
    out += ',';
    out += iv.label;
    out += ',';
    out += track.annotator;
    out += '\n';
  }
  return out;
}

}  // namespace collarwave
