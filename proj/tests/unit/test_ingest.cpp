#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "collarwave/csv.hpp"
#include "collarwave/cwa.hpp"
#include "collarwave/error.hpp"
#include "collarwave/ingest.hpp"
#include "synth.hpp"
#include "test_util.hpp"

using namespace collarwave;
using testutil::thrown_code;
using testutil::uniform_recording;

namespace {

void put_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<std::uint8_t>(v & 0xff);
  b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

void put_i64(std::vector<std::uint8_t>& b, std::size_t at, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) b[at + i] = static_cast<std::uint8_t>((u >> (8 * i)) & 0xff);
}

std::vector<std::uint8_t> fixture_header(std::uint32_t rate_mhz = 12500) {
  std::vector<std::uint8_t> b(kCwaHeaderSize, 0);
  b[0] = 'M';
  b[1] = 'D';
  put_u16(b, 2, 1020);
  for (int i = 0; i < 4; ++i) b[4 + i] = static_cast<std::uint8_t>((rate_mhz >> (8 * i)) & 0xff);
  std::memcpy(b.data() + 8, "dogX", 4);
  return b;
}

void seal_block(std::vector<std::uint8_t>& file, std::size_t block_at) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < kCwaBlockSize; i += 2) {
    sum += static_cast<std::uint16_t>(file[block_at + i] | (file[block_at + i + 1] << 8));
  }
  put_u16(file, block_at + 510, static_cast<std::uint16_t>((0x10000u - (sum & 0xffffu)) & 0xffffu));
}

// Hand-built data block, independent of write_cwa.
void append_block(std::vector<std::uint8_t>& file, std::int64_t t_ms,
                  const std::vector<std::array<std::int16_t, 3>>& triplets) {
  const std::size_t at = file.size();
  file.resize(at + kCwaBlockSize, 0);
  file[at] = 'A';
  file[at + 1] = 'X';
  put_u16(file, at + 2, 508);
  put_i64(file, at + 4, t_ms);
  put_u16(file, at + 12, static_cast<std::uint16_t>(triplets.size()));
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    for (int ax = 0; ax < 3; ++ax) {
      put_u16(file, at + 14 + 6 * i + 2 * ax, static_cast<std::uint16_t>(triplets[i][ax]));
    }
  }
  seal_block(file, at);
}

}  // namespace

TEST_CASE("parse_cwa decodes a single triplet at 1/256 g per unit") {
  auto file = fixture_header();
  append_block(file, 0, {{256, 0, 0}});
  const CwaParseResult result = parse_cwa(file);
  REQUIRE(result.recording.samples.size() == 1);
  CHECK(result.recording.samples[0].x_g == doctest::Approx(1.0));
  CHECK(result.recording.samples[0].y_g == 0.0);
  CHECK(result.recording.samples[0].z_g == 0.0);
  CHECK(result.recording.device_id == "dogX");
  CHECK(result.recording.nominal_rate_hz == doctest::Approx(12.5));
  CHECK(result.warnings.empty());
}

TEST_CASE("parse_cwa interpolates block timestamps at the nominal rate") {
  auto file = fixture_header();
  std::vector<std::array<std::int16_t, 3>> twelve(12, {0, 0, 256});
  append_block(file, 0, twelve);
  append_block(file, 960, twelve);
  const CwaParseResult result = parse_cwa(file);
  REQUIRE(result.recording.samples.size() == 24);
  // 24 samples at 12.5 Hz span 23 * 80 ms.
  CHECK(result.recording.samples.front().t_ms == 0);
  CHECK(result.recording.samples.back().t_ms == 1840);
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(result.recording.samples[i].t_ms == static_cast<std::int64_t>(i) * 80);
  }
}

TEST_CASE("parse_cwa skips a corrupted block with a warning") {
  auto file = fixture_header();
  std::vector<std::array<std::int16_t, 3>> twelve(12, {0, 0, 256});
  append_block(file, 0, twelve);
  append_block(file, 960, twelve);
  file[kCwaHeaderSize + kCwaBlockSize + 20] ^= 0xff;  // damage the second block
  const CwaParseResult result = parse_cwa(file);
  CHECK(result.recording.samples.size() == 12);
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("checksum") != std::string::npos);
}

TEST_CASE("parse_cwa header errors") {
  SUBCASE("wrong tag") {
    auto file = fixture_header();
    file[0] = 'X';
    CHECK(thrown_code([&] { parse_cwa(file); }) == errc::malformed_header);
  }
  SUBCASE("short file") {
    std::vector<std::uint8_t> file = {'M', 'D'};
    CHECK(thrown_code([&] { parse_cwa(file); }) == errc::malformed_header);
  }
  SUBCASE("no decodable samples") {
    auto file = fixture_header();
    CHECK(thrown_code([&] { parse_cwa(file); }) == errc::empty_recording);
  }
}

TEST_CASE("cwa round-trip: exact timestamps, accelerations within half a quantum") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(300);
    RawRecording rec = testutil::random_recording(rng, n);
    const CwaParseResult back = parse_cwa(write_cwa(rec));
    REQUIRE(back.recording.samples.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(back.recording.samples[i].t_ms == rec.samples[i].t_ms);
      CHECK(std::fabs(back.recording.samples[i].x_g - rec.samples[i].x_g) <= 1.0 / 512.0);
      CHECK(std::fabs(back.recording.samples[i].y_g - rec.samples[i].y_g) <= 1.0 / 512.0);
      CHECK(std::fabs(back.recording.samples[i].z_g - rec.samples[i].z_g) <= 1.0 / 512.0);
    }
  }
}

TEST_CASE("parse_samples_csv basics") {
  const RawRecording rec = parse_samples_csv("t_ms,x_g,y_g,z_g\n0,0,0,1\n80,0,0,1\n");
  REQUIRE(rec.samples.size() == 2);
  CHECK(rec.samples[1].t_ms == 80);
  CHECK(rec.samples[1].z_g == 1.0);

  CHECK(thrown_code([] { parse_samples_csv("time,x,y,z\n0,0,0,1\n"); }) == errc::bad_header);

  const auto row_err = thrown_code([] { parse_samples_csv("t_ms,x_g,y_g,z_g\n0,0,0,1\n80,abc,0,1\n"); });
  CHECK(row_err == errc::row_parse);
  try {
    parse_samples_csv("t_ms,x_g,y_g,z_g\n0,0,0,1\n80,abc,0,1\n");
  } catch (const Error& e) {
    CHECK(e.line() == 3);
  }

  CHECK(thrown_code([] { parse_samples_csv("t_ms,x_g,y_g,z_g\n80,0,0,1\n0,0,0,1\n"); }) ==
        errc::non_monotonic_timestamp);
}

TEST_CASE("samples csv round-trip is the identity") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const RawRecording rec = testutil::random_recording(rng, 1 + rng.uniform_index(100));
    const RawRecording back = parse_samples_csv(write_samples_csv(rec));
    REQUIRE(back.samples.size() == rec.samples.size());
    for (std::size_t i = 0; i < rec.samples.size(); ++i) {
      CHECK(back.samples[i].t_ms == rec.samples[i].t_ms);
      CHECK(back.samples[i].x_g == rec.samples[i].x_g);
      CHECK(back.samples[i].y_g == rec.samples[i].y_g);
      CHECK(back.samples[i].z_g == rec.samples[i].z_g);
    }
  }
}

TEST_CASE("parse_annotations_csv validates rows") {
  const AnnotationTrack track =
      parse_annotations_csv("start_ms,end_ms,label,annotator\n1000,2500,spin_cw,A\n");
  REQUIRE(track.intervals.size() == 1);
  CHECK(track.intervals[0].end_ms - track.intervals[0].start_ms == 1500);
  CHECK(track.annotator == "A");

  CHECK(thrown_code([] {
          parse_annotations_csv("start_ms,end_ms,label,annotator\n0,100,backflip,A\n");
        }) == errc::unknown_label);
  CHECK(thrown_code([] {
          parse_annotations_csv("start_ms,end_ms,label,annotator\n500,100,jump,A\n");
        }) == errc::inverted_interval);
  CHECK(thrown_code([] {
          parse_annotations_csv(
              "start_ms,end_ms,label,annotator\n0,1000,jump,A\n500,1500,sit,A\n");
        }) == errc::overlap_within_track);
}

TEST_CASE("merge_annotations keeps same-label intersections only") {
  AnnotationTrack a{"rec", {{0, 1000, "spin_cw"}}, "A"};
  AnnotationTrack b{"rec", {{200, 1200, "spin_cw"}}, "B"};
  const AnnotationTrack merged = merge_annotations(a, b);
  REQUIRE(merged.intervals.size() == 1);
  CHECK(merged.intervals[0].start_ms == 200);
  CHECK(merged.intervals[0].end_ms == 1000);
  CHECK(merged.annotator == "merged");

  SUBCASE("label disagreement is discarded") {
    AnnotationTrack c{"rec", {{0, 1000, "jump"}}, "B"};
    CHECK(merge_annotations(a, c).intervals.empty());
  }
  SUBCASE("one-sided annotations are discarded") {
    AnnotationTrack only_a{"rec", {{0, 1000, "jump"}}, "A"};
    AnnotationTrack empty_b{"rec", {}, "B"};
    CHECK(merge_annotations(only_a, empty_b).intervals.empty());
  }
  SUBCASE("recording mismatch") {
    AnnotationTrack other{"other", {}, "B"};
    CHECK(thrown_code([&] { merge_annotations(a, other); }) == errc::recording_mismatch);
  }
}

TEST_CASE("merge_annotations is commutative") {
  Rng rng(23);
  const char* labels[] = {"spin_cw", "spin_ccw", "jump", "sit"};
  for (int trial = 0; trial < 200; ++trial) {
    auto random_track = [&]() {
      AnnotationTrack t;
      t.recording_id = "rec";
      t.annotator = "r";
      std::int64_t cursor = 0;
      const std::size_t n = rng.uniform_index(6);
      for (std::size_t i = 0; i < n; ++i) {
        cursor += 1 + static_cast<std::int64_t>(rng.uniform_index(500));
        const std::int64_t end = cursor + 1 + static_cast<std::int64_t>(rng.uniform_index(1500));
        t.intervals.push_back({cursor, end, labels[rng.uniform_index(4)]});
        cursor = end;
      }
      return t;
    };
    const AnnotationTrack a = random_track();
    const AnnotationTrack b = random_track();
    const AnnotationTrack ab = merge_annotations(a, b);
    const AnnotationTrack ba = merge_annotations(b, a);
    REQUIRE(ab.intervals.size() == ba.intervals.size());
    for (std::size_t i = 0; i < ab.intervals.size(); ++i) {
      CHECK(ab.intervals[i].start_ms == ba.intervals[i].start_ms);
      CHECK(ab.intervals[i].end_ms == ba.intervals[i].end_ms);
      CHECK(ab.intervals[i].label == ba.intervals[i].label);
    }
  }
}

TEST_CASE("trim_recording") {
  const RawRecording rec = uniform_recording(24);
  CHECK(rec.samples.back().t_ms == 1840);

  SUBCASE("identity keep") {
    CHECK(trim_recording(rec, {{0, 1000000000}}).samples.size() == 24);
  }
  SUBCASE("empty keep") {
    CHECK(trim_recording(rec, {}).samples.empty());
  }
  SUBCASE("keep [0,900] retains the 12 samples with t <= 900") {
    const RawRecording out = trim_recording(rec, {{0, 900}});
    REQUIRE(out.samples.size() == 12);
    CHECK(out.samples.back().t_ms == 880);
  }
  SUBCASE("idempotent for a fixed keep list") {
    const std::vector<std::pair<std::int64_t, std::int64_t>> keep = {{100, 500}, {900, 1500}};
    const RawRecording once = trim_recording(rec, keep);
    const RawRecording twice = trim_recording(once, keep);
    REQUIRE(once.samples.size() == twice.samples.size());
    for (std::size_t i = 0; i < once.samples.size(); ++i) {
      CHECK(once.samples[i].t_ms == twice.samples[i].t_ms);
    }
  }
}

TEST_CASE("validate_rate") {
  const RawRecording rec = uniform_recording(13);
  const RateReport ok = validate_rate(rec, 12.5, 0.02);
  CHECK(ok.empirical_hz == doctest::Approx(12.5));
  CHECK(ok.pass);

  CHECK_FALSE(validate_rate(rec, 100.0, 0.02).pass);

  const RawRecording tiny = uniform_recording(1);
  CHECK(thrown_code([&] { validate_rate(tiny, 12.5, 0.02); }) == errc::too_few_samples);
}
