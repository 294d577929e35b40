#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "collarwave/csv.hpp"
#include "collarwave/cwa.hpp"
#include "synth.hpp"

using namespace collarwave;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(COLLARWAVE_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> chunk{};
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) {
    result.output.append(chunk.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "collarwave_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// One synthetic dog exported as fixture files; returns the directory.
struct Fixture {
  fs::path dir;
  fs::path cwa;
  fs::path annotations;
  fs::path annotations2;
};

Fixture make_fixture() {
  Fixture f;
  f.dir = scratch_dir();
  synth::DogConfig cfg;
  cfg.dog_id = "dog01";
  cfg.seed = 4242;
  const synth::DogData dog = synth::make_dog(cfg);
  f.cwa = f.dir / "dog01.cwa";
  write_bytes(f.cwa, write_cwa(dog.recording));
  f.annotations = f.dir / "dog01_a.csv";
  write_file(f.annotations, write_annotations_csv(dog.track));
  f.annotations2 = f.dir / "dog01_b.csv";
  write_file(f.annotations2, write_annotations_csv(synth::jitter_track(dog.track, 9, 80)));
  return f;
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("train --model nb").exit_code == 1);  // missing required flags
}

TEST_CASE("version flag prints both versions") {
  const RunResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("collarwave") != std::string::npos);
  CHECK(r.output.find("model format") != std::string::npos);
}

TEST_CASE("full pipeline: convert, validate, featurize, train, cv, report, detect") {
  const Fixture f = make_fixture();
  const std::string dir = f.dir.string();

  // convert
  const std::string samples_csv = dir + "/dog01.csv";
  CHECK(run_cli("convert --in " + f.cwa.string() + " --out " + samples_csv).exit_code == 0);
  CHECK(read_file(samples_csv).rfind("t_ms,x_g,y_g,z_g\n", 0) == 0);

  // validate: conforming rate passes, absurd expectation fails with 3
  CHECK(run_cli("validate --in " + samples_csv + " --rate 12.5 --tol 0.02").exit_code == 0);
  CHECK(run_cli("validate --in " + f.cwa.string() + " --rate 100 --tol 0.02").exit_code == 3);

  // featurize (two annotator tracks merged)
  const std::string features = dir + "/features.csv";
  CHECK(run_cli("featurize --samples " + f.cwa.string() + " --annotations " +
                f.annotations.string() + " --annotations2 " + f.annotations2.string() +
                " --out " + features)
            .exit_code == 0);
  const std::string feature_text = read_file(features);
  CHECK(feature_text.rfind("recording_id,window_start_index,label,", 0) == 0);
  CHECK(feature_text.find("spin") != std::string::npos);

  // train
  const std::string model = dir + "/model.json";
  CHECK(run_cli("train --features " + features + " --model nb --seed 42 --out " + model)
            .exit_code == 0);
  CHECK(read_file(model).find("collarwave-model") != std::string::npos);

  // cv report json on stdout
  const RunResult cv = run_cli("cv --features " + features + " --model nb --k 10 --seed 42");
  CHECK(cv.exit_code == 0);
  CHECK(cv.output.find("collarwave-cv-report") != std::string::npos);

  // pooled report with recall >= 0.95 for naive bayes
  const std::string report = dir + "/report.csv";
  const std::string plot = dir + "/report.svg";
  CHECK(run_cli("report --features " + features + " --mode pooled --models nb --seed 42 --out " +
                report + " --plot " + plot)
            .exit_code == 0);
  const std::string report_text = read_file(report);
  CHECK(report_text.rfind("group,model,precision,recall,f1,support,accuracy,flags\n", 0) == 0);
  {
    std::istringstream rows(report_text);
    std::string header, nb_row;
    std::getline(rows, header);
    std::getline(rows, nb_row);
    std::istringstream cells(nb_row);
    std::string group, model_name, precision, recall;
    std::getline(cells, group, ',');
    std::getline(cells, model_name, ',');
    std::getline(cells, precision, ',');
    std::getline(cells, recall, ',');
    CHECK(group == "all");
    CHECK(model_name == "naive_bayes");
    CHECK(std::stod(recall) >= 0.95);
  }
  CHECK(read_file(plot).find("<svg") != std::string::npos);

  // detect on the replayed recording: the dog spins several times
  const RunResult detect =
      run_cli("detect --model " + model + " --replay " + samples_csv + " --refractory-ms 3000");
  CHECK(detect.exit_code == 0);
  CHECK(detect.output.find("ALERT t_ms=") != std::string::npos);
}

TEST_CASE("byte-identical reruns with identical seeds") {
  const Fixture f = make_fixture();
  const std::string dir = f.dir.string();
  const std::string base = "featurize --samples " + f.cwa.string() + " --annotations " +
                           f.annotations.string() + " --out ";
  REQUIRE(run_cli(base + dir + "/fa.csv").exit_code == 0);
  REQUIRE(run_cli(base + dir + "/fb.csv").exit_code == 0);
  CHECK(read_file(dir + "/fa.csv") == read_file(dir + "/fb.csv"));

  const std::string train_cmd =
      "train --features " + dir + "/fa.csv --model rf --seed 7 --out ";
  REQUIRE(run_cli(train_cmd + dir + "/ma.json").exit_code == 0);
  REQUIRE(run_cli(train_cmd + dir + "/mb.json").exit_code == 0);
  CHECK(read_file(dir + "/ma.json") == read_file(dir + "/mb.json"));
}

TEST_CASE("input and data errors map to exit code 2 and 3") {
  const fs::path dir = scratch_dir();
  CHECK(run_cli("convert --in " + (dir / "missing.cwa").string() + " --out /dev/null")
            .exit_code == 2);

  write_file(dir / "bad.csv", "time,x,y,z\n0,0,0,1\n");
  CHECK(run_cli("validate --in " + (dir / "bad.csv").string()).exit_code == 2);

  // single-class feature file: training is a data validation failure
  write_file(dir / "single.csv",
             "recording_id,window_start_index,label,a,b\n"
             "r,0,negative,0.0,1.0\nr,6,negative,0.5,1.5\nr,12,negative,1.0,2.0\n"
             "r,18,negative,0.1,1.1\nr,24,negative,0.6,1.6\nr,30,negative,1.1,2.1\n"
             "r,36,negative,0.2,1.2\nr,42,negative,0.7,1.7\nr,48,negative,1.2,2.2\n"
             "r,54,negative,0.3,1.3\n");
  CHECK(run_cli("train --features " + (dir / "single.csv").string() +
                " --model nb --out /dev/null")
            .exit_code == 3);
}

TEST_CASE("live mode reads a line-delimited feed") {
  const Fixture f = make_fixture();
  const std::string dir = f.dir.string();
  const std::string features = dir + "/live_features.csv";
  REQUIRE(run_cli("featurize --samples " + f.cwa.string() + " --annotations " +
                  f.annotations.string() + " --out " + features)
              .exit_code == 0);
  const std::string model = dir + "/live_model.json";
  REQUIRE(run_cli("train --features " + features + " --model nb --seed 1 --out " + model)
              .exit_code == 0);

  // Idle feed: no alerts expected, clean exit on EOF.
  std::string feed_path = dir + "/feed.txt";
  std::string feed;
  for (int i = 0; i < 100; ++i) {
    feed += std::to_string(i * 80) + " 0.01 -0.02 0.99\n";
  }
  write_file(feed_path, feed);
  const std::string command = "cat " + feed_path + " | " + std::string(COLLARWAVE_BIN) +
                              " detect --model " + model + " --live 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 1024> chunk{};
  std::string output;
  std::size_t got = 0;
  while ((got = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) output.append(chunk.data(), got);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(output.find("ALERT") == std::string::npos);
}
