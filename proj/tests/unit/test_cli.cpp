#include <doctest.h>

#include "cli.hpp"
#include "gaitsym/histogram_io.hpp"
#include "gaitsym/report_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gaitsym;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result gaitsym_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir(const std::string& name) {
  const char* env = std::getenv("GAITSYM_TEST_TMP");
  const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "gaitsym_test_cli";
  const fs::path dir = root / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path generator_file(const fs::path& dir, const std::string& name, int seed, const std::string& asym,
                        int frames = 130) {
  const fs::path p = dir / name;
  write_text(p, "frames = " + std::to_string(frames) + "\nseed = " + std::to_string(seed) +
                    "\npoints_per_frame = 800\nasymmetry = \"" + asym + "\"\n");
  return p;
}

std::vector<std::string> small_pipeline() { return {"--segment_len", "60", "--delays=-20:20"}; }

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool has_partial(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().string().find(".partial") != std::string::npos || e.path().string().find(".tmp") != std::string::npos)
      return true;
  return false;
}

fs::path manifest(const fs::path& dir, int normals, int abnormals) {
  std::string text = "sequence_path,subject_id,gait_type,label\n";
  for (int i = 0; i < normals; ++i) {
    const std::string name = "n" + std::to_string(i) + ".toml";
    generator_file(dir, name, 10 + i, "symmetric");
    text += name + ",s" + std::to_string(i) + ",normal,normal\n";
  }
  for (int i = 0; i < abnormals; ++i) {
    const std::string name = "a" + std::to_string(i) + ".toml";
    generator_file(dir, name, 20 + i, "phase-left-0.9");
    text += name + ",s" + std::to_string(i) + ",limp,abnormal\n";
  }
  write_text(dir / "manifest.csv", text);
  return dir / "manifest.csv";
}

}  // namespace

TEST_CASE("help and version") {
  CHECK(gaitsym_cli({"--help"}).code == cli::kOk);
  const Result v = gaitsym_cli({"--version"});
  CHECK(v.code == cli::kOk);
  CHECK(v.out.find("gaitsym") != std::string::npos);
  CHECK(gaitsym_cli({}).code == cli::kBadInput);
  CHECK(gaitsym_cli({"assess", "--no-such-flag"}).code == cli::kBadInput);
}

TEST_CASE("generate then assess, and the report reruns as a config") {
  const fs::path dir = workdir("generate");
  const fs::path seq = dir / "seq";
  const Result g = gaitsym_cli({"generate", "-o", seq.string(), "--frames", "130", "--points_per_frame", "800",
                                "--seed", "3", "--asymmetry", "phase-left-0.5"});
  REQUIRE(g.code == cli::kOk);
  CHECK(fs::exists(seq / "frame_00000.ply"));
  CHECK(fs::exists(seq / "frame_00129.ply"));
  CHECK(fs::exists(seq / "generator.toml"));
  CHECK(!has_partial(dir));

  // A second generate into the now non-empty directory is refused and leaves it alone.
  CHECK(gaitsym_cli({"generate", "-o", seq.string(), "--frames", "5"}).code == cli::kBadInput);
  CHECK(fs::exists(seq / "frame_00129.ply"));
  CHECK(!has_partial(dir));

  const std::string prefix = (dir / "run").string();
  const Result a = gaitsym_cli(cat({"assess", seq.string(), "-o", prefix}, small_pipeline()));
  REQUIRE(a.code == cli::kOk);
  const std::string report = slurp(prefix + ".report.toml");
  const SymmetryReport r = decode_report(report);
  CHECK(r.per_segment.size() == 2);
  CHECK(r.frames_discarded == 10);
  CHECK(r.mean_score > 0.0);
  CHECK(report.find("segment_len = 60") != std::string::npos);
  CHECK(report.find("delays = \"-20:20\"") != std::string::npos);
  CHECK(slurp(prefix + ".segments.csv").find("# segment_len = 60") != std::string::npos);

  fs::rename(prefix + ".report.toml", dir / "config.toml");
  REQUIRE(gaitsym_cli({"assess", "--config", (dir / "config.toml").string()}).code == cli::kOk);
  CHECK(slurp(prefix + ".report.toml") == report);

  // Command-line flags win over the config file.
  const Result over = gaitsym_cli({"assess", "--config", (dir / "config.toml").string(), "-o",
                                   (dir / "over").string(), "--segment_len", "65"});
  REQUIRE(over.code == cli::kOk);
  CHECK(decode_report(slurp(dir / "over.report.toml")).segment_length == 65);

  // Without -o the report goes to stdout.
  const Result stdout_run = gaitsym_cli(cat({"assess", seq.string()}, small_pipeline()));
  CHECK(stdout_run.code == cli::kOk);
  CHECK(decode_report(stdout_run.out).mean_score == r.mean_score);
}

TEST_CASE("exit codes") {
  const fs::path dir = workdir("exit");
  CHECK(gaitsym_cli({"assess", (dir / "missing").string()}).code == cli::kBadInput);
  const fs::path gen = generator_file(dir, "short.toml", 1, "symmetric", 60);
  CHECK(gaitsym_cli({"assess", gen.string()}).code == cli::kInsufficientFrames);
  CHECK(gaitsym_cli({"assess", gen.string(), "--hist_size", "0x16"}).code == cli::kBadInput);
  CHECK(gaitsym_cli({"assess", gen.string(), "--segment_len", "30", "--delays=-40:40"}).code == cli::kBadInput);
  CHECK(gaitsym_cli({"assess", gen.string(), "--delays", "x"}).code == cli::kBadInput);
  CHECK(gaitsym_cli({"assess", gen.string(), "--segment_len", "30", "--delays=-5:5"}).code == cli::kOk);

  // A failing run writes nothing.
  CHECK(gaitsym_cli({"assess", gen.string(), "-o", (dir / "fail").string()}).code == cli::kInsufficientFrames);
  CHECK(!fs::exists(dir / "fail.report.toml"));
  CHECK(!has_partial(dir));

  write_text(dir / "empty.csv", "sequence_path,subject_id,gait_type,label\n");
  CHECK(gaitsym_cli({"evaluate", (dir / "empty.csv").string()}).code == cli::kBadInput);

  const fs::path one_class = manifest(dir, 2, 0);
  CHECK(gaitsym_cli(cat({"evaluate", one_class.string()}, small_pipeline())).code == cli::kSingleClass);

  write_text(dir / "badlabel.csv", "short.toml,s1,normal,maybe\n");
  CHECK(gaitsym_cli({"evaluate", (dir / "badlabel.csv").string()}).code == cli::kBadInput);
}

TEST_CASE("evaluate writes scores, curves and a summary") {
  const fs::path dir = workdir("evaluate");
  const fs::path m = manifest(dir, 3, 3);
  const std::string prefix = (dir / "eval").string();
  const Result e = gaitsym_cli(cat({"evaluate", m.string(), "-o", prefix}, small_pipeline()));
  REQUIRE(e.code == cli::kOk);
  CHECK(e.out.find("mean: auc = 1") != std::string::npos);
  for (const char* suffix : {".scores.csv", ".roc_segments.csv", ".roc_mean.csv", ".summary.toml"})
    CHECK(fs::exists(prefix + suffix));
  const std::string summary = slurp(prefix + ".summary.toml");
  CHECK(summary.find("mean_auc = 1\n") != std::string::npos);
  CHECK(summary.find("mean_eer = 0\n") != std::string::npos);
  CHECK(summary.find("segment_len = 60") != std::string::npos);
  CHECK(summary.find("normal_mean_score_max") != std::string::npos);
  CHECK(slurp(prefix + ".roc_mean.csv").find("fpr,tpr,threshold\n") != std::string::npos);

  const Result only = gaitsym_cli(cat({"evaluate", m.string(), "--mode", "segments"}, small_pipeline()));
  CHECK(only.code == cli::kOk);
  CHECK(only.out.find("mean:") == std::string::npos);
  CHECK(gaitsym_cli({"evaluate", m.string(), "--mode", "median"}).code == cli::kBadInput);
}

TEST_CASE("sweep prints and writes the size table") {
  const fs::path dir = workdir("sweep");
  const fs::path m = manifest(dir, 2, 2);
  const std::string prefix = (dir / "sweep").string();
  const Result s =
      gaitsym_cli(cat({"sweep", m.string(), "-o", prefix, "--sizes", "16x16,8x8"}, small_pipeline()));
  REQUIRE(s.code == cli::kOk);
  CHECK(s.out.find("Measure on") != std::string::npos);
  CHECK(s.out.find("8x8") != std::string::npos);
  CHECK(slurp(prefix + ".sweep.txt").find("# segment_len = 60") != std::string::npos);
  CHECK(slurp(prefix + ".sweep.csv").find("size,h,w,segments_auc") != std::string::npos);
  CHECK(gaitsym_cli({"sweep", m.string(), "--sizes", "16by16"}).code == cli::kBadInput);
}

TEST_CASE("convert round trips and cached histograms") {
  const fs::path dir = workdir("convert");
  const fs::path gen = generator_file(dir, "g.toml", 7, "amplitude-right-0.3");
  const std::string cylh = (dir / "g.cylh").string();
  const std::string csv = (dir / "g.hist.csv").string();
  REQUIRE(gaitsym_cli({"convert", gen.string(), cylh, "--to", "cylh"}).code == cli::kOk);
  REQUIRE(gaitsym_cli({"convert", cylh, csv, "--to", "hist-csv"}).code == cli::kOk);
  CHECK(read_histograms(cylh) == read_histograms(csv));
  CHECK(read_histograms(cylh).size() == 130);
  CHECK(fs::exists(cylh + ".config.toml"));
  CHECK(gaitsym_cli({"convert", cylh, (dir / "clouds").string(), "--to", "ply"}).code == cli::kBadInput);

  // Assessing the stored histograms matches assessing the generator directly.
  const Result from_gen = gaitsym_cli(cat({"assess", gen.string()}, small_pipeline()));
  const Result from_cylh = gaitsym_cli(cat({"assess", cylh}, small_pipeline()));
  REQUIRE(from_gen.code == cli::kOk);
  REQUIRE(from_cylh.code == cli::kOk);
  CHECK(decode_report(from_gen.out).mean_score == decode_report(from_cylh.out).mean_score);

  // Clouds out and back in.
  const fs::path clouds = dir / "clouds_csv";
  REQUIRE(gaitsym_cli({"convert", gen.string(), clouds.string(), "--to", "csv"}).code == cli::kOk);
  CHECK(fs::exists(clouds / "frame_00000.csv"));
  CHECK(fs::exists(clouds / "convert.toml"));
  CHECK(gaitsym_cli(cat({"assess", clouds.string()}, small_pipeline())).code == cli::kOk);
  CHECK(gaitsym_cli({"convert", (clouds / "frame_00000.csv").string(), cylh + "2", "--to", "cylh"}).code ==
        cli::kBadInput);

  const fs::path cache = dir / "cache";
  const auto cached = cat({"assess", gen.string(), "--cache_dir", cache.string()}, small_pipeline());
  const Result fresh = gaitsym_cli(cached);
  REQUIRE(fresh.code == cli::kOk);
  int files = 0;
  for (const auto& e : fs::directory_iterator(cache)) files += e.path().extension() == ".cylh";
  CHECK(files == 1);
  const Result hit = gaitsym_cli(cached);
  REQUIRE(hit.code == cli::kOk);
  CHECK(hit.out == fresh.out);
  CHECK(decode_report(hit.out).mean_score == decode_report(from_gen.out).mean_score);
  // A different recenter setting is a different cache entry.
  CHECK(gaitsym_cli(cat(cached, {"--no-recenter"})).code == cli::kOk);
  files = 0;
  for (const auto& e : fs::directory_iterator(cache)) files += e.path().extension() == ".cylh";
  CHECK(files == 2);
}
