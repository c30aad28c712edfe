#include "cli.hpp"

#include "gaitsym/cloud_io.hpp"
#include "gaitsym/error.hpp"
#include "gaitsym/eval.hpp"
#include "gaitsym/geometry.hpp"
#include "gaitsym/histogram_io.hpp"
#include "gaitsym/pipeline.hpp"
#include "gaitsym/report_io.hpp"
#include "gaitsym/synthgait.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace gaitsym::cli {

namespace {

namespace fs = std::filesystem;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("SHA-256 is unavailable");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view bytes) { EVP_DigestUpdate(ctx_, bytes.data(), bytes.size()); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kDigits[md[i] >> 4]);
      out.push_back(kDigits[md[i] & 0xF]);
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// ---------------------------------------------------------------------------
// Config files

/// Arguments equivalent to the keys of `path` that name options of `app`.
/// Keys may sit at the top level or in a section named after the app;
/// anything else (report results, options of other commands) is skipped.
std::vector<std::string> config_arguments(const CLI::App& app, const fs::path& path) {
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::Io, "cannot read config file " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path.string());
  } catch (const CLI::Error& e) {
    throw Error(ErrorCode::Format, "bad config file " + path.string() + ": " + e.what());
  }
  std::vector<std::string> args;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == app.get_name())) continue;
    if (item.name == "config") continue;
    const CLI::Option* opt = app.get_option_no_throw("--" + item.name);
    // Empty values mean "unset"; CLI11 would otherwise swallow the next argument.
    if (opt == nullptr || item.inputs.size() != 1 || item.inputs.front().empty()) continue;
    args.push_back("--" + item.name + "=" + item.inputs.front());
  }
  return args;
}

/// Finds "--config FILE" / "--config=FILE" in raw arguments.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

void parse_into(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
}

// ---------------------------------------------------------------------------
// Generator settings

struct GeneratorConfig {
  GaitParams params;
  std::string asymmetry = "none";
  int frames = 600;
  int mirror_delay = -1;
};

struct GaitField {
  const char* name;
  double GaitParams::*field;
  const char* help;
};

constexpr GaitField kGaitFields[] = {
    {"fps", &GaitParams::fps, "Frames per second"},
    {"cycle_period", &GaitParams::cycle_period, "Gait cycle length in seconds"},
    {"leg_amplitude_left", &GaitParams::leg_amplitude_left, "Left hip swing amplitude (rad)"},
    {"leg_amplitude_right", &GaitParams::leg_amplitude_right, "Right hip swing amplitude (rad)"},
    {"leg_phase_left", &GaitParams::leg_phase_left, "Left leg phase (rad)"},
    {"leg_phase_right", &GaitParams::leg_phase_right, "Right leg phase (rad)"},
    {"leg_length_left", &GaitParams::leg_length_left, "Left leg length (m)"},
    {"leg_length_right", &GaitParams::leg_length_right, "Right leg length (m)"},
    {"knee_ratio", &GaitParams::knee_ratio, "Peak knee flexion relative to hip amplitude"},
    {"arm_amplitude_left", &GaitParams::arm_amplitude_left, "Left arm swing amplitude (rad)"},
    {"arm_amplitude_right", &GaitParams::arm_amplitude_right, "Right arm swing amplitude (rad)"},
    {"arm_phase_left", &GaitParams::arm_phase_left, "Left arm phase (rad)"},
    {"arm_phase_right", &GaitParams::arm_phase_right, "Right arm phase (rad)"},
    {"arm_length_left", &GaitParams::arm_length_left, "Left arm length (m)"},
    {"arm_length_right", &GaitParams::arm_length_right, "Right arm length (m)"},
    {"torso_height", &GaitParams::torso_height, "Torso height (m)"},
    {"torso_half_depth", &GaitParams::torso_half_depth, "Torso half depth (m)"},
    {"torso_half_width", &GaitParams::torso_half_width, "Torso half width (m)"},
    {"hip_half_width", &GaitParams::hip_half_width, "Hip joint offset from the midline (m)"},
    {"shoulder_half_width", &GaitParams::shoulder_half_width, "Shoulder offset from the midline (m)"},
    {"head_radius", &GaitParams::head_radius, "Head radius (m)"},
    {"head_forward", &GaitParams::head_forward, "Forward offset of the head (m)"},
    {"noise_sigma", &GaitParams::noise_sigma, "Gaussian point noise (m)"},
};

void add_generator_options(CLI::App& app, GeneratorConfig& g) {
  for (const auto& f : kGaitFields) app.add_option(std::string("--") + f.name, g.params.*(f.field), f.help);
  app.add_option("--points_per_frame", g.params.points_per_frame, "Surface points per frame");
  app.add_option("--seed", g.params.seed, "Random seed");
  app.add_option("--frames", g.frames, "Number of frames")->check(CLI::PositiveNumber);
  app.add_option("--asymmetry", g.asymmetry,
                 "none, symmetric, or <phase|amplitude|leglength>-<left|right>-<magnitude>");
  app.add_option("--mirror_delay", g.mirror_delay,
                 "Generate an exact mirror pair with this delay in frames (-1: off)");
}

void echo_generator(const GeneratorConfig& g, ConfigEcho& echo) {
  for (const auto& f : kGaitFields) echo.set(f.name, g.params.*(f.field));
  echo.set("points_per_frame", g.params.points_per_frame);
  echo.set("seed", static_cast<std::uint64_t>(g.params.seed));
  echo.set("frames", g.frames);
  echo.set("asymmetry", AsymmetrySpec::parse(g.asymmetry).to_string());
  echo.set("mirror_delay", g.mirror_delay);
}

GeneratorConfig load_generator_config(const fs::path& path) {
  CLI::App app("generator", "generator");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  GeneratorConfig g;
  add_generator_options(app, g);
  try {
    parse_into(app, config_arguments(app, path));
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::InvalidArgument, "bad generator config " + path.string() + ": " + e.what());
  }
  return g;
}

std::vector<PointCloud> generate_sequence(const GeneratorConfig& g, int workers) {
  if (g.mirror_delay >= 0) return generate_mirror_pair(g.params, g.mirror_delay, g.frames, workers);
  return generate(g.params, AsymmetrySpec::parse(g.asymmetry), g.frames, workers);
}

// ---------------------------------------------------------------------------
// Pipeline settings and inputs

struct PipelineOptions {
  std::string hist_size = "16x16";
  int segment_len = 120;
  std::string delays = "-50:50";
  bool recenter = true;
  int workers = 1;
  std::string format = "auto";
  std::string markers;
  std::string cache_dir;

  PipelineConfig config() const {
    PipelineConfig c;
    c.hist_size = HistSize::parse(hist_size);
    c.segment_len = segment_len;
    c.delays = DelaySet::parse(delays);
    c.recenter = recenter;
    c.workers = workers;
    return c;
  }
};

void add_pipeline_options(CLI::App& app, PipelineOptions& o) {
  app.add_option("--hist_size,--hist-size", o.hist_size, "Histogram size HxW")->capture_default_str();
  app.add_option("--segment_len,--segment-len", o.segment_len, "Frames per segment")->capture_default_str();
  app.add_option("--delays", o.delays, "Delay set as lo:hi or a comma list (write --delays=-50:50)")
      ->capture_default_str();
  app.add_flag("--recenter,!--no-recenter", o.recenter,
               "Rotate the cylinder so the head region sits at the central columns");
  app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", o.format, "Input kind")
      ->check(CLI::IsMember({"auto", "clouds", "histograms", "generator"}))
      ->capture_default_str();
  app.add_option("--markers", o.markers,
                 "Marker file (T1..Tn treadmill, W1/W2 walking direction); input clouds are then "
                 "read as camera-frame");
  app.add_option("--cache_dir,--cache-dir", o.cache_dir, "Directory for cached histograms");
}

void echo_pipeline(const PipelineOptions& o, const HistSize& size, ConfigEcho& echo) {
  echo.set("hist_size", size.to_string());
  echo.set("segment_len", o.segment_len);
  echo.set("delays", DelaySet::parse(o.delays).to_string());
  echo.set("recenter", o.recenter);
  echo.set("workers", o.workers);
  echo.set("format", o.format);
  echo.set("markers", o.markers);
  echo.set("cache_dir", o.cache_dir);
}

enum class InputKind { Clouds, Histograms, Generator };

InputKind detect_kind(const fs::path& path, const std::string& format) {
  if (!fs::exists(path)) throw Error(ErrorCode::Io, "input not found: " + path.string());
  if (format == "clouds") return InputKind::Clouds;
  if (format == "histograms") return InputKind::Histograms;
  if (format == "generator") return InputKind::Generator;
  if (fs::is_directory(path)) return InputKind::Clouds;
  if (is_container_file(path)) return InputKind::Histograms;
  const std::string head = read_text(path).substr(0, 6);
  if (head == "# cylh") return InputKind::Histograms;
  const std::string ext = path.extension().string();
  if (ext == ".ply" || ext == ".csv")
    throw Error(ErrorCode::InvalidArgument,
                "a single cloud file is not a sequence; pass the directory holding its frames");
  return InputKind::Generator;
}

std::vector<PointCloud> load_clouds(const fs::path& path, InputKind kind, const PipelineOptions& o) {
  if (kind == InputKind::Generator) return generate_sequence(load_generator_config(path), o.workers);
  const auto files = list_cloud_files(path);
  if (files.empty()) throw Error(ErrorCode::EmptyInput, "no .ply or .csv clouds in " + path.string());
  std::vector<PointCloud> clouds;
  clouds.reserve(files.size());
  if (!o.markers.empty()) {
    const MarkerSet markers = read_markers(o.markers);
    const std::vector<Point3> treadmill = markers.treadmill();
    const auto walk = markers.walking_direction();
    for (const auto& f : files) {
      const PointCloud camera = read_cloud(f, Frame::Camera);
      clouds.push_back(transform(camera, build_body_frame(treadmill, walk, camera)));
    }
  } else {
    for (const auto& f : files) clouds.push_back(center_on_centroid(read_cloud(f, Frame::Body)));
  }
  return clouds;
}

std::string input_digest(const fs::path& path, InputKind kind, const PipelineOptions& o) {
  Sha256 h;
  if (kind == InputKind::Generator) {
    ConfigEcho echo;
    echo_generator(load_generator_config(path), echo);
    h.update("generator\n");
    h.update(echo.to_text());
  } else {
    h.update("clouds\n");
    for (const auto& f : list_cloud_files(path)) {
      h.update(f.filename().string());
      h.update(std::string_view("\0", 1));
      h.update(read_text(f));
      h.update(std::string_view("\0", 1));
    }
    if (!o.markers.empty()) h.update(read_text(o.markers));
  }
  return h.hex();
}

std::vector<CylHistogram> read_histogram_input(const fs::path& path) {
  std::vector<CylHistogram> hists = read_histograms(path);
  if (hists.empty()) throw Error(ErrorCode::EmptyInput, "no frames in " + path.string());
  return hists;
}

/// Unnormalized histograms of one input at each size, through the cache when
/// one is configured.
std::vector<std::vector<CylHistogram>> sequence_histograms(const fs::path& path, InputKind kind,
                                                           const PipelineOptions& o,
                                                           std::span<const HistSize> sizes) {
  std::vector<std::vector<CylHistogram>> result(sizes.size());
  if (kind == InputKind::Histograms) {
    const auto hists = read_histogram_input(path);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      if (!(hists.front().size() == sizes[s]))
        throw Error(ErrorCode::InvalidArgument, path.string() + " holds " + hists.front().size().to_string() +
                                                    " histograms, not " + sizes[s].to_string());
      result[s] = hists;
    }
    return result;
  }

  std::vector<fs::path> cache_files(sizes.size());
  std::vector<HistSize> missing;
  std::vector<std::size_t> missing_index;
  if (!o.cache_dir.empty()) {
    const std::string digest = input_digest(path, kind, o);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      Sha256 key;
      key.update(digest + "|" + sizes[s].to_string() + "|" + (o.recenter ? "recenter" : "fixed"));
      cache_files[s] = fs::path(o.cache_dir) / (key.hex() + ".cylh");
    }
  }
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    if (!cache_files[s].empty() && fs::is_regular_file(cache_files[s])) {
      result[s] = read_container(cache_files[s]);
    } else {
      missing.push_back(sizes[s]);
      missing_index.push_back(s);
    }
  }
  if (missing.empty()) return result;

  const std::vector<PointCloud> clouds = load_clouds(path, kind, o);
  auto seqs = histograms_from_clouds(clouds, missing, o.recenter, o.workers);
  if (!o.cache_dir.empty()) fs::create_directories(o.cache_dir);
  for (std::size_t m = 0; m < missing.size(); ++m) {
    const std::size_t s = missing_index[m];
    if (!cache_files[s].empty()) write_container(cache_files[s], seqs[m].frames);
    result[s] = std::move(seqs[m].frames);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Manifests

struct ManifestRow {
  fs::path path;
  std::string subject_id;
  std::string gait_type;
  Label label = Label::Normal;
};

Label parse_label(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "normal" || t == "0" || t == "symmetric") return Label::Normal;
  if (t == "abnormal" || t == "1" || t == "asymmetric") return Label::Abnormal;
  throw Error(ErrorCode::Format, "unknown label '" + text + "' (use normal or abnormal)");
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<ManifestRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) fields.push_back(trim(cell));
    if (!fields.empty() && fields[0] == "sequence_path") continue;
    if (fields.size() != 4)
      throw Error(ErrorCode::Format, "manifest rows need sequence_path,subject_id,gait_type,label: " + line);
    fs::path seq(fields[0]);
    if (seq.is_relative()) seq = path.parent_path() / seq;
    rows.push_back({seq, fields[1], fields[2], parse_label(fields[3])});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "manifest lists no sequences: " + path.string());
  const bool has_normal = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.label == Label::Normal; });
  const bool has_abnormal = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.label == Label::Abnormal; });
  if (!has_normal || !has_abnormal)
    throw Error(ErrorCode::SingleClass, "manifest needs both normal and abnormal sequences");
  return rows;
}

std::string label_name(Label l) { return l == Label::Normal ? "normal" : "abnormal"; }

// ---------------------------------------------------------------------------
// Subcommands

struct AssessOptions {
  std::string input;
  std::string output;
  PipelineOptions pipe;
};

int cmd_assess(const AssessOptions& a, std::ostream& out) {
  PipelineConfig cfg = a.pipe.config();
  const InputKind kind = detect_kind(a.input, a.pipe.format);
  std::vector<CylHistogram> hists;
  if (kind == InputKind::Histograms) {
    hists = read_histogram_input(a.input);
    cfg.hist_size = hists.front().size();
  } else {
    const HistSize size = cfg.hist_size;
    hists = std::move(sequence_histograms(a.input, kind, a.pipe, std::span(&size, 1)).front());
  }
  const SymmetryReport report = assess_histograms(hists, cfg);

  ConfigEcho echo;
  echo.set("input", a.input);
  echo.set("output", a.output);
  echo_pipeline(a.pipe, cfg.hist_size, echo);
  const std::string text = encode_report(report, echo);
  if (a.output.empty()) {
    out << text;
    return kOk;
  }
  write_file_atomic(a.output + ".report.toml", text);
  write_file_atomic(a.output + ".segments.csv", encode_report_csv(report, echo));
  out << "mean_score = " << format_double(report.mean_score) << '\n'
      << "segments = " << report.per_segment.size() << '\n'
      << "frames_discarded = " << report.frames_discarded << '\n'
      << "wrote " << a.output << ".report.toml and " << a.output << ".segments.csv\n";
  return kOk;
}

struct GenerateOptions {
  GeneratorConfig gen;
  std::string output;
  std::string cloud_format = "ply";
  int workers = 1;
};

std::string frame_name(std::size_t index, std::size_t count, const std::string& ext) {
  const std::size_t width = std::max<std::size_t>(5, std::to_string(count > 0 ? count - 1 : 0).size());
  std::string digits = std::to_string(index);
  digits.insert(0, width - digits.size(), '0');
  return "frame_" + digits + "." + ext;
}

/// Writes every cloud plus a config file into a fresh directory, building it
/// beside `dir` and renaming it into place at the end.
void write_cloud_dir(const fs::path& dir, const std::vector<PointCloud>& clouds, const std::string& format,
                     const std::string& config_name, const ConfigEcho& echo) {
  if (fs::exists(dir) && !(fs::is_directory(dir) && fs::is_empty(dir)))
    throw Error(ErrorCode::InvalidArgument, "output directory exists and is not empty: " + dir.string());
  fs::path tmp = dir;
  tmp += ".partial";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  const CloudFormat fmt = format == "csv" ? CloudFormat::Csv : CloudFormat::Ply;
  for (std::size_t i = 0; i < clouds.size(); ++i)
    write_cloud(tmp / frame_name(i, clouds.size(), format), clouds[i], fmt);
  write_file_atomic(tmp / config_name, echo.to_text());
  if (fs::exists(dir)) fs::remove(dir);
  fs::rename(tmp, dir);
}

int cmd_generate(const GenerateOptions& g, std::ostream& out) {
  const std::vector<PointCloud> clouds = generate_sequence(g.gen, g.workers);
  ConfigEcho echo;
  echo_generator(g.gen, echo);
  echo.set("cloud_format", g.cloud_format);
  echo.set("workers", g.workers);
  echo.set("output", g.output);
  write_cloud_dir(g.output, clouds, g.cloud_format, "generator.toml", echo);
  out << "wrote " << clouds.size() << " frames to " << g.output << '\n';
  return kOk;
}

struct EvaluateOptions {
  std::string manifest;
  std::string output;
  std::string mode = "both";
  PipelineOptions pipe;
};

int cmd_evaluate(const EvaluateOptions& e, std::ostream& out) {
  const std::vector<ManifestRow> rows = read_manifest(e.manifest);
  const PipelineConfig cfg = e.pipe.config();
  std::vector<LabeledReport> reports;
  for (const auto& row : rows) {
    const InputKind kind = detect_kind(row.path, e.pipe.format);
    const auto hists = sequence_histograms(row.path, kind, e.pipe, std::span(&cfg.hist_size, 1));
    reports.push_back({assess_histograms(hists.front(), cfg), row.label, row.subject_id, row.gait_type});
  }

  std::vector<EvalMode> modes;
  if (e.mode != "mean") modes.push_back(EvalMode::Segments);
  if (e.mode != "segments") modes.push_back(EvalMode::Mean);

  ConfigEcho echo;
  echo.set("manifest", e.manifest);
  echo.set("output", e.output);
  echo.set("mode", e.mode);
  echo_pipeline(e.pipe, cfg.hist_size, echo);

  std::ostringstream summary;
  summary << "# gaitsym evaluation summary\n# effective configuration\n" << echo.to_text() << "\n# results\n";
  summary << "sequences = " << reports.size() << '\n';
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& r : reports) {
    if (r.label != Label::Normal) continue;
    lo = first ? r.report.mean_score : std::min(lo, r.report.mean_score);
    hi = first ? r.report.mean_score : std::max(hi, r.report.mean_score);
    first = false;
  }
  summary << "normal_mean_score_min = " << format_double(lo) << '\n'
          << "normal_mean_score_max = " << format_double(hi) << '\n';
  std::vector<std::pair<EvalMode, RocResult>> results;
  for (const EvalMode mode : modes) {
    const RocResult r = evaluate_dataset(reports, mode);
    const std::string m = to_string(mode);
    summary << m << "_auc = " << format_double(r.auc) << '\n'
            << m << "_eer = " << format_double(r.eer) << '\n'
            << m << "_eer_threshold = " << format_double(r.eer_threshold) << '\n'
            << m << "_positives = " << r.positives << '\n'
            << m << "_negatives = " << r.negatives << '\n';
    results.emplace_back(mode, r);
  }

  if (!e.output.empty()) {
    std::ostringstream scores;
    scores << echo.to_comment()
           << "sequence_path,subject_id,gait_type,label,mean_score,frames_discarded,segment_scores\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      scores << rows[i].path.string() << ',' << r.subject_id << ',' << r.gait_type << ',' << label_name(r.label)
             << ',' << format_double(r.report.mean_score) << ',' << r.report.frames_discarded << ',';
      for (std::size_t s = 0; s < r.report.per_segment.size(); ++s)
        scores << (s ? ";" : "") << format_double(r.report.per_segment[s].score);
      scores << '\n';
    }
    write_file_atomic(e.output + ".scores.csv", scores.str());
    for (const auto& [mode, r] : results)
      write_file_atomic(e.output + ".roc_" + to_string(mode) + ".csv", encode_roc_csv(r, echo));
    write_file_atomic(e.output + ".summary.toml", summary.str());
  }
  for (const auto& [mode, r] : results)
    out << to_string(mode) << ": auc = " << format_double(r.auc) << ", eer = " << format_double(r.eer) << '\n';
  if (!e.output.empty()) out << "wrote " << e.output << ".summary.toml\n";
  return kOk;
}

struct SweepOptions {
  std::string manifest;
  std::string output;
  std::string sizes = "table";
  PipelineOptions pipe;
};

std::vector<HistSize> parse_sizes(const std::string& text) {
  if (text == "table") return table_sizes();
  std::vector<HistSize> sizes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) sizes.push_back(HistSize::parse(trim(item)));
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no histogram sizes given");
  return sizes;
}

int cmd_sweep(const SweepOptions& s, std::ostream& out) {
  const std::vector<ManifestRow> rows = read_manifest(s.manifest);
  const std::vector<HistSize> sizes = parse_sizes(s.sizes);
  std::vector<HistSize> distinct;
  for (const auto& z : sizes)
    if (std::find(distinct.begin(), distinct.end(), z) == distinct.end()) distinct.push_back(z);

  std::vector<DatasetEntry> dataset;
  for (const auto& row : rows) {
    DatasetEntry entry{row.subject_id, row.gait_type, row.label, {}, {}};
    const InputKind kind = detect_kind(row.path, s.pipe.format);
    // All sizes are computed on the first request, then handed out one by one.
    auto pending = std::make_shared<std::map<std::string, std::vector<CylHistogram>>>();
    entry.load_histograms = [pending, distinct, kind, path = row.path, pipe = s.pipe](const HistSize& size) {
      if (pending->empty()) {
        auto all = sequence_histograms(path, kind, pipe, distinct);
        for (std::size_t i = 0; i < distinct.size(); ++i) (*pending)[distinct[i].to_string()] = std::move(all[i]);
      }
      auto node = pending->extract(size.to_string());
      if (node.empty()) throw Error(ErrorCode::InvalidArgument, "size " + size.to_string() + " was not prepared");
      return std::move(node.mapped());
    };
    dataset.push_back(std::move(entry));
  }

  PipelineConfig cfg = s.pipe.config();
  const std::vector<SweepRow> result = size_sweep(dataset, sizes, cfg);
  const std::string table = format_sweep_table(result);

  ConfigEcho echo;
  echo.set("manifest", s.manifest);
  echo.set("output", s.output);
  echo.set("sizes", s.sizes);
  echo_pipeline(s.pipe, cfg.hist_size, echo);
  if (!s.output.empty()) {
    write_file_atomic(s.output + ".sweep.txt", echo.to_comment() + table);
    write_file_atomic(s.output + ".sweep.csv", echo.to_comment() + format_sweep_csv(result));
  }
  out << table;
  return kOk;
}

struct ConvertOptions {
  std::string input;
  std::string output;
  std::string to;
  PipelineOptions pipe;
};

int cmd_convert(const ConvertOptions& c, std::ostream& out) {
  ConfigEcho echo;
  echo.set("input", c.input);
  echo.set("output", c.output);
  echo.set("to", c.to);

  const fs::path input(c.input);
  const bool single_cloud = fs::is_regular_file(input) && !is_container_file(input) &&
                            (input.extension() == ".ply" || input.extension() == ".csv") &&
                            read_text(input).rfind("# cylh", 0) != 0;

  if (c.to == "cylh" || c.to == "hist-csv") {
    if (single_cloud)
      throw Error(ErrorCode::InvalidArgument, "a single cloud file is not a sequence; pass its directory");
    const InputKind kind = detect_kind(input, c.pipe.format);
    std::vector<CylHistogram> hists;
    if (kind == InputKind::Histograms) {
      hists = read_histogram_input(input);
      echo_pipeline(c.pipe, hists.front().size(), echo);
    } else {
      const HistSize size = HistSize::parse(c.pipe.hist_size);
      hists = std::move(sequence_histograms(input, kind, c.pipe, std::span(&size, 1)).front());
      echo_pipeline(c.pipe, size, echo);
    }
    if (c.to == "cylh")
      write_container(c.output, hists);
    else
      write_histogram_csv(c.output, hists);
    write_file_atomic(c.output + ".config.toml", echo.to_text());
    out << "wrote " << hists.size() << " histograms to " << c.output << '\n';
    return kOk;
  }

  const CloudFormat fmt = c.to == "csv" ? CloudFormat::Csv : CloudFormat::Ply;
  if (single_cloud) {
    PointCloud cloud = read_cloud(input, Frame::Body);
    if (!c.pipe.markers.empty()) {
      const MarkerSet markers = read_markers(c.pipe.markers);
      const PointCloud camera = read_cloud(input, Frame::Camera);
      cloud = transform(camera, build_body_frame(markers.treadmill(), markers.walking_direction(), camera));
    }
    echo.set("markers", c.pipe.markers);
    write_cloud(c.output, cloud, fmt);
    write_file_atomic(c.output + ".config.toml", echo.to_text());
    out << "wrote " << c.output << '\n';
    return kOk;
  }
  const InputKind kind = detect_kind(input, c.pipe.format);
  if (kind == InputKind::Histograms)
    throw Error(ErrorCode::InvalidArgument, "histograms cannot be converted back to point clouds");
  const std::vector<PointCloud> clouds = load_clouds(input, kind, c.pipe);
  echo.set("markers", c.pipe.markers);
  echo.set("workers", c.pipe.workers);
  write_cloud_dir(c.output, clouds, c.to, "convert.toml", echo);
  out << "wrote " << clouds.size() << " frames to " << c.output << '\n';
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InsufficientFrames: return kInsufficientFrames;
    case ErrorCode::SingleClass: return kSingleClass;
    default: return kBadInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Gait symmetry index from 3D point-cloud sequences", "gaitsym");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", "gaitsym 1.0.0");
  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Key-value config file; command-line flags take precedence");
  };

  AssessOptions assess;
  CLI::App* sub_assess = app.add_subcommand("assess", "Symmetry index of one sequence");
  sub_assess->add_option("input,--input", assess.input,
                         "Cloud directory, histogram file (.cylh or CSV) or generator config")
      ->required();
  sub_assess->add_option("-o,--output", assess.output, "Output prefix (report to stdout when omitted)");
  add_pipeline_options(*sub_assess, assess.pipe);
  add_config(sub_assess);

  GenerateOptions generate;
  CLI::App* sub_generate = app.add_subcommand("generate", "Write a synthetic gait sequence");
  add_generator_options(*sub_generate, generate.gen);
  sub_generate->add_option("-o,--output", generate.output, "Output directory")->required();
  sub_generate->add_option("--cloud_format,--cloud-format", generate.cloud_format, "Frame file format")
      ->check(CLI::IsMember({"ply", "csv"}));
  sub_generate->add_option("--workers", generate.workers, "Worker threads")->check(CLI::PositiveNumber);
  add_config(sub_generate);

  EvaluateOptions evaluate;
  CLI::App* sub_evaluate = app.add_subcommand("evaluate", "ROC, AUC and EER over a labeled manifest");
  sub_evaluate->add_option("manifest,--manifest", evaluate.manifest,
                           "CSV: sequence_path,subject_id,gait_type,label")
      ->required();
  sub_evaluate->add_option("-o,--output", evaluate.output, "Output prefix");
  sub_evaluate->add_option("--mode", evaluate.mode, "Scores fed to the ROC")
      ->check(CLI::IsMember({"segments", "mean", "both"}));
  add_pipeline_options(*sub_evaluate, evaluate.pipe);
  add_config(sub_evaluate);

  SweepOptions sweep;
  CLI::App* sub_sweep = app.add_subcommand("sweep", "Evaluate a manifest at several histogram sizes");
  sub_sweep->add_option("manifest,--manifest", sweep.manifest, "CSV: sequence_path,subject_id,gait_type,label")
      ->required();
  sub_sweep->add_option("-o,--output", sweep.output, "Output prefix");
  sub_sweep->add_option("--sizes", sweep.sizes, "'table' or a comma list such as 16x8,16x16");
  add_pipeline_options(*sub_sweep, sweep.pipe);
  add_config(sub_sweep);

  ConvertOptions convert;
  CLI::App* sub_convert = app.add_subcommand("convert", "Convert between cloud and histogram formats");
  sub_convert->add_option("input,--input", convert.input, "Cloud file or directory, histogram file or generator config")
      ->required();
  sub_convert->add_option("output,--output", convert.output, "Output file or directory")->required();
  sub_convert->add_option("--to", convert.to, "Target format")
      ->required()
      ->check(CLI::IsMember({"cylh", "hist-csv", "ply", "csv"}));
  add_pipeline_options(*sub_convert, convert.pipe);
  add_config(sub_convert);

  try {
    std::vector<std::string> full = args;
    if (!args.empty() && args.front().rfind("-", 0) != 0) {
      if (const auto config = find_config(args)) {
        if (const CLI::App* sub = app.get_subcommand_no_throw(args.front())) {
          const std::vector<std::string> extra = config_arguments(*sub, *config);
          full.insert(full.begin() + 1, extra.begin(), extra.end());
        }
      }
    }
    try {
      parse_into(app, full);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kBadInput;
    }

    if (sub_assess->parsed()) return cmd_assess(assess, out);
    if (sub_generate->parsed()) return cmd_generate(generate, out);
    if (sub_evaluate->parsed()) return cmd_evaluate(evaluate, out);
    if (sub_sweep->parsed()) return cmd_sweep(sweep, out);
    if (sub_convert->parsed()) return cmd_convert(convert, out);
    return kBadInput;
  } catch (const Error& e) {
    err << "gaitsym: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "gaitsym: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "gaitsym: internal error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace gaitsym::cli
