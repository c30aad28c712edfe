#include "gaitsym/report_io.hpp"

#include "gaitsym/cloud_io.hpp"
#include "gaitsym/error.hpp"

#include <map>
#include <sstream>

namespace gaitsym {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) ++i;
      out.push_back(s[i]);
    }
    return out;
  }
  return s;
}

std::vector<std::string> parse_array(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw Error(ErrorCode::Format, "expected an array, got '" + s + "'");
  std::vector<std::string> out;
  std::istringstream in(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<SegmentScore>& segs, T field) {
  std::string out = "[";
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i) out += ", ";
    out += field(segs[i]);
  }
  return out + "]";
}

}  // namespace

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

void ConfigEcho::put(const std::string& key, std::string literal) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(literal);
      return;
    }
  }
  entries_.emplace_back(key, std::move(literal));
}

void ConfigEcho::set(const std::string& key, const std::string& value) { put(key, quote(value)); }
void ConfigEcho::set(const std::string& key, double value) { put(key, format_double(value)); }
void ConfigEcho::set(const std::string& key, long long value) { put(key, std::to_string(value)); }
void ConfigEcho::set(const std::string& key, std::uint64_t value) { put(key, std::to_string(value)); }
void ConfigEcho::set(const std::string& key, bool value) { put(key, value ? "true" : "false"); }

std::string ConfigEcho::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

std::string ConfigEcho::to_comment() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += "# " + k + " = " + v + "\n";
  return out;
}

std::string encode_report(const SymmetryReport& report, const ConfigEcho& echo) {
  std::ostringstream out;
  out << "# gaitsym symmetry report\n";
  out << "# effective configuration\n" << echo.to_text();
  out << "\n# results\n";
  out << "report_hist_size = " << quote(report.hist_size.to_string()) << '\n';
  out << "report_segment_len = " << report.segment_length << '\n';
  out << "report_delays = " << quote(report.delays.to_string()) << '\n';
  out << "frames_used = " << report.frames_used << '\n';
  out << "frames_discarded = " << report.frames_discarded << '\n';
  out << "segment_count = " << report.per_segment.size() << '\n';
  out << "mean_score = " << format_double(report.mean_score) << '\n';
  const auto& segs = report.per_segment;
  out << "segment_index = " << join(segs, [](const SegmentScore& s) { return std::to_string(s.segment_index); }) << '\n';
  out << "segment_score = " << join(segs, [](const SegmentScore& s) { return format_double(s.score); }) << '\n';
  out << "best_delay = " << join(segs, [](const SegmentScore& s) { return std::to_string(s.best_delay); }) << '\n';
  out << "overlap_length = " << join(segs, [](const SegmentScore& s) { return std::to_string(s.overlap_length); }) << '\n';
  return out.str();
}

SymmetryReport decode_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Format, "report line without '=': " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorCode::Format, "report is missing '" + key + "'");
    return it->second;
  };

  SymmetryReport r;
  r.hist_size = HistSize::parse(unquote(need("report_hist_size")));
  r.segment_length = std::stoi(need("report_segment_len"));
  r.delays = DelaySet::parse(unquote(need("report_delays")));
  r.frames_used = std::stoi(need("frames_used"));
  r.frames_discarded = std::stoi(need("frames_discarded"));
  r.mean_score = std::stod(need("mean_score"));
  const auto idx = parse_array(need("segment_index"));
  const auto score = parse_array(need("segment_score"));
  const auto delay = parse_array(need("best_delay"));
  const auto overlap = parse_array(need("overlap_length"));
  if (score.size() != idx.size() || delay.size() != idx.size() || overlap.size() != idx.size())
    throw Error(ErrorCode::Format, "report arrays differ in length");
  for (std::size_t i = 0; i < idx.size(); ++i)
    r.per_segment.push_back({std::stod(score[i]), std::stoi(delay[i]), std::stoi(overlap[i]), std::stoi(idx[i])});
  return r;
}

std::string encode_report_csv(const SymmetryReport& report, const ConfigEcho& echo) {
  std::ostringstream out;
  out << echo.to_comment();
  out << "# mean_score = " << format_double(report.mean_score) << '\n';
  out << "# frames_discarded = " << report.frames_discarded << '\n';
  out << "segment_index,score,best_delay,overlap_length\n";
  for (const auto& s : report.per_segment)
    out << s.segment_index << ',' << format_double(s.score) << ',' << s.best_delay << ','
        << s.overlap_length << '\n';
  return out.str();
}

std::string encode_roc_csv(const RocResult& result, const ConfigEcho& echo) {
  std::ostringstream out;
  out << echo.to_comment();
  out << "# auc = " << format_double(result.auc) << '\n';
  out << "# eer = " << format_double(result.eer) << '\n';
  out << "# eer_threshold = " << format_double(result.eer_threshold) << '\n';
  out << "# positives = " << result.positives << '\n';
  out << "# negatives = " << result.negatives << '\n';
  out << "fpr,tpr,threshold\n";
  for (const auto& p : result.points)
    out << format_double(p.fpr) << ',' << format_double(p.tpr) << ',' << format_double(p.threshold) << '\n';
  return out.str();
}

}  // namespace gaitsym
