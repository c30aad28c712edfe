#include "gaitsym/cloud_io.hpp"

#include "gaitsym/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace gaitsym {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, const fs::path& path, std::size_t line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error(ErrorCode::Format, path.string() + ":" + std::to_string(line) +
                                       ": cannot parse number '" + std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

PointCloud read_ply(const fs::path& path, Frame frame) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line) || trim(line) != "ply")
    throw Error(ErrorCode::Format, path.string() + ": missing 'ply' magic");
  ++lineno;

  std::vector<PlyElement> elements;
  bool ascii = false;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(trim(line));
    if (tokens.empty()) continue;
    if (tokens[0] == "format") {
      if (tokens.size() < 2) throw Error(ErrorCode::Format, path.string() + ": bad format line");
      if (tokens[1] != "ascii")
        throw Error(ErrorCode::Format,
                    path.string() + ": only ASCII PLY is supported, got " + std::string(tokens[1]));
      ascii = true;
    } else if (tokens[0] == "element") {
      if (tokens.size() != 3) throw Error(ErrorCode::Format, path.string() + ": bad element line");
      PlyElement el;
      el.name = std::string(tokens[1]);
      el.count = static_cast<std::size_t>(parse_double(tokens[2], path, lineno));
      elements.push_back(std::move(el));
    } else if (tokens[0] == "property") {
      if (elements.empty() || tokens.size() < 3)
        throw Error(ErrorCode::Format, path.string() + ": property outside element");
      elements.back().properties.emplace_back(tokens.back());
    } else if (tokens[0] == "end_header") {
      header_done = true;
      break;
    }
    // comment / obj_info lines fall through
  }
  if (!header_done || !ascii) throw Error(ErrorCode::Format, path.string() + ": incomplete PLY header");

  std::vector<Point3> points;
  for (const auto& el : elements) {
    if (el.name != "vertex") {
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!std::getline(in, line)) throw Error(ErrorCode::Format, path.string() + ": truncated body");
        ++lineno;
      }
      continue;
    }
    std::array<int, 3> idx{-1, -1, -1};
    for (std::size_t p = 0; p < el.properties.size(); ++p) {
      if (el.properties[p] == "x") idx[0] = static_cast<int>(p);
      if (el.properties[p] == "y") idx[1] = static_cast<int>(p);
      if (el.properties[p] == "z") idx[2] = static_cast<int>(p);
    }
    if (idx[0] < 0 || idx[1] < 0 || idx[2] < 0)
      throw Error(ErrorCode::Format, path.string() + ": vertex element lacks x, y or z");
    points.reserve(el.count);
    for (std::size_t i = 0; i < el.count; ++i) {
      if (!std::getline(in, line)) throw Error(ErrorCode::Format, path.string() + ": truncated vertex list");
      ++lineno;
      const auto tokens = split_ws(trim(line));
      if (tokens.size() < el.properties.size())
        throw Error(ErrorCode::Format, path.string() + ":" + std::to_string(lineno) + ": short vertex row");
      points.emplace_back(parse_double(tokens[idx[0]], path, lineno),
                          parse_double(tokens[idx[1]], path, lineno),
                          parse_double(tokens[idx[2]], path, lineno));
    }
    break;
  }
  return PointCloud(std::move(points), frame);
}

void write_ply(const fs::path& path, const PointCloud& cloud) {
  std::ostringstream out;
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& p : cloud.points())
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  write_file_atomic(path, out.str());
}

PointCloud read_cloud_csv(const fs::path& path, Frame frame) {
  std::ifstream in = open_input(path);
  std::vector<Point3> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto fields = split(view, ',');
    if (fields.size() != 3)
      throw Error(ErrorCode::Format,
                  path.string() + ":" + std::to_string(lineno) + ": expected 3 fields 'x,y,z'");
    points.emplace_back(parse_double(fields[0], path, lineno), parse_double(fields[1], path, lineno),
                        parse_double(fields[2], path, lineno));
  }
  return PointCloud(std::move(points), frame);
}

void write_cloud_csv(const fs::path& path, const PointCloud& cloud) {
  std::ostringstream out;
  out << "# x,y,z\n";
  for (const auto& p : cloud.points())
    out << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z()) << '\n';
  write_file_atomic(path, out.str());
}

PointCloud read_cloud(const fs::path& path, Frame frame) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".ply") return read_ply(path, frame);
  if (ext == ".csv" || ext == ".txt") return read_cloud_csv(path, frame);
  throw Error(ErrorCode::Format, "unknown point-cloud extension: " + path.string());
}

void write_cloud(const fs::path& path, const PointCloud& cloud, CloudFormat format) {
  if (format == CloudFormat::Ply)
    write_ply(path, cloud);
  else
    write_cloud_csv(path, cloud);
}

std::vector<fs::path> list_cloud_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower(entry.path().extension().string());
    if (ext == ".ply" || ext == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Point3> MarkerSet::treadmill() const {
  std::vector<Point3> out;
  for (int i = 1; i <= 9; ++i) {
    const auto it = points.find("T" + std::to_string(i));
    if (it != points.end()) out.push_back(it->second);
  }
  if (out.size() < 3) throw Error(ErrorCode::Format, "marker file needs at least T1..T3");
  return out;
}

std::pair<Point3, Point3> MarkerSet::walking_direction() const {
  const auto w1 = points.find("W1");
  const auto w2 = points.find("W2");
  if (w1 == points.end() || w2 == points.end())
    throw Error(ErrorCode::Format, "marker file needs W1 and W2");
  return {w1->second, w2->second};
}

MarkerSet read_markers(const fs::path& path) {
  std::ifstream in = open_input(path);
  MarkerSet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto fields = split(view, ',');
    if (fields.size() != 4)
      throw Error(ErrorCode::Format,
                  path.string() + ":" + std::to_string(lineno) + ": expected 'label,x,y,z'");
    const std::string label(trim(fields[0]));
    if (label == "label") continue;  // header row
    set.points[label] = Point3(parse_double(fields[1], path, lineno),
                               parse_double(fields[2], path, lineno),
                               parse_double(fields[3], path, lineno));
  }
  return set;
}

}  // namespace gaitsym
