#include "gaitsym/histogram_io.hpp"

#include "gaitsym/cloud_io.hpp"
#include "gaitsym/error.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace gaitsym {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kHeaderBytes = 24;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::string encode_container(const std::vector<CylHistogram>& frames) {
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "no histograms to write");
  const HistSize size = frames.front().size();
  const bool normalized = frames.front().normalized();
  std::string out;
  out.reserve(kHeaderBytes + frames.size() * size.bin_count() * 4);
  out.append(kContainerMagic, 4);
  put_u32(out, kContainerVersion);
  put_u32(out, static_cast<std::uint32_t>(size.h()));
  put_u32(out, static_cast<std::uint32_t>(size.w()));
  put_u32(out, static_cast<std::uint32_t>(frames.size()));
  put_u32(out, normalized ? 1u : 0u);
  for (const auto& f : frames) {
    if (!(f.size() == size)) throw Error(ErrorCode::ShapeError, "frames differ in histogram size");
    for (double b : f.bins()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(b)));
  }
  return out;
}

std::vector<CylHistogram> decode_container(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kContainerMagic, 4) != 0)
    throw Error(ErrorCode::Format, "not a CYLH histogram container");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kContainerVersion)
    throw Error(ErrorCode::Format, "unsupported CYLH version " + std::to_string(version));
  const HistSize size(static_cast<int>(get_u32(bytes, 8)), static_cast<int>(get_u32(bytes, 12)));
  const std::size_t count = get_u32(bytes, 16);
  const bool normalized = get_u32(bytes, 20) != 0;
  const std::size_t expected = kHeaderBytes + count * size.bin_count() * 4;
  if (bytes.size() != expected)
    throw Error(ErrorCode::Format, "CYLH payload is " + std::to_string(bytes.size()) +
                                       " bytes, expected " + std::to_string(expected));
  std::vector<CylHistogram> frames;
  frames.reserve(count);
  std::size_t at = kHeaderBytes;
  for (std::size_t f = 0; f < count; ++f) {
    std::vector<double> bins(size.bin_count());
    for (double& b : bins) {
      b = static_cast<double>(std::bit_cast<float>(get_u32(bytes, at)));
      at += 4;
    }
    frames.emplace_back(size, std::move(bins), normalized);
  }
  return frames;
}

void write_container(const fs::path& path, const std::vector<CylHistogram>& frames) {
  write_file_atomic(path, encode_container(frames));
}

std::vector<CylHistogram> read_container(const fs::path& path) { return decode_container(slurp(path)); }

bool is_container_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  return in && in.read(magic, 4) && std::memcmp(magic, kContainerMagic, 4) == 0;
}

std::string encode_histogram_csv(const std::vector<CylHistogram>& frames) {
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "no histograms to write");
  const HistSize size = frames.front().size();
  std::ostringstream out;
  out << "# cylh h=" << size.h() << " w=" << size.w() << " frames=" << frames.size()
      << " normalized=" << (frames.front().normalized() ? 1 : 0) << '\n';
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (!(frames[f].size() == size)) throw Error(ErrorCode::ShapeError, "frames differ in histogram size");
    out << "# frame " << f << '\n';
    for (int r = 0; r < size.h(); ++r) {
      for (int c = 0; c < size.w(); ++c) {
        if (c) out << ',';
        out << format_double(frames[f].at(r, c));
      }
      out << '\n';
    }
  }
  return out.str();
}

std::vector<CylHistogram> decode_histogram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# cylh", 0) != 0)
    throw Error(ErrorCode::Format, "histogram CSV must start with a '# cylh' header");
  int h = 0;
  int w = 0;
  std::size_t count = 0;
  int normalized = 0;
  if (std::sscanf(line.c_str(), "# cylh h=%d w=%d frames=%zu normalized=%d", &h, &w, &count,
                  &normalized) != 4)
    throw Error(ErrorCode::Format, "malformed histogram CSV header: " + line);
  const HistSize size(h, w);

  std::vector<CylHistogram> frames;
  std::vector<double> bins;
  auto flush = [&] {
    if (bins.empty()) return;
    frames.emplace_back(size, std::move(bins), normalized != 0);
    bins.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      flush();
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    int cols = 0;
    while (std::getline(row, cell, ',')) {
      try {
        bins.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Format, "bad histogram CSV value '" + cell + "'");
      }
      ++cols;
    }
    if (cols != w) throw Error(ErrorCode::Format, "histogram CSV row has " + std::to_string(cols) + " values, expected " + std::to_string(w));
  }
  flush();
  if (frames.size() != count)
    throw Error(ErrorCode::Format, "histogram CSV declares " + std::to_string(count) +
                                       " frames but holds " + std::to_string(frames.size()));
  return frames;
}

void write_histogram_csv(const fs::path& path, const std::vector<CylHistogram>& frames) {
  write_file_atomic(path, encode_histogram_csv(frames));
}

std::vector<CylHistogram> read_histogram_csv(const fs::path& path) {
  return decode_histogram_csv(slurp(path));
}

std::vector<CylHistogram> read_histograms(const fs::path& path) {
  if (is_container_file(path)) return read_container(path);
  return read_histogram_csv(path);
}

}  // namespace gaitsym
