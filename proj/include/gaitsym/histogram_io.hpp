#pragma once

#include "gaitsym/histogram.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gaitsym {

/// Binary histogram container, all integers little-endian:
///
///   offset  size  field
///   0       4     magic "CYLH"
///   4       4     u32 version (1)
///   8       4     u32 h
///   12      4     u32 w
///   16      4     u32 frame count
///   20      4     u32 normalized flag (0 or 1)
///   24      ...   frame-major, row-major float32 bins
inline constexpr char kContainerMagic[4] = {'C', 'Y', 'L', 'H'};
inline constexpr std::uint32_t kContainerVersion = 1;

std::string encode_container(const std::vector<CylHistogram>& frames);
std::vector<CylHistogram> decode_container(const std::string& bytes);

void write_container(const std::filesystem::path& path, const std::vector<CylHistogram>& frames);
std::vector<CylHistogram> read_container(const std::filesystem::path& path);

/// True when the file starts with the container magic.
bool is_container_file(const std::filesystem::path& path);

/// Debug text format: a "# cylh h=.. w=.. frames=.. normalized=.." header,
/// then one block per frame ("# frame i" followed by h comma-separated rows).
std::string encode_histogram_csv(const std::vector<CylHistogram>& frames);
std::vector<CylHistogram> decode_histogram_csv(const std::string& text);

void write_histogram_csv(const std::filesystem::path& path, const std::vector<CylHistogram>& frames);
std::vector<CylHistogram> read_histogram_csv(const std::filesystem::path& path);

/// Reads either format, chosen by the leading magic bytes.
std::vector<CylHistogram> read_histograms(const std::filesystem::path& path);

}  // namespace gaitsym
