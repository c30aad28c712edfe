#pragma once

#include "gaitsym/geometry.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gaitsym {

enum class CloudFormat { Ply, Csv };

/// ASCII PLY reader. Only the `vertex` element's x, y, z properties are used;
/// other properties and elements are skipped.
PointCloud read_ply(const std::filesystem::path& path, Frame frame = Frame::Body);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

/// One "x,y,z" row per point; blank lines and '#' comments are ignored.
PointCloud read_cloud_csv(const std::filesystem::path& path, Frame frame = Frame::Body);
void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);

/// Dispatches on the file extension (.ply or .csv).
PointCloud read_cloud(const std::filesystem::path& path, Frame frame = Frame::Body);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format);

/// Sorted list of .ply/.csv files in a directory (one file per frame).
std::vector<std::filesystem::path> list_cloud_files(const std::filesystem::path& dir);

/// Labeled calibration markers, "label,x,y,z" rows.
struct MarkerSet {
  std::map<std::string, Point3> points;

  /// T1..T4 in label order (at least T1..T3 must exist).
  std::vector<Point3> treadmill() const;
  /// (W1, W2); throws Format when either is missing.
  std::pair<Point3, Point3> walking_direction() const;
};

MarkerSet read_markers(const std::filesystem::path& path);

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

/// Writes `contents` to a temporary sibling and renames it over `path`, so a
/// failed write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gaitsym
