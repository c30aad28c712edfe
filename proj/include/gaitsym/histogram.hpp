#pragma once

#include "gaitsym/geometry.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gaitsym {

/// h rows (height bins) by w columns (angular bins); w must be even so the
/// grid splits into two h x w/2 halves.
class HistSize {
 public:
  HistSize(int h, int w);

  /// Parses "HxW", e.g. "16x16".
  static HistSize parse(const std::string& text);

  int h() const noexcept { return h_; }
  int w() const noexcept { return w_; }
  int half_w() const noexcept { return w_ / 2; }
  std::size_t bin_count() const noexcept { return static_cast<std::size_t>(h_) * w_; }
  std::string to_string() const;

  friend bool operator==(const HistSize&, const HistSize&) = default;

 private:
  int h_;
  int w_;
};

struct SectorIndex {
  int row;
  int col;
  friend bool operator==(const SectorIndex&, const SectorIndex&) = default;
};

struct Extents {
  double max_y;
  double min_y;
};

enum class Side { Left, Right };

/// Flattened cylinder: bins in row-major order, row 0 at the top of the body.
class CylHistogram {
 public:
  explicit CylHistogram(HistSize size);
  /// Throws ShapeError when `bins` does not hold h*w values and
  /// InvalidArgument for negative or non-finite bins.
  CylHistogram(HistSize size, std::vector<double> bins, bool normalized);

  const HistSize& size() const noexcept { return size_; }
  bool normalized() const noexcept { return normalized_; }
  std::span<const double> bins() const noexcept { return bins_; }
  double at(int row, int col) const { return bins_[index(row, col)]; }
  double& at(int row, int col) { return bins_[index(row, col)]; }
  double sum() const;

  friend bool operator==(const CylHistogram&, const CylHistogram&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * size_.w() + col;
  }

  HistSize size_;
  std::vector<double> bins_;
  bool normalized_ = false;
};

/// One half-body block of a cylindrical histogram: h rows by w/2 columns.
class HalfHistogram {
 public:
  HalfHistogram(int rows, int cols, Side side);
  HalfHistogram(int rows, int cols, Side side, std::vector<double> bins);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  Side side() const noexcept { return side_; }
  std::span<const double> bins() const noexcept { return bins_; }
  double at(int row, int col) const { return bins_[static_cast<std::size_t>(row) * cols_ + col]; }
  double& at(int row, int col) { return bins_[static_cast<std::size_t>(row) * cols_ + col]; }

  friend bool operator==(const HalfHistogram&, const HalfHistogram&) = default;

 private:
  int rows_;
  int cols_;
  Side side_;
  std::vector<double> bins_;
};

/// Highest and lowest y in a cloud.
Extents extents_of(const PointCloud& cloud);

/// Sector (row, col) of a body-frame point. Rows follow the clamped floor of
/// h (max_y - y) / (max_y - min_y); columns follow the azimuth of (x, z),
/// measured from +x, in [0, 2pi), shifted by `angular_offset`.
/// Throws DegenerateExtent when max_y <= min_y.
SectorIndex sector_index(const Point3& p, const Extents& extents, const HistSize& size,
                         double angular_offset = 0.0);

/// Occupancy counts of a Body-frame cloud; extents come from the cloud itself.
CylHistogram estimate(const PointCloud& cloud, const HistSize& size, double angular_offset = 0.0);

/// Rotation (radians, a whole number of columns in (-pi, pi]) that moves the
/// circular centre of mass of the top-quarter rows onto the boundary between
/// columns w/2-1 and w/2. Returns 0 when that region has no mass or no
/// preferred direction.
double recenter_offset(const CylHistogram& hist);

/// Bins divided by their sum. Throws EmptyInput on a zero-sum histogram.
CylHistogram normalize(const CylHistogram& hist);

/// Columns [0, w/2) and [w/2, w).
std::pair<HalfHistogram, HalfHistogram> split(const CylHistogram& hist);

/// Column order reversed in every row.
HalfHistogram flip(const HalfHistogram& half);

/// L1 distance. Throws ShapeError on a dimension mismatch.
double diff(const HalfHistogram& a, const HalfHistogram& b);

/// Column c -> w-1-c on a full histogram.
CylHistogram column_flip(const CylHistogram& hist);

/// Circular shift by `k` columns (bin c moves to c+k mod w).
CylHistogram column_shift(const CylHistogram& hist, int k);

}  // namespace gaitsym
