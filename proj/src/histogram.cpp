#include "gaitsym/histogram.hpp"

#include "gaitsym/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaitsym {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

HistSize::HistSize(int h, int w) : h_(h), w_(w) {
  if (h < 1) throw Error(ErrorCode::InvalidArgument, "histogram height must be >= 1");
  if (w < 2 || w % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "histogram width must be even and >= 2");
}

HistSize HistSize::parse(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos || x == 0 || x + 1 >= text.size())
    throw Error(ErrorCode::InvalidArgument, "histogram size must look like HxW, got '" + text + "'");
  std::size_t used_h = 0;
  std::size_t used_w = 0;
  int h = 0;
  int w = 0;
  try {
    h = std::stoi(text.substr(0, x), &used_h);
    w = std::stoi(text.substr(x + 1), &used_w);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "histogram size must look like HxW, got '" + text + "'");
  }
  if (used_h != x || used_w != text.size() - x - 1)
    throw Error(ErrorCode::InvalidArgument, "histogram size must look like HxW, got '" + text + "'");
  return HistSize(h, w);
}

std::string HistSize::to_string() const { return std::to_string(h_) + "x" + std::to_string(w_); }

CylHistogram::CylHistogram(HistSize size) : size_(size), bins_(size.bin_count(), 0.0) {}

CylHistogram::CylHistogram(HistSize size, std::vector<double> bins, bool normalized)
    : size_(size), bins_(std::move(bins)), normalized_(normalized) {
  if (bins_.size() != size_.bin_count())
    throw Error(ErrorCode::ShapeError, "expected " + std::to_string(size_.bin_count()) +
                                           " bins for " + size_.to_string() + ", got " +
                                           std::to_string(bins_.size()));
  for (double b : bins_) {
    if (!(b >= 0.0) || !std::isfinite(b))
      throw Error(ErrorCode::InvalidArgument, "histogram bins must be finite and non-negative");
  }
}

double CylHistogram::sum() const {
  double s = 0.0;
  for (double b : bins_) s += b;
  return s;
}

HalfHistogram::HalfHistogram(int rows, int cols, Side side)
    : rows_(rows), cols_(cols), side_(side), bins_(static_cast<std::size_t>(rows) * cols, 0.0) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::ShapeError, "half histogram must be non-empty");
}

HalfHistogram::HalfHistogram(int rows, int cols, Side side, std::vector<double> bins)
    : rows_(rows), cols_(cols), side_(side), bins_(std::move(bins)) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::ShapeError, "half histogram must be non-empty");
  if (bins_.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorCode::ShapeError, "half histogram bin count does not match its shape");
  for (double b : bins_) {
    if (!(b >= 0.0) || !std::isfinite(b))
      throw Error(ErrorCode::InvalidArgument, "histogram bins must be finite and non-negative");
  }
}

Extents extents_of(const PointCloud& cloud) {
  Extents e{cloud[0].y(), cloud[0].y()};
  for (const auto& p : cloud.points()) {
    e.max_y = std::max(e.max_y, p.y());
    e.min_y = std::min(e.min_y, p.y());
  }
  return e;
}

SectorIndex sector_index(const Point3& p, const Extents& extents, const HistSize& size,
                         double angular_offset) {
  const double span = extents.max_y - extents.min_y;
  if (!(span > 0.0))
    throw Error(ErrorCode::DegenerateExtent, "cloud has no vertical extent (max_y == min_y)");

  const int h = size.h();
  const int w = size.w();

  const double row_f = std::floor(h * (extents.max_y - p.y()) / span);
  const int row = static_cast<int>(std::clamp(row_f, 0.0, static_cast<double>(h - 1)));

  const double norm = std::sqrt(p.x() * p.x() + p.z() * p.z());
  if (norm == 0.0) return {row, 0};  // on the cylinder axis

  // sgn(v_z) * acos(v_x / |v|), mapped into [0, 2pi); v_z == 0 counts as positive.
  const double a = std::acos(std::clamp(p.x() / norm, -1.0, 1.0));
  double angle = p.z() < 0.0 ? kTwoPi - a : a;
  if (angular_offset != 0.0) {
    angle = std::fmod(angle + angular_offset, kTwoPi);
    if (angle < 0.0) angle += kTwoPi;
  }
  const double col_f = std::floor(w / kTwoPi * angle);
  const int col = static_cast<int>(std::clamp(col_f, 0.0, static_cast<double>(w - 1)));
  return {row, col};
}

CylHistogram estimate(const PointCloud& cloud, const HistSize& size, double angular_offset) {
  if (cloud.frame() != Frame::Body)
    throw Error(ErrorCode::InvalidArgument, "histogram estimation expects a Body-frame cloud");
  const Extents extents = extents_of(cloud);
  CylHistogram hist(size);
  for (const auto& p : cloud.points()) {
    const SectorIndex s = sector_index(p, extents, size, angular_offset);
    hist.at(s.row, s.col) += 1.0;
  }
  return hist;
}

double recenter_offset(const CylHistogram& hist) {
  const int h = hist.size().h();
  const int w = hist.size().w();
  const int top_rows = std::max(1, (h + 3) / 4);
  const double col_width = kTwoPi / w;

  double total = 0.0;
  double cx = 0.0;
  double sy = 0.0;
  for (int c = 0; c < w; ++c) {
    double mass = 0.0;
    for (int r = 0; r < top_rows; ++r) mass += hist.at(r, c);
    const double angle = (c + 0.5) * col_width;
    total += mass;
    cx += mass * std::cos(angle);
    sy += mass * std::sin(angle);
  }
  if (total <= 0.0) return 0.0;
  if (std::hypot(cx, sy) <= 1e-9 * total) return 0.0;

  const double centre = std::atan2(sy, cx);
  long k = std::lround((std::numbers::pi - centre) / col_width);
  k %= w;
  if (k > w / 2) k -= w;
  if (k <= -w / 2) k += w;
  return static_cast<double>(k) * col_width;
}

CylHistogram normalize(const CylHistogram& hist) {
  const double total = hist.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::EmptyInput, "cannot normalize a zero-sum histogram");
  std::vector<double> bins(hist.bins().begin(), hist.bins().end());
  for (double& b : bins) b /= total;
  return CylHistogram(hist.size(), std::move(bins), true);
}

std::pair<HalfHistogram, HalfHistogram> split(const CylHistogram& hist) {
  const int h = hist.size().h();
  const int half = hist.size().half_w();
  HalfHistogram left(h, half, Side::Left);
  HalfHistogram right(h, half, Side::Right);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < half; ++c) {
      left.at(r, c) = hist.at(r, c);
      right.at(r, c) = hist.at(r, c + half);
    }
  }
  return {std::move(left), std::move(right)};
}

HalfHistogram flip(const HalfHistogram& half) {
  HalfHistogram out(half.rows(), half.cols(), half.side());
  for (int r = 0; r < half.rows(); ++r)
    for (int c = 0; c < half.cols(); ++c) out.at(r, c) = half.at(r, half.cols() - 1 - c);
  return out;
}

double diff(const HalfHistogram& a, const HalfHistogram& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeError, "half histograms differ in shape");
  const auto x = a.bins();
  const auto y = b.bins();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

CylHistogram column_flip(const CylHistogram& hist) {
  const int w = hist.size().w();
  std::vector<double> bins(hist.size().bin_count());
  for (int r = 0; r < hist.size().h(); ++r)
    for (int c = 0; c < w; ++c) bins[static_cast<std::size_t>(r) * w + c] = hist.at(r, w - 1 - c);
  return CylHistogram(hist.size(), std::move(bins), hist.normalized());
}

CylHistogram column_shift(const CylHistogram& hist, int k) {
  const int w = hist.size().w();
  const int shift = ((k % w) + w) % w;
  std::vector<double> bins(hist.size().bin_count());
  for (int r = 0; r < hist.size().h(); ++r)
    for (int c = 0; c < w; ++c)
      bins[static_cast<std::size_t>(r) * w + (c + shift) % w] = hist.at(r, c);
  return CylHistogram(hist.size(), std::move(bins), hist.normalized());
}

}  // namespace gaitsym
