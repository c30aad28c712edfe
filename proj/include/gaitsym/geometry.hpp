#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gaitsym {

using Point3 = Eigen::Vector3d;

enum class Frame { Camera, Body };

/// An ordered, non-empty set of finite 3D points tagged with the coordinate
/// frame they are expressed in. Immutable after construction.
class PointCloud {
 public:
  /// Throws EmptyInput for an empty list and InvalidArgument when any
  /// coordinate is NaN or infinite.
  PointCloud(std::vector<Point3> points, Frame frame);

  std::span<const Point3> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  Frame frame() const noexcept { return frame_; }
  const Point3& operator[](std::size_t i) const { return points_[i]; }

  Point3 centroid() const;

 private:
  std::vector<Point3> points_;
  Frame frame_;
};

/// Plane n.p + d = 0 with unit normal n.
class Plane {
 public:
  /// Normalizes `normal` (scaling `offset` accordingly); throws
  /// DegenerateGeometry for a zero or non-finite normal.
  Plane(const Point3& normal, double offset);

  const Point3& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  double signed_distance(const Point3& p) const { return normal_.dot(p) + offset_; }
  Plane flipped() const { return Plane(-normal_, -offset_); }

 private:
  Point3 normal_;
  double offset_;
};

struct PlaneFit {
  Plane plane;
  double residual_rms;
};

/// Rigid camera-to-body transform: p_body = rotation * p_camera + translation.
/// Rows of `rotation` are the body x (walking), y (up), z (left-to-right)
/// axes expressed in camera coordinates.
struct BodyFrame {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Point3 apply(const Point3& p) const { return rotation * p + translation; }
};

/// Total-least-squares plane through >= 3 non-collinear markers. The normal
/// points toward `body_centroid` when given, otherwise toward camera +y.
PlaneFit fit_plane(std::span<const Point3> markers,
                   const std::optional<Point3>& body_centroid = std::nullopt);

/// y = treadmill normal (toward the body), x = walk_dir.second - walk_dir.first
/// projected onto the treadmill plane, z = x cross y, origin at the cloud
/// centroid. Requires a Camera-frame cloud.
BodyFrame build_body_frame(std::span<const Point3> treadmill_markers,
                           const std::pair<Point3, Point3>& walk_dir,
                           const PointCloud& cloud);

/// Applies `frame` to a Camera-frame cloud; the result is tagged Body.
PointCloud transform(const PointCloud& cloud, const BodyFrame& frame);

/// Mirrors every point through `mirror`: p - 2 (n.p + d) n. Frame tag kept.
PointCloud reflect(const PointCloud& cloud, const Plane& mirror);

/// Union of the direct cloud with each indirect cloud reflected through its
/// mirror. All inputs must share one frame.
PointCloud merge(const PointCloud& direct,
                 std::span<const std::pair<PointCloud, Plane>> indirect);

/// Mirror through the body x-y plane (z -> -z).
PointCloud mirror_z(const PointCloud& cloud);

/// Re-expresses a cloud relative to its centroid, keeping its frame tag.
PointCloud center_on_centroid(const PointCloud& cloud);

}  // namespace gaitsym
