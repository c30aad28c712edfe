#include "gaitsym/geometry.hpp"

#include "gaitsym/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace gaitsym {

PointCloud::PointCloud(std::vector<Point3> points, Frame frame)
    : points_(std::move(points)), frame_(frame) {
  if (points_.empty()) throw Error(ErrorCode::EmptyInput, "point cloud has no points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite())
      throw Error(ErrorCode::InvalidArgument,
                  "point " + std::to_string(i) + " has a non-finite coordinate");
  }
}

Point3 PointCloud::centroid() const {
  Point3 sum = Point3::Zero();
  for (const auto& p : points_) sum += p;
  return sum / static_cast<double>(points_.size());
}

Plane::Plane(const Point3& normal, double offset) {
  const double norm = normal.norm();
  if (!std::isfinite(norm) || norm == 0.0 || !std::isfinite(offset))
    throw Error(ErrorCode::DegenerateGeometry, "plane normal must be finite and non-zero");
  normal_ = normal / norm;
  offset_ = offset / norm;
}

PlaneFit fit_plane(std::span<const Point3> markers, const std::optional<Point3>& body_centroid) {
  if (markers.size() < 3)
    throw Error(ErrorCode::DegenerateGeometry, "plane fit needs at least 3 markers");

  Point3 mean = Point3::Zero();
  for (const auto& m : markers) {
    if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite marker");
    mean += m;
  }
  mean /= static_cast<double>(markers.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& m : markers) {
    const Point3 c = m - mean;
    scatter += c * c.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
  const Eigen::Vector3d& evals = solver.eigenvalues();  // ascending
  // Collinear (or coincident) markers leave only one significant direction.
  if (evals(2) <= 0.0 || evals(1) <= 1e-12 * evals(2))
    throw Error(ErrorCode::DegenerateGeometry, "markers are collinear or coincident");

  Point3 normal = solver.eigenvectors().col(0).normalized();
  if (body_centroid) {
    if (normal.dot(*body_centroid - mean) < 0.0) normal = -normal;
  } else if (normal.y() != 0.0) {
    if (normal.y() < 0.0) normal = -normal;
  } else {
    // Exactly horizontal normal: fall back to the first non-zero component.
    for (int i = 0; i < 3; ++i) {
      if (normal(i) != 0.0) {
        if (normal(i) < 0.0) normal = -normal;
        break;
      }
    }
  }

  const double rms = std::sqrt(std::max(evals(0), 0.0) / static_cast<double>(markers.size()));
  return PlaneFit{Plane(normal, -normal.dot(mean)), rms};
}

BodyFrame build_body_frame(std::span<const Point3> treadmill_markers,
                           const std::pair<Point3, Point3>& walk_dir,
                           const PointCloud& cloud) {
  if (cloud.frame() != Frame::Camera)
    throw Error(ErrorCode::InvalidArgument, "build_body_frame expects a Camera-frame cloud");

  const Point3 centroid = cloud.centroid();
  const PlaneFit fit = fit_plane(treadmill_markers, centroid);
  const Point3 y_axis = fit.plane.normal();

  const Point3 walk = walk_dir.second - walk_dir.first;
  const double walk_norm = walk.norm();
  if (!std::isfinite(walk_norm) || walk_norm == 0.0)
    throw Error(ErrorCode::DegenerateGeometry, "walking-direction markers coincide");
  const Point3 projected = walk - walk.dot(y_axis) * y_axis;
  if (projected.norm() <= 1e-9 * walk_norm)
    throw Error(ErrorCode::DegenerateGeometry,
                "walking direction is parallel to the treadmill normal");

  const Point3 x_axis = projected.normalized();
  // Re-orthogonalize y against x to absorb rounding in the projection.
  const Point3 z_axis = x_axis.cross(y_axis).normalized();
  const Point3 y_ortho = z_axis.cross(x_axis);

  BodyFrame frame;
  frame.rotation.row(0) = x_axis.transpose();
  frame.rotation.row(1) = y_ortho.transpose();
  frame.rotation.row(2) = z_axis.transpose();
  frame.translation = -(frame.rotation * centroid);
  return frame;
}

PointCloud transform(const PointCloud& cloud, const BodyFrame& frame) {
  if (cloud.frame() != Frame::Camera)
    throw Error(ErrorCode::InvalidArgument, "transform expects a Camera-frame cloud");
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.push_back(frame.apply(p));
  return PointCloud(std::move(out), Frame::Body);
}

PointCloud reflect(const PointCloud& cloud, const Plane& mirror) {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  const Point3& n = mirror.normal();
  for (const auto& p : cloud.points()) out.push_back(p - 2.0 * mirror.signed_distance(p) * n);
  return PointCloud(std::move(out), cloud.frame());
}

PointCloud merge(const PointCloud& direct,
                 std::span<const std::pair<PointCloud, Plane>> indirect) {
  std::size_t total = direct.size();
  for (const auto& [cloud, plane] : indirect) {
    if (cloud.frame() != direct.frame())
      throw Error(ErrorCode::InvalidArgument, "merge requires all clouds in one frame");
    total += cloud.size();
  }
  std::vector<Point3> out(direct.points().begin(), direct.points().end());
  out.reserve(total);
  for (const auto& [cloud, plane] : indirect) {
    const PointCloud reflected = reflect(cloud, plane);
    out.insert(out.end(), reflected.points().begin(), reflected.points().end());
  }
  return PointCloud(std::move(out), direct.frame());
}

PointCloud mirror_z(const PointCloud& cloud) {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.emplace_back(p.x(), p.y(), -p.z());
  return PointCloud(std::move(out), cloud.frame());
}

PointCloud center_on_centroid(const PointCloud& cloud) {
  const Point3 c = cloud.centroid();
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.push_back(p - c);
  return PointCloud(std::move(out), cloud.frame());
}

}  // namespace gaitsym
