#pragma once

#include "gaitsym/geometry.hpp"
#include "gaitsym/histogram.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gaitsym {

/// Kinematic stick-and-cylinder walker. Angles in radians, lengths in meters.
/// Limb angles are sinusoids of the gait phase; positive swing is forward.
struct GaitParams {
  double fps = 13.0;
  double cycle_period = 1.4;  // seconds per gait cycle

  double leg_amplitude_left = 0.35;
  double leg_amplitude_right = 0.35;
  double leg_phase_left = 0.0;
  double leg_phase_right = 3.141592653589793;
  double leg_length_left = 0.88;
  double leg_length_right = 0.88;
  double knee_ratio = 1.7;  // peak knee flexion / hip swing amplitude

  double arm_amplitude_left = 0.3;
  double arm_amplitude_right = 0.3;
  double arm_phase_left = 3.141592653589793;
  double arm_phase_right = 0.0;
  double arm_length_left = 0.6;
  double arm_length_right = 0.6;

  double torso_height = 0.55;
  double torso_half_depth = 0.11;
  double torso_half_width = 0.17;
  double hip_half_width = 0.09;
  double shoulder_half_width = 0.21;
  double head_radius = 0.11;
  double head_forward = 0.06;

  int points_per_frame = 2000;
  double noise_sigma = 0.005;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

enum class AsymmetryKind { None, PhaseShift, AmplitudeScale, LegLengthDelta };

/// Perturbation of one body side. Magnitude is radians (PhaseShift), a
/// fractional amplitude reduction (AmplitudeScale) or meters (LegLengthDelta).
struct AsymmetrySpec {
  AsymmetryKind kind = AsymmetryKind::None;
  Side side = Side::Left;
  double magnitude = 0.0;

  void validate() const;

  /// "symmetric" / "none", or "<phase|amplitude|leglength>-<left|right>-<magnitude>".
  static AsymmetrySpec parse(const std::string& preset);
  std::string to_string() const;
};

/// Applies `asym` to a copy of `params`. Sole padding maps to LegLengthDelta;
/// an ankle weight maps to AmplitudeScale, which also adds a small phase lag.
GaitParams apply_asymmetry(const GaitParams& params, const AsymmetrySpec& asym);

/// `n_frames` Body-frame clouds (origin at each cloud's centroid), fully
/// determined by params.seed. Frame t draws from its own random stream, so
/// `workers` never changes the output.
std::vector<PointCloud> generate(const GaitParams& params, const AsymmetrySpec& asym, int n_frames,
                                 int workers = 1);

/// Sequence whose z-mirror at frame t equals frame t+k exactly. For k > 0 the
/// gait cycle is forced to 2k frames and the right half-body is the mirrored
/// left half-body delayed by k frames; for k = 0 every frame is mirror
/// symmetric. Throws InvalidDelay when k < 0 or k >= n_frames.
std::vector<PointCloud> generate_mirror_pair(const GaitParams& params, int k, int n_frames,
                                             int workers = 1);

}  // namespace gaitsym
