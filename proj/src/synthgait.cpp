#include "gaitsym/synthgait.hpp"

#include "gaitsym/error.hpp"
#include "gaitsym/parallel.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace gaitsym {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed body dimensions not exposed as parameters.
constexpr double kThighRadius = 0.07;
constexpr double kShankRadius = 0.05;
constexpr double kFootRadius = 0.035;
constexpr double kFootLength = 0.2;
constexpr double kUpperArmRadius = 0.045;
constexpr double kForearmRadius = 0.035;
constexpr double kAnkleHeight = 0.05;
constexpr double kNeckLength = 0.05;
constexpr double kTorsoLean = 0.12;
constexpr double kAmplitudeLagPerUnit = 0.15;
constexpr double kGolden = 0.6180339887498949;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 frame_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5851F42D4C957F2Dull)));
}

double ellipse_perimeter(double a, double b) {
  return kPi * (3.0 * (a + b) - std::sqrt((3.0 * a + b) * (a + 3.0 * b)));
}

// Point budgets per part; left and right limbs always receive equal budgets.
struct Budgets {
  int thigh, shank, foot, upper_arm, forearm;  // per side
  int torso, head;
};

Budgets make_budgets(const GaitParams& p, bool even_center) {
  const double leg = 0.5 * (p.leg_length_left + p.leg_length_right);
  const double arm = 0.5 * (p.arm_length_left + p.arm_length_right);
  const std::array<double, 5> limb_area = {
      kTwoPi * kThighRadius * 0.5 * leg, kTwoPi * kShankRadius * 0.5 * leg,
      kTwoPi * kFootRadius * kFootLength, kTwoPi * kUpperArmRadius * 0.5 * arm,
      kTwoPi * kForearmRadius * 0.5 * arm};
  const double torso_area = ellipse_perimeter(p.torso_half_depth, p.torso_half_width) * p.torso_height;
  const double head_area = 4.0 * kPi * p.head_radius * p.head_radius;
  double total = torso_area + head_area;
  for (double a : limb_area) total += 2.0 * a;

  const double n = p.points_per_frame;
  std::array<int, 5> limb{};
  int used = 0;
  for (std::size_t i = 0; i < limb.size(); ++i) {
    limb[i] = std::max(1, static_cast<int>(n * limb_area[i] / total));
    used += 2 * limb[i];
  }
  int head = std::max(2, static_cast<int>(n * head_area / total));
  if (even_center) head -= head % 2;
  int torso = p.points_per_frame - used - head;
  if (even_center) torso -= torso % 2;
  return {limb[0], limb[1], limb[2], limb[3], limb[4], torso, head};
}

struct Sampler {
  std::mt19937_64& rng;
  double noise;
  std::vector<Point3>& out;
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::normal_distribution<double> gauss{0.0, 1.0};

  // Azimuths follow a randomly shifted golden-ratio sequence: still seeded,
  // but far more even around each part than independent draws.
  struct Azimuth {
    double start;
    double at(int i) const { return std::fmod(start + i * kGolden, 1.0); }
  };
  Azimuth azimuth() { return {unit(rng)}; }

  void emit(const Point3& p) {
    if (noise > 0.0)
      out.emplace_back(p.x() + noise * gauss(rng), p.y() + noise * gauss(rng), p.z() + noise * gauss(rng));
    else
      out.push_back(p);
  }

  // Cylinder whose axis lies in the sagittal (x-y) plane at angle `theta`
  // from straight down, rotating forward.
  void limb(const Point3& start, double theta, double length, double radius, int n) {
    const Point3 axis(std::sin(theta), -std::cos(theta), 0.0);
    const Point3 across(std::cos(theta), std::sin(theta), 0.0);
    const Azimuth az = azimuth();
    for (int i = 0; i < n; ++i) {
      const double u = (i + unit(rng)) / n;
      const double psi = kTwoPi * az.at(i);
      emit(start + u * length * axis + radius * (std::cos(psi) * across + std::sin(psi) * Point3::UnitZ()));
    }
  }

  // Elliptic torso tube leaning forward; `half` keeps only the z <= 0 side.
  void torso(double y0, double height, double half_depth, double half_width, int n, bool half) {
    const Azimuth az = azimuth();
    for (int i = 0; i < n; ++i) {
      const double v = (i + unit(rng)) / n;
      const double psi = half ? kPi + kPi * az.at(i) : kTwoPi * az.at(i);
      const double lean_x = std::sin(kTorsoLean) * v * height;
      emit(Point3(half_depth * std::cos(psi) + lean_x, y0 + v * height, half_width * std::sin(psi)));
    }
  }

  void head(const Point3& centre, double radius, int n, bool half) {
    const Azimuth az = azimuth();
    for (int i = 0; i < n; ++i) {
      const double vy = 1.0 - 2.0 * (i + unit(rng)) / n;
      const double phi = half ? kPi + kPi * az.at(i) : kTwoPi * az.at(i);
      const double s = std::sqrt(std::max(0.0, 1.0 - vy * vy));
      emit(centre + radius * Point3(s * std::cos(phi), vy, s * std::sin(phi)));
    }
  }
};

struct SideKinematics {
  double leg_amplitude, leg_phase, leg_length;
  double arm_amplitude, arm_phase, arm_length;
};

SideKinematics side_of(const GaitParams& p, Side side) {
  if (side == Side::Left)
    return {p.leg_amplitude_left, p.leg_phase_left, p.leg_length_left,
            p.arm_amplitude_left, p.arm_phase_left, p.arm_length_left};
  return {p.leg_amplitude_right, p.leg_phase_right, p.leg_length_right,
          p.arm_amplitude_right, p.arm_phase_right, p.arm_length_right};
}

struct BodyLayout {
  double torso_bottom;
  double shoulder_y;
  Point3 head_centre;
};

BodyLayout layout_of(const GaitParams& p) {
  const double hip_mean = 0.5 * (p.leg_length_left + p.leg_length_right) + kAnkleHeight;
  BodyLayout b;
  b.torso_bottom = hip_mean - 0.05;
  b.shoulder_y = b.torso_bottom + p.torso_height;
  b.head_centre = Point3(std::sin(kTorsoLean) * p.torso_height + p.head_forward,
                         b.shoulder_y + kNeckLength + p.head_radius, 0.0);
  return b;
}

// Leg and arm of one side at gait angle `omega_t` (radians).
void sample_limbs(Sampler& s, const GaitParams& p, const Budgets& b, const BodyLayout& body,
                  Side side, double omega_t) {
  const SideKinematics k = side_of(p, side);
  const double z = side == Side::Left ? -1.0 : 1.0;

  const double leg_angle = omega_t + k.leg_phase;
  const double hip_swing = k.leg_amplitude * std::sin(leg_angle);
  const double knee = p.knee_ratio * k.leg_amplitude * 0.5 * (1.0 + std::cos(leg_angle));
  const double thigh_len = 0.5 * k.leg_length;
  const double shank_len = 0.5 * k.leg_length;
  const Point3 hip(0.0, k.leg_length + kAnkleHeight, z * p.hip_half_width);
  const Point3 knee_pt = hip + thigh_len * Point3(std::sin(hip_swing), -std::cos(hip_swing), 0.0);
  const double shank_angle = hip_swing - knee;
  const Point3 ankle = knee_pt + shank_len * Point3(std::sin(shank_angle), -std::cos(shank_angle), 0.0);
  s.limb(hip, hip_swing, thigh_len, kThighRadius, b.thigh);
  s.limb(knee_pt, shank_angle, shank_len, kShankRadius, b.shank);
  // Foot points forward, perpendicular to the shank.
  s.limb(ankle, shank_angle + kPi / 2.0, kFootLength, kFootRadius, b.foot);

  const double arm_angle = omega_t + k.arm_phase;
  const double arm_swing = k.arm_amplitude * std::sin(arm_angle);
  const double elbow = 0.3 + 0.15 * (1.0 + std::sin(arm_angle));
  const double upper_len = 0.5 * k.arm_length;
  const Point3 shoulder(std::sin(kTorsoLean) * p.torso_height, body.shoulder_y - 0.03,
                        z * p.shoulder_half_width);
  const Point3 elbow_pt = shoulder + upper_len * Point3(std::sin(arm_swing), -std::cos(arm_swing), 0.0);
  s.limb(shoulder, arm_swing, upper_len, kUpperArmRadius, b.upper_arm);
  s.limb(elbow_pt, arm_swing + elbow, 0.5 * k.arm_length, kForearmRadius, b.forearm);
}

Point3 sum_points(std::span<const Point3> pts) {
  Point3 s = Point3::Zero();
  for (const auto& p : pts) s += p;
  return s;
}

PointCloud centred(std::vector<Point3> pts, const Point3& sum) {
  const Point3 c = sum / static_cast<double>(pts.size());
  for (auto& p : pts) p -= c;
  return PointCloud(std::move(pts), Frame::Body);
}

bool parse_number(const std::string& s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void GaitParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  require(std::isfinite(fps) && fps > 0.0, "fps must be > 0");
  require(std::isfinite(cycle_period) && cycle_period > 0.0, "cycle_period must be > 0");
  require(leg_amplitude_left >= 0.0 && leg_amplitude_right >= 0.0, "leg amplitudes must be >= 0");
  require(arm_amplitude_left >= 0.0 && arm_amplitude_right >= 0.0, "arm amplitudes must be >= 0");
  require(leg_length_left > 0.0 && leg_length_right > 0.0, "leg lengths must be > 0");
  require(arm_length_left > 0.0 && arm_length_right > 0.0, "arm lengths must be > 0");
  require(torso_height > 0.0 && torso_half_depth > 0.0 && torso_half_width > 0.0,
          "torso dimensions must be > 0");
  require(head_radius > 0.0, "head_radius must be > 0");
  require(knee_ratio >= 0.0, "knee_ratio must be >= 0");
  require(points_per_frame >= 100, "points_per_frame must be >= 100");
  require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, "noise_sigma must be >= 0");
}

void AsymmetrySpec::validate() const {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
    throw Error(ErrorCode::InvalidArgument, "asymmetry magnitude must be finite and >= 0");
  if (kind == AsymmetryKind::None && magnitude != 0.0)
    throw Error(ErrorCode::InvalidArgument, "asymmetry kind None requires magnitude 0");
}

AsymmetrySpec AsymmetrySpec::parse(const std::string& preset) {
  if (preset.empty() || preset == "none" || preset == "symmetric") return {};
  const auto first = preset.find('-');
  const auto second = first == std::string::npos ? std::string::npos : preset.find('-', first + 1);
  if (second == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "asymmetry preset must be kind-side-magnitude: " + preset);
  const std::string kind = preset.substr(0, first);
  const std::string side = preset.substr(first + 1, second - first - 1);
  AsymmetrySpec spec;
  if (kind == "phase")
    spec.kind = AsymmetryKind::PhaseShift;
  else if (kind == "amplitude")
    spec.kind = AsymmetryKind::AmplitudeScale;
  else if (kind == "leglength")
    spec.kind = AsymmetryKind::LegLengthDelta;
  else
    throw Error(ErrorCode::InvalidArgument, "unknown asymmetry kind '" + kind + "'");
  if (side == "left")
    spec.side = Side::Left;
  else if (side == "right")
    spec.side = Side::Right;
  else
    throw Error(ErrorCode::InvalidArgument, "unknown asymmetry side '" + side + "'");
  if (!parse_number(preset.substr(second + 1), spec.magnitude))
    throw Error(ErrorCode::InvalidArgument, "bad asymmetry magnitude in '" + preset + "'");
  spec.validate();
  return spec;
}

std::string AsymmetrySpec::to_string() const {
  if (kind == AsymmetryKind::None) return "none";
  std::ostringstream out;
  switch (kind) {
    case AsymmetryKind::PhaseShift: out << "phase"; break;
    case AsymmetryKind::AmplitudeScale: out << "amplitude"; break;
    case AsymmetryKind::LegLengthDelta: out << "leglength"; break;
    case AsymmetryKind::None: break;
  }
  out << '-' << (side == Side::Left ? "left" : "right") << '-' << magnitude;
  return out.str();
}

GaitParams apply_asymmetry(const GaitParams& params, const AsymmetrySpec& asym) {
  asym.validate();
  GaitParams p = params;
  const bool left = asym.side == Side::Left;
  double& phase = left ? p.leg_phase_left : p.leg_phase_right;
  switch (asym.kind) {
    case AsymmetryKind::None:
      break;
    case AsymmetryKind::PhaseShift:
      phase += asym.magnitude;
      break;
    case AsymmetryKind::AmplitudeScale:
      (left ? p.leg_amplitude_left : p.leg_amplitude_right) *= std::max(0.0, 1.0 - asym.magnitude);
      phase += kAmplitudeLagPerUnit * asym.magnitude;
      break;
    case AsymmetryKind::LegLengthDelta:
      (left ? p.leg_length_left : p.leg_length_right) += asym.magnitude;
      break;
  }
  return p;
}

std::vector<PointCloud> generate(const GaitParams& params, const AsymmetrySpec& asym, int n_frames,
                                 int workers) {
  params.validate();
  if (n_frames < 1) throw Error(ErrorCode::InvalidArgument, "n_frames must be >= 1");
  const GaitParams p = apply_asymmetry(params, asym);
  // Budgets come from the unperturbed body so a perturbation never moves
  // points between parts.
  const Budgets budgets = make_budgets(params, false);
  const BodyLayout body = layout_of(p);
  const double omega = kTwoPi / params.cycle_period;

  std::vector<PointCloud> frames(static_cast<std::size_t>(n_frames),
                                 PointCloud({Point3::Zero()}, Frame::Body));
  parallel_for(frames.size(), workers, [&](std::size_t t) {
    std::mt19937_64 rng = frame_stream(params.seed, t);
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(params.points_per_frame));
    Sampler s{rng, params.noise_sigma, pts};
    const double omega_t = omega * static_cast<double>(t) / params.fps;
    s.torso(body.torso_bottom, p.torso_height, p.torso_half_depth, p.torso_half_width, budgets.torso, false);
    s.head(body.head_centre, p.head_radius, budgets.head, false);
    sample_limbs(s, p, budgets, body, Side::Left, omega_t);
    sample_limbs(s, p, budgets, body, Side::Right, omega_t);
    const Point3 sum = sum_points(pts);
    frames[t] = centred(std::move(pts), sum);
  });
  return frames;
}

std::vector<PointCloud> generate_mirror_pair(const GaitParams& params, int k, int n_frames,
                                             int workers) {
  params.validate();
  if (n_frames < 1) throw Error(ErrorCode::InvalidArgument, "n_frames must be >= 1");
  if (k < 0 || k >= n_frames)
    throw Error(ErrorCode::InvalidDelay, "mirror delay k must satisfy 0 <= k < n_frames");

  const Budgets budgets = make_budgets(params, true);
  const BodyLayout body = layout_of(params);
  // For k > 0 the left half-body must repeat every 2k frames so that
  // mirror(frame t) == frame t + k holds for every t.
  const int period = k > 0 ? 2 * k : 0;
  const double omega_per_frame =
      k > 0 ? kTwoPi / period : kTwoPi / (params.cycle_period * params.fps);

  auto left_half = [&](int index) {
    std::mt19937_64 rng = frame_stream(params.seed, static_cast<std::uint64_t>(index));
    std::vector<Point3> pts;
    Sampler s{rng, params.noise_sigma, pts};
    s.torso(body.torso_bottom, params.torso_height, params.torso_half_depth, params.torso_half_width,
            budgets.torso / 2, true);
    s.head(body.head_centre, params.head_radius, budgets.head / 2, true);
    sample_limbs(s, params, budgets, body, Side::Left, omega_per_frame * index);
    return pts;
  };

  std::vector<PointCloud> frames(static_cast<std::size_t>(n_frames),
                                 PointCloud({Point3::Zero()}, Frame::Body));
  parallel_for(frames.size(), workers, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const int own = period > 0 ? ti % period : ti;
    const int delayed = period > 0 ? ((ti - k) % period + period) % period : ti;
    std::vector<Point3> a = left_half(own);
    std::vector<Point3> b = left_half(delayed);
    for (auto& q : b) q.z() = -q.z();
    // Summing each half separately keeps the centroid an exact mirror image
    // across the pair of frames.
    const Point3 sum = sum_points(a) + sum_points(b);
    a.insert(a.end(), b.begin(), b.end());
    frames[t] = centred(std::move(a), sum);
  });
  return frames;
}

}  // namespace gaitsym
