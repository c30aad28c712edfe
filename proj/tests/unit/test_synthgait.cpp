#include <doctest.h>

#include "gaitsym/error.hpp"
#include "gaitsym/pipeline.hpp"
#include "gaitsym/synthgait.hpp"

#include <algorithm>
#include <numbers>

using namespace gaitsym;

namespace {

constexpr double kPi = std::numbers::pi;

bool same_clouds(const std::vector<PointCloud>& a, const std::vector<PointCloud>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].size() != b[f].size()) return false;
    for (std::size_t i = 0; i < a[f].size(); ++i)
      if (a[f][i] != b[f][i]) return false;
  }
  return true;
}

std::vector<std::array<double, 3>> sorted_points(const PointCloud& c) {
  std::vector<std::array<double, 3>> out;
  for (const auto& p : c.points()) out.push_back({p.x(), p.y(), p.z()});
  std::sort(out.begin(), out.end());
  return out;
}

double l1(const CylHistogram& a, const CylHistogram& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.bins().size(); ++i) s += std::abs(a.bins()[i] - b.bins()[i]);
  return s;
}

/// Mean histogram distance between the z-mirror of frame t and frame t + lag.
double mirror_distance(const std::vector<PointCloud>& clouds, int lag) {
  const HistSize size(16, 16);
  double total = 0.0;
  int n = 0;
  for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < clouds.size(); ++t, ++n)
    total += l1(normalize(estimate(mirror_z(clouds[t]), size)),
                normalize(estimate(clouds[t + static_cast<std::size_t>(lag)], size)));
  return total / n;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("parameter validation") {
  GaitParams p;
  CHECK_NOTHROW(p.validate());
  p.fps = 0.0;
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);
  p = GaitParams{};
  p.points_per_frame = 10;
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { generate(GaitParams{}, {}, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { AsymmetrySpec{AsymmetryKind::PhaseShift, Side::Left, -0.1}.validate(); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("asymmetry presets") {
  CHECK(AsymmetrySpec::parse("symmetric").kind == AsymmetryKind::None);
  CHECK(AsymmetrySpec::parse("none").kind == AsymmetryKind::None);
  const AsymmetrySpec a = AsymmetrySpec::parse("phase-left-0.6");
  CHECK(a.kind == AsymmetryKind::PhaseShift);
  CHECK(a.side == Side::Left);
  CHECK(a.magnitude == 0.6);
  CHECK(AsymmetrySpec::parse(a.to_string()).magnitude == 0.6);
  CHECK(AsymmetrySpec::parse("leglength-right-0.05").kind == AsymmetryKind::LegLengthDelta);
  CHECK(AsymmetrySpec::parse("amplitude-right-0.2").kind == AsymmetryKind::AmplitudeScale);
  CHECK(code_of([] { AsymmetrySpec::parse("phase-up-0.1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { AsymmetrySpec::parse("wobble-left-0.1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { AsymmetrySpec::parse("phase-left-x"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("apply_asymmetry touches only the named side") {
  const GaitParams base;
  const GaitParams ph = apply_asymmetry(base, {AsymmetryKind::PhaseShift, Side::Right, 0.4});
  CHECK(ph.leg_phase_right == base.leg_phase_right + 0.4);
  CHECK(ph.leg_phase_left == base.leg_phase_left);
  const GaitParams amp = apply_asymmetry(base, {AsymmetryKind::AmplitudeScale, Side::Left, 0.5});
  CHECK(amp.leg_amplitude_left == doctest::Approx(0.5 * base.leg_amplitude_left));
  CHECK(amp.leg_amplitude_right == base.leg_amplitude_right);
  CHECK(amp.leg_phase_left > base.leg_phase_left);
  const GaitParams leg = apply_asymmetry(base, {AsymmetryKind::LegLengthDelta, Side::Left, 0.05});
  CHECK(leg.leg_length_left == doctest::Approx(base.leg_length_left + 0.05));
  CHECK(leg.leg_length_right == base.leg_length_right);
}

TEST_CASE("generated frames are centred body-frame clouds") {
  GaitParams p;
  p.points_per_frame = 1500;
  const auto clouds = generate(p, {}, 5);
  REQUIRE(clouds.size() == 5);
  for (const auto& c : clouds) {
    CHECK(c.frame() == Frame::Body);
    CHECK(c.size() == 1500);
    CHECK(c.centroid().norm() < 1e-12);
  }
}

TEST_CASE("determinism and worker independence") {
  GaitParams p;
  p.seed = 42;
  p.points_per_frame = 500;
  CHECK(same_clouds(generate(p, {}, 20), generate(p, {}, 20)));
  CHECK(same_clouds(generate(p, {}, 20, 1), generate(p, {}, 20, 3)));
  p.noise_sigma = 0.0;
  CHECK(same_clouds(generate(p, {}, 20), generate(p, {}, 20)));
  CHECK(same_clouds(generate(p, {}, 20), generate(p, {AsymmetryKind::PhaseShift, Side::Left, 0.0}, 20)));
  GaitParams q = p;
  q.seed = 43;
  CHECK(!same_clouds(generate(p, {}, 3), generate(q, {}, 3)));
  CHECK(same_clouds(generate_mirror_pair(p, 4, 30, 1), generate_mirror_pair(p, 4, 30, 2)));
}

TEST_CASE("mirror pairs are exact") {
  GaitParams p;
  p.seed = 5;
  p.points_per_frame = 600;
  for (int k : {0, 3, 7}) {
    const auto clouds = generate_mirror_pair(p, k, 40);
    for (std::size_t t = 0; t + static_cast<std::size_t>(k) < clouds.size(); ++t)
      REQUIRE(sorted_points(mirror_z(clouds[t])) == sorted_points(clouds[t + static_cast<std::size_t>(k)]));
  }
  CHECK(code_of([&] { generate_mirror_pair(p, -1, 10); }) == ErrorCode::InvalidDelay);
  CHECK(code_of([&] { generate_mirror_pair(p, 10, 10); }) == ErrorCode::InvalidDelay);
}

TEST_CASE("mirror pair with the delay excluded scores above zero") {
  GaitParams p;
  p.noise_sigma = 0.0;
  const auto clouds = generate_mirror_pair(p, 7, 120);
  PipelineConfig cfg;
  cfg.delays = DelaySet::range(0, 0);
  CHECK(assess_clouds(clouds, cfg).mean_score > 0.0);
  cfg.delays = DelaySet::range(-50, 50);
  const SymmetryReport r = assess_clouds(clouds, cfg);
  CHECK(r.mean_score < 1e-9);
  CHECK(std::abs(r.per_segment[0].best_delay) == 7);
}

TEST_CASE("symmetric gait mirrors itself after half a cycle") {
  // 18 frames per cycle, so half a cycle is exactly 9 frames.
  GaitParams p;
  p.cycle_period = 18.0 / 13.0;
  p.points_per_frame = 1500;
  constexpr int kHalf = 9;
  constexpr int kFrames = 40;

  double bound = 0.0;
  for (std::uint64_t seed = 1000; seed < 1020; ++seed) {
    p.seed = seed;
    bound = std::max(bound, mirror_distance(generate(p, {}, kFrames), kHalf));
  }
  bound *= 1.5;

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    p.seed = seed;
    const auto clouds = generate(p, {}, kFrames);
    CHECK(mirror_distance(clouds, kHalf) < bound);
    // The bound is tight enough to reject a quarter-cycle lag and a limping gait.
    if (seed < 10) {
      CHECK(mirror_distance(clouds, kHalf / 2) > bound);
      const auto limp = generate(p, {AsymmetryKind::PhaseShift, Side::Left, 0.3 * kPi}, kFrames);
      CHECK(mirror_distance(limp, kHalf) > bound);
    }
  }
}

TEST_CASE("mean score grows with every kind of asymmetry") {
  struct Kind {
    AsymmetryKind kind;
    std::array<double, 4> magnitudes;
  };
  const Kind kinds[] = {{AsymmetryKind::PhaseShift, {0.0, 0.1 * kPi, 0.2 * kPi, 0.3 * kPi}},
                        {AsymmetryKind::AmplitudeScale, {0.0, 0.15, 0.3, 0.45}},
                        {AsymmetryKind::LegLengthDelta, {0.0, 0.03, 0.06, 0.09}}};
  const PipelineConfig cfg;
  constexpr int kSeeds = 20;
  for (const Kind& k : kinds) {
    int ordered = 0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      std::array<double, 4> s{};
      for (std::size_t m = 0; m < 4; ++m) {
        GaitParams p;
        p.seed = static_cast<std::uint64_t>(seed);
        const AsymmetrySpec a{m == 0 ? AsymmetryKind::None : k.kind, seed % 2 ? Side::Left : Side::Right,
                              k.magnitudes[m]};
        s[m] = assess_clouds(generate(p, a, 240), cfg).mean_score;
      }
      ordered += s[0] <= s[1] && s[1] <= s[2] && s[2] <= s[3] && s[0] < s[3];
    }
    CHECK(ordered >= 18);
  }
}
