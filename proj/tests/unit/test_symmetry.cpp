#include <doctest.h>

#include "gaitsym/error.hpp"
#include "gaitsym/pipeline.hpp"
#include "gaitsym/symmetry.hpp"
#include "oracles.hpp"

#include <random>

using namespace gaitsym;

namespace {

using Frames = std::vector<std::vector<double>>;

Frames random_frames(std::mt19937_64& rng, int l, std::size_t bins) {
  Frames f;
  for (int i = 0; i < l; ++i) f.push_back(oracle::random_bins(rng, bins));
  return f;
}

HalfSequence left_of(const Frames& f) { return oracle::to_sequence(f, 4, 4, Side::Left, false); }
HalfSequence right_of(const Frames& f) { return oracle::to_sequence(f, 4, 4, Side::Right, true); }

std::vector<CylHistogram> constant_sequence(int n) {
  return std::vector<CylHistogram>(static_cast<std::size_t>(n), normalize(CylHistogram(HistSize(4, 4), std::vector<double>(16, 1.0), false)));
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

TEST_CASE("DelaySet") {
  CHECK(DelaySet::range(-2, 2).delays() == std::vector<int>{-2, -1, 0, 1, 2});
  CHECK(DelaySet({3, -1, 3, 0}).delays() == std::vector<int>{-1, 0, 3});
  CHECK(DelaySet::parse("-50:50") == DelaySet::range(-50, 50));
  CHECK(DelaySet::parse("-3,0,5").delays() == std::vector<int>{-3, 0, 5});
  CHECK(DelaySet::range(-50, 50).to_string() == "-50:50");
  CHECK(DelaySet::parse(DelaySet({-3, 0, 5}).to_string()) == DelaySet({-3, 0, 5}));
  CHECK(DelaySet::range(-4, 7).max_abs() == 7);
  CHECK(code_of([] { DelaySet(std::vector<int>{}); }) == ErrorCode::InvalidDelay);
  CHECK(code_of([] { DelaySet::range(3, 1); }) == ErrorCode::InvalidDelay);
  CHECK(code_of([] { DelaySet::parse("a:b"); }) == ErrorCode::InvalidDelay);
}

TEST_CASE("segmentation") {
  CHECK(segment(constant_sequence(1200), 120).segments.size() == 10);
  const Segmentation s = segment(constant_sequence(125), 120);
  CHECK(s.segments.size() == 1);
  CHECK(s.frames_discarded == 5);
  CHECK(s.segments[0].size() == 120);
  CHECK(code_of([] { segment(constant_sequence(119), 120); }) == ErrorCode::InsufficientFrames);
  CHECK(code_of([] { segment(constant_sequence(10), 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("half sequences of mirror-symmetric frames coincide") {
  std::mt19937_64 rng(1);
  std::vector<CylHistogram> frames;
  for (int i = 0; i < 12; ++i) {
    CylHistogram h = oracle::random_histogram(rng, HistSize(6, 8));
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 4; ++c) h.at(r, 7 - c) = h.at(r, c);
    frames.push_back(normalize(h));
  }
  const HalfSequences hs = half_sequences(frames);
  REQUIRE(hs.left.length() == 12);
  REQUIRE(hs.right_flipped.length() == 12);
  CHECK(hs.right_flipped.flipped);
  for (int i = 0; i < 12; ++i) CHECK(diff(hs.left.frames[i], hs.right_flipped.frames[i]) == 0.0);

  std::vector<CylHistogram> mixed = frames;
  mixed[3] = normalize(oracle::random_histogram(rng, HistSize(6, 10)));
  CHECK(code_of([&] { half_sequences(mixed); }) == ErrorCode::ShapeError);
  std::vector<CylHistogram> raw = {oracle::random_histogram(rng, HistSize(6, 8))};
  CHECK(code_of([&] { half_sequences(raw); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cross_correlate matches the brute-force oracle") {
  std::mt19937_64 rng(2);
  const DelaySet d = DelaySet::range(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const Frames L = random_frames(rng, 12, 16);
    const Frames R = random_frames(rng, 12, 16);
    const SegmentScore got = cross_correlate(left_of(L), right_of(R), d);
    const oracle::Correlation want = oracle::cross_correlate(L, R, d.delays());
    CHECK(std::abs(got.score - want.score) <= 1e-12);
    CHECK(got.best_delay == want.delay);
    CHECK(got.overlap_length == 12 - std::abs(want.delay));
  }
}

TEST_CASE("cross_correlate: identical and shifted sequences") {
  std::mt19937_64 rng(3);
  const Frames L = random_frames(rng, 20, 16);
  const SegmentScore same = cross_correlate(left_of(L), right_of(L), DelaySet::range(-5, 5));
  CHECK(same.score == 0.0);
  CHECK(same.best_delay == 0);

  for (int k : {-4, -1, 2, 5}) {
    // Rf[i] = L[i + k] wherever both exist, so the overlap at delay k matches.
    Frames R = random_frames(rng, 20, 16);
    for (int i = 0; i < 20; ++i)
      if (i + k >= 0 && i + k < 20) R[static_cast<std::size_t>(i)] = L[static_cast<std::size_t>(i + k)];
    const SegmentScore s = cross_correlate(left_of(L), right_of(R), DelaySet::range(-6, 6));
    CHECK(s.score == 0.0);
    CHECK(s.best_delay == k);
  }
}

TEST_CASE("cross_correlate tie rule: smallest |d|, negative first") {
  std::mt19937_64 rng(4);
  const Frames one = {oracle::random_bins(rng, 16)};
  const Frames L(10, one.front());
  const Frames R(10, oracle::random_bins(rng, 16));
  // Every delay scores the same on constant sequences.
  CHECK(cross_correlate(left_of(L), right_of(R), DelaySet::range(-3, 3)).best_delay == 0);
  CHECK(cross_correlate(left_of(L), right_of(R), DelaySet({-2, 2, 3})).best_delay == -2);
  CHECK(cross_correlate(left_of(L), right_of(R), DelaySet({2, 3})).best_delay == 2);
  const oracle::Correlation o = oracle::cross_correlate(L, R, {-2, 2, 3});
  CHECK(o.delay == -2);
}

TEST_CASE("cross_correlate rejects delays as long as the segment") {
  std::mt19937_64 rng(5);
  const Frames L = random_frames(rng, 8, 16);
  CHECK(code_of([&] { cross_correlate(left_of(L), right_of(L), DelaySet::range(-8, 0)); }) ==
        ErrorCode::DelayTooLarge);
  CHECK_NOTHROW(cross_correlate(left_of(L), right_of(L), DelaySet::range(-7, 7)));
  const Frames S = random_frames(rng, 7, 16);
  CHECK(code_of([&] { cross_correlate(left_of(L), right_of(S), DelaySet::range(0, 0)); }) ==
        ErrorCode::ShapeError);
}

TEST_CASE("delay monotonicity and reference/flip duality") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Frames L = random_frames(rng, 15, 16);
    const Frames R = random_frames(rng, 15, 16);
    const double narrow = cross_correlate(left_of(L), right_of(R), DelaySet::range(-2, 3)).score;
    const double wide = cross_correlate(left_of(L), right_of(R), DelaySet::range(-6, 6)).score;
    CHECK(wide <= narrow);

    // Swapping the roles of the two sequences and negating D leaves S as is.
    const DelaySet d({-5, -1, 0, 2, 4});
    const DelaySet neg({5, 1, 0, -2, -4});
    const SegmentScore a = cross_correlate(left_of(L), right_of(R), d);
    const SegmentScore b = cross_correlate(left_of(R), right_of(L), neg);
    CHECK(std::abs(a.score - b.score) < 1e-12);
    CHECK(a.best_delay == -b.best_delay);
  }
}

TEST_CASE("scores of normalized halves stay in [0, 2]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CylHistogram> frames;
    for (int i = 0; i < 40; ++i) frames.push_back(oracle::random_histogram(rng, HistSize(8, 8)));
    const SymmetryReport r = assess(normalize_all(frames), 20, DelaySet::range(-5, 5));
    for (const auto& s : r.per_segment) {
      CHECK(s.score >= 0.0);
      CHECK(s.score <= 2.0);
    }
  }
}

TEST_CASE("assess: mean, bookkeeping, determinism, worker independence") {
  std::mt19937_64 rng(8);
  std::vector<CylHistogram> frames;
  for (int i = 0; i < 130; ++i) frames.push_back(oracle::random_histogram(rng, HistSize(16, 16)));
  const auto normalized = normalize_all(frames);
  const SymmetryReport r = assess(normalized, 40, DelaySet::range(-10, 10));
  REQUIRE(r.per_segment.size() == 3);
  CHECK(r.frames_discarded == 10);
  CHECK(r.frames_used == 120);
  CHECK(r.segment_length == 40);
  CHECK(r.per_segment[2].segment_index == 2);
  const double mean = (r.per_segment[0].score + r.per_segment[1].score + r.per_segment[2].score) / 3.0;
  CHECK(std::abs(r.mean_score - mean) < 1e-15);

  const SymmetryReport again = assess(normalized, 40, DelaySet::range(-10, 10), 4);
  CHECK(again.mean_score == r.mean_score);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again.per_segment[i].score == r.per_segment[i].score);
    CHECK(again.per_segment[i].best_delay == r.per_segment[i].best_delay);
  }

  PipelineConfig cfg;
  cfg.segment_len = 40;
  cfg.delays = DelaySet::range(-10, 10);
  CHECK(assess_histograms(frames, cfg).mean_score == r.mean_score);
}

TEST_CASE("assess on mirror-symmetric frames scores zero") {
  std::vector<CylHistogram> frames;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 240; ++i) {
    CylHistogram h = oracle::random_histogram(rng, HistSize(16, 16));
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 8; ++c) h.at(r, 15 - c) = h.at(r, c);
    frames.push_back(h);
  }
  PipelineConfig cfg;
  const SymmetryReport r = assess_histograms(frames, cfg);
  CHECK(r.per_segment.size() == 2);
  CHECK(r.mean_score == 0.0);
}
