#pragma once

#include "gaitsym/histogram.hpp"

#include <span>
#include <string>
#include <vector>

namespace gaitsym {

/// Ordered half-body sub-histograms of one segment.
struct HalfSequence {
  std::vector<HalfHistogram> frames;
  Side side = Side::Left;
  bool flipped = false;

  std::size_t length() const noexcept { return frames.size(); }
};

/// Sorted, de-duplicated, non-empty set of integer frame delays.
class DelaySet {
 public:
  explicit DelaySet(std::vector<int> delays);

  /// Every integer in [lo, hi].
  static DelaySet range(int lo, int hi);
  /// "lo:hi" or a comma-separated list such as "-3,0,5".
  static DelaySet parse(const std::string& text);

  const std::vector<int>& delays() const noexcept { return delays_; }
  int max_abs() const;
  std::string to_string() const;

  friend bool operator==(const DelaySet&, const DelaySet&) = default;

 private:
  std::vector<int> delays_;
};

struct SegmentScore {
  double score = 0.0;
  int best_delay = 0;
  int overlap_length = 0;
  int segment_index = 0;
};

struct SymmetryReport {
  std::vector<SegmentScore> per_segment;
  double mean_score = 0.0;
  HistSize hist_size{16, 16};
  int segment_length = 0;
  DelaySet delays = DelaySet::range(0, 0);
  int frames_used = 0;
  int frames_discarded = 0;
};

using Segment = std::span<const CylHistogram>;

struct Segmentation {
  std::vector<Segment> segments;
  int frames_discarded = 0;
};

/// floor(N / seg_len) consecutive non-overlapping segments; the remainder is
/// discarded. Throws InsufficientFrames when N < seg_len and InvalidArgument
/// when seg_len < 2.
Segmentation segment(std::span<const CylHistogram> hists, int seg_len);

struct HalfSequences {
  HalfSequence left;
  HalfSequence right_flipped;
};

/// Left halves and flipped right halves in frame order. Histograms must be
/// normalized and share one size (ShapeError otherwise).
HalfSequences half_sequences(Segment segment);

/// Minimum over d in `delays` of the mean L1 distance between
/// L[max(0,d)+i] and Rf[max(0,-d)+i] over the l-|d| overlapping frames.
/// Ties resolve to the smallest |d|, then to the negative delay.
/// Throws DelayTooLarge when some |d| >= l.
SegmentScore cross_correlate(const HalfSequence& left, const HalfSequence& right_flipped,
                             const DelaySet& delays);

/// Segments `hists`, scores every segment and averages the scores.
SymmetryReport assess(std::span<const CylHistogram> hists, int seg_len, const DelaySet& delays,
                      int workers = 1);

}  // namespace gaitsym
