#include "gaitsym/symmetry.hpp"

#include "gaitsym/error.hpp"
#include "gaitsym/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace gaitsym {

DelaySet::DelaySet(std::vector<int> delays) : delays_(std::move(delays)) {
  if (delays_.empty()) throw Error(ErrorCode::InvalidDelay, "delay set must not be empty");
  std::sort(delays_.begin(), delays_.end());
  delays_.erase(std::unique(delays_.begin(), delays_.end()), delays_.end());
}

DelaySet DelaySet::range(int lo, int hi) {
  if (lo > hi) throw Error(ErrorCode::InvalidDelay, "delay range is empty");
  std::vector<int> d;
  d.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int v = lo; v <= hi; ++v) d.push_back(v);
  return DelaySet(std::move(d));
}

DelaySet DelaySet::parse(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidDelay, "cannot parse delays '" + text + "'");
    }
    if (used != s.size()) throw Error(ErrorCode::InvalidDelay, "cannot parse delays '" + text + "'");
    return v;
  };
  if (const auto colon = text.find(':'); colon != std::string::npos)
    return range(to_int(text.substr(0, colon)), to_int(text.substr(colon + 1)));
  std::vector<int> d;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) d.push_back(to_int(item));
  return DelaySet(std::move(d));
}

int DelaySet::max_abs() const {
  return std::max(std::abs(delays_.front()), std::abs(delays_.back()));
}

std::string DelaySet::to_string() const {
  const bool contiguous = delays_.back() - delays_.front() + 1 == static_cast<int>(delays_.size());
  if (contiguous && delays_.size() > 1)
    return std::to_string(delays_.front()) + ":" + std::to_string(delays_.back());
  std::string out;
  for (std::size_t i = 0; i < delays_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(delays_[i]);
  }
  return out;
}

Segmentation segment(std::span<const CylHistogram> hists, int seg_len) {
  if (seg_len < 2) throw Error(ErrorCode::InvalidArgument, "segment length must be >= 2");
  const std::size_t len = static_cast<std::size_t>(seg_len);
  if (hists.size() < len)
    throw Error(ErrorCode::InsufficientFrames,
                std::to_string(hists.size()) + " frames, segment length " + std::to_string(seg_len));
  Segmentation out;
  const std::size_t count = hists.size() / len;
  for (std::size_t s = 0; s < count; ++s) out.segments.push_back(hists.subspan(s * len, len));
  out.frames_discarded = static_cast<int>(hists.size() - count * len);
  return out;
}

HalfSequences half_sequences(Segment seg) {
  if (seg.empty()) throw Error(ErrorCode::EmptyInput, "segment has no frames");
  const HistSize size = seg.front().size();
  HalfSequences out;
  out.left.side = Side::Left;
  out.right_flipped.side = Side::Right;
  out.right_flipped.flipped = true;
  out.left.frames.reserve(seg.size());
  out.right_flipped.frames.reserve(seg.size());
  for (const auto& hist : seg) {
    if (!(hist.size() == size)) throw Error(ErrorCode::ShapeError, "segment mixes histogram sizes");
    if (!hist.normalized())
      throw Error(ErrorCode::InvalidArgument, "half sequences require normalized histograms");
    auto [left, right] = split(hist);
    out.left.frames.push_back(std::move(left));
    out.right_flipped.frames.push_back(flip(right));
  }
  return out;
}

SegmentScore cross_correlate(const HalfSequence& left, const HalfSequence& right_flipped,
                             const DelaySet& delays) {
  const int l = static_cast<int>(left.length());
  if (l < 1 || right_flipped.length() != left.length())
    throw Error(ErrorCode::ShapeError, "left and flipped-right sequences must share a non-zero length");
  const int rows = left.frames.front().rows();
  const int cols = left.frames.front().cols();
  for (std::size_t i = 0; i < left.length(); ++i) {
    const auto& a = left.frames[i];
    const auto& b = right_flipped.frames[i];
    if (a.rows() != rows || a.cols() != cols || b.rows() != rows || b.cols() != cols)
      throw Error(ErrorCode::ShapeError, "sub-histograms differ in shape");
  }
  if (delays.max_abs() >= l)
    throw Error(ErrorCode::DelayTooLarge, "delay magnitude " + std::to_string(delays.max_abs()) +
                                              " leaves no overlap for length " + std::to_string(l));

  // Candidate order encodes the tie rule: smaller |d| first, negative before positive.
  std::vector<int> order = delays.delays();
  std::stable_sort(order.begin(), order.end(), [](int a, int b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });

  SegmentScore best;
  best.score = std::numeric_limits<double>::infinity();
  for (int d : order) {
    const int overlap = l - std::abs(d);
    const int l0 = std::max(0, d);
    const int r0 = std::max(0, -d);
    double sum = 0.0;
    for (int i = 0; i < overlap; ++i) sum += diff(left.frames[l0 + i], right_flipped.frames[r0 + i]);
    const double score = sum / overlap;
    if (score < best.score) {
      best.score = score;
      best.best_delay = d;
      best.overlap_length = overlap;
    }
  }
  return best;
}

SymmetryReport assess(std::span<const CylHistogram> hists, int seg_len, const DelaySet& delays,
                      int workers) {
  const Segmentation seg = segment(hists, seg_len);
  if (delays.max_abs() >= seg_len)
    throw Error(ErrorCode::DelayTooLarge, "delay magnitude " + std::to_string(delays.max_abs()) +
                                              " >= segment length " + std::to_string(seg_len));

  SymmetryReport report;
  report.hist_size = hists.front().size();
  report.segment_length = seg_len;
  report.delays = delays;
  report.frames_discarded = seg.frames_discarded;
  report.frames_used = static_cast<int>(seg.segments.size()) * seg_len;
  report.per_segment.resize(seg.segments.size());

  parallel_for(seg.segments.size(), workers, [&](std::size_t s) {
    const HalfSequences halves = half_sequences(seg.segments[s]);
    SegmentScore score = cross_correlate(halves.left, halves.right_flipped, delays);
    score.segment_index = static_cast<int>(s);
    report.per_segment[s] = score;
  });

  double sum = 0.0;
  for (const auto& s : report.per_segment) sum += s.score;
  report.mean_score = sum / static_cast<double>(report.per_segment.size());
  return report;
}

}  // namespace gaitsym
