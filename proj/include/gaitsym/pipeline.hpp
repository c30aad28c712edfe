#pragma once

#include "gaitsym/histogram.hpp"
#include "gaitsym/symmetry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gaitsym {

/// Defaults: 16x16 histograms, segments of 120 frames, delays [-50, 50],
/// head recentering on.
struct PipelineConfig {
  HistSize hist_size{16, 16};
  int segment_len = 120;
  DelaySet delays = DelaySet::range(-50, 50);
  bool recenter = true;
  int workers = 1;
};

struct HistogramSequence {
  std::vector<CylHistogram> frames;
  double angular_offset = 0.0;
};

/// Per-frame occupancy histograms of Body-frame clouds. With `recenter`, the
/// rotation is estimated once from the first frame and reused for all frames.
HistogramSequence histograms_from_clouds(std::span<const PointCloud> clouds, const HistSize& size,
                                         bool recenter, int workers = 1);

/// Same, for several sizes in one pass over the clouds.
std::vector<HistogramSequence> histograms_from_clouds(std::span<const PointCloud> clouds,
                                                      std::span<const HistSize> sizes,
                                                      bool recenter, int workers = 1);

std::vector<CylHistogram> normalize_all(std::span<const CylHistogram> hists);

/// normalize -> segment -> half sequences -> cross-correlation.
SymmetryReport assess_histograms(std::span<const CylHistogram> hists, const PipelineConfig& config);

/// Full chain from Body-frame clouds.
SymmetryReport assess_clouds(std::span<const PointCloud> clouds, const PipelineConfig& config);

}  // namespace gaitsym
