#include "gaitsym/pipeline.hpp"

#include "gaitsym/error.hpp"
#include "gaitsym/parallel.hpp"

namespace gaitsym {

std::vector<HistogramSequence> histograms_from_clouds(std::span<const PointCloud> clouds,
                                                      std::span<const HistSize> sizes,
                                                      bool recenter, int workers) {
  if (clouds.empty()) throw Error(ErrorCode::EmptyInput, "no point clouds");
  std::vector<HistogramSequence> out(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    out[s].angular_offset = recenter ? recenter_offset(estimate(clouds.front(), sizes[s])) : 0.0;
    out[s].frames.assign(clouds.size(), CylHistogram(sizes[s]));
  }
  parallel_for(clouds.size(), workers, [&](std::size_t f) {
    for (std::size_t s = 0; s < sizes.size(); ++s)
      out[s].frames[f] = estimate(clouds[f], sizes[s], out[s].angular_offset);
  });
  return out;
}

HistogramSequence histograms_from_clouds(std::span<const PointCloud> clouds, const HistSize& size,
                                         bool recenter, int workers) {
  const HistSize sizes[] = {size};
  return std::move(histograms_from_clouds(clouds, sizes, recenter, workers).front());
}

std::vector<CylHistogram> normalize_all(std::span<const CylHistogram> hists) {
  std::vector<CylHistogram> out;
  out.reserve(hists.size());
  for (const auto& h : hists) out.push_back(normalize(h));
  return out;
}

SymmetryReport assess_histograms(std::span<const CylHistogram> hists, const PipelineConfig& config) {
  if (hists.empty()) throw Error(ErrorCode::EmptyInput, "no histograms");
  const std::vector<CylHistogram> normalized = normalize_all(hists);
  return assess(normalized, config.segment_len, config.delays, config.workers);
}

SymmetryReport assess_clouds(std::span<const PointCloud> clouds, const PipelineConfig& config) {
  const HistogramSequence seq =
      histograms_from_clouds(clouds, config.hist_size, config.recenter, config.workers);
  return assess_histograms(seq.frames, config);
}

}  // namespace gaitsym
