#include "gaitsym/eval.hpp"

#include "gaitsym/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace gaitsym {

RocResult roc(std::span<const LabeledScore> scores) {
  RocResult out;
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) throw Error(ErrorCode::InvalidArgument, "ROC scores must be finite");
    (s.label == Label::Abnormal ? out.positives : out.negatives) += 1;
  }
  if (out.positives == 0 || out.negatives == 0)
    throw Error(ErrorCode::SingleClass, "ROC needs both Normal and Abnormal samples");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a].score > scores[b].score; });

  const double pos = out.positives;
  const double neg = out.negatives;
  out.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  int tp = 0;
  int fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]].score;
    // Every sample tied at this threshold flips together.
    for (; i < order.size() && scores[order[i]].score == threshold; ++i)
      (scores[order[i]].label == Label::Abnormal ? tp : fp) += 1;
    out.points.push_back({fp / neg, tp / pos, threshold});
  }

  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const auto& a = out.points[i - 1];
    const auto& b = out.points[i];
    out.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }

  // Equal error: fpr - (1 - tpr) runs from -1 at the first point to +1 at the last.
  auto gap = [](const RocPoint& p) { return p.fpr - (1.0 - p.tpr); };
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const auto& b = out.points[i];
    if (gap(b) < 0.0) continue;
    const auto& a = out.points[i - 1];
    if (gap(b) == 0.0) {
      out.eer = b.fpr;
      out.eer_threshold = b.threshold;
    } else {
      const double t = -gap(a) / (gap(b) - gap(a));
      out.eer = a.fpr + t * (b.fpr - a.fpr);
      out.eer_threshold = std::isinf(a.threshold) ? b.threshold
                                                  : a.threshold + t * (b.threshold - a.threshold);
    }
    break;
  }
  return out;
}

std::string to_string(EvalMode mode) { return mode == EvalMode::Segments ? "segments" : "mean"; }

EvalMode parse_eval_mode(const std::string& text) {
  if (text == "segments" || text == "Segments") return EvalMode::Segments;
  if (text == "mean" || text == "Mean") return EvalMode::Mean;
  throw Error(ErrorCode::InvalidArgument, "evaluation mode must be 'segments' or 'mean'");
}

std::vector<LabeledScore> collect_scores(std::span<const LabeledReport> reports, EvalMode mode) {
  std::vector<LabeledScore> out;
  for (const auto& r : reports) {
    if (mode == EvalMode::Mean) {
      out.push_back({r.report.mean_score, r.label, r.subject_id, r.gait_type});
    } else {
      for (const auto& seg : r.report.per_segment)
        out.push_back({seg.score, r.label, r.subject_id, r.gait_type});
    }
  }
  return out;
}

RocResult evaluate_dataset(std::span<const LabeledReport> reports, EvalMode mode) {
  const std::vector<LabeledScore> scores = collect_scores(reports, mode);
  return roc(scores);
}

std::vector<HistSize> table_sizes() {
  return {HistSize(16, 8),  HistSize(16, 16), HistSize(16, 24), HistSize(16, 32),
          HistSize(8, 16),  HistSize(16, 16), HistSize(24, 16), HistSize(32, 16)};
}

std::vector<SweepRow> size_sweep(std::span<const DatasetEntry> dataset,
                                 std::span<const HistSize> sizes, const PipelineConfig& base) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "empty dataset");
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no histogram sizes to sweep");

  std::vector<HistSize> distinct;
  for (const auto& s : sizes)
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);

  std::vector<std::vector<LabeledReport>> per_size(distinct.size());
  for (const auto& entry : dataset) {
    auto record = [&](std::size_t s, std::span<const CylHistogram> hists) {
      PipelineConfig cfg = base;
      cfg.hist_size = distinct[s];
      per_size[s].push_back({assess_histograms(hists, cfg), entry.label, entry.subject_id, entry.gait_type});
    };
    if (entry.load_clouds) {
      const std::vector<PointCloud> clouds = entry.load_clouds();
      const auto seqs = histograms_from_clouds(clouds, distinct, base.recenter, base.workers);
      for (std::size_t s = 0; s < distinct.size(); ++s) record(s, seqs[s].frames);
    } else if (entry.load_histograms) {
      for (std::size_t s = 0; s < distinct.size(); ++s) record(s, entry.load_histograms(distinct[s]));
    } else {
      throw Error(ErrorCode::InvalidArgument, "dataset entry has no loader");
    }
  }

  std::vector<SweepRow> rows;
  for (const auto& size : sizes) {
    const auto idx = static_cast<std::size_t>(std::find(distinct.begin(), distinct.end(), size) - distinct.begin());
    rows.push_back({size, evaluate_dataset(per_size[idx], EvalMode::Segments),
                    evaluate_dataset(per_size[idx], EvalMode::Mean)});
  }
  return rows;
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string format_sweep_table(std::span<const SweepRow> rows) {
  const std::vector<HistSize> layout = table_sizes();
  const bool table_layout =
      rows.size() == layout.size() &&
      std::equal(rows.begin(), rows.end(), layout.begin(),
                 [](const SweepRow& r, const HistSize& s) { return r.size == s; });

  constexpr int kLabel = 12;
  constexpr int kCell = 9;
  std::ostringstream out;
  auto pad = [](std::string s, int width) {
    if (static_cast<int>(s.size()) < width) s.append(static_cast<std::size_t>(width) - s.size(), ' ');
    return s;
  };
  auto rule = [&] {
    out << std::string(static_cast<std::size_t>(2 * kLabel + kCell * static_cast<int>(rows.size())), '-') << '\n';
  };

  rule();
  out << pad("Measure on", kLabel) << pad("Quantity", kLabel) << "Histogram size" << '\n';
  if (table_layout) {
    out << pad("", kLabel) << pad("", kLabel) << pad("Increasing of width", 4 * kCell)
        << "Increasing of height" << '\n';
  }
  out << pad("", kLabel) << pad("", kLabel);
  for (const auto& r : rows) out << pad(r.size.to_string(), kCell);
  out << '\n';
  rule();
  for (const EvalMode mode : {EvalMode::Segments, EvalMode::Mean}) {
    const std::string name = mode == EvalMode::Segments ? "Segments" : "Mean";
    out << pad(name, kLabel) << pad("AUC", kLabel);
    for (const auto& r : rows) out << pad(fixed3((mode == EvalMode::Segments ? r.segments : r.mean).auc), kCell);
    out << '\n' << pad("", kLabel) << pad("EER", kLabel);
    for (const auto& r : rows) out << pad(fixed3((mode == EvalMode::Segments ? r.segments : r.mean).eer), kCell);
    out << '\n';
    rule();
  }
  return out.str();
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "size,h,w,segments_auc,segments_eer,mean_auc,mean_eer\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.size.to_string() << ',' << r.size.h() << ',' << r.size.w() << ',' << r.segments.auc << ','
        << r.segments.eer << ',' << r.mean.auc << ',' << r.mean.eer << '\n';
  }
  return out.str();
}

}  // namespace gaitsym
