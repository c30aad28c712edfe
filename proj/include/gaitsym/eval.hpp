#pragma once

#include "gaitsym/histogram.hpp"
#include "gaitsym/pipeline.hpp"
#include "gaitsym/symmetry.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gaitsym {

enum class Label { Normal, Abnormal };

struct LabeledScore {
  double score = 0.0;
  Label label = Label::Normal;
  std::string subject_id;
  std::string gait_type;
};

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  // predict Abnormal when score >= threshold
};

/// ROC of "higher score = Abnormal". Points run from the strictest threshold
/// (+inf, at (0,0)) down to the loosest (at (1,1)); thresholds therefore
/// decrease along the list while fpr and tpr never decrease.
struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
  double eer = 0.0;
  double eer_threshold = 0.0;
  int positives = 0;
  int negatives = 0;
};

/// Full threshold sweep over the distinct scores; tied scores move as one
/// step. AUC by the trapezoidal rule, EER by linear interpolation where
/// fpr = 1 - tpr. Throws SingleClass unless both labels are present and
/// InvalidArgument on a non-finite score.
RocResult roc(std::span<const LabeledScore> scores);

enum class EvalMode { Segments, Mean };

std::string to_string(EvalMode mode);
EvalMode parse_eval_mode(const std::string& text);

struct LabeledReport {
  SymmetryReport report;
  Label label = Label::Normal;
  std::string subject_id;
  std::string gait_type;
};

/// Segments mode: one sample per segment score. Mean mode: one per sequence.
RocResult evaluate_dataset(std::span<const LabeledReport> reports, EvalMode mode);

/// Sample list used by evaluate_dataset, exposed for reporting.
std::vector<LabeledScore> collect_scores(std::span<const LabeledReport> reports, EvalMode mode);

/// One labeled input sequence; `load` produces its Body-frame clouds or, for
/// prepared data, histograms of one size.
struct DatasetEntry {
  std::string subject_id;
  std::string gait_type;
  Label label = Label::Normal;
  std::function<std::vector<PointCloud>()> load_clouds;
  std::function<std::vector<CylHistogram>(const HistSize&)> load_histograms;
};

struct SweepRow {
  HistSize size;
  RocResult segments;
  RocResult mean;
};

/// Re-runs the pipeline at every size (clouds are loaded once per entry) and
/// evaluates both modes.
std::vector<SweepRow> size_sweep(std::span<const DatasetEntry> dataset,
                                 std::span<const HistSize> sizes, const PipelineConfig& base);

/// Table laid out as "Measure on | Quantity | <size>..." with Segments and
/// Mean row groups, each holding AUC and EER rows.
std::string format_sweep_table(std::span<const SweepRow> rows);
std::string format_sweep_csv(std::span<const SweepRow> rows);

/// The seven sizes of the width/height sensitivity study, in table order
/// (16x16 appears in both groups).
std::vector<HistSize> table_sizes();

}  // namespace gaitsym
