#pragma once

#include "gaitsym/eval.hpp"
#include "gaitsym/symmetry.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gaitsym {

/// Ordered key/value pairs of the effective configuration. Values are stored
/// already encoded as key-value-text literals (quoted strings, bare numbers,
/// true/false) so the echo block of a report is itself a valid config file.
class ConfigEcho {
 public:
  void set(const std::string& key, const std::string& value);  // quoted
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, bool value);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  /// "key = value" lines.
  std::string to_text() const;
  /// "# key = value" lines, for embedding in CSV outputs.
  std::string to_comment() const;

 private:
  void put(const std::string& key, std::string literal);
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string quote(const std::string& s);

/// Key-value text report: config echo first, then per-segment arrays, the
/// mean and the discard count.
std::string encode_report(const SymmetryReport& report, const ConfigEcho& echo);

/// Reads the result part of encode_report back (config keys are ignored
/// except hist_size, segment_len and delays).
SymmetryReport decode_report(const std::string& text);

/// One row per segment: segment_index,score,best_delay,overlap_length.
std::string encode_report_csv(const SymmetryReport& report, const ConfigEcho& echo);

/// ROC points as CSV: fpr,tpr,threshold.
std::string encode_roc_csv(const RocResult& result, const ConfigEcho& echo);

}  // namespace gaitsym
