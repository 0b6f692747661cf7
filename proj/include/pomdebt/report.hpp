#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pomdebt/evaluation.hpp"
#include "pomdebt/ngram.hpp"
#include "pomdebt/record.hpp"

namespace pomdebt {

enum class Format { Text, Json, Csv, Markdown };

std::optional<Format> parse_format(std::string_view name);

/// floor(100 * count / total + 1/2), 0 for an empty total.
int percent_half_up(std::size_t count, std::size_t total);

enum class CoDims { LocationReason, LocationPurpose };

struct CoMatrix {
  std::string row_dim;
  std::string col_dim;
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t row_total(std::size_t row) const;
};

/// Rows: all locations; columns: reason categories or purposes, enum order.
/// Throws Error{MissingLabel} naming the first record without the label.
CoMatrix co_occurrence(const std::vector<SatdRecord>& records, CoDims dims);

std::string co_matrix_csv(const CoMatrix& m);
/// Row-conditional percentages (half-up integers).
std::string co_matrix_conditional_csv(const CoMatrix& m);

struct FrequencyRow {
  std::string label;
  int depth = 0;  // 1 for subcategories
  std::size_t count = 0;
  int percent = 0;
  std::optional<std::size_t> loc;
  std::optional<int> loc_percent;
};

/// Location counts over all records; LOC columns when `loc` is given.
/// Unclassified appears only when it occurs.
std::vector<FrequencyRow> location_frequencies(
    const std::vector<SatdRecord>& records,
    const std::optional<std::map<LocationCategory, std::size_t>>& loc = std::nullopt);

/// Reason categories with nested subcategories, over records carrying a
/// reason label. Percentages use the labelled-record total.
std::vector<FrequencyRow> reason_frequencies(const std::vector<SatdRecord>& records);
std::vector<FrequencyRow> purpose_frequencies(const std::vector<SatdRecord>& records);

std::string format_frequency_table(std::string_view title, const std::vector<FrequencyRow>& rows,
                                   Format format);

struct FeatureRow {
  std::string label;
  std::string ngram;
  std::size_t frequency = 0;
};

/// Per class, the `per_class` terms with the highest class document
/// frequency; ties keep vocabulary order. Classes follow `class_order`, or
/// sorted class names when empty.
std::vector<FeatureRow> top_features(const NgramVocabulary& vocab, std::size_t per_class,
                                     const std::vector<std::string>& class_order = {});

std::string format_top_features(const std::vector<FeatureRow>& rows, Format format);

/// Rows Precision/Recall/F1-score x class plus weighted and macro averages;
/// one column per named report. All reports must share label names.
std::string format_eval_table(const std::vector<std::pair<std::string, EvalReport>>& columns,
                              Format format);

}  // namespace pomdebt
