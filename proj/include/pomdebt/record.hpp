#pragma once

// SatdRecord and the JSON Lines interchange format shared by every stage.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pomdebt/keywords.hpp"
#include "pomdebt/labels.hpp"
#include "pomdebt/links.hpp"
#include "pomdebt/pom_scan.hpp"

namespace pomdebt {

inline constexpr int kSchemaVersion = 1;

struct Prediction {
  MergedLabel label;
  std::vector<double> scores;  // indexed like merged_label_names(label.task)

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct SatdRecord {
  std::string id;
  BuildComment comment;
  Detection detection;
  LocationCategory location = LocationCategory::Unclassified;

  // Hand-coded labels, only from ingested coded corpora.
  std::optional<ReasonLabel> reason;
  std::optional<PurposeLabel> purpose;

  std::optional<Prediction> predicted_reason;
  std::optional<Prediction> predicted_purpose;

  std::vector<LinkRef> links;
  /// Caller annotation: the issue link only documents a rationale.
  bool cross_reference = false;
  /// GitHub "owner/repo" hosting the build file, when known.
  std::optional<std::string> origin;

  friend bool operator==(const SatdRecord&, const SatdRecord&) = default;
};

/// "repo/path:line"; callers disambiguate collisions with make_record_ids.
std::string record_id(const BuildComment& c);

/// Assigns ids in order, suffixing "#2", "#3"... on collisions.
void make_record_ids(std::vector<SatdRecord>& records);

nlohmann::ordered_json comment_to_json(const BuildComment& c, LocationCategory location);
nlohmann::ordered_json record_to_json(const SatdRecord& r);
nlohmann::ordered_json link_to_json(const LinkRef& link);
LinkRef link_from_json(const nlohmann::json& j);

/// Lenient reader for comment, SATD and coded records. Missing location is
/// recomputed; missing id is derived. Throws LineError (SchemaError or
/// UnknownCategory) tagged with `line`.
SatdRecord record_from_json(const nlohmann::json& j, std::size_t line);

/// Reads a JSONL stream of records; blank lines are skipped.
std::vector<SatdRecord> read_records(std::istream& in);

/// ingest_coded_corpus: validated records (labels in canonical names).
std::vector<SatdRecord> ingest_coded_corpus(const std::filesystem::path& path);

void write_jsonl(std::ostream& out, const std::vector<SatdRecord>& records);

}  // namespace pomdebt
